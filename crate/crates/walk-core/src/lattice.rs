//! Ladder geometry, mode indexing, and the port-to-port wiring between
//! adjacent four-ports.
//!
//! Vertices sit at integer sites `-M..=M` and each carries four ports.
//! Ports 1 and 2 face the previous (left) vertex, ports 3 and 4 face the
//! next (right) one, so a photon entering through port 1 or 2 is moving
//! rightward. Ports 1 and 3 form the upper connection line, ports 2 and 4
//! the lower one:
//!
//! ```text
//!            upper line                 upper line
//!   ... ----[P1  m  P3]---------------[P1 m+1 P3]---- ...
//!   ... ----[P2     P4]---------------[P2     P4]---- ...
//!            lower line                 lower line
//! ```
//!
//! A step leaves port 3 or 4 of vertex `m` and arrives at port 1 or 2 of
//! vertex `m+1` (and mirrored for leftward travel). All functions here are
//! pure; the lattice never mutates.

use std::fmt;

use crate::error::{Result, WalkError};

/// One of the four ports of a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Port {
    P1,
    P2,
    P3,
    P4,
}

impl Port {
    pub const ALL: [Port; 4] = [Port::P1, Port::P2, Port::P3, Port::P4];

    /// Zero-based index used for matrix rows and columns.
    pub fn index(self) -> usize {
        match self {
            Port::P1 => 0,
            Port::P2 => 1,
            Port::P3 => 2,
            Port::P4 => 3,
        }
    }

    /// One-based label as printed in mode strings.
    pub fn number(self) -> u8 {
        self.index() as u8 + 1
    }

    pub fn from_number(n: u8) -> Option<Port> {
        match n {
            1 => Some(Port::P1),
            2 => Some(Port::P2),
            3 => Some(Port::P3),
            4 => Some(Port::P4),
            _ => None,
        }
    }

    /// Which connection line the port is attached to.
    pub fn line(self) -> Line {
        match self {
            Port::P1 | Port::P3 => Line::Upper,
            Port::P2 | Port::P4 => Line::Lower,
        }
    }
}

/// Whether a mode is about to enter its vertex or has just left it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IoPhase {
    Incoming,
    Outgoing,
}

/// Photon polarization label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarization {
    H,
    V,
}

impl fmt::Display for Polarization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Polarization::H => write!(f, "H"),
            Polarization::V => write!(f, "V"),
        }
    }
}

/// Travel direction of an incoming mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    L,
    R,
}

/// Upper or lower strand of a connection line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Line {
    Upper,
    Lower,
}

/// A single-photon basis mode.
///
/// Modes are totally ordered by site, then port, then io-phase, then
/// polarization; this order canonicalizes unordered mode pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mode {
    pub site: i32,
    pub port: Port,
    pub phase: IoPhase,
    pub polarization: Option<Polarization>,
}

impl Mode {
    pub fn incoming(site: i32, port: Port) -> Mode {
        Mode {
            site,
            port,
            phase: IoPhase::Incoming,
            polarization: None,
        }
    }

    pub fn incoming_pol(site: i32, port: Port, pol: Polarization) -> Mode {
        Mode {
            site,
            port,
            phase: IoPhase::Incoming,
            polarization: Some(pol),
        }
    }

    pub fn outgoing(site: i32, port: Port) -> Mode {
        Mode {
            site,
            port,
            phase: IoPhase::Outgoing,
            polarization: None,
        }
    }

    pub fn with_polarization(self, pol: Option<Polarization>) -> Mode {
        Mode {
            polarization: pol,
            ..self
        }
    }

    /// Canonical `site:port` or `site:port:pol` encoding.
    pub fn encode(&self) -> String {
        match self.polarization {
            Some(p) => format!("{}:{}:{}", self.site, self.port.number(), p),
            None => format!("{}:{}", self.site, self.port.number()),
        }
    }

    /// Parses the canonical encoding back into an incoming mode.
    pub fn parse(s: &str) -> std::result::Result<Mode, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 2 && parts.len() != 3 {
            return Err(format!("mode '{s}' is not of the form site:port[:pol]"));
        }
        let site: i32 = parts[0]
            .parse()
            .map_err(|_| format!("mode '{s}' has a bad site index"))?;
        let port_num: u8 = parts[1]
            .parse()
            .map_err(|_| format!("mode '{s}' has a bad port number"))?;
        let port = Port::from_number(port_num)
            .ok_or_else(|| format!("mode '{s}' port must be 1..4"))?;
        let polarization = match parts.get(2) {
            None => None,
            Some(&"H") | Some(&"h") => Some(Polarization::H),
            Some(&"V") | Some(&"v") => Some(Polarization::V),
            Some(other) => return Err(format!("mode '{s}' polarization '{other}' must be H or V")),
        };
        Ok(Mode {
            site,
            port,
            phase: IoPhase::Incoming,
            polarization,
        })
    }
}

/// Finite chain of four-ports at sites `-half_width ..= half_width`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatticeConfig {
    pub half_width: u32,
    pub polarized: bool,
}

impl LatticeConfig {
    pub fn new(half_width: u32, polarized: bool) -> LatticeConfig {
        assert!(half_width >= 1, "lattice half-width must be at least 1");
        LatticeConfig {
            half_width,
            polarized,
        }
    }

    /// Smallest lattice on which a walk of `steps` steps from the origin
    /// cannot touch the boundary.
    pub fn sized_for(steps: u32, polarized: bool) -> LatticeConfig {
        LatticeConfig::new(steps + 1, polarized)
    }

    pub fn contains(&self, site: i32) -> bool {
        site.unsigned_abs() <= self.half_width
    }

    /// Sites whose one-step scatter stays inside the lattice.
    pub fn interior(&self, site: i32) -> bool {
        site.unsigned_abs() < self.half_width
    }

    /// All in-bounds incoming modes in canonical order.
    pub fn incoming_modes(&self) -> Vec<Mode> {
        let m = self.half_width as i32;
        let pols: &[Option<Polarization>] = if self.polarized {
            &[Some(Polarization::H), Some(Polarization::V)]
        } else {
            &[None]
        };
        let mut modes = Vec::new();
        for site in -m..=m {
            for port in Port::ALL {
                for &pol in pols {
                    modes.push(Mode::incoming(site, port).with_polarization(pol));
                }
            }
        }
        modes
    }
}

/// Carries an outgoing mode across its connection line to the incoming
/// port of the adjacent vertex.
///
/// Outgoing ports 3/4 at site `m` feed incoming ports 1/2 at `m+1`;
/// outgoing ports 1/2 feed incoming ports 3/4 at `m-1`. Polarization is
/// untouched.
pub fn propagate(mode: Mode, lattice: &LatticeConfig) -> Result<Mode> {
    assert_eq!(
        mode.phase,
        IoPhase::Outgoing,
        "propagate expects an outgoing mode"
    );
    let (site, port) = match mode.port {
        Port::P3 => (mode.site + 1, Port::P1),
        Port::P4 => (mode.site + 1, Port::P2),
        Port::P1 => (mode.site - 1, Port::P3),
        Port::P2 => (mode.site - 1, Port::P4),
    };
    if !lattice.contains(site) {
        return Err(WalkError::BoundaryCrossing {
            site,
            half_width: lattice.half_width,
        });
    }
    Ok(Mode {
        site,
        port,
        phase: IoPhase::Incoming,
        polarization: mode.polarization,
    })
}

/// Inverse of [`propagate`]: the outgoing mode an incoming one came from.
pub fn propagate_inverse(mode: Mode, lattice: &LatticeConfig) -> Result<Mode> {
    assert_eq!(
        mode.phase,
        IoPhase::Incoming,
        "propagate_inverse expects an incoming mode"
    );
    let (site, port) = match mode.port {
        Port::P1 => (mode.site - 1, Port::P3),
        Port::P2 => (mode.site - 1, Port::P4),
        Port::P3 => (mode.site + 1, Port::P1),
        Port::P4 => (mode.site + 1, Port::P2),
    };
    if !lattice.contains(site) {
        return Err(WalkError::BoundaryCrossing {
            site,
            half_width: lattice.half_width,
        });
    }
    Ok(Mode {
        site,
        port,
        phase: IoPhase::Outgoing,
        polarization: mode.polarization,
    })
}

/// Travel direction of an incoming mode: ports 1/2 are entered moving
/// rightward, ports 3/4 moving leftward.
pub fn direction_of(mode: Mode) -> Direction {
    assert_eq!(
        mode.phase,
        IoPhase::Incoming,
        "direction_of expects an incoming mode"
    );
    match mode.port {
        Port::P1 | Port::P2 => Direction::R,
        Port::P3 | Port::P4 => Direction::L,
    }
}

/// Key of the edge an outgoing mode is about to traverse: the site of the
/// edge's left endpoint.
pub fn traversed_edge(mode: Mode) -> i32 {
    debug_assert_eq!(mode.phase, IoPhase::Outgoing);
    match mode.port {
        Port::P3 | Port::P4 => mode.site,
        Port::P1 | Port::P2 => mode.site - 1,
    }
}
