//! Vertex scattering: the Grover four-port unitary, user-supplied coins,
//! per-edge phase insertions, and the one-step single-photon transfer
//! operator over the whole lattice.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Result, WalkError};
use crate::lattice::{propagate, traversed_edge, IoPhase, LatticeConfig, Line, Mode, Port};

/// Tolerance for unitarity and orthonormality checks.
pub const UNITARITY_TOL: f64 = 1e-12;

/// A 4x4 unitary acting on one vertex's ports. `entries[out][in]` is the
/// amplitude to leave through `out` given entry through `in`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoinUnitary {
    entries: [[Complex64; 4]; 4],
}

impl CoinUnitary {
    /// The Grover coin: every transition has amplitude 1/2, with an extra
    /// minus sign on reflection back out the input port.
    pub fn grover() -> CoinUnitary {
        let mut entries = [[Complex64::new(0.5, 0.0); 4]; 4];
        for (i, row) in entries.iter_mut().enumerate() {
            row[i] = Complex64::new(-0.5, 0.0);
        }
        CoinUnitary { entries }
    }

    /// Wraps an arbitrary matrix, rejecting it unless unitary within
    /// [`UNITARITY_TOL`].
    pub fn custom(entries: [[Complex64; 4]; 4]) -> Result<CoinUnitary> {
        let coin = CoinUnitary { entries };
        let defect = coin.unitarity_defect();
        if defect > UNITARITY_TOL {
            return Err(WalkError::NonUnitaryCoin { defect });
        }
        Ok(coin)
    }

    pub fn entry(&self, out: Port, input: Port) -> Complex64 {
        self.entries[out.index()][input.index()]
    }

    /// Largest entrywise deviation of U†U from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                let mut dot = Complex64::new(0.0, 0.0);
                for k in 0..4 {
                    dot += self.entries[k][i].conj() * self.entries[k][j];
                }
                let expected = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - expected).norm());
            }
        }
        worst
    }

    pub fn is_unitary(&self) -> bool {
        self.unitarity_defect() <= UNITARITY_TOL
    }
}

/// Experimenter-controlled phase insertions on the connection lines.
///
/// A record at `(step, edge, line)` multiplies every amplitude traversing
/// that strand of the edge during that step by `exp(i * phase)`, in both
/// travel directions. Edge `m` is the pair of lines between vertices `m`
/// and `m+1`. Absent entries mean zero phase.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PhaseSchedule {
    entries: BTreeMap<(u32, i32, Line), f64>,
}

impl PhaseSchedule {
    pub fn empty() -> PhaseSchedule {
        PhaseSchedule::default()
    }

    pub fn insert(&mut self, step: u32, edge: i32, line: Line, phase: f64) {
        assert!(phase.is_finite(), "phases must be finite");
        self.entries.insert((step, edge, line), phase);
    }

    /// Inserts the same phase for every step in `steps` (persistent form).
    pub fn insert_range(&mut self, steps: std::ops::Range<u32>, edge: i32, line: Line, phase: f64) {
        for step in steps {
            self.insert(step, edge, line, phase);
        }
    }

    pub fn phase(&self, step: u32, edge: i32, line: Line) -> f64 {
        self.entries.get(&(step, edge, line)).copied().unwrap_or(0.0)
    }

    pub fn factor(&self, step: u32, edge: i32, line: Line) -> Complex64 {
        let phi = self.phase(step, edge, line);
        if phi == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(phi.cos(), phi.sin())
        }
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(u32, i32, Line), &f64)> {
        self.entries.iter()
    }
}

/// The one-step transfer operator on incoming-mode amplitudes: coin at
/// every vertex, then propagation along the lines, then the step's phase
/// layer. Acts as the identity on polarization.
#[derive(Debug, Clone)]
pub struct Transfer<'a> {
    coin: &'a CoinUnitary,
    schedule: &'a PhaseSchedule,
    step: u32,
    lattice: LatticeConfig,
}

impl<'a> Transfer<'a> {
    pub fn new(
        coin: &'a CoinUnitary,
        schedule: &'a PhaseSchedule,
        step: u32,
        lattice: LatticeConfig,
    ) -> Transfer<'a> {
        Transfer {
            coin,
            schedule,
            step,
            lattice,
        }
    }

    pub fn step(&self) -> u32 {
        self.step
    }

    pub fn lattice(&self) -> LatticeConfig {
        self.lattice
    }

    /// Scatters one incoming mode into the four incoming modes it feeds at
    /// the next step, with their amplitudes.
    pub fn apply(&self, mode: Mode) -> Result<[(Mode, Complex64); 4]> {
        assert_eq!(mode.phase, IoPhase::Incoming, "transfer acts on incoming modes");
        if !self.lattice.interior(mode.site) {
            return Err(WalkError::BoundaryCrossing {
                site: if mode.site >= 0 { mode.site + 1 } else { mode.site - 1 },
                half_width: self.lattice.half_width,
            });
        }
        let mut out = [(mode, Complex64::new(0.0, 0.0)); 4];
        for (slot, port) in Port::ALL.into_iter().enumerate() {
            let exit = Mode {
                site: mode.site,
                port,
                phase: IoPhase::Outgoing,
                polarization: mode.polarization,
            };
            let target = propagate(exit, &self.lattice)?;
            let phase = self
                .schedule
                .factor(self.step, traversed_edge(exit), port.line());
            out[slot] = (target, self.coin.entry(port, mode.port) * phase);
        }
        Ok(out)
    }

    /// Applies the operator to a sparse amplitude vector.
    pub fn apply_vector(
        &self,
        amplitudes: &BTreeMap<Mode, Complex64>,
    ) -> Result<BTreeMap<Mode, Complex64>> {
        let mut next: BTreeMap<Mode, Complex64> = BTreeMap::new();
        for (&mode, &amp) in amplitudes {
            for (target, coef) in self.apply(mode)? {
                *next.entry(target).or_insert(Complex64::new(0.0, 0.0)) += amp * coef;
            }
        }
        next.retain(|_, v| v.norm() >= crate::fock::PRUNE_THRESHOLD);
        Ok(next)
    }

    /// Checks that the operator's columns over all interior modes are
    /// orthonormal within [`UNITARITY_TOL`].
    pub fn is_unitary(&self) -> bool {
        let columns: Vec<BTreeMap<Mode, Complex64>> = self
            .lattice
            .incoming_modes()
            .into_iter()
            .filter(|m| self.lattice.interior(m.site))
            .map(|m| {
                let mut col = BTreeMap::new();
                for (target, coef) in self.apply(m).expect("interior modes stay in bounds") {
                    *col.entry(target).or_insert(Complex64::new(0.0, 0.0)) += coef;
                }
                col
            })
            .collect();
        for (i, a) in columns.iter().enumerate() {
            for (j, b) in columns.iter().enumerate().skip(i) {
                let mut dot = Complex64::new(0.0, 0.0);
                for (mode, va) in a {
                    if let Some(vb) = b.get(mode) {
                        dot += va.conj() * vb;
                    }
                }
                let expected = if i == j { 1.0 } else { 0.0 };
                if (dot - expected).norm() > UNITARITY_TOL {
                    return false;
                }
            }
        }
        true
    }
}
