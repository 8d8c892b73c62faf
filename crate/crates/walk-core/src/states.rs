//! Constructors for the named two-photon states, their first-step
//! decomposition into the reflecting/transmitting pair, clustering
//! classification, and the polarization-entanglement fidelity probe.
//!
//! Two spatial states anchor everything: the ballistic state, which
//! translates one site per step without spreading, and the oscillating
//! state, which reflects off every vertex it meets and stays pinned to one
//! connection line. Both are anchored by the vertex they are about to
//! enter. The polarized families `A`, `B`, `C` (and the Bell aliases)
//! combine port and polarization structure; only `A+` and `B+` across two
//! ports keep the photons clustered.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;
use std::ops::RangeInclusive;

use num_complex::Complex64;

use crate::coin::{CoinUnitary, PhaseSchedule, Transfer};
use crate::error::{Result, WalkError};
use crate::fock::{step, Statistics, TwoPhotonState};
use crate::lattice::{Direction, LatticeConfig, Line, Mode, Polarization, Port};
use crate::observables::opposite_direction_mass;

/// Sign selecting the symmetric or antisymmetric member of a family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// The named two-photon states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tag {
    /// Totally transmitting spatial state; advances one site per step.
    Ballistic,
    /// Totally reflecting spatial state; bounces between two vertices.
    Oscillating,
    /// Polarization pair split across two ports, `(|iH>|jV> +- |iV>|jH>)/sqrt(2)`.
    A(Sign),
    /// Co-located polarization pairs, `(|iH>|iV> +- |jH>|jV>)/sqrt(2)`.
    B(Sign),
    /// Equal-polarization pairs, `(|iH>|jH> +- |iV>|jV>)/sqrt(2)`.
    C(Sign),
    /// Bell state alias for `A` on two distinct ports.
    BellPsi(Sign),
    /// Bell state alias for `C` on two distinct ports.
    BellPhi(Sign),
}

impl Tag {
    pub fn is_polarized(self) -> bool {
        !matches!(self, Tag::Ballistic | Tag::Oscillating)
    }
}

/// A fully specified named state: which pattern, on which port pair, at
/// which vertex, traveling which way.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NamedState {
    pub tag: Tag,
    pub ports: (Port, Port),
    pub site: i32,
    pub direction: Direction,
}

impl NamedState {
    /// Builds the descriptor, sorting the port pair into canonical order
    /// and checking that the ports sit on the entry side for `direction`.
    pub fn new(tag: Tag, ports: (Port, Port), site: i32, direction: Direction) -> Result<NamedState> {
        let ports = if ports.0 <= ports.1 {
            ports
        } else {
            (ports.1, ports.0)
        };
        let allowed: [Port; 2] = match direction {
            Direction::R => [Port::P1, Port::P2],
            Direction::L => [Port::P3, Port::P4],
        };
        let ports = match tag {
            // The spatial states always occupy the full entry-side pair.
            Tag::Ballistic | Tag::Oscillating => (allowed[0], allowed[1]),
            _ => ports,
        };
        for p in [ports.0, ports.1] {
            if !allowed.contains(&p) {
                return Err(WalkError::PolarizationMismatch(format!(
                    "port {} does not face the {:?} entry side",
                    p.number(),
                    direction
                )));
            }
        }
        Ok(NamedState {
            tag,
            ports,
            site,
            direction,
        })
    }

    /// The spatial states at the origin, most common in tests.
    pub fn ballistic(site: i32, direction: Direction) -> NamedState {
        NamedState::new(Tag::Ballistic, (Port::P1, Port::P2), site, direction)
            .expect("spatial state ports are fixed by direction")
    }

    pub fn oscillating(site: i32, direction: Direction) -> NamedState {
        NamedState::new(Tag::Oscillating, (Port::P1, Port::P2), site, direction)
            .expect("spatial state ports are fixed by direction")
    }

    /// Canonical label, e.g. `A+:1,2:m=0:RR`.
    pub fn label(&self) -> String {
        let tag = match self.tag {
            Tag::Ballistic => "psi_t".to_string(),
            Tag::Oscillating => "psi_r".to_string(),
            Tag::A(sign) => format!("A{}", sign.symbol()),
            Tag::B(sign) => format!("B{}", sign.symbol()),
            Tag::C(sign) => format!("C{}", sign.symbol()),
            Tag::BellPsi(sign) => format!("psi{}", sign.symbol()),
            Tag::BellPhi(sign) => format!("phi{}", sign.symbol()),
        };
        let dir = match self.direction {
            Direction::R => "RR",
            Direction::L => "LL",
        };
        format!(
            "{tag}:{},{}:m={}:{dir}",
            self.ports.0.number(),
            self.ports.1.number(),
            self.site
        )
    }

    /// Parses labels like `A+:1,2`, `psi_t:m=0:RR`, `C-:1,1:m=3:RR`.
    /// Omitted segments default to ports 1,2 at site 0 moving rightward.
    pub fn parse(text: &str) -> std::result::Result<NamedState, String> {
        let mut segments = text.split(':');
        let tag_text = segments.next().unwrap_or_default().trim();
        let tag = match tag_text.to_ascii_lowercase().as_str() {
            "psi_t" => Tag::Ballistic,
            "psi_r" => Tag::Oscillating,
            "a+" => Tag::A(Sign::Plus),
            "a-" => Tag::A(Sign::Minus),
            "b+" => Tag::B(Sign::Plus),
            "b-" => Tag::B(Sign::Minus),
            "c+" => Tag::C(Sign::Plus),
            "c-" => Tag::C(Sign::Minus),
            "psi+" => Tag::BellPsi(Sign::Plus),
            "psi-" => Tag::BellPsi(Sign::Minus),
            "phi+" => Tag::BellPhi(Sign::Plus),
            "phi-" => Tag::BellPhi(Sign::Minus),
            other => return Err(format!("unknown state tag '{other}'")),
        };
        let mut ports = (Port::P1, Port::P2);
        let mut site = 0i32;
        let mut direction = Direction::R;
        for segment in segments {
            let segment = segment.trim();
            if let Some(rest) = segment.strip_prefix("m=") {
                site = rest
                    .parse()
                    .map_err(|_| format!("bad site in state '{text}'"))?;
            } else if segment.eq_ignore_ascii_case("rr") {
                direction = Direction::R;
            } else if segment.eq_ignore_ascii_case("ll") {
                direction = Direction::L;
            } else if let Some((i, j)) = segment.split_once(',') {
                let parse_port = |s: &str| {
                    s.trim()
                        .parse::<u8>()
                        .ok()
                        .and_then(Port::from_number)
                        .ok_or_else(|| format!("bad port pair in state '{text}'"))
                };
                ports = (parse_port(i)?, parse_port(j)?);
            } else {
                return Err(format!("unrecognized segment '{segment}' in state '{text}'"));
            }
        }
        NamedState::new(tag, ports, site, direction).map_err(|e| e.to_string())
    }
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Builds the normalized state for a descriptor.
///
/// The amplitude patterns follow the defining expressions verbatim; in
/// particular the oscillating state carries the minus sign on its
/// double-occupancy pairs, so the canonical first-step identity
/// `(ballistic + oscillating)/sqrt(2)` holds without sign fixing. The `-`
/// members of the `A` and `B` families vanish identically on a single
/// port and are rejected.
pub fn build(named: &NamedState, lattice: &LatticeConfig) -> Result<TwoPhotonState> {
    if named.tag.is_polarized() && !lattice.polarized {
        return Err(WalkError::PolarizationMismatch(
            "this named state needs a polarized lattice".into(),
        ));
    }
    if !named.tag.is_polarized() && lattice.polarized {
        return Err(WalkError::PolarizationMismatch(
            "spatial states need an unpolarized lattice".into(),
        ));
    }
    if !lattice.contains(named.site) {
        return Err(WalkError::BoundaryCrossing {
            site: named.site,
            half_width: lattice.half_width,
        });
    }
    let m = named.site;
    let (i, j) = named.ports;
    let half = FRAC_1_SQRT_2;
    let spatial = |port: Port| Mode::incoming(m, port);
    let pol = |port: Port, p: Polarization| Mode::incoming_pol(m, port, p);
    use Polarization::{H, V};

    let entries: Vec<((Mode, Mode), Complex64)> = match named.tag {
        Tag::Ballistic => {
            let (p, q) = named.ports;
            vec![
                ((spatial(p), spatial(p)), real(0.5)),
                ((spatial(q), spatial(q)), real(0.5)),
                ((spatial(p), spatial(q)), real(half)),
            ]
        }
        Tag::Oscillating => {
            let (p, q) = named.ports;
            vec![
                ((spatial(p), spatial(p)), real(-0.5)),
                ((spatial(q), spatial(q)), real(-0.5)),
                ((spatial(p), spatial(q)), real(half)),
            ]
        }
        Tag::A(sign) | Tag::BellPsi(sign) => {
            if i == j {
                match sign {
                    Sign::Plus => vec![((pol(i, H), pol(i, V)), real(1.0))],
                    Sign::Minus => return Err(WalkError::VanishingState("A- on a single port")),
                }
            } else {
                vec![
                    ((pol(i, H), pol(j, V)), real(half)),
                    ((pol(i, V), pol(j, H)), real(half * sign.factor())),
                ]
            }
        }
        Tag::B(sign) => {
            if i == j {
                match sign {
                    Sign::Plus => vec![((pol(i, H), pol(i, V)), real(1.0))],
                    Sign::Minus => return Err(WalkError::VanishingState("B- on a single port")),
                }
            } else {
                vec![
                    ((pol(i, H), pol(i, V)), real(half)),
                    ((pol(j, H), pol(j, V)), real(half * sign.factor())),
                ]
            }
        }
        Tag::C(sign) | Tag::BellPhi(sign) => vec![
            ((pol(i, H), pol(j, H)), real(half)),
            ((pol(i, V), pol(j, V)), real(half * sign.factor())),
        ],
    };
    TwoPhotonState::from_amplitudes(entries, Statistics::Boson, 0)
}

/// Weights of the one-step output on the translated reflecting and
/// transmitting states, with whatever is left over.
#[derive(Debug, Clone, Copy)]
pub struct Decomposition {
    pub reflecting: f64,
    pub transmitting: f64,
    pub residual: f64,
    pub reflecting_coeff: Complex64,
    pub transmitting_coeff: Complex64,
}

fn polarization_dressed(
    site: i32,
    direction: Direction,
    sign: Sign,
    lattice: &LatticeConfig,
) -> Result<TwoPhotonState> {
    // Transmitting: (A+ + B+)/sqrt(2); reflecting: (A+ - B+)/sqrt(2), on
    // the entry-side port pair.
    let a = build(
        &NamedState::new(Tag::A(Sign::Plus), entry_ports(direction), site, direction)?,
        lattice,
    )?;
    let b = build(
        &NamedState::new(Tag::B(Sign::Plus), entry_ports(direction), site, direction)?,
        lattice,
    )?;
    let w = real(FRAC_1_SQRT_2);
    TwoPhotonState::superpose(&[(&a, w), (&b, w * sign.factor())])
}

fn entry_ports(direction: Direction) -> (Port, Port) {
    match direction {
        Direction::R => (Port::P1, Port::P2),
        Direction::L => (Port::P3, Port::P4),
    }
}

/// Evolves a built state one step and projects it onto the translated
/// reflecting/transmitting pair (polarization-dressed for the polarized
/// families).
pub fn first_step_decomposition(named: &NamedState, coin: &CoinUnitary) -> Result<Decomposition> {
    let lattice = LatticeConfig::new(named.site.unsigned_abs() + 2, named.tag.is_polarized());
    let built = build(named, &lattice)?;
    let schedule = PhaseSchedule::empty();
    let one = step(&built, &Transfer::new(coin, &schedule, 0, lattice))?;

    let (forward_site, backward_site, forward_dir, backward_dir) = match named.direction {
        Direction::R => (named.site + 1, named.site - 1, Direction::R, Direction::L),
        Direction::L => (named.site - 1, named.site + 1, Direction::L, Direction::R),
    };
    let (transmitting, reflecting) = if named.tag.is_polarized() {
        (
            polarization_dressed(forward_site, forward_dir, Sign::Plus, &lattice)?,
            polarization_dressed(backward_site, backward_dir, Sign::Minus, &lattice)?,
        )
    } else {
        (
            build(&NamedState::ballistic(forward_site, forward_dir), &lattice)?,
            build(&NamedState::oscillating(backward_site, backward_dir), &lattice)?,
        )
    };

    let transmitting_coeff = transmitting.inner_product(&one);
    let reflecting_coeff = reflecting.inner_product(&one);
    let transmitting_weight = transmitting_coeff.norm_sqr();
    let reflecting_weight = reflecting_coeff.norm_sqr();
    Ok(Decomposition {
        reflecting: reflecting_weight,
        transmitting: transmitting_weight,
        residual: (1.0 - transmitting_weight - reflecting_weight).max(0.0),
        reflecting_coeff,
        transmitting_coeff,
    })
}

/// Outcome of the clustering census for one input state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClusterClass {
    /// Opposite-direction probability stays at zero for every step.
    Clusters,
    /// The photons part ways with certainty on the very first step.
    AntiClustersFirstStep,
    /// Opposite-direction probability becomes nonzero somewhere.
    Declusters,
}

impl ClusterClass {
    pub fn label(self) -> &'static str {
        match self {
            ClusterClass::Clusters => "clusters",
            ClusterClass::AntiClustersFirstStep => "anti-clusters-first-step",
            ClusterClass::Declusters => "declusters",
        }
    }
}

const CLUSTER_TOL: f64 = 1e-12;

/// Simulates `steps` steps of the Grover walk and classifies the input's
/// direction correlations.
pub fn classify_clustering(named: &NamedState, steps: u32) -> Result<ClusterClass> {
    assert!(steps >= 2, "classification needs at least two steps");
    let lattice = LatticeConfig::new(
        named.site.unsigned_abs() + steps + 1,
        named.tag.is_polarized(),
    );
    let coin = CoinUnitary::grover();
    let schedule = PhaseSchedule::empty();
    let mut state = build(named, &lattice)?;
    let mut worst_mixed = 0.0f64;
    let mut first_step_mixed = 0.0f64;
    for n in 1..=steps {
        let transfer = Transfer::new(&coin, &schedule, state.time(), lattice);
        state = step(&state, &transfer)?;
        let mixed = opposite_direction_mass(&state);
        if n == 1 {
            first_step_mixed = mixed;
        }
        worst_mixed = worst_mixed.max(mixed);
    }
    if (first_step_mixed - 1.0).abs() <= 1e-9 {
        Ok(ClusterClass::AntiClustersFirstStep)
    } else if worst_mixed < CLUSTER_TOL {
        Ok(ClusterClass::Clusters)
    } else {
        Ok(ClusterClass::Declusters)
    }
}

/// The census roster: every `A`, `B`, `C` member over the port pairs
/// (1,2), (1,1), and (2,2). Four of these vanish identically and are
/// expected to fail at build time.
pub fn census_inputs() -> Vec<NamedState> {
    let mut out = Vec::new();
    for ports in [(Port::P1, Port::P2), (Port::P1, Port::P1), (Port::P2, Port::P2)] {
        for sign in [Sign::Plus, Sign::Minus] {
            for tag in [Tag::A(sign), Tag::B(sign), Tag::C(sign)] {
                out.push(
                    NamedState::new(tag, ports, 0, Direction::R)
                        .expect("census ports face the entry side"),
                );
            }
        }
    }
    out
}

/// Squared overlap between the one-photon-per-line component inside a
/// site window and the symmetric H/V Bell pattern `(HV + VH)/sqrt(2)`
/// across the two lines.
pub fn polarization_bell_fidelity(
    state: &TwoPhotonState,
    window: RangeInclusive<i32>,
) -> Result<f64> {
    if state.statistics() != Statistics::Boson {
        return Err(WalkError::PolarizationMismatch(
            "bell fidelity is defined for boson states".into(),
        ));
    }
    use Polarization::{H, V};
    // Per (site, upper port, lower port): amplitudes of the four
    // polarization patterns across the two lines.
    let mut hv: BTreeMap<(i32, Port, Port), Complex64> = BTreeMap::new();
    let mut vh: BTreeMap<(i32, Port, Port), Complex64> = BTreeMap::new();
    let mut sector_norm = 0.0f64;
    for (pair, &amp) in state.iter() {
        let (a, b) = (pair.first(), pair.second());
        if a.site != b.site || !window.contains(&a.site) {
            continue;
        }
        if a.port.line() == b.port.line() {
            continue;
        }
        let (pa, pb) = match (a.polarization, b.polarization) {
            (Some(pa), Some(pb)) => (pa, pb),
            _ => {
                return Err(WalkError::PolarizationMismatch(
                    "bell fidelity needs polarized modes".into(),
                ))
            }
        };
        let (upper, up_pol, lower, low_pol) = if a.port.line() == Line::Upper {
            (a.port, pa, b.port, pb)
        } else {
            (b.port, pb, a.port, pa)
        };
        sector_norm += amp.norm_sqr();
        let key = (a.site, upper, lower);
        match (up_pol, low_pol) {
            (H, V) => *hv.entry(key).or_insert(real(0.0)) += amp,
            (V, H) => *vh.entry(key).or_insert(real(0.0)) += amp,
            // Equal polarizations live in the sector but are orthogonal to
            // the target pattern.
            _ => {}
        }
    }
    if sector_norm < 1e-30 {
        return Err(WalkError::EmptyWindow);
    }
    let mut target = 0.0f64;
    let mut keys: Vec<_> = hv.keys().chain(vh.keys()).copied().collect();
    keys.sort_unstable();
    keys.dedup();
    for key in keys {
        let alpha = hv.get(&key).copied().unwrap_or(real(0.0));
        let beta = vh.get(&key).copied().unwrap_or(real(0.0));
        target += ((alpha + beta) * real(FRAC_1_SQRT_2)).norm_sqr();
    }
    Ok(target / sector_norm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{evolve, translated};

    fn grover() -> CoinUnitary {
        CoinUnitary::grover()
    }

    #[test]
    fn ballistic_state_amplitudes() {
        let lattice = LatticeConfig::new(3, false);
        let state = build(&NamedState::ballistic(1, Direction::R), &lattice).unwrap();
        let p1 = Mode::incoming(1, Port::P1);
        let p2 = Mode::incoming(1, Port::P2);
        assert!((state.amplitude(p1, p1) - real(0.5)).norm() < 1e-15);
        assert!((state.amplitude(p2, p2) - real(0.5)).norm() < 1e-15);
        assert!((state.amplitude(p1, p2) - real(FRAC_1_SQRT_2)).norm() < 1e-15);
        assert!((state.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn vanishing_members_are_rejected() {
        let lattice = LatticeConfig::new(2, true);
        for tag in [Tag::A(Sign::Minus), Tag::B(Sign::Minus)] {
            let named = NamedState::new(tag, (Port::P1, Port::P1), 0, Direction::R).unwrap();
            assert!(matches!(
                build(&named, &lattice),
                Err(WalkError::VanishingState(_))
            ));
        }
        // The + members coincide on a single port and are fine.
        let a = NamedState::new(Tag::A(Sign::Plus), (Port::P1, Port::P1), 0, Direction::R).unwrap();
        let b = NamedState::new(Tag::B(Sign::Plus), (Port::P1, Port::P1), 0, Direction::R).unwrap();
        assert_eq!(build(&a, &lattice).unwrap(), build(&b, &lattice).unwrap());
    }

    #[test]
    fn polarized_tags_need_a_polarized_lattice() {
        let lattice = LatticeConfig::new(2, false);
        let named = NamedState::new(Tag::A(Sign::Plus), (Port::P1, Port::P2), 0, Direction::R)
            .unwrap();
        assert!(matches!(
            build(&named, &lattice),
            Err(WalkError::PolarizationMismatch(_))
        ));
    }

    #[test]
    fn ballistic_translates_one_site_per_step() {
        let lattice = LatticeConfig::new(4, false);
        let state = build(&NamedState::ballistic(0, Direction::R), &lattice).unwrap();
        let coin = grover();
        let schedule = PhaseSchedule::empty();
        let one = evolve(&state, &coin, &schedule, &lattice, 1).unwrap();
        assert!(one.max_amplitude_difference(&translated(&state, 1)) < 1e-13);
        let two = evolve(&state, &coin, &schedule, &lattice, 2).unwrap();
        assert!(two.max_amplitude_difference(&translated(&state, 2)) < 1e-13);
    }

    #[test]
    fn oscillating_bounces_with_period_two() {
        let lattice = LatticeConfig::new(4, false);
        let coin = grover();
        let schedule = PhaseSchedule::empty();
        let state = build(&NamedState::oscillating(0, Direction::R), &lattice).unwrap();
        let one = evolve(&state, &coin, &schedule, &lattice, 1).unwrap();
        let expected = build(&NamedState::oscillating(-1, Direction::L), &lattice).unwrap();
        assert!(one.max_amplitude_difference(&expected) < 1e-13);
        let two = evolve(&state, &coin, &schedule, &lattice, 2).unwrap();
        assert!(two.max_amplitude_difference(&state) < 1e-13);
    }

    #[test]
    fn canonical_split_after_one_step() {
        // One step from the origin pair equals
        // (ballistic at +1 + oscillating entering -1) / sqrt(2).
        let lattice = LatticeConfig::new(3, false);
        let coin = grover();
        let schedule = PhaseSchedule::empty();
        let start = TwoPhotonState::from_single_modes(
            Mode::incoming(0, Port::P1),
            Mode::incoming(0, Port::P2),
            Statistics::Boson,
            &lattice,
        )
        .unwrap();
        let one = evolve(&start, &coin, &schedule, &lattice, 1).unwrap();
        let ballistic = build(&NamedState::ballistic(1, Direction::R), &lattice).unwrap();
        let oscillating = build(&NamedState::oscillating(-1, Direction::L), &lattice).unwrap();
        let w = real(FRAC_1_SQRT_2);
        let expected =
            TwoPhotonState::superpose(&[(&ballistic, w), (&oscillating, w)]).unwrap();
        assert!(one.max_amplitude_difference(&expected) < 1e-12);
    }

    #[test]
    fn entangled_split_weights() {
        let a_plus = NamedState::new(Tag::A(Sign::Plus), (Port::P1, Port::P2), 0, Direction::R)
            .unwrap();
        let d = first_step_decomposition(&a_plus, &grover()).unwrap();
        assert!((d.reflecting - 0.5).abs() < 1e-12);
        assert!((d.transmitting - 0.5).abs() < 1e-12);
        assert!(d.residual < 1e-12);
        // Both coefficients real positive for the A+ input.
        assert!(d.transmitting_coeff.re > 0.0 && d.transmitting_coeff.im.abs() < 1e-12);
        assert!(d.reflecting_coeff.re > 0.0 && d.reflecting_coeff.im.abs() < 1e-12);

        let b_plus = NamedState::new(Tag::B(Sign::Plus), (Port::P1, Port::P2), 0, Direction::R)
            .unwrap();
        let d = first_step_decomposition(&b_plus, &grover()).unwrap();
        assert!((d.reflecting - 0.5).abs() < 1e-12);
        assert!((d.transmitting - 0.5).abs() < 1e-12);
        assert!(d.residual < 1e-12);
        // B+ splits into the difference of the two branches.
        assert!(d.transmitting_coeff.re > 0.0);
        assert!(d.reflecting_coeff.re < 0.0);
    }

    #[test]
    fn crossed_family_keeps_a_residual() {
        let c_plus = NamedState::new(Tag::C(Sign::Plus), (Port::P1, Port::P2), 0, Direction::R)
            .unwrap();
        let d = first_step_decomposition(&c_plus, &grover()).unwrap();
        assert!(d.residual > 0.5);
    }

    #[test]
    fn census_classifications() {
        let classify = |tag, ports| {
            let named = NamedState::new(tag, ports, 0, Direction::R).unwrap();
            classify_clustering(&named, 4).unwrap()
        };
        let both = (Port::P1, Port::P2);
        let first = (Port::P1, Port::P1);
        assert_eq!(classify(Tag::A(Sign::Plus), both), ClusterClass::Clusters);
        assert_eq!(classify(Tag::B(Sign::Plus), both), ClusterClass::Clusters);
        assert_eq!(
            classify(Tag::A(Sign::Minus), both),
            ClusterClass::AntiClustersFirstStep
        );
        assert_eq!(classify(Tag::A(Sign::Plus), first), ClusterClass::Declusters);
        assert_eq!(classify(Tag::C(Sign::Plus), first), ClusterClass::Declusters);
        assert_eq!(classify(Tag::C(Sign::Minus), first), ClusterClass::Declusters);
        // B- mirrors A-: the co-located pairs interfere destructively on
        // every same-direction outcome of the first scatter.
        assert_eq!(
            classify(Tag::B(Sign::Minus), both),
            ClusterClass::AntiClustersFirstStep
        );
        // C across two ports is a superposition of two all-H and all-V
        // canonical walks; the coin never mixes the sectors, so each
        // clusters exactly like the unpolarized input pair.
        assert_eq!(classify(Tag::C(Sign::Plus), both), ClusterClass::Clusters);
        assert_eq!(classify(Tag::C(Sign::Minus), both), ClusterClass::Clusters);
    }

    #[test]
    fn bell_fidelity_reference_points() {
        let lattice = LatticeConfig::new(2, true);
        let a_plus = build(
            &NamedState::new(Tag::A(Sign::Plus), (Port::P1, Port::P2), 0, Direction::R).unwrap(),
            &lattice,
        )
        .unwrap();
        let f = polarization_bell_fidelity(&a_plus, 0..=0).unwrap();
        assert!((f - 1.0).abs() < 1e-12);

        // A plain product of one H and one V photon overlaps the Bell
        // pattern with probability one half.
        let product = TwoPhotonState::from_single_modes(
            Mode::incoming_pol(0, Port::P1, Polarization::H),
            Mode::incoming_pol(0, Port::P2, Polarization::V),
            Statistics::Boson,
            &lattice,
        )
        .unwrap();
        let f = polarization_bell_fidelity(&product, 0..=0).unwrap();
        assert!((f - 0.5).abs() < 1e-12);

        assert_eq!(
            polarization_bell_fidelity(&product, 5..=6),
            Err(WalkError::EmptyWindow)
        );
    }

    #[test]
    fn state_labels_round_trip() {
        let named = NamedState::new(Tag::A(Sign::Plus), (Port::P1, Port::P2), 0, Direction::R)
            .unwrap();
        assert_eq!(NamedState::parse("A+:1,2").unwrap(), named);
        assert_eq!(NamedState::parse(&named.label()).unwrap(), named);
        let spatial = NamedState::parse("psi_t:m=0:RR").unwrap();
        assert_eq!(spatial, NamedState::ballistic(0, Direction::R));
        assert!(NamedState::parse("Q+:1,2").is_err());
        assert!(NamedState::parse("A+:1,9").is_err());
        // Ports must face the entry side for the direction.
        assert!(NamedState::parse("A+:3,4").is_err());
        assert!(NamedState::parse("A+:3,4:LL").is_ok());
    }

    #[test]
    fn census_roster_has_eighteen_members() {
        let inputs = census_inputs();
        assert_eq!(inputs.len(), 18);
        let vanishing = inputs
            .iter()
            .filter(|n| {
                matches!(n.tag, Tag::A(Sign::Minus) | Tag::B(Sign::Minus)) && n.ports.0 == n.ports.1
            })
            .count();
        assert_eq!(vanishing, 4);
    }
}
