//! Two-photon state representation and evolution.
//!
//! States are sparse maps from mode pairs to complex amplitudes. For
//! indistinguishable bosons the keys are unordered canonical pairs and the
//! stored amplitude multiplies the *normalized* Fock basis element, so the
//! probability of an outcome is `|amplitude|^2` directly. Double occupancy
//! carries the usual two-boson bookkeeping: the ordered-tensor value equals
//! the stored amplitude on the diagonal, and `amplitude / sqrt(2)` on each
//! of the two mirrored off-diagonal slots. Distinguishable photons use
//! ordered pairs with no symmetrization.
//!
//! Evolution applies the single-photon transfer to both tensor indices and
//! re-canonicalizes, which preserves exchange symmetry by construction.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use num_complex::Complex64;
use serde::Serialize;

use crate::coin::{CoinUnitary, PhaseSchedule, Transfer};
use crate::error::{Result, WalkError};
use crate::lattice::{IoPhase, LatticeConfig, Mode};

/// Amplitudes smaller than this are dropped after each step. Far below all
/// test tolerances; keeps exact-zero cancellations from filling the map.
pub const PRUNE_THRESHOLD: f64 = 1e-15;

/// Tolerance on the total probability of a state.
pub const NORM_TOL: f64 = 1e-10;

/// Photon statistics of a two-photon state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Statistics {
    Boson,
    Distinguishable,
}

/// A pair of single-photon modes; the basis label for two-photon
/// amplitudes. Boson pairs are stored in canonical (sorted) order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct ModePair {
    a: Mode,
    b: Mode,
}

impl ModePair {
    /// Canonical unordered pair (sorted by the mode order).
    pub fn unordered(x: Mode, y: Mode) -> ModePair {
        if x <= y {
            ModePair { a: x, b: y }
        } else {
            ModePair { a: y, b: x }
        }
    }

    /// Ordered pair: first photon in `x`, second in `y`.
    pub fn ordered(x: Mode, y: Mode) -> ModePair {
        ModePair { a: x, b: y }
    }

    pub fn canonical(x: Mode, y: Mode, statistics: Statistics) -> ModePair {
        match statistics {
            Statistics::Boson => ModePair::unordered(x, y),
            Statistics::Distinguishable => ModePair::ordered(x, y),
        }
    }

    pub fn first(&self) -> Mode {
        self.a
    }

    pub fn second(&self) -> Mode {
        self.b
    }

    /// Both photons in the same mode.
    pub fn is_diagonal(&self) -> bool {
        self.a == self.b
    }

    pub fn sites(&self) -> (i32, i32) {
        (self.a.site, self.b.site)
    }
}

/// Sparse two-photon state at an integer time step.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoPhotonState {
    statistics: Statistics,
    amplitudes: BTreeMap<ModePair, Complex64>,
    time: u32,
}

impl TwoPhotonState {
    /// Places one photon in each of two incoming modes.
    ///
    /// For bosons this is the canonical symmetrized pair state (or the
    /// normalized double-occupancy state when `a == b`); for
    /// distinguishable photons it is the ordered product state.
    pub fn from_single_modes(
        a: Mode,
        b: Mode,
        statistics: Statistics,
        lattice: &LatticeConfig,
    ) -> Result<TwoPhotonState> {
        for mode in [a, b] {
            assert_eq!(mode.phase, IoPhase::Incoming, "initial modes must be incoming");
            if !lattice.contains(mode.site) {
                return Err(WalkError::BoundaryCrossing {
                    site: mode.site,
                    half_width: lattice.half_width,
                });
            }
        }
        check_polarization_pair(a, b, lattice)?;
        if statistics == Statistics::Distinguishable && a == b {
            return Err(WalkError::IdenticalDistinguishableModes);
        }
        let mut amplitudes = BTreeMap::new();
        amplitudes.insert(
            ModePair::canonical(a, b, statistics),
            Complex64::new(1.0, 0.0),
        );
        Ok(TwoPhotonState {
            statistics,
            amplitudes,
            time: 0,
        })
    }

    /// Builds a state from explicit amplitudes, canonicalizing keys and
    /// requiring unit norm within [`NORM_TOL`].
    pub fn from_amplitudes(
        entries: impl IntoIterator<Item = ((Mode, Mode), Complex64)>,
        statistics: Statistics,
        time: u32,
    ) -> Result<TwoPhotonState> {
        let mut amplitudes: BTreeMap<ModePair, Complex64> = BTreeMap::new();
        for ((x, y), amp) in entries {
            let key = ModePair::canonical(x, y, statistics);
            *amplitudes.entry(key).or_insert(Complex64::new(0.0, 0.0)) += amp;
        }
        amplitudes.retain(|_, v| v.norm() >= PRUNE_THRESHOLD);
        let state = TwoPhotonState {
            statistics,
            amplitudes,
            time,
        };
        let norm_sqr = state.norm_sqr();
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(WalkError::NotNormalized { norm_sqr });
        }
        Ok(state)
    }

    pub fn statistics(&self) -> Statistics {
        self.statistics
    }

    pub fn time(&self) -> u32 {
        self.time
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    /// Stored amplitude for a pair, zero if absent. The pair is
    /// canonicalized for this state's statistics first.
    pub fn amplitude(&self, x: Mode, y: Mode) -> Complex64 {
        self.amplitudes
            .get(&ModePair::canonical(x, y, self.statistics))
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ModePair, &Complex64)> {
        self.amplitudes.iter()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum()
    }

    /// The ordered-tensor view: boson off-diagonal entries are mirrored
    /// onto both ordered slots with weight `amplitude / sqrt(2)`.
    pub fn ordered_view(&self) -> Vec<((Mode, Mode), Complex64)> {
        let mut out = Vec::with_capacity(self.amplitudes.len() * 2);
        for (pair, &amp) in &self.amplitudes {
            match self.statistics {
                Statistics::Distinguishable => out.push(((pair.a, pair.b), amp)),
                Statistics::Boson => {
                    if pair.is_diagonal() {
                        out.push(((pair.a, pair.b), amp));
                    } else {
                        let half = amp * FRAC_1_SQRT_2;
                        out.push(((pair.a, pair.b), half));
                        out.push(((pair.b, pair.a), half));
                    }
                }
            }
        }
        out
    }

    /// Complex linear combination of same-statistics states. The caller is
    /// responsible for the result's normalization.
    pub fn superpose(parts: &[(&TwoPhotonState, Complex64)]) -> Result<TwoPhotonState> {
        assert!(!parts.is_empty(), "superpose needs at least one component");
        let statistics = parts[0].0.statistics;
        let time = parts[0].0.time;
        let mut amplitudes: BTreeMap<ModePair, Complex64> = BTreeMap::new();
        for (state, coef) in parts {
            assert_eq!(state.statistics, statistics, "statistics must match");
            for (pair, amp) in &state.amplitudes {
                *amplitudes.entry(*pair).or_insert(Complex64::new(0.0, 0.0)) += coef * amp;
            }
        }
        amplitudes.retain(|_, v| v.norm() >= PRUNE_THRESHOLD);
        let state = TwoPhotonState {
            statistics,
            amplitudes,
            time,
        };
        let norm_sqr = state.norm_sqr();
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(WalkError::NotNormalized { norm_sqr });
        }
        Ok(state)
    }

    /// Hilbert-space inner product `<self|other>` over canonical basis
    /// pairs. Time labels are ignored.
    pub fn inner_product(&self, other: &TwoPhotonState) -> Complex64 {
        assert_eq!(self.statistics, other.statistics, "statistics must match");
        let mut dot = Complex64::new(0.0, 0.0);
        for (pair, amp) in &self.amplitudes {
            if let Some(b) = other.amplitudes.get(pair) {
                dot += amp.conj() * b;
            }
        }
        dot
    }

    /// Largest per-amplitude difference against another state, over the
    /// union of populated pairs.
    pub fn max_amplitude_difference(&self, other: &TwoPhotonState) -> f64 {
        let mut worst = 0.0f64;
        for (pair, amp) in &self.amplitudes {
            let b = other
                .amplitudes
                .get(pair)
                .copied()
                .unwrap_or(Complex64::new(0.0, 0.0));
            worst = worst.max((amp - b).norm());
        }
        for (pair, amp) in &other.amplitudes {
            if !self.amplitudes.contains_key(pair) {
                worst = worst.max(amp.norm());
            }
        }
        worst
    }

    /// Same state up to a global phase: `self == e^{i theta} other` for
    /// some theta, within `tol` per amplitude.
    pub fn matches_up_to_global_phase(&self, other: &TwoPhotonState, tol: f64) -> bool {
        let overlap = other.inner_product(self);
        if overlap.norm() < 1e-6 {
            return false;
        }
        let phase = overlap / overlap.norm();
        let rotated: Vec<_> = other
            .amplitudes
            .iter()
            .map(|(pair, amp)| ((pair.a, pair.b), amp * phase))
            .collect();
        match TwoPhotonState::from_amplitudes(rotated, other.statistics, other.time) {
            Ok(aligned) => self.max_amplitude_difference(&aligned) <= tol,
            Err(_) => false,
        }
    }

    /// JSON-serializable snapshot of the full amplitude map.
    pub fn snapshot(&self, lattice: &LatticeConfig) -> StateSnapshot {
        StateSnapshot {
            statistics: self.statistics,
            time: self.time,
            lattice: LatticeHeader {
                half_width: lattice.half_width,
                polarized: lattice.polarized,
            },
            amplitudes: self
                .amplitudes
                .iter()
                .map(|(pair, amp)| AmplitudeRecord {
                    modes: [pair.a.encode(), pair.b.encode()],
                    re: amp.re,
                    im: amp.im,
                })
                .collect(),
        }
    }

}

fn check_polarization_pair(a: Mode, b: Mode, lattice: &LatticeConfig) -> Result<()> {
    match (a.polarization.is_some(), b.polarization.is_some()) {
        (true, true) if !lattice.polarized => Err(WalkError::PolarizationMismatch(
            "polarized modes on an unpolarized lattice".into(),
        )),
        (false, false) if lattice.polarized => Err(WalkError::PolarizationMismatch(
            "unpolarized modes on a polarized lattice".into(),
        )),
        (true, false) | (false, true) => Err(WalkError::PolarizationMismatch(
            "cannot mix polarized and unpolarized modes in one state".into(),
        )),
        _ => Ok(()),
    }
}

/// Advances a state one step by applying the transfer to both photons.
///
/// Both statistics evolve through the same product scatter; boson states
/// pick up the sqrt(2) factors when amplitude moves between diagonal
/// (double-occupancy) and off-diagonal pairs.
pub fn step(state: &TwoPhotonState, transfer: &Transfer) -> Result<TwoPhotonState> {
    let mut next: BTreeMap<ModePair, Complex64> = BTreeMap::new();
    for (pair, &amp) in &state.amplitudes {
        let targets_a = transfer.apply(pair.a)?;
        let targets_b = if pair.is_diagonal() {
            targets_a
        } else {
            transfer.apply(pair.b)?
        };
        let in_diagonal = pair.is_diagonal();
        for &(mode_a, coef_a) in &targets_a {
            for &(mode_b, coef_b) in &targets_b {
                let mut coef = amp * coef_a * coef_b;
                if coef.norm_sqr() == 0.0 {
                    continue;
                }
                let key = match state.statistics {
                    Statistics::Distinguishable => ModePair::ordered(mode_a, mode_b),
                    Statistics::Boson => {
                        let out_diagonal = mode_a == mode_b;
                        if in_diagonal && !out_diagonal {
                            coef *= FRAC_1_SQRT_2;
                        } else if !in_diagonal && out_diagonal {
                            coef *= SQRT_2;
                        }
                        ModePair::unordered(mode_a, mode_b)
                    }
                };
                *next.entry(key).or_insert(Complex64::new(0.0, 0.0)) += coef;
            }
        }
    }
    next.retain(|_, v| v.norm() >= PRUNE_THRESHOLD);
    Ok(TwoPhotonState {
        statistics: state.statistics,
        amplitudes: next,
        time: state.time + 1,
    })
}

/// Runs `steps` transfer applications, threading the step counter through
/// the phase schedule.
pub fn evolve(
    state: &TwoPhotonState,
    coin: &CoinUnitary,
    schedule: &PhaseSchedule,
    lattice: &LatticeConfig,
    steps: u32,
) -> Result<TwoPhotonState> {
    let mut current = state.clone();
    for _ in 0..steps {
        let transfer = Transfer::new(coin, schedule, current.time, *lattice);
        current = step(&current, &transfer)?;
    }
    Ok(current)
}

/// Applies a translation to every site index, used when comparing a state
/// against its shifted self.
pub fn translated(state: &TwoPhotonState, offset: i32) -> TwoPhotonState {
    let amplitudes = state
        .amplitudes
        .iter()
        .map(|(pair, amp)| {
            let mut a = pair.a;
            let mut b = pair.b;
            a.site += offset;
            b.site += offset;
            (ModePair { a, b }, *amp)
        })
        .collect();
    TwoPhotonState {
        statistics: state.statistics,
        amplitudes,
        time: state.time,
    }
}

/// Serialized form of a state: header plus the amplitude list.
#[derive(Debug, Serialize)]
pub struct StateSnapshot {
    pub statistics: Statistics,
    pub time: u32,
    pub lattice: LatticeHeader,
    pub amplitudes: Vec<AmplitudeRecord>,
}

#[derive(Debug, Serialize)]
pub struct LatticeHeader {
    pub half_width: u32,
    pub polarized: bool,
}

#[derive(Debug, Serialize)]
pub struct AmplitudeRecord {
    pub modes: [String; 2],
    pub re: f64,
    pub im: f64,
}

impl StateSnapshot {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("snapshot serialization cannot fail")
    }
}
