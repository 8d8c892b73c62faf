//! Classical coherent-field channel.
//!
//! Coherent amplitudes ride through the lattice on the same single-photon
//! transfer operator as Fock amplitudes, so this module is plain linear
//! algebra on a sparse mode vector. Mean photon number is the squared
//! length of that vector and is conserved step to step.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::coin::Transfer;
use crate::error::{Result, WalkError};
use crate::fock::PRUNE_THRESHOLD;
use crate::lattice::{direction_of, Direction, IoPhase, LatticeConfig, Mode, Port};

/// A coherent amplitude per incoming mode.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherentField {
    amplitudes: BTreeMap<Mode, Complex64>,
    time: u32,
}

impl CoherentField {
    /// Coherent amplitudes entering one vertex rightward: `upper` on port 1
    /// and `lower` on port 2.
    pub fn entering_rightward(
        site: i32,
        upper: Complex64,
        lower: Complex64,
        lattice: &LatticeConfig,
    ) -> Result<CoherentField> {
        CoherentField::from_amplitudes(
            [
                (Mode::incoming(site, Port::P1), upper),
                (Mode::incoming(site, Port::P2), lower),
            ],
            0,
            lattice,
        )
    }

    pub fn from_amplitudes(
        entries: impl IntoIterator<Item = (Mode, Complex64)>,
        time: u32,
        lattice: &LatticeConfig,
    ) -> Result<CoherentField> {
        let mut amplitudes = BTreeMap::new();
        for (mode, amp) in entries {
            assert_eq!(mode.phase, IoPhase::Incoming, "coherent modes must be incoming");
            assert!(amp.re.is_finite() && amp.im.is_finite());
            if !lattice.contains(mode.site) {
                return Err(WalkError::BoundaryCrossing {
                    site: mode.site,
                    half_width: lattice.half_width,
                });
            }
            if amp.norm() >= PRUNE_THRESHOLD {
                *amplitudes.entry(mode).or_insert(Complex64::new(0.0, 0.0)) += amp;
            }
        }
        Ok(CoherentField { amplitudes, time })
    }

    pub fn amplitude(&self, mode: Mode) -> Complex64 {
        self.amplitudes
            .get(&mode)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Mode, &Complex64)> {
        self.amplitudes.iter()
    }

    pub fn time(&self) -> u32 {
        self.time
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    /// Mean photon number: the summed squared modulus of all amplitudes.
    pub fn total_intensity(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum()
    }

    /// Total squared amplitude on modes traveling in `side`'s direction.
    pub fn directional_intensity(&self, side: Direction) -> f64 {
        self.amplitudes
            .iter()
            .filter(|(m, _)| direction_of(**m) == side)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }
}

/// Advances the field one step: the amplitude vector is multiplied by the
/// transfer operator and the time counter increments.
pub fn coherent_step(field: &CoherentField, transfer: &Transfer) -> Result<CoherentField> {
    let amplitudes = transfer.apply_vector(&field.amplitudes)?;
    Ok(CoherentField {
        amplitudes,
        time: field.time + 1,
    })
}

/// How far the chosen side's traveling amplitudes are from being equal on
/// the two lines: `sum_site |upper(site) - lower(site)|`. Zero means the
/// field is perfectly balanced on that side.
pub fn balance_defect(field: &CoherentField, side: Direction) -> f64 {
    let (upper_port, lower_port) = match side {
        Direction::R => (Port::P1, Port::P2),
        Direction::L => (Port::P3, Port::P4),
    };
    let mut sites: Vec<i32> = field
        .amplitudes
        .keys()
        .filter(|m| m.port == upper_port || m.port == lower_port)
        .map(|m| m.site)
        .collect();
    sites.dedup();
    sites
        .into_iter()
        .map(|site| {
            let upper = field.amplitude(Mode::incoming(site, upper_port));
            let lower = field.amplitude(Mode::incoming(site, lower_port));
            (upper - lower).norm()
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coin::{CoinUnitary, PhaseSchedule};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn run_one_step(upper: f64, lower: f64) -> CoherentField {
        let lattice = LatticeConfig::new(3, false);
        let field = CoherentField::entering_rightward(0, c(upper), c(lower), &lattice).unwrap();
        let coin = CoinUnitary::grover();
        let schedule = PhaseSchedule::empty();
        coherent_step(&field, &Transfer::new(&coin, &schedule, 0, lattice)).unwrap()
    }

    #[test]
    fn balanced_input_transmits_without_reflection() {
        let out = run_one_step(0.5, 0.5);
        assert!((out.amplitude(Mode::incoming(1, Port::P1)) - c(0.5)).norm() < 1e-15);
        assert!((out.amplitude(Mode::incoming(1, Port::P2)) - c(0.5)).norm() < 1e-15);
        assert_eq!(out.directional_intensity(Direction::L), 0.0);
    }

    #[test]
    fn unbalanced_input_splits_per_the_closed_form() {
        // alpha = 0.3 upper, beta = 0.1 lower: reflected (-0.1, +0.1),
        // transmitted (0.2, 0.2).
        let out = run_one_step(0.3, 0.1);
        assert!((out.amplitude(Mode::incoming(-1, Port::P3)) - c(-0.1)).norm() < 1e-15);
        assert!((out.amplitude(Mode::incoming(-1, Port::P4)) - c(0.1)).norm() < 1e-15);
        assert!((out.amplitude(Mode::incoming(1, Port::P1)) - c(0.2)).norm() < 1e-15);
        assert!((out.amplitude(Mode::incoming(1, Port::P2)) - c(0.2)).norm() < 1e-15);
        // Transmitted side balanced, reflected side antisymmetric.
        assert!(balance_defect(&out, Direction::R) < 1e-15);
        assert!((balance_defect(&out, Direction::L) - 0.2).abs() < 1e-15);
    }

    #[test]
    fn intensity_is_conserved() {
        let out = run_one_step(0.3, 0.1);
        assert!((out.total_intensity() - (0.09 + 0.01)).abs() < 1e-14);
    }

    #[test]
    fn balance_defect_of_the_input_side() {
        let lattice = LatticeConfig::new(3, false);
        let field = CoherentField::entering_rightward(0, c(0.3), c(0.1), &lattice).unwrap();
        assert!((balance_defect(&field, Direction::R) - 0.2).abs() < 1e-15);
        let empty = CoherentField::from_amplitudes([], 0, &lattice).unwrap();
        assert_eq!(balance_defect(&empty, Direction::R), 0.0);
        assert_eq!(balance_defect(&empty, Direction::L), 0.0);
    }
}
