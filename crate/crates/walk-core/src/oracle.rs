//! Brute-force reference evolution on the dense ordered tensor.
//!
//! Everything here deliberately avoids the sparse scatter in [`crate::fock`]:
//! the transfer operator is materialized as an explicit matrix over all
//! in-bounds incoming modes and the two-photon state is evolved by plain
//! matrix multiplication on the full ordered tensor. Agreement between the
//! two paths is the engine's main correctness check.

use std::collections::BTreeMap;
use std::f64::consts::SQRT_2;

use num_complex::Complex64;

use crate::coherent::CoherentField;
use crate::coin::{CoinUnitary, PhaseSchedule};
use crate::error::{Result, WalkError};
use crate::fock::{Statistics, TwoPhotonState, PRUNE_THRESHOLD};
use crate::lattice::{propagate, traversed_edge, IoPhase, LatticeConfig, Mode, Port};

/// Largest mode count the dense path will accept.
pub const DENSE_MODE_BUDGET: usize = 256;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

struct DenseBasis {
    modes: Vec<Mode>,
    index: BTreeMap<Mode, usize>,
}

impl DenseBasis {
    fn new(lattice: &LatticeConfig) -> Result<DenseBasis> {
        let modes = lattice.incoming_modes();
        if modes.len() > DENSE_MODE_BUDGET {
            return Err(WalkError::CapacityExceeded {
                modes: modes.len(),
                budget: DENSE_MODE_BUDGET,
            });
        }
        let index = modes
            .iter()
            .enumerate()
            .map(|(i, &m)| (m, i))
            .collect();
        Ok(DenseBasis { modes, index })
    }

    fn len(&self) -> usize {
        self.modes.len()
    }
}

/// Dense transfer matrix for one step: `t[row * n + col]` maps incoming
/// mode `col` to incoming mode `row`. Built directly from the coin entries
/// and the wiring, not from the sparse operator.
fn dense_transfer(
    coin: &CoinUnitary,
    schedule: &PhaseSchedule,
    step: u32,
    lattice: &LatticeConfig,
    basis: &DenseBasis,
) -> Vec<Complex64> {
    let n = basis.len();
    let mut t = vec![ZERO; n * n];
    for (col, &source) in basis.modes.iter().enumerate() {
        if !lattice.interior(source.site) {
            continue;
        }
        for out_port in Port::ALL {
            let exit = Mode {
                site: source.site,
                port: out_port,
                phase: IoPhase::Outgoing,
                polarization: source.polarization,
            };
            let target = propagate(exit, lattice).expect("interior scatter stays in bounds");
            let phase = schedule.factor(step, traversed_edge(exit), out_port.line());
            let row = basis.index[&target];
            t[row * n + col] = coin.entry(out_port, source.port) * phase;
        }
    }
    t
}

/// `out = a * b` for square matrices, skipping zero entries of `a`.
fn matmul(a: &[Complex64], b: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut out = vec![ZERO; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == ZERO {
                continue;
            }
            let row = &b[k * n..(k + 1) * n];
            let dst = &mut out[i * n..(i + 1) * n];
            for (d, &bkj) in dst.iter_mut().zip(row.iter()) {
                *d += aik * bkj;
            }
        }
    }
    out
}

fn transpose(a: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut out = vec![ZERO; n * n];
    for i in 0..n {
        for j in 0..n {
            out[j * n + i] = a[i * n + j];
        }
    }
    out
}

fn check_boundary_occupancy(
    psi: &[Complex64],
    basis: &DenseBasis,
    lattice: &LatticeConfig,
) -> Result<()> {
    let n = basis.len();
    for (i, &a) in basis.modes.iter().enumerate() {
        for (j, &b) in basis.modes.iter().enumerate() {
            if psi[i * n + j].norm() >= PRUNE_THRESHOLD
                && (!lattice.interior(a.site) || !lattice.interior(b.site))
            {
                let site = if lattice.interior(a.site) { b.site } else { a.site };
                let crossing = if site >= 0 { site + 1 } else { site - 1 };
                return Err(WalkError::BoundaryCrossing {
                    site: crossing,
                    half_width: lattice.half_width,
                });
            }
        }
    }
    Ok(())
}

/// Evolves a two-photon state by explicit dense tensor algebra.
///
/// The ordered tensor is advanced as `psi -> T psi T^t` each step, then
/// re-canonicalized into the sparse storage convention. Errors mirror the
/// sparse engine: boundary contact by populated modes is refused, and
/// lattices beyond [`DENSE_MODE_BUDGET`] modes are rejected up front.
pub fn brute_force_oracle(
    initial: &TwoPhotonState,
    coin: &CoinUnitary,
    schedule: &PhaseSchedule,
    lattice: &LatticeConfig,
    steps: u32,
) -> Result<TwoPhotonState> {
    let basis = DenseBasis::new(lattice)?;
    let n = basis.len();

    let mut psi = vec![ZERO; n * n];
    for ((a, b), amp) in initial.ordered_view() {
        let i = *basis.index.get(&a).ok_or(WalkError::BoundaryCrossing {
            site: a.site,
            half_width: lattice.half_width,
        })?;
        let j = *basis.index.get(&b).ok_or(WalkError::BoundaryCrossing {
            site: b.site,
            half_width: lattice.half_width,
        })?;
        psi[i * n + j] = amp;
    }

    for k in 0..steps {
        check_boundary_occupancy(&psi, &basis, lattice)?;
        let t = dense_transfer(coin, schedule, initial.time() + k, lattice, &basis);
        let tt = transpose(&t, n);
        psi = matmul(&t, &matmul(&psi, &tt, n), n);
    }

    let mut entries: Vec<((Mode, Mode), Complex64)> = Vec::new();
    match initial.statistics() {
        Statistics::Distinguishable => {
            for i in 0..n {
                for j in 0..n {
                    let amp = psi[i * n + j];
                    if amp.norm() >= PRUNE_THRESHOLD {
                        entries.push(((basis.modes[i], basis.modes[j]), amp));
                    }
                }
            }
        }
        Statistics::Boson => {
            for i in 0..n {
                for j in i..n {
                    // Symmetrize before converting to Fock amplitudes; the
                    // two ordered slots agree up to rounding.
                    let amp = if i == j {
                        psi[i * n + i]
                    } else {
                        (psi[i * n + j] + psi[j * n + i]) / SQRT_2
                    };
                    if amp.norm() >= PRUNE_THRESHOLD {
                        entries.push(((basis.modes[i], basis.modes[j]), amp));
                    }
                }
            }
        }
    }
    let evolved = TwoPhotonState::from_amplitudes(entries, initial.statistics(), initial.time() + steps)?;
    Ok(evolved)
}

/// Dense single-photon reference for the coherent channel: the amplitude
/// vector is advanced by explicit matrix-vector products.
pub fn coherent_reference(
    field: &CoherentField,
    coin: &CoinUnitary,
    schedule: &PhaseSchedule,
    lattice: &LatticeConfig,
    steps: u32,
) -> Result<CoherentField> {
    let basis = DenseBasis::new(lattice)?;
    let n = basis.len();
    let mut v = vec![ZERO; n];
    for (&mode, &amp) in field.iter() {
        let i = *basis.index.get(&mode).ok_or(WalkError::BoundaryCrossing {
            site: mode.site,
            half_width: lattice.half_width,
        })?;
        v[i] = amp;
    }
    for k in 0..steps {
        for (i, &mode) in basis.modes.iter().enumerate() {
            if v[i].norm() >= PRUNE_THRESHOLD && !lattice.interior(mode.site) {
                let site = if mode.site >= 0 { mode.site + 1 } else { mode.site - 1 };
                return Err(WalkError::BoundaryCrossing {
                    site,
                    half_width: lattice.half_width,
                });
            }
        }
        let t = dense_transfer(coin, schedule, field.time() + k, lattice, &basis);
        let mut next = vec![ZERO; n];
        for (i, row) in next.iter_mut().enumerate() {
            for (j, &vj) in v.iter().enumerate() {
                if vj != ZERO {
                    *row += t[i * n + j] * vj;
                }
            }
        }
        v = next;
    }
    let entries = basis
        .modes
        .iter()
        .zip(v.iter())
        .filter(|(_, amp)| amp.norm() >= PRUNE_THRESHOLD)
        .map(|(&mode, &amp)| (mode, amp));
    CoherentField::from_amplitudes(entries, field.time() + steps, lattice)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock;

    #[test]
    fn zero_steps_is_the_identity() {
        let lattice = LatticeConfig::new(3, false);
        let state = TwoPhotonState::from_single_modes(
            Mode::incoming(0, Port::P1),
            Mode::incoming(0, Port::P2),
            Statistics::Boson,
            &lattice,
        )
        .unwrap();
        let coin = CoinUnitary::grover();
        let schedule = PhaseSchedule::empty();
        let oracle = brute_force_oracle(&state, &coin, &schedule, &lattice, 0).unwrap();
        assert!(oracle.max_amplitude_difference(&state) < 1e-15);
    }

    #[test]
    fn single_step_matches_the_sparse_engine() {
        let lattice = LatticeConfig::new(3, false);
        let state = TwoPhotonState::from_single_modes(
            Mode::incoming(0, Port::P1),
            Mode::incoming(0, Port::P2),
            Statistics::Boson,
            &lattice,
        )
        .unwrap();
        let coin = CoinUnitary::grover();
        let schedule = PhaseSchedule::empty();
        let sparse = fock::evolve(&state, &coin, &schedule, &lattice, 1).unwrap();
        let dense = brute_force_oracle(&state, &coin, &schedule, &lattice, 1).unwrap();
        assert!(sparse.max_amplitude_difference(&dense) < 1e-12);
    }

    #[test]
    fn oversized_lattice_is_rejected() {
        let lattice = LatticeConfig::new(100, false);
        let state = TwoPhotonState::from_single_modes(
            Mode::incoming(0, Port::P1),
            Mode::incoming(0, Port::P2),
            Statistics::Boson,
            &lattice,
        )
        .unwrap();
        let coin = CoinUnitary::grover();
        let schedule = PhaseSchedule::empty();
        assert!(matches!(
            brute_force_oracle(&state, &coin, &schedule, &lattice, 1),
            Err(WalkError::CapacityExceeded { .. })
        ));
    }
}
