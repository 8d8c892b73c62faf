//! Shared scenario builders for the engine benchmarks.

use num_complex::Complex64;
use walk_core::{CoinUnitary, LatticeConfig, Mode, Port, Statistics, TwoPhotonState};

/// Canonical photon pair entering the origin vertex rightward.
pub fn origin_pair(statistics: Statistics, lattice: &LatticeConfig) -> TwoPhotonState {
    TwoPhotonState::from_single_modes(
        Mode::incoming(0, Port::P1),
        Mode::incoming(0, Port::P2),
        statistics,
        lattice,
    )
    .expect("origin pair is valid")
}

/// The four-point DFT coin: unlike the Grover coin it spreads amplitude
/// over the whole lattice, exercising sparse fill-in.
pub fn spreading_coin() -> CoinUnitary {
    let mut entries = [[Complex64::new(0.0, 0.0); 4]; 4];
    for (j, row) in entries.iter_mut().enumerate() {
        for (k, cell) in row.iter_mut().enumerate() {
            let angle = std::f64::consts::TAU * (j * k) as f64 / 4.0;
            *cell = Complex64::new(angle.cos(), angle.sin()) * 0.5;
        }
    }
    CoinUnitary::custom(entries).expect("the DFT matrix is unitary")
}
