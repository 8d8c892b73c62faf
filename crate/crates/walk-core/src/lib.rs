//! Simulator for two-photon discrete-time quantum walks on a chain of
//! four-port vertices acting as Grover coins.
//!
//! The crate covers the full pipeline: lattice wiring and mode indexing
//! ([`lattice`]), the vertex unitary with per-edge phase insertions
//! ([`coin`]), sparse two-photon Fock evolution for indistinguishable and
//! distinguishable photons ([`fock`]), the named input states and their
//! clustering census ([`states`]), classical coherent-field propagation
//! ([`coherent`]), measurement reductions ([`observables`]), and a dense
//! brute-force reference implementation used to cross-check the sparse
//! engine ([`oracle`]).
//!
//! All state values are immutable; every step produces a new state, and
//! identical inputs produce identical outputs.

pub mod coherent;
pub mod coin;
pub mod error;
pub mod fock;
pub mod lattice;
pub mod observables;
pub mod oracle;
pub mod states;

pub use coherent::{balance_defect, coherent_step, CoherentField};
pub use coin::{CoinUnitary, PhaseSchedule, Transfer, UNITARITY_TOL};
pub use error::{Result, WalkError};
pub use fock::{
    evolve, step, ModePair, StateSnapshot, Statistics, TwoPhotonState, NORM_TOL, PRUNE_THRESHOLD,
};
pub use lattice::{
    direction_of, propagate, propagate_inverse, Direction, IoPhase, LatticeConfig, Line, Mode,
    Polarization, Port,
};
pub use observables::{
    branch_weights, clustering_defect, direction_masses, direction_pair_probabilities,
    exit_port_table, joint_site_distribution, opposite_direction_mass, BranchWeights,
    DirectionPairs, JointDistribution,
};
pub use oracle::{brute_force_oracle, coherent_reference, DENSE_MODE_BUDGET};
pub use states::{
    build, census_inputs, classify_clustering, first_step_decomposition,
    polarization_bell_fidelity, ClusterClass, Decomposition, NamedState, Sign, Tag,
};
