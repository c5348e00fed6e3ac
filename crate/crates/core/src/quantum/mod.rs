//! Qubit ⊗ truncated-Fock dynamics: the unconditional master equation, its
//! homodyne-conditioned stochastic unraveling and cavity Wigner functions.

pub mod dense;
mod kernel;
pub mod master;
pub mod operators;
pub mod sme;
pub mod sparse;
pub mod state;
pub mod wigner;

pub use dense::CMatrix;
pub use master::{
    me_evolve, me_rhs, me_steady_state, me_steady_state_from, me_steady_sweep, AdaptiveEvolution, Expectations, Liouvillian,
    SteadyOptions, SteadyReport,
};
pub use operators::{build_operators, hamiltonian, OperatorSet, EXCITED, GROUND};
pub use sme::{
    sme_ensemble, sme_integrate, HomodyneRecord, HomodyneSample, SmeCheckpoint, SmeConfig, SmeIntegrator, SmeRun,
    SmeScheme, Snapshot, EXPECTATION_CSV_HEADER,
};
pub use sparse::SparseMatrix;
pub use wigner::{wigner, WignerField, WignerGrid, WignerPeak, SAFE_RADIUS_FRACTION, WIGNER_CSV_HEADER};
pub use state::{coherent_amplitudes, fidelity_with_pure, reduce_cavity, Hygiene, QuantumState, TRUNCATION_TOLERANCE};
