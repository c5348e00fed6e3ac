//! Semiclassical and fully quantum stochastic resonance in the driven,
//! dissipative Jaynes–Cummings model.
//!
//! * [`model`]: mean-field steady states, stability and the effective potential.
//! * [`semiclassical`]: Euler–Maruyama integration of the Langevin equations.
//! * [`quantum`]: Lindblad evolution, homodyne-conditioned trajectories and
//!   Wigner functions on a truncated qubit ⊗ Fock space.
//! * [`analysis`]: switching detection, residence statistics, Kramers scans and SNR.
//! * [`cli`]: configuration, orchestration and file output behind the `jcsr` binary.

pub mod analysis;
pub mod cli;
pub mod error;
pub mod model;
pub mod quantum;
pub mod seed;
pub mod semiclassical;

pub use error::{Error, Result};
