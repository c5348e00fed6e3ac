//! Dimensionless parameters, mean-field steady states, linear stability and
//! the effective double-well potential.

mod params;
mod potential;
mod steady;

pub use params::{derived_params, DerivedParams, SystemParams};
pub use potential::{
    potential, potential_curvature, potential_derivative, potential_extrema, potential_extrema_on,
    AlphaGrid, Extremum, ExtremumKind, PotentialProfile,
};
pub use steady::{
    bistable_region, branch_midpoint, drive_for_amplitude, inversion_for_amplitude, jacobian, jacobian_eigenvalues,
    steady_states, Stability, SteadyState, FIXED_POINT_TOLERANCE,
};
