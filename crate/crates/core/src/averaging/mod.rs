//! Classical averaging along the harmonic flow.

pub mod average;
pub mod fourier;
pub mod potential;

pub use average::{
    average_numeric, average_numeric_converged, average_poly, average_symbol, default_nodes,
    delta_average, delta_average_symbol,
};
pub use fourier::{
    a0_apply, a0_invert, b_r_apply, gamma_asymptotic, gamma_coeff, r_n_decompose,
    FourierComponentMap,
};
pub use potential::{Potential, SemiclassicalPotential};
