//! Band invariants: classical phase-space integrals and their quantum
//! counterparts built from cluster data.

pub mod band;
pub mod gaussian;
pub mod quadrature;
pub mod sphere;
pub mod szego;
pub mod trace;
pub mod weight;

pub use band::{
    band_invariant_first, band_invariant_first_numeric, homogeneous_gaussian_moments,
    odd_invariant, odd_kernel_integral, radial_integral, second_invariant,
    second_invariant_expansion, semiclassical_invariant, semiclassical_remainder,
    weighted_integral, EnergyShift,
};
pub use gaussian::{gaussian_moment_1d, gaussian_phase_integral, gaussian_phase_integral_aniso};
pub use quadrature::{composite_rule, gauss_legendre};
pub use sphere::{
    compose_poly, sphere_average_invariant, sphere_average_poly, sphere_invariant,
    sphere_invariant_poly, sphere_moment,
};
pub use szego::{cluster_mean, szego_compare, szego_compare_mode, SzegoMode, SzegoPoint};
pub use trace::{
    clusters_for_weight, expansion_fit, geometric_grid, quantum_trace_series, trace_moments,
    trace_moments_scaled, ExpansionFit, InvariantSeries, Provenance, MAX_CONDITION, WEIGHT_TAIL,
};
pub use weight::{PolyFn, WeightSpec};
