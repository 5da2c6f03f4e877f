//! Recovery of potentials from band invariants.

pub mod analytic2d;
pub mod even1d;
pub mod gauge;
pub mod hessian;
pub mod linalg;
pub mod linear;
pub mod odd1d;
pub mod oracle;
pub mod report;
pub mod rigidity;
pub mod separable;

pub use analytic2d::{radial_moment, recover_analytic_2d, recover_semiclassical_2d};
pub use even1d::{
    fit_even_polynomial, recover_even_1d, recover_even_1d_from_oracle, sphere_samples,
};
pub use gauge::{gauge_move, gauge_moves, GaugeMove};
pub use hessian::{recover_hessian, recover_origin_value};
pub use linalg::{solve_equilibrated, solve_unchecked, LeastSquares};
pub use linear::{check_linear_class, recover_linear_norm, ClassCheck};
pub use odd1d::{odd_pair_coefficient, recover_odd_1d, recover_odd_from_moments};
pub use oracle::{
    fit_laurent, ClassicalOracle, InvariantOracle, LaurentSeries, OracleSource, QuantumOracle,
};
pub use report::{AmbiguityFlags, Recovered, RecoveryReport};
pub use rigidity::rigidity_svd;
pub use separable::{recover_separable, SeparableOptions};
