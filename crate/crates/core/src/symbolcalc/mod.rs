//! Symbol calculus on phase space: polynomials, brackets, Moyal terms and the
//! transport hierarchy.

pub mod moyal;
pub mod poly;
pub mod time;
pub mod transport;

pub use moyal::{
    compositions, higher_bracket, moyal_poly, moyal_term, poisson_bracket, ExpPolySymbol, Symbol,
};
pub use poly::{Mono, PhasePolynomial, MAX_DIM};
pub use time::{
    duhamel, flow_pullback, frequency_components, h0_bracket, power_exp_integral, FrequencyMap,
    TimeSymbol,
};
pub use transport::{
    moyal_power_expansion, series_moyal, transport_symbols, HbarSeries, TransportSymbols,
    DEFAULT_MAX_ORDER,
};
