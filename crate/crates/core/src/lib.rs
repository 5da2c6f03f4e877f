//! Semiclassical band invariants for perturbed harmonic oscillators and the
//! inverse problems they support.

pub mod averaging;
pub mod error;
pub mod experiment;
pub mod invariants;
pub mod inverse;
pub mod oscillator;
pub mod scalar;
pub mod symbolcalc;

pub use averaging::{Potential, SemiclassicalPotential};
pub use error::{Error, Result};
pub use scalar::{Cx, Real};
pub use symbolcalc::{ExpPolySymbol, Mono, PhasePolynomial, Symbol};

pub type PhasePoly = PhasePolynomial<f64>;
pub type PhasePoly32 = PhasePolynomial<f32>;
pub type Pot = Potential<f64>;
