//! Length spectra of the genus-2 octagon surface, twisted Selberg and Ruelle
//! zeta functions, the geometric side of the twisted heat trace formula and
//! the functional-equation integrals.

pub mod cache;
pub mod cyclotomic;
pub mod error;
pub mod functional_eq;
pub mod hyperbolic;
pub mod octagon;
pub mod quadrature;
pub mod representation;
pub mod spectrum;
pub mod summation;
pub mod trace_formula;
pub mod words;
pub mod zeta_series;

pub use error::{Error, Result};
