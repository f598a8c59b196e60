//! Cores, integral closures, adjoints and first coefficient ideals of
//! zero-dimensional monomial ideals.

pub mod scalars;
pub mod monomials;
pub mod newton;
pub mod grobner;
pub mod engine;
pub mod formulas;

mod grid;

pub use engine::{CoreMethod, CoreReport, EngineError, ReductionData, ValidityFlags};
pub use formulas::FormulaError;
pub use grobner::{GrobnerError, MonomialOrder, PolyIdeal, Polynomial};
pub use monomials::{ExponentVector, MonomialError, MonomialIdeal, RingContext};
pub use newton::NewtonError;
pub use scalars::{FieldSpec, Scalar, ScalarError};
