//! Exact symbolic Weyl algebra: generator realizations, commutators and contractions.
//!
//! Operators are polynomial differential operators with symbolic coefficients in
//! `sqrt(hbar)`, `k` and `m`. Realizations built here carry `hbar` explicitly;
//! setting `hbar = 2` recovers the numeric conventions of the rest of the crate.

mod coef;
pub mod contraction;
mod diffop;
mod generators;
mod tables;

use thiserror::Error;

use crate::gaussian_core::GaussError;

pub use coef::{cr, rational, CRational, Coef, Rational, SymbolPowers};
pub use contraction::{contract, limit, prefactor, rescale, Frame};
pub use diffop::{Bindings, DiffOp, Var};
pub use generators::{
    boost, generator_function, group_field_i, group_field_p, group_field_x, hw_compose, lambda_reduce, left_realization,
    make_generator, right_realization, tilde_realization, GeneratorId, GeneratorKind, HWElement, Realization,
};
pub use tables::{verify_table, Status, TableEntry, TableId};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WeylError {
    #[error("invalid generator: {0}")]
    InvalidId(String),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("contraction limit diverges: {0}")]
    NegativePower(String),
    #[error("operator acts on theta and cannot be applied to a phase-space function")]
    ThetaDerivativePresent,
    #[error("odd power of sqrt(hbar) cannot be bound to a rational value")]
    IrrationalBinding,
    #[error(transparent)]
    Gauss(#[from] GaussError),
}
