//! Series solutions of polynomial equations in `F` and linear recurrences with
//! polynomial coefficients.

mod equation;
mod guess;
mod modular;

use thiserror::Error;

pub use equation::{
    loop_basis_constant_term, residual_check, series_solve_polynomial, solve_in_loop_basis, PolynomialEquation,
    ResidualReport,
};
pub use guess::{guess_recurrence, verify_range, verify_recurrence, Recurrence, SAFETY_MARGIN};
pub use modular::constant_term_sequence;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraicError {
    #[error("F = {0} is not a root at z = 0")]
    NotARoot(String),
    #[error("the root at z = 0 is not simple")]
    MultipleRoot,
    #[error("dP/dF at z = 0 must be an integer constant, found {0}")]
    NonConstantSlope(String),
    #[error("no integral solution at order {0}")]
    NotIntegral(usize),
    #[error("series has order {have}, need {need}")]
    SeriesTooShort { have: usize, need: usize },
    #[error("{have} terms given, at least {need} required")]
    InsufficientTerms { have: usize, need: usize },
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error(transparent)]
    Series(#[from] cogrowth_series::SeriesError),
}
