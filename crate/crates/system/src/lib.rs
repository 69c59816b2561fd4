//! Finite algebraic systems for walk generating functions on the Schreier graphs of
//! `G(p1,...,pk)` and of B3, their exact series solutions, and related closed forms.
//!
//! A system is a list of equations `Y_j = Φ_j(z, Y, q)` whose right-hand sides are
//! expression graphs over constants in `q`, the variable `z` and the unknowns. In
//! every equation the unknowns only enter multiplied by `z`, so the coefficients of
//! `z^n` can be computed one order at a time.

mod build;
mod closed;
mod expr;
mod modular;
mod solve;

use cogrowth_group::GroupError;
use cogrowth_series::SeriesError;
use thiserror::Error;

pub use build::{
    build_axa_branch_system, build_axa_system, build_star_system, build_star_system_variant, one_sided_name, Assembly,
    EquationSystem, StarVariant,
};
pub use closed::{cone_positivity_check, ktree_closed_form, ConeClass, ConeReport, ConeViolation, KTreeSeries};
pub use expr::{ExprArena, NodeId};
pub use modular::{solve_star_modular, StarSeries};
pub use solve::{solve_series, substitution_residual, SeriesSolution};

#[derive(Debug, Error)]
pub enum SystemError {
    #[error("operation requires a star-polygon group")]
    NotStarPolygon,
    #[error("the closed forms need at least two factors, got {0}")]
    TooFewFactors(u32),
    #[error("right-hand side of {unknown} at order {order} depends on coefficients not yet known")]
    ZFactorViolation { unknown: String, order: usize },
    #[error("system has no assembled generating function")]
    NoAssembly,
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Group(#[from] GroupError),
}
