use thiserror::Error;

/// Errors raised while parsing group specifications or acting on normal forms.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("malformed group specification `{0}`")]
    Malformed(String),
    #[error("period {0} is smaller than 2")]
    PeriodTooSmall(u32),
    #[error("a star-polygon group needs at least two periods, got {0}")]
    TooFewPeriods(usize),
    #[error("generator index {index} is out of range for a group with {count} generators")]
    GeneratorOutOfRange { index: usize, count: usize },
    #[error("facet index {index} is out of range for a group with {count} facets")]
    FacetOutOfRange { index: usize, count: usize },
    #[error("one-sided graphs are only defined for star-polygon groups")]
    NotStarPolygon,
    #[error("normal form is not valid for {0}")]
    InvalidNormalForm(String),
}
