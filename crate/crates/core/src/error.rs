use crate::geometry::Point;

/// Failures reported by the numerical routines.
///
/// Every variant corresponds to a condition under which a computed value
/// would be meaningless; none of them is ever swallowed into a default.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("path passes through the center {center:?} (distance {distance:e})")]
    CenterOnPath { center: Point, distance: f64 },

    #[error("segment {index} subtends {turns} turns at the center; refine the path")]
    SegmentTooWide { index: usize, turns: f64 },

    #[error("refinement budget of {budget} subdivisions exceeded")]
    RefinementBudgetExceeded { budget: usize },

    #[error("invalid polyline: {0}")]
    InvalidPolyline(&'static str),

    #[error("the two points coincide: {0:?}")]
    DiagonalInput(Point),

    #[error("{point:?} is not fixed (|f(z) - z| = {residual:e})")]
    NotFixed { point: Point, residual: f64 },

    #[error("orbit of {point:?} is not numerically recurrent ({returns} returns in {iterations} iterations)")]
    NoRecurrence { point: Point, returns: usize, iterations: usize },

    #[error("disk is not free: {0}")]
    NotFree(String),

    #[error("orbit of {point:?} did not return to the disk within {max_iter} iterations")]
    NoReturn { point: Point, max_iter: usize },

    #[error("value {value} is not within {tol:e} of an integer")]
    NotInteger { value: f64, tol: f64 },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("Tourne is not constant on the far fixed points: {0:?}")]
    NotConstant(Vec<f64>),

    #[error("maps do not commute at {point:?} (defect {defect:e})")]
    NotCommuting { point: Point, defect: f64 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("integrand returned a non-finite value at {0:?}")]
    NonFiniteSample(Point),

    #[error("the isotopy has no inverse evaluator")]
    NoInverse,

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
