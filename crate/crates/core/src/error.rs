use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },

    #[error("variable context mismatch")]
    ContextMismatch,

    #[error("invalid variable context: {0}")]
    InvalidContext(String),

    #[error("the ideal is the unit ideal (empty variety)")]
    UnitIdeal,

    #[error("the ideal is not zero-dimensional (dimension {0})")]
    NotZeroDimensional(usize),

    #[error("point is not on the variety: generator {0} does not vanish")]
    PointNotOnVariety(String),

    #[error("point is not isolated in the variety")]
    NotIsolated,

    #[error("point has {got} coordinates, expected {expected}")]
    PointArity { expected: usize, got: usize },

    #[error("improper intersection: {hypersurface} lies in component {component}")]
    ImproperIntersection { component: String, hypersurface: String },

    #[error("improper slicing of component {0} at the point")]
    ImproperSlice(String),

    #[error("multiplicity of component {component} disagrees between seeds ({first} vs {second})")]
    MultiplicityMismatch { component: String, first: String, second: String },

    #[error("component {0} is not contained in the image of the differential")]
    NotInImage(String),

    #[error("dimension check failed: {0}")]
    Dimension(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("the function is constant near the point; the geometric pipeline does not apply")]
    ConstantFunction,

    #[error("stratification error: {0}")]
    Strat(String),

    #[error("problem file error: {0}")]
    Problem(String),

    #[error("computation exceeded its limit: {0}")]
    Limit(String),
}
