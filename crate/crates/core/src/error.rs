use crate::geometry::RectId;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    Geometry(String),
    #[error("assignment references unknown id {0}")]
    DomainMismatch(RectId),
    #[error("assignment is missing id {0}")]
    MissingId(RectId),
    #[error("input density {density} exceeds the budget d = {d}")]
    InfeasibleInput { density: u32, d: u32 },
    #[error("input rectangles overlap (input density {0}); a disjoint instance is required")]
    NotDisjoint(u32),
    #[error("input density {density} must be at most d - 1 = {limit}")]
    DensityPrecondition { density: u32, limit: u32 },
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("instance too large: {n} objects exceeds the cap of {cap}")]
    SizeCap { n: usize, cap: usize },
    #[error("linear program solver failed: {0}")]
    Numerical(String),
    #[error("invalid formula: {0}")]
    Formula(String),
    #[error("invalid graph: {0}")]
    Graph(String),
    #[error("witness rejected: {0}")]
    Witness(String),
    #[error("reduction construction failed: {0}")]
    Construction(String),
    #[error("document error: {0}")]
    Document(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
