use thiserror::Error;

use crate::geometry::Point2;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("geometry: invalid workspace: {0}")]
    InvalidWorkspace(String),
    #[error("geometry: point ({}, {}) is not in free space", .0.x, .0.y)]
    NotInFreeSpace(Point2),
    #[error("medial axis: free space has no interior at grid resolution {0}")]
    EmptyFreeSpace(f64),
    #[error("capacity: one circle center lies inside the other (D = {d}, radii {ra} and {rb})")]
    CenterContained { d: f64, ra: f64, rb: f64 },
    #[error("conversion: precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("planner: invalid swap graph: {}", .0.join("; "))]
    InvalidGraph(Vec<String>),
    #[error("planner: illegal operation: {0}")]
    IllegalOp(String),
    #[error("planner: start and goal occupancies hold different agents")]
    AssignmentMismatch,
    #[error("assignment: {starts} positions but only {slots} slots")]
    TooFewSlots { starts: usize, slots: usize },
    #[error("trajectory: cannot realize operation: {0}")]
    UnrealizableOp(String),
    #[error("convert: insufficient capacity: {agents} agents need {needed} vertices, graph has {available}")]
    InsufficientCapacity { agents: usize, needed: usize, available: usize },
    #[error("assign: {0}")]
    AssignmentFailure(String),
    #[error("navigate: {0}")]
    NavigationFailure(String),
    #[error("verify: {0}")]
    VerificationFailure(String),
    #[error("scenario: {0}")]
    InvalidScenario(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("io: json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: csv: {0}")]
    Csv(#[from] csv::Error),
}
