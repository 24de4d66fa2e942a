//! Motion planning for many identical disk agents in a polygonal workspace.
//!
//! Free space is covered by inscribed circles whose concentric agent rings
//! form the loops of a swap graph. Permutations of agents on that graph are
//! planned constructively and then realized as continuous motion.

pub mod assignment;
pub mod benchmark;
pub mod capacity;
pub mod conversion;
pub mod error;
pub mod fixtures;
pub mod geometry;
pub mod io;
pub mod medial_axis;
pub mod pipeline;
pub mod planner;
pub mod render;
pub mod scenario;
pub mod swap_graph;
pub mod trajectory;

pub use error::{Error, Result};
pub use geometry::{Capsule, Disk, Point2, Polygon, Rect, Workspace};
pub use planner::{Plan, SwapOp};
pub use swap_graph::{AgentId, Occupancy, SwapGraph, VertexId};
