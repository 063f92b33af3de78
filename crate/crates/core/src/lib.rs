//! Exact simulation and orbit analysis for a point mass bouncing under
//! gravity inside a tilted right-angle wedge.
//!
//! The motion separates into two independent one-dimensional bouncers along
//! the walls, which makes the system integrable. The crate provides the
//! event-driven simulator, an independent decoupled simulator, the
//! rotating-frame collision maps and their fixed points, and the
//! construction and classification of periodic orbits.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod frames;
pub mod geometry;
pub mod maps;
pub mod orbits;
pub mod vec2;

pub use dynamics::{
    decoupled_simulate, simulate, CartesianState, CollisionEvent, Termination, Trajectory,
};
pub use geometry::{Wall, WedgeAngle};
pub use maps::{apply_map, MapId, MapState, Orientation};
pub use orbits::{OrbitClass, OrbitSpec};
pub use vec2::Vec2;
