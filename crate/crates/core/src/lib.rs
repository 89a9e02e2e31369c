//! Convex bodies, Minkowski billiards and symplectic capacities of
//! Lagrangian products.

pub mod billiards;
pub mod bodies;
pub mod capacities;
pub mod error;
pub mod harness;
pub mod numeric;
pub mod rng;
pub mod volume;

pub use bodies::{ConvexBody, Vector};
pub use error::{Error, Result};
