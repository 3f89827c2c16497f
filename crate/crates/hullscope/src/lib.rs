pub mod analytic;
pub mod error;
pub mod geometry;
pub mod manifest;
pub mod montecarlo;
pub mod pipeline;
pub mod point_set;
pub mod quadrature;
pub mod rng;
pub mod samplers;
pub mod special;

pub use error::{HullscopeError, Result};
pub use point_set::PointSet;
