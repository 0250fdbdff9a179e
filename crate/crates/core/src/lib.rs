//! Closed critical curves of the square-root curvature functional on the unit
//! sphere: elliptic kernel, period map, closure solver and curve geometry.

pub mod elliptic;
pub mod error;
pub mod geometry;
pub mod ode;
pub mod period;
pub mod planar;
pub mod profile;
pub mod quad;
pub mod roots;
pub mod solve;

pub use error::{Error, Result};
