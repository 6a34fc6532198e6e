//! Quotient Finsler metrics on convex surfaces and Grassmannians.

pub mod bodies;
pub mod error;
pub mod finsler;
pub mod geodesy;
pub mod grassmann;
pub mod htvol;
pub mod lab;
pub mod numeric;

pub use bodies::{BodySpec, ConvexBody, Vector};
pub use error::{Error, Result};
