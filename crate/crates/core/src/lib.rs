//! Numerical verification engine for three-dimensional paracontact metric geometry.
//!
//! Closed-form structures are evaluated on order-3 Taylor jets, so
//! connection, curvature and the derived nullity functions come with exact
//! (to rounding) derivatives at every sample point.

pub mod chart;
pub mod cli;
pub mod error;
pub mod families;
pub mod expr;
pub mod jet;
pub mod nullity;
pub mod paracontact;
pub mod tensor;
pub mod verify;

pub use error::{Error, Result};
