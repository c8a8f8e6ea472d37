//! Exact-arithmetic tools for the pentagram map on twisted polygons.

pub mod condensation;
pub mod dynamics;
pub mod error;
pub mod invariants;
pub mod polyfile;
pub mod projective;
pub mod reconstruct;
pub mod report;
pub mod sample;
pub mod scalar;
pub mod svg;
pub mod vanishing;

pub use error::{Error, Result};
pub use scalar::Q;
