//! Exceptional CMC-1 catenoids in de Sitter 3-space: surface evaluation,
//! analytic extensions, singular structure, projections and meshing.

// `!(x > y)` is used on purpose so NaN lands on the rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::manual_is_multiple_of)]

pub mod catenoid;
mod compensated;
pub mod diffgeo;
pub mod error;
pub mod export;
pub mod lorentz;
pub mod mesh;
pub mod projection;
pub mod singular;
pub mod trochoid;
pub mod verify;
pub mod zero_set;

pub use catenoid::{DomainPoint, Family, SurfaceSpec};
pub use error::{Error, Result};
pub use lorentz::{Mat2C, Point4, Signature};
