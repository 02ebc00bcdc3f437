//! Exact tropical geometry over the rationals: tropical semirings and
//! valuations, polyhedral geometry, tropical hypersurfaces, stable
//! intersections, mixed volumes and generic root counts of horizontally
//! parametrised polynomial systems.

pub mod error;
pub mod hypersurface;
pub mod intersection;
pub mod io;
pub mod linalg;
pub mod lp;
pub mod polyhedra;
pub mod rational;
pub mod rootcount;
pub mod semiring;
pub mod valuation;

pub use error::{Error, Result};
