//! Exact combinatorics for twist-map fibrations.
//!
//! The crate is organised bottom-up:
//!
//! - [`wps`]: weighted projective spaces and Fermat hypersurfaces (reduction
//!   chains, Calabi-Yau test, point counts, genera, Euler numbers).
//! - [`twist`]: image weights and degree of the twist map, generic fiber.
//! - [`singloc`]: coordinate strata, their intersections with a Fermat
//!   hypersurface and the local cyclic quotient types.
//! - [`toric`]: junior simplex lattice points and unimodular triangulations.
//! - [`fiber`]: fiber catalogs, censuses, monodromy orders, Euler budgets and
//!   assembly of star fibers from the toric data.
//! - [`tables`]: reference tables and case fixtures, with reproduction reports.
//!
//! All arithmetic is exact (machine integers and rationals).

pub mod error;
pub mod fiber;
pub mod singloc;
pub mod tables;
pub mod toric;
pub mod twist;
pub mod wps;

pub use error::{Error, Result};

/// Version tag written into every JSON document.
pub const SCHEMA: &str = "fibertwist/1";
