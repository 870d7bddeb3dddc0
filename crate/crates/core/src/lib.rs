//! Exact computations on moduli spaces of polygons in ℝ³.
//!
//! Given a side-length vector `r`, the crate identifies the chamber of `r`
//! in the hypersimplex, computes the Duistermaat-Heckman volume polynomial
//! of the polygon space `M(r)`, and derives Betti numbers and a presentation
//! `ℚ[x_1..x_n] / Ann(vol)` of its rational cohomology ring. An independent
//! wall-crossing recursion cross-checks the Betti numbers.

pub mod apolar;
pub mod chambers;
pub mod error;
pub mod ratpoly;
pub mod serial;
pub mod volume;
pub mod wallcross;

pub use error::{Error, Result};
