//! Finite, exact models of Čech 2-cocycles, the central groupoid extensions
//! they define, the associated twisted convolution algebras and their
//! representations, and the Dixmier–Douady class of those algebras.
//!
//! Everything is finite: spaces are finite sets, groups are finite abelian,
//! and Haar measures are counting measures, so every integral is a sum.

pub mod algebra;
pub mod cech;
pub mod cover;
pub mod dd;
pub mod error;
pub mod extension;
pub mod group;
pub mod groupoid;
pub mod io;
pub mod linalg;
pub mod models;
pub mod pipeline;
pub mod random;
pub mod reps;
pub mod scalar;
pub mod selftest;

pub use error::{Error, Result};
