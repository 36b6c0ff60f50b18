//! Multivariable Al-Salam & Carlitz polynomials, with the Macdonald, Hecke and Jackson-integral
//! machinery needed to construct and check them.

pub mod algebra;
pub mod asc;
pub mod bigfloat;
pub mod error;
pub mod hecke;
pub mod jackson;
pub mod kernels;
pub mod macdonald;
pub mod operators;
pub mod partition;
pub mod qseries;
pub mod report;
pub mod sampling;

pub use error::{Error, Result};
