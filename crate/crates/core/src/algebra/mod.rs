//! Exact arithmetic: rationals, parameter points, sparse polynomials and symmetric bases.

pub mod mpoly;
pub mod param;
pub mod rational;
pub mod symmetric;

pub use mpoly::{MPoly, Monomial};
pub use param::ParamPoint;
pub use rational::{format_rational, int, parse_rational, rat, Rational};
pub use symmetric::{elementary, from_monomial_basis, monomial_symmetric, to_monomial_basis};
