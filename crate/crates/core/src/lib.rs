//! Multiple orthogonal polynomials, generalized Bessel functions
//! `0F_r(-; a_1+1, ..., a_r+1; z)` and their hard-edge scaling limits,
//! in exact rational or extended-precision arithmetic.

pub mod config;
pub mod cyclotomic;
pub mod error;
pub mod families;
pub mod gen_bessel;
pub mod harness;
pub mod hypergeom;
pub mod linsolve;
pub mod moments;
pub mod poly;
pub mod precision;
pub mod quadrature;
pub mod roots;
pub mod verify;

pub use error::{Error, Result};
pub use poly::{BigPoly, MultiIndex};
pub use precision::{Param, PrecisionContext, Scalar};
