//! Numerics for the Askey-Wilson algebra as a coideal subalgebra of
//! quantum affine sl(2), the reflection equation, and the open ASEP.
//!
//! Every identity in this crate is checked as a matrix residual in double
//! precision. Residuals are relative Frobenius norms unless stated otherwise.

pub mod asep;
pub mod awalgebra;
pub mod error;
pub mod lattice;
pub mod linalg;
pub mod oracle;
pub mod qspecial;
pub mod quantumrep;

pub use error::{Error, Result};
pub use linalg::{CMat, C64};
