//! Super linear algebra over finite Grassmann algebras, theta functions with
//! nilpotent arguments, period-matrix bookkeeping for super curves, a
//! finite-rank super Grassmannian with tau functions, and the genus-one
//! super tau function.

pub mod error;
pub mod grassmann;

pub use error::{Error, Result};
pub use grassmann::{GrassmannScalar, Parity, RealStructure};
pub mod expansion;
pub mod linalg;
pub mod matrix;
pub mod random;
pub mod supermatrix;
pub mod theta;
pub mod jacobian;
pub mod sgr;
pub mod elliptic;
pub mod config;
pub mod acceptance;
