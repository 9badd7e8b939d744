//! Finite fields, primitive polynomials and word-oriented transformation
//! shift registers (TSRs) over them.

pub mod checks;
pub mod config;
pub mod conway;
pub mod enumeration;
pub mod error;
pub mod factor;
pub mod field;
pub mod matrix;
pub mod poly;
pub mod primitivity;
pub mod search;
pub mod tables;
pub mod text;
pub mod tsr;

pub use error::{Error, Result};
pub use field::{Fe, Field};
pub use matrix::Matrix;
pub use poly::{Degree, Poly};
