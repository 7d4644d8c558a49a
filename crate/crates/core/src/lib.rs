//! Poincaré polynomials of moduli of one-dimensional sheaves on `P¹ × P¹`
//! computed by wall-crossing through moduli of pairs.

pub mod assembly;
pub mod chase;
pub mod cohom;
pub mod error;
pub mod golden;
pub mod hilb;
pub mod linalg;
pub mod pairs;
pub mod poly;
pub mod registry;

pub use error::{Error, Result};
pub use golden::Golden;
pub use poly::PoincarePolynomial;
pub use registry::Registry;
