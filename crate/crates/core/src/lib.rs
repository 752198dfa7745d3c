//! Unitals in PG(2,q^2) for even q, and the O'Nan configurations and Fano
//! planes they contain.

pub mod config;
pub mod discovery;
pub mod error;
pub mod gf;
pub mod plane;
pub mod reference;
pub mod unital;
pub mod worked;

pub use error::{Error, Result};
