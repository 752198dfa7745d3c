use thiserror::Error;

use crate::plane::Point;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unsupported field degree m = {0}")]
    UnsupportedDegree(u32),
    #[error("invalid modulus {modulus:#x}: {reason}")]
    InvalidModulus { modulus: u32, reason: &'static str },
    #[error("bitmask {bits:#x} does not fit in {m} bits")]
    ElementOutOfRange { bits: u32, m: u32 },
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("{d} does not divide {m}")]
    NotADivisor { d: u32, m: u32 },
    #[error("{0}")]
    UnsupportedTower(&'static str),
    #[error("cannot parse field element {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("all-zero coordinate vector")]
    ZeroVector,
    #[error("degenerate input: {0}")]
    Degenerate(&'static str),

    #[error("invalid unital spec: {0}")]
    InvalidSpec(String),
    #[error("unsupported order q = {0}")]
    UnsupportedOrder(u32),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("point {0:?} is not on the unital")]
    NotOnUnital(Point),
}
