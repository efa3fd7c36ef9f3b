use thiserror::Error;

/// Errors raised while constructing fields, moduli, families and artifacts.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("extension degree {0} out of range (1..=16)")]
    DegreeOutOfRange(u32),

    #[error("modulus {modulus:#x} is not an irreducible polynomial of degree {n} over GF(2)")]
    InvalidModulus { n: u32, modulus: u32 },

    #[error("value {bits:#x} is not an element of GF(2^{n})")]
    NotInField { n: u32, bits: u32 },

    #[error("zero has no multiplicative inverse")]
    ZeroInverse,

    #[error("x^2 + {a}x + {b} is reducible over GF(q)")]
    Reducible { a: u32, b: u32 },

    #[error("x^2 + {a}x + {b} is not primitive over GF(q)")]
    NotPrimitive { a: u32, b: u32 },

    #[error("Mobius map does not preserve the quadratic place (N(u) is not proportional to p(u))")]
    PlaceNotFixed,

    #[error("place orbit is not a bijection onto the projective line: {0}")]
    OrbitNotBijective(String),

    #[error("equivalence class partition failed: {0}")]
    PartitionFailure(String),

    #[error("delay {t} out of range for length {len}")]
    DelayOutOfRange { t: usize, len: usize },

    #[error("sequence length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("invalid LFSR: {0}")]
    InvalidLfsr(String),

    #[error("Gold baseline requires odd n >= 3 (got {0})")]
    GoldDegree(u32),

    #[error("malformed family artifact: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
