//! Exact-arithmetic toolkit for boundary admissible weights of untwisted
//! affine Lie algebras.
//!
//! The crate enumerates the index set `Sigma_u` of boundary admissible
//! weights as alcove data in the extended affine Weyl group, realizes the
//! weights themselves, counts the Levi-restricted classes, and assembles the
//! associated modular `S`/`T` matrices in both the Kac-Wakimoto and the
//! specialized double-affine-Hecke normalizations.
//!
//! All combinatorial layers (root data, Weyl elements, enumeration,
//! quotient arithmetic) work over exact rationals; floating point enters
//! only when complex matrix entries are finally assembled from exact phase
//! exponents and one real sine product.
//!
//! The hot enumeration and matrix kernels are data-parallel via rayon when
//! the `parallel` feature (default) is enabled; disabling it yields a fully
//! sequential build with identical output.

pub mod admissible;
pub mod affine;
mod exec;
pub mod modular;
pub mod oracle;
pub mod report;
pub mod rootdata;
pub mod snf;
pub mod spaltenstein;
pub mod verify;
pub mod weyl;

use thiserror::Error;

/// Exact scalar used throughout: rationals with 64-bit components.
pub type Q = num::rational::Ratio<i64>;

/// Shorthand for an exact integer-valued rational.
pub fn q(n: i64) -> Q {
    Q::from_integer(n)
}

/// Shorthand for `n/d`.
pub fn qr(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid rank {rank} for family {family}")]
    InvalidRank { family: char, rank: usize },
    #[error("levi subset index {index} out of range or repeated (rank {rank})")]
    BadLeviIndex { index: usize, rank: usize },
    #[error("unknown levi fixture `{0}` for this root system")]
    UnknownFixture(String),
    #[error("u = {u} rejected: gcd(u, {what}) = {gcd} != 1")]
    LevelGcd { u: i64, what: String, gcd: i64 },
    #[error("root system mismatch between operands")]
    RootSystemMismatch,
    #[error("brute-force gate exceeded: {0}")]
    GateExceeded(String),
    #[error("integrality violated in {context}: got {value}")]
    NotIntegral { context: String, value: String },
    #[error("vanishing denominator factor in mu at affine coroot {0}")]
    MuDenominatorVanishes(String),
    #[error("{0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
