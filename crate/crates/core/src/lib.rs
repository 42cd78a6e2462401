//! Exact weight enumerators of linear codes over `Z_q`, for every `q` at once.
//!
//! A code is given by an integer generator matrix. Its weight distribution
//! over `Z_q` is a quasi-polynomial in `q` whose constituents depend only on
//! `gcd(q, ρ₀)`, where `ρ₀` is read off the Smith forms of the column
//! submatrices. The crate computes those constituents exactly, together with
//! minimum weights, Tutte quasi-polynomials and two infinite families.
//!
//! Arithmetic is exact throughout. The polynomial and Smith-form layers are
//! generic over the scalar; the aliases below fix the types the pipeline uses.

mod error;
pub mod json;

pub mod exact;
pub mod families;
pub mod minweight;
pub mod oracle;
pub mod profile;
pub mod quasi;
pub mod snf;
pub mod tutte;

pub use error::{Error, Result};
pub use profile::{build_profile, build_profile_with, DivisorProfile, IntegerMatrix, ProfileOptions};
pub use snf::DivisorChain;
pub use minweight::MinWeight;
pub use quasi::{QuasiPolynomial, WeightCensus, WeightDistribution, WeightQuasi, WeightSource};
pub use tutte::TutteQuasi;

pub use num_bigint::BigInt;

/// Reduced rational with arbitrary-precision numerator and denominator.
pub type Rational = num_rational::BigRational;
/// Univariate polynomial with rational coefficients.
pub type UniPoly = exact::Polynomial<Rational>;
/// Univariate polynomial with integer coefficients.
pub type IntPoly = exact::Polynomial<BigInt>;
/// Bivariate polynomial with rational coefficients.
pub type BiPoly = exact::Bivariate<Rational>;
