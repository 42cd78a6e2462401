//! Exact arithmetic substrate: big integers, reduced rationals and
//! univariate / bivariate polynomials with exact coefficients.
//!
//! Polynomials are generic over any [`Coefficient`]; the crate root fixes the
//! concrete aliases used by the rest of the pipeline.

mod bipoly;
mod divisors;
mod poly;
mod rational;

pub use bipoly::Bivariate;
pub use divisors::{
    divisor_count, divisors, divisors_from, factorize, lcm_factorization, smallest_coprime_above_one,
};
pub use poly::Polynomial;
pub use rational::{format_rational, gcd_ext, parse_rational, poly_eval, product_gcd};

use num_traits::Num;
use std::ops::Neg;

/// Ring elements usable as polynomial coefficients.
pub trait Coefficient: Num + Clone + Neg<Output = Self> {}

impl<T: Num + Clone + Neg<Output = T>> Coefficient for T {}
