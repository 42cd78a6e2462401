use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Error, Rational, Result, UniPoly};

/// `gcd(|a|, b)` with `gcd(0, b) = b`, `gcd(a, 0) = |a|` and `gcd(0, 0) = 0`.
pub fn gcd_ext(a: &BigInt, b: &BigInt) -> BigInt {
    debug_assert!(!b.is_negative(), "gcd_ext expects b >= 0");
    a.abs().gcd(&b.abs())
}

/// `∏ gcd(m, e)` over a divisor list; the empty product is 1.
pub fn product_gcd(m: &BigInt, divisors: &[BigInt]) -> BigInt {
    divisors
        .iter()
        .fold(BigInt::one(), |acc, e| acc * gcd_ext(e, m))
}

/// Exact Horner evaluation at an integer point.
pub fn poly_eval(p: &UniPoly, t: &BigInt) -> Rational {
    p.eval(&Rational::from_integer(t.clone()))
}

/// `"num/den"`, with the denominator omitted when it is 1.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::InvalidMatrix(format!("malformed rational {s:?}"));
    match s.split_once('/') {
        None => s.parse::<BigInt>().map(Rational::from_integer).map_err(|_| bad()),
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
    }
}
