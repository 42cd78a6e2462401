//! The two matroid families `N_k` and `Z_k` and their closed-form invariants.
//!
//! `Ñ_k = (I_k | J_k - I_k)` and `Z̃_k = (Ñ_k | 1_k)`; both are also given in
//! an equivalent form obtained by a unimodular row operation and a signed
//! column permutation.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::{binomial, Integer};
use num_traits::{One, Pow, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exact::gcd_ext;
use crate::profile::{mat_mul, IntegerMatrix};
use crate::quasi::{QuasiPolynomial, WeightDistribution};
use crate::snf::determinant;
use crate::{Error, Rational, Result, UniPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilyTag {
    N,
    Z,
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyTag::N => "N",
            FamilyTag::Z => "Z",
        })
    }
}

impl FromStr for FamilyTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "n" | "N" => Ok(FamilyTag::N),
            "z" | "Z" => Ok(FamilyTag::Z),
            other => Err(Error::OutOfRange(format!("unknown family {other:?}, expected n or z"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilySpec {
    pub tag: FamilyTag,
    pub k: usize,
    pub generator: IntegerMatrix,
    /// `Q_k · G · P · D`, generating a code with the same weight enumerator.
    pub transformed: IntegerMatrix,
}

impl FamilyTag {
    /// Number of columns of the generator for rank `k`.
    pub fn columns(self, k: usize) -> usize {
        match self {
            FamilyTag::N => 2 * k,
            FamilyTag::Z => 2 * k + 1,
        }
    }
}

fn check_k(k: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::OutOfRange(format!("family rank k must be at least 2, got {k}")));
    }
    Ok(())
}

fn int_rows(rows: Vec<Vec<i64>>) -> Vec<Vec<BigInt>> {
    rows.into_iter()
        .map(|r| r.into_iter().map(BigInt::from).collect())
        .collect()
}

fn raw_rows(tag: FamilyTag, k: usize) -> Vec<Vec<i64>> {
    (0..k)
        .map(|i| {
            let mut row: Vec<i64> = (0..k).map(|j| i64::from(i == j)).collect();
            row.extend((0..k).map(|j| i64::from(i != j)));
            if tag == FamilyTag::Z {
                row.push(1);
            }
            row
        })
        .collect()
}

/// The block form `(I_{k-1} 1 I_{k-1} 1 [0]; 0 0 1 1 [1])`.
fn block_rows(tag: FamilyTag, k: usize) -> Vec<Vec<i64>> {
    (0..k)
        .map(|i| {
            let top = i + 1 < k;
            let mut row = Vec::with_capacity(tag.columns(k));
            for _ in 0..2 {
                if top {
                    row.extend((0..k - 1).map(|j| i64::from(i == j)));
                    row.push(1);
                } else {
                    row.extend(std::iter::repeat_n(0, k - 1));
                    row.push(0);
                }
            }
            if !top {
                let half = row.len() / 2;
                row[half..].iter_mut().for_each(|v| *v = 1);
            }
            if tag == FamilyTag::Z {
                row.push(i64::from(!top));
            }
            row
        })
        .collect()
}

fn row_transform(k: usize) -> Vec<Vec<i64>> {
    (0..k)
        .map(|i| {
            (0..k)
                .map(|j| match (i + 1 < k, j + 1 < k) {
                    (true, true) => i64::from(i == j),
                    (true, false) => -1,
                    (false, true) => 0,
                    (false, false) => -1,
                })
                .collect()
        })
        .collect()
}

/// Swap of columns `k` and `2k` (1-based) followed by negating every column
/// after the first `k`.
fn column_transform(tag: FamilyTag, k: usize) -> Vec<Vec<i64>> {
    let n = tag.columns(k);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.swap(k - 1, 2 * k - 1);
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if perm[j] != i {
                        0
                    } else if j < k {
                        1
                    } else {
                        -1
                    }
                })
                .collect()
        })
        .collect()
}

pub fn generator(tag: FamilyTag, k: usize) -> Result<FamilySpec> {
    check_k(k)?;
    let g = IntegerMatrix::from_i64(&raw_rows(tag, k))?;
    let left = int_rows(row_transform(k));
    let right = int_rows(column_transform(tag, k));
    for (name, m) in [("row", &left), ("column", &right)] {
        if determinant(m).abs() != BigInt::one() {
            return Err(Error::Consistency(format!("{name} transform is not unimodular")));
        }
    }
    let transformed = IntegerMatrix::new(mat_mul(&mat_mul(&left, g.rows()), &right))?;
    let expected = IntegerMatrix::from_i64(&block_rows(tag, k))?;
    if transformed != expected {
        return Err(Error::Consistency(format!(
            "transformed {tag}_{k} generator does not have the expected block form"
        )));
    }
    Ok(FamilySpec {
        tag,
        k,
        generator: g,
        transformed,
    })
}

/// `lcm(1, ..., k-1)`, the period of the family's characteristic
/// quasi-polynomial.
pub fn family_period(k: usize) -> BigInt {
    (1..k).fold(BigInt::one(), |acc, j| acc.lcm(&BigInt::from(j)))
}

fn exact_div(num: BigInt, q: &BigInt, what: &str) -> Result<BigInt> {
    let (quot, rem) = num.div_rem(q);
    if !rem.is_zero() {
        return Err(Error::Consistency(format!(
            "{what} is not divisible by q = {q}"
        )));
    }
    Ok(quot)
}

/// Closed formula for `χ(q)`:
/// `Z: ((q-1)(q-2)^k - (-2)^k(2q-1))/q + (-1)^k Σ_j C(k,j) gcd(j-1, q)`,
/// `N: ((q-1)^k + (-1)^k(q-1))/q + Z`.
pub fn char_quasi_closed(tag: FamilyTag, k: usize, q: &BigInt) -> Result<BigInt> {
    if k < 1 {
        return Err(Error::OutOfRange("k must be positive".into()));
    }
    if !q.is_positive() {
        return Err(Error::OutOfRange(format!("q must be a positive integer, got {q}")));
    }
    let ku = k as u32;
    let one = BigInt::one();
    let sign = if k.is_multiple_of(2) { one.clone() } else { -one.clone() };
    let q1 = q - &one;

    let head = &q1 * Pow::pow(q - BigInt::from(2), ku)
        - Pow::pow(BigInt::from(-2), ku) * (q * 2u32 - &one);
    let mut z = exact_div(head, q, "Z-family numerator")?;
    let mut tail = BigInt::zero();
    for j in 0..=k {
        tail += BigInt::from(binomial(k as u64, j as u64)) * gcd_ext(&BigInt::from(j as i64 - 1), q);
    }
    z += sign.clone() * tail;

    match tag {
        FamilyTag::Z => Ok(z),
        FamilyTag::N => {
            let num = Pow::pow(&q1, ku) + &sign * &q1;
            Ok(exact_div(num, q, "N-family numerator")? + z)
        }
    }
}

/// The closed formula as a quasi-polynomial of period `lcm(1, ..., k-1)`,
/// each constituent interpolated from `k + 1` values in its class and checked
/// on two more.
pub fn char_quasi_closed_poly(tag: FamilyTag, k: usize) -> Result<QuasiPolynomial> {
    check_k(k)?;
    let period = family_period(k);
    QuasiPolynomial::from_fn(period.clone(), |m| {
        let sample = |j: usize| -> Result<(Rational, Rational)> {
            let q = m + &period * BigInt::from(j);
            let v = char_quasi_closed(tag, k, &q)?;
            Ok((Rational::from_integer(q), Rational::from_integer(v)))
        };
        let pts = (0..=k).map(sample).collect::<Result<Vec<_>>>()?;
        let p = UniPoly::interpolate(&pts);
        for j in k + 1..k + 3 {
            let (x, y) = sample(j)?;
            if p.eval(&x) != y {
                return Err(Error::Consistency(format!(
                    "{tag}_{k}: class {m} closed form is not a polynomial of degree ≤ {k}"
                )));
            }
        }
        Ok(p)
    })
}

/// `true` iff `dist` has no forbidden weights: none of odd weight below `k`
/// (`N`) or at most `k` (`Z`), and none of weight 2 unless `k = 2`.
pub fn parity_obstruction(tag: FamilyTag, k: usize, dist: &WeightDistribution) -> bool {
    let odd_bound = match tag {
        FamilyTag::N => k.saturating_sub(1),
        FamilyTag::Z => k,
    };
    dist.counts.iter().enumerate().skip(1).all(|(i, a)| {
        let forbidden = (i % 2 == 1 && i <= odd_bound) || (i == 2 && k != 2);
        !forbidden || a.is_zero()
    })
}

/// Minimum weight of the family code for every `q ≥ 2`.
pub fn family_min_weight(tag: FamilyTag, k: usize) -> Result<usize> {
    check_k(k)?;
    Ok(match (tag, k < 4) {
        (FamilyTag::N, true) => k,
        (FamilyTag::Z, true) => k + 1,
        (_, false) => 4,
    })
}

/// One row of a closed-form tabulation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedFormRow {
    #[serde(with = "crate::json::big_int")]
    pub q: BigInt,
    #[serde(with = "crate::json::big_int")]
    pub class: BigInt,
    #[serde(with = "crate::json::big_int")]
    pub chi: BigInt,
}

pub fn tabulate(tag: FamilyTag, k: usize, from: &BigInt, to: &BigInt) -> Result<Vec<ClosedFormRow>> {
    check_k(k)?;
    let period = family_period(k);
    let mut out = Vec::new();
    let mut q = from.clone();
    while &q <= to {
        out.push(ClosedFormRow {
            class: q.gcd(&period),
            chi: char_quasi_closed(tag, k, &q)?,
            q: q.clone(),
        });
        q += 1u32;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn small_generators() {
        let s = generator(FamilyTag::N, 2).unwrap();
        assert_eq!(s.generator, IntegerMatrix::from_i64(&[vec![1, 0, 0, 1], vec![0, 1, 1, 0]]).unwrap());
        let s = generator(FamilyTag::Z, 3).unwrap();
        assert_eq!(s.generator.n(), 7);
        assert!(generator(FamilyTag::N, 1).is_err());
        for k in 2..=7 {
            generator(FamilyTag::N, k).unwrap();
            generator(FamilyTag::Z, k).unwrap();
        }
    }

    #[test]
    fn closed_form_values() {
        assert_eq!(char_quasi_closed(FamilyTag::Z, 3, &big(3)).unwrap(), big(0));
        for k in 1..6 {
            assert_eq!(char_quasi_closed(FamilyTag::N, k, &big(1)).unwrap(), big(0));
            assert_eq!(char_quasi_closed(FamilyTag::Z, k, &big(1)).unwrap(), big(0));
        }
        // q = 13 is coprime to 12
        let q = big(13);
        let expect: BigInt = Pow::pow(&q, 5u32) - 11 * Pow::pow(&q, 4u32) + 50 * Pow::pow(&q, 3u32)
            - 120 * &q * &q
            + 155 * &q
            - 75;
        assert_eq!(char_quasi_closed(FamilyTag::Z, 5, &q).unwrap(), expect);
    }

    #[test]
    fn periods() {
        assert_eq!(family_period(2), big(1));
        assert_eq!(family_period(4), big(6));
        assert_eq!(family_period(6), big(60));
    }

    #[test]
    fn min_weight_table() {
        assert_eq!(family_min_weight(FamilyTag::N, 3).unwrap(), 3);
        assert_eq!(family_min_weight(FamilyTag::Z, 3).unwrap(), 4);
        assert_eq!(family_min_weight(FamilyTag::N, 5).unwrap(), 4);
        assert_eq!(family_min_weight(FamilyTag::Z, 2).unwrap(), 3);
    }

    #[test]
    fn parity_rules() {
        let dist = |c: &[i64]| WeightDistribution {
            q: big(2),
            counts: c.iter().map(|&v| big(v)).collect(),
        };
        assert!(parity_obstruction(FamilyTag::N, 2, &dist(&[1, 0, 2, 0, 1])));
        assert!(!parity_obstruction(FamilyTag::N, 3, &dist(&[1, 0, 1, 0, 0, 0, 0])));
        assert!(!parity_obstruction(FamilyTag::Z, 3, &dist(&[1, 0, 0, 1, 0, 0, 0, 0])));
        assert!(parity_obstruction(FamilyTag::N, 3, &dist(&[1, 0, 0, 1, 0, 0, 0])));
    }
}
