//! Brute-force weight distributions by enumerating every `u ∈ Z_q^k`.
//!
//! This module only looks at the matrix entries and `q`; it shares no
//! formulas with the quasi-polynomial pipeline.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;

use crate::minweight::MinWeight;
use crate::profile::IntegerMatrix;
use crate::quasi::WeightDistribution;
use crate::{Error, Result};

/// Default cap on `q^k`.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub distribution: WeightDistribution,
    /// Number of `u` with `uG ≡ 0 (mod q)`.
    pub kernel_size: BigInt,
}

impl OracleResult {
    pub fn q(&self) -> &BigInt {
        &self.distribution.q
    }

    pub fn min_weight(&self) -> MinWeight {
        self.distribution.min_weight()
    }
}

pub fn oracle_min_weight(result: &OracleResult) -> MinWeight {
    result.min_weight()
}

pub fn enumerate(g: &IntegerMatrix, q: &BigInt) -> Result<OracleResult> {
    enumerate_with(g, q, DEFAULT_BUDGET)
}

/// Tallies `wt(uG mod q)` over all of `Z_q^k`, then divides by the kernel
/// tally to obtain codeword counts.
pub fn enumerate_with(g: &IntegerMatrix, q: &BigInt, budget: u64) -> Result<OracleResult> {
    let (k, n) = (g.k(), g.n());
    let over = || Error::Budget(format!("q^k = {q}^{k} exceeds the oracle budget of {budget}"));
    if !q.is_positive() {
        return Err(Error::OutOfRange(format!("q must be a positive integer, got {q}")));
    }
    let qq = q.to_u64().ok_or_else(over)?;
    let total = (0..k)
        .try_fold(1u64, |acc, _| acc.checked_mul(qq))
        .filter(|&t| t <= budget)
        .ok_or_else(over)?;

    let qb = BigInt::from(qq);
    let rows: Vec<Vec<u64>> = g
        .rows()
        .iter()
        .map(|r| r.iter().map(|e| e.mod_floor(&qb).to_u64().unwrap()).collect())
        .collect();

    let chunks = total.min(1024);
    let per = total.div_ceil(chunks);
    let tally = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * per;
            let end = ((c + 1) * per).min(total);
            tally_range(&rows, qq, n, start, end)
        })
        .reduce(
            || vec![0u64; n + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );

    if tally.iter().sum::<u64>() != total {
        return Err(Error::Consistency("oracle tally does not cover Z_q^k".into()));
    }
    let kernel = tally[0];
    let mut counts = Vec::with_capacity(n + 1);
    for (i, &t) in tally.iter().enumerate() {
        if t % kernel != 0 {
            return Err(Error::Consistency(format!(
                "weight-{i} tally {t} is not a multiple of the kernel size {kernel}"
            )));
        }
        counts.push(BigInt::from(t / kernel));
    }
    Ok(OracleResult {
        distribution: WeightDistribution {
            q: q.clone(),
            counts,
        },
        kernel_size: BigInt::from(kernel),
    })
}

/// Odometer over the mixed-radix indices `start..end`; digit `j` is the
/// coefficient of row `j`.
fn tally_range(rows: &[Vec<u64>], q: u64, n: usize, start: u64, end: u64) -> Vec<u64> {
    let k = rows.len();
    let mut tally = vec![0u64; n + 1];
    if start >= end {
        return tally;
    }
    let mut digits = vec![0u64; k];
    let mut rest = start;
    for d in digits.iter_mut() {
        *d = rest % q;
        rest /= q;
    }
    let mut sums = vec![0u64; n];
    for (d, row) in digits.iter().zip(rows) {
        for (s, &e) in sums.iter_mut().zip(row) {
            *s = (*s + d * e) % q;
        }
    }

    for _ in start..end {
        tally[sums.iter().filter(|&&s| s != 0).count()] += 1;
        for j in 0..k {
            for (s, &e) in sums.iter_mut().zip(&rows[j]) {
                *s += e;
                if *s >= q {
                    *s -= q;
                }
            }
            digits[j] += 1;
            if digits[j] < q {
                break;
            }
            digits[j] = 0;
        }
    }
    tally
}
