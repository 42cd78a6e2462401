//! Smith normal form: rank and elementary divisor chains of integer matrices.
//!
//! The elimination works over any signed Euclidean integer type; the pipeline
//! instantiates it with `BigInt`, tests also run it on `i64`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Rank together with the elementary divisors `e_1 | e_2 | ... | e_rank`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DivisorChain {
    #[serde(with = "crate::json::big_ints")]
    divisors: Vec<BigInt>,
}

impl DivisorChain {
    pub fn empty() -> Self {
        Self {
            divisors: Vec::new(),
        }
    }

    /// Wraps an already-normalized chain. Entries must be positive and each
    /// must divide the next.
    pub fn new(divisors: Vec<BigInt>) -> Result<Self> {
        if divisors.iter().any(|d| !d.is_positive()) {
            return Err(Error::Consistency(format!(
                "elementary divisors must be positive: {divisors:?}"
            )));
        }
        if divisors.windows(2).any(|w| !(&w[1] % &w[0]).is_zero()) {
            return Err(Error::Consistency(format!(
                "elementary divisors do not form a divisibility chain: {divisors:?}"
            )));
        }
        Ok(Self { divisors })
    }

    pub fn rank(&self) -> usize {
        self.divisors.len()
    }

    pub fn divisors(&self) -> &[BigInt] {
        &self.divisors
    }

    /// Last elementary divisor; `None` for rank 0.
    pub fn last(&self) -> Option<&BigInt> {
        self.divisors.last()
    }

    pub fn first(&self) -> Option<&BigInt> {
        self.divisors.first()
    }

    /// `e_1 ⋯ e_j`.
    pub fn prefix_product(&self, j: usize) -> BigInt {
        self.divisors[..j].iter().product()
    }
}

/// Elementary divisors of a dense row-major matrix.
///
/// Pivots on the entry of least absolute value, clears its row and column by
/// Euclidean reduction, and folds a non-divisible row into the pivot row until
/// the pivot divides the remaining block.
pub fn smith_divisors_of<T>(rows: &[Vec<T>]) -> Vec<T>
where
    T: Integer + Signed + Clone,
{
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<T>> = rows.to_vec();
    let mut out = Vec::new();

    for t in 0..nrows.min(ncols) {
        loop {
            let Some((pi, pj)) = min_abs_entry(&a, t) else {
                return out;
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }

            let pivot = a[t][t].clone();
            let mut dirty = false;
            for i in t + 1..nrows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].clone() / pivot.clone();
                for j in t..ncols {
                    let v = a[t][j].clone() * q.clone();
                    a[i][j] = a[i][j].clone() - v;
                }
                dirty |= !a[i][t].is_zero();
            }
            for j in t + 1..ncols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].clone() / pivot.clone();
                for row in a.iter_mut().skip(t) {
                    let v = row[t].clone() * q.clone();
                    row[j] = row[j].clone() - v;
                }
                dirty |= !a[t][j].is_zero();
            }
            if dirty {
                continue;
            }

            // Row and column are clear; enforce pivot | rest of the block.
            let offender = (t + 1..nrows)
                .find(|&i| (t + 1..ncols).any(|j| !(a[i][j].clone() % pivot.clone()).is_zero()));
            match offender {
                Some(i) => {
                    for j in t..ncols {
                        let v = a[i][j].clone();
                        a[t][j] = a[t][j].clone() + v;
                    }
                }
                None => break,
            }
        }
        out.push(a[t][t].abs());
    }
    out
}

fn min_abs_entry<T: Integer + Signed + Clone>(a: &[Vec<T>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, T)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, v) in row.iter().enumerate().skip(t) {
            if v.is_zero() {
                continue;
            }
            let m = v.abs();
            if best.as_ref().is_none_or(|(_, _, b)| m < *b) {
                let unit = m.is_one();
                best = Some((i, j, m));
                if unit {
                    return best.map(|(i, j, _)| (i, j));
                }
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// Smith divisors of a `BigInt` matrix, as a checked chain.
pub fn smith_divisors(rows: &[Vec<BigInt>]) -> DivisorChain {
    DivisorChain {
        divisors: smith_divisors_of(rows),
    }
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn determinant(rows: &[Vec<BigInt>]) -> BigInt {
    let n = rows.len();
    let mut a = rows.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// gcd of the absolute values of all `j × j` minors (0 if they all vanish).
///
/// Exponential in the matrix size; this is the independent reference for
/// `e_1 ⋯ e_j`, not a production path.
pub fn minor_gcd(rows: &[Vec<BigInt>], j: usize) -> Result<BigInt> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if j == 0 || j > nrows.min(ncols) {
        return Err(Error::OutOfRange(format!(
            "minor size {j} must lie in 1..={}",
            nrows.min(ncols)
        )));
    }
    let mut g = BigInt::zero();
    for rsel in combinations(nrows, j) {
        for csel in combinations(ncols, j) {
            let minor: Vec<Vec<BigInt>> = rsel
                .iter()
                .map(|&r| csel.iter().map(|&c| rows[r][c].clone()).collect())
                .collect();
            g = g.gcd(&determinant(&minor));
            if g.is_one() {
                return Ok(g);
            }
        }
    }
    Ok(g)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}
