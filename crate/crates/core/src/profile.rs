//! Generator matrices and their per-subset divisor tables.
//!
//! Column subsets `J ⊆ E` are bitmasks: column `j` (1-based in user-facing
//! output) is bit `j - 1`.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::exact::{divisor_count, divisors_from, lcm_factorization, product_gcd};
use crate::snf::{smith_divisors, DivisorChain};
use crate::{Error, Result};

/// Default cap on the number of columns accepted by [`build_profile`].
pub const DEFAULT_MAX_N: usize = 22;

/// Hard ceiling; beyond this the subset table itself is prohibitive.
pub const HARD_MAX_N: usize = 30;

/// A `k × n` integer generator matrix without zero columns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct IntegerMatrix {
    rows: Vec<Vec<BigInt>>,
}

/// JSON form: a bare array of rows.
#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct MatrixRepr(#[serde(with = "crate::json::big_int_rows")] Vec<Vec<BigInt>>);

impl TryFrom<MatrixRepr> for IntegerMatrix {
    type Error = Error;
    fn try_from(r: MatrixRepr) -> Result<Self> {
        Self::new(r.0)
    }
}

impl From<IntegerMatrix> for MatrixRepr {
    fn from(m: IntegerMatrix) -> Self {
        MatrixRepr(m.rows)
    }
}

impl IntegerMatrix {
    pub fn new(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let k = rows.len();
        if k == 0 {
            return Err(Error::InvalidMatrix("matrix has no rows".into()));
        }
        let n = rows[0].len();
        if n == 0 {
            return Err(Error::InvalidMatrix("matrix has no columns".into()));
        }
        if let Some(i) = rows.iter().position(|r| r.len() != n) {
            return Err(Error::InvalidMatrix(format!(
                "row {} has {} entries, expected {n}",
                i + 1,
                rows[i].len()
            )));
        }
        if let Some(j) = (0..n).find(|&j| rows.iter().all(|r| r[j].is_zero())) {
            return Err(Error::ZeroColumn { column: j + 1 });
        }
        Ok(Self { rows })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
                .collect(),
        )
    }

    /// Reads the text format: an optional `k n` header line, then `k` lines
    /// of `n` whitespace-separated integers. Blank lines and lines starting
    /// with `#` are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<BigInt>().map_err(|_| {
                        Error::InvalidMatrix(format!("line {}: bad integer {tok:?}", lineno + 1))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            lines.push(row);
        }
        if lines.is_empty() {
            return Err(Error::InvalidMatrix("no matrix rows found".into()));
        }
        if let Some((k, n)) = header_dims(&lines) {
            lines.remove(0);
            if lines.len() != k {
                return Err(Error::InvalidMatrix(format!(
                    "header announces {k} rows, found {}",
                    lines.len()
                )));
            }
            if let Some(i) = lines.iter().position(|r| r.len() != n) {
                return Err(Error::InvalidMatrix(format!(
                    "row {} has {} entries, header announces {n}",
                    i + 1,
                    lines[i].len()
                )));
            }
        }
        Self::new(lines)
    }

    /// Renders in the text format, header included.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.k(), self.n());
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn k(&self) -> usize {
        self.rows.len()
    }

    pub fn n(&self) -> usize {
        self.rows[0].len()
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.rows[i][j]
    }

    /// `G_J`: the columns selected by `mask`, in increasing order.
    pub fn columns(&self, mask: u64) -> Vec<Vec<BigInt>> {
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(j, _)| mask >> j & 1 == 1)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect()
    }

    /// `M · self · N` for integer matrices of compatible shapes.
    pub fn transform(&self, left: &[Vec<BigInt>], right: &[Vec<BigInt>]) -> Result<Self> {
        let lg = mat_mul(left, &self.rows);
        Self::new(mat_mul(&lg, right))
    }
}

/// The header is taken as such only when the remaining lines match it.
fn header_dims(lines: &[Vec<BigInt>]) -> Option<(usize, usize)> {
    let first = &lines[0];
    if first.len() != 2 {
        return None;
    }
    let k = usize::try_from(&first[0]).ok()?;
    let n = usize::try_from(&first[1]).ok()?;
    let rest = &lines[1..];
    (k >= 1 && n >= 1 && rest.len() == k && rest.iter().all(|r| r.len() == n)).then_some((k, n))
}

pub(crate) fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            debug_assert_eq!(row.len(), inner);
            (0..cols)
                .map(|j| (0..inner).map(|l| &row[l] * &b[l][j]).sum())
                .collect()
        })
        .collect()
}

impl TryFrom<Vec<Vec<BigInt>>> for IntegerMatrix {
    type Error = Error;
    fn try_from(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        Self::new(rows)
    }
}

impl From<IntegerMatrix> for Vec<Vec<BigInt>> {
    fn from(m: IntegerMatrix) -> Self {
        m.rows
    }
}

impl fmt::Display for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:>3}")).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ProfileOptions {
    pub max_n: usize,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        Self {
            max_n: DEFAULT_MAX_N,
        }
    }
}

/// Number of subsets `K` sharing one divisor chain and one cardinality.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CensusEntry {
    pub chain: usize,
    pub size: usize,
    pub count: u64,
}

/// Rank and elementary divisors of `G_J` for every column subset `J`.
///
/// Chains are interned: the table stores an index per subset into the list
/// of distinct chains.
#[derive(Clone, Debug)]
pub struct DivisorProfile {
    matrix: IntegerMatrix,
    chains: Vec<DivisorChain>,
    chain_of: Vec<u32>,
    rho0: BigInt,
    rho0_factors: Vec<(BigInt, u32)>,
}

pub fn build_profile(matrix: &IntegerMatrix) -> Result<DivisorProfile> {
    build_profile_with(matrix, ProfileOptions::default())
}

pub fn build_profile_with(matrix: &IntegerMatrix, opts: ProfileOptions) -> Result<DivisorProfile> {
    let n = matrix.n();
    let cap = opts.max_n.min(HARD_MAX_N);
    if n > cap {
        return Err(Error::TooManyColumns { n, max: cap });
    }
    let total: u64 = 1 << n;
    const CHUNK: u64 = 1 << 10;

    let partials: Vec<(Vec<DivisorChain>, Vec<u32>)> = (0..total.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut local: HashMap<DivisorChain, u32> = HashMap::new();
            let mut distinct = Vec::new();
            let ids = (c * CHUNK..((c + 1) * CHUNK).min(total))
                .map(|mask| {
                    let chain = smith_divisors(&matrix.columns(mask));
                    *local.entry(chain).or_insert_with_key(|ch| {
                        distinct.push(ch.clone());
                        (distinct.len() - 1) as u32
                    })
                })
                .collect();
            (distinct, ids)
        })
        .collect();

    let mut index: HashMap<DivisorChain, u32> = HashMap::new();
    let mut chains: Vec<DivisorChain> = Vec::new();
    let mut chain_of = Vec::with_capacity(total as usize);
    for (distinct, ids) in partials {
        let remap: Vec<u32> = distinct
            .into_iter()
            .map(|ch| {
                *index.entry(ch).or_insert_with_key(|ch| {
                    chains.push(ch.clone());
                    (chains.len() - 1) as u32
                })
            })
            .collect();
        chain_of.extend(ids.into_iter().map(|i| remap[i as usize]));
    }

    let rho0 = chains
        .iter()
        .filter_map(DivisorChain::last)
        .fold(BigInt::one(), |acc, e| acc.lcm(e));

    let rho0_factors = lcm_factorization(chains.iter().filter_map(DivisorChain::last));

    let profile = DivisorProfile {
        matrix: matrix.clone(),
        chains,
        chain_of,
        rho0,
        rho0_factors,
    };
    if profile.rank(0) != 0 {
        return Err(Error::Consistency("empty subset has nonzero rank".into()));
    }
    Ok(profile)
}

impl DivisorProfile {
    pub fn matrix(&self) -> &IntegerMatrix {
        &self.matrix
    }

    pub fn k(&self) -> usize {
        self.matrix.k()
    }

    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    /// Bitmask of the full ground set `E`.
    pub fn full_mask(&self) -> u64 {
        (1u64 << self.n()) - 1
    }

    pub fn chain(&self, mask: u64) -> &DivisorChain {
        &self.chains[self.chain_of[mask as usize] as usize]
    }

    pub fn chain_index(&self, mask: u64) -> usize {
        self.chain_of[mask as usize] as usize
    }

    pub fn distinct_chains(&self) -> &[DivisorChain] {
        &self.chains
    }

    pub fn rank(&self, mask: u64) -> usize {
        self.chain(mask).rank()
    }

    pub fn full_chain(&self) -> &DivisorChain {
        self.chain(self.full_mask())
    }

    pub fn full_rank(&self) -> usize {
        self.full_chain().rank()
    }

    /// lcm of the last elementary divisors over nonempty subsets.
    pub fn rho0(&self) -> &BigInt {
        &self.rho0
    }

    pub fn rho0_factors(&self) -> &[(BigInt, u32)] {
        &self.rho0_factors
    }

    /// Number of divisor classes `m | ρ₀`.
    pub fn class_count(&self) -> BigInt {
        divisor_count(&self.rho0_factors)
    }

    /// The divisors of `ρ₀` in increasing order, refusing to enumerate more
    /// than `max_classes` of them.
    pub fn classes(&self, max_classes: usize) -> Result<Vec<BigInt>> {
        let count = self.class_count();
        if count > BigInt::from(max_classes) {
            return Err(Error::Budget(format!(
                "rho0 = {} has {count} divisor classes, above the cap of {max_classes}",
                self.rho0
            )));
        }
        Ok(divisors_from(&self.rho0_factors))
    }

    /// `|H_J(q)| = (∏ gcd(q, e_{ℓ,J})) · q^(k - r(J))`.
    pub fn h_subgroup_size(&self, mask: u64, q: &BigInt) -> BigInt {
        let chain = self.chain(mask);
        product_gcd(q, chain.divisors()) * Pow::pow(q, (self.k() - chain.rank()) as u32)
    }

    /// `|Ker φ_{G,q}| = |H_E(q)|`.
    pub fn kernel_size(&self, q: &BigInt) -> BigInt {
        self.h_subgroup_size(self.full_mask(), q)
    }

    /// Multiplicities of `(chain, |K|)` pairs over all subsets `K`.
    pub fn census(&self) -> Vec<CensusEntry> {
        let mut counts: HashMap<(usize, usize), u64> = HashMap::new();
        for (mask, &c) in self.chain_of.iter().enumerate() {
            *counts
                .entry((c as usize, (mask as u64).count_ones() as usize))
                .or_default() += 1;
        }
        let mut out: Vec<CensusEntry> = counts
            .into_iter()
            .map(|((chain, size), count)| CensusEntry { chain, size, count })
            .collect();
        out.sort_by_key(|e| (e.size, e.chain));
        out
    }
}

/// Lcm period `ρ₀` of a built profile.
pub fn lcm_period(profile: &DivisorProfile) -> BigInt {
    profile.rho0().clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile(rows: &[Vec<i64>]) -> DivisorProfile {
        build_profile(&IntegerMatrix::from_i64(rows).unwrap()).unwrap()
    }

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn zero_column_rejected_with_index() {
        let err = IntegerMatrix::from_i64(&[vec![1, 0, 2], vec![3, 0, 4]]).unwrap_err();
        assert_eq!(err, Error::ZeroColumn { column: 2 });
    }

    #[test]
    fn ragged_and_empty_rejected() {
        assert!(IntegerMatrix::from_i64(&[vec![1, 2], vec![3]]).is_err());
        assert!(IntegerMatrix::from_i64(&[]).is_err());
        assert!(IntegerMatrix::parse("# nothing\n").is_err());
    }

    #[test]
    fn parse_with_and_without_header() {
        let a = IntegerMatrix::parse("# ex\n2 2\n2 0\n0 4\n").unwrap();
        let b = IntegerMatrix::parse("2 0\n0 4\n").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.k(), 2);
        // A lone two-entry line is data, not a header.
        let c = IntegerMatrix::parse("3 5\n").unwrap();
        assert_eq!((c.k(), c.n()), (1, 2));
        assert!(IntegerMatrix::parse("1 x\n").is_err());
        assert_eq!(IntegerMatrix::parse(&a.to_text()).unwrap(), a);
    }

    #[test]
    fn column_cap_enforced() {
        let m = IntegerMatrix::from_i64(&[vec![1; 5]]).unwrap();
        let err = build_profile_with(&m, ProfileOptions { max_n: 4 }).unwrap_err();
        assert_eq!(err, Error::TooManyColumns { n: 5, max: 4 });
    }

    #[test]
    fn lcm_period_examples() {
        assert_eq!(lcm_period(&profile(&[vec![2, 0], vec![0, 4]])), big(4));
        let kerdock4 = profile(&[vec![1, 1, 1, 1], vec![0, 2, 0, 2], vec![0, 0, 2, 2]]);
        assert_eq!(kerdock4.rho0(), &big(2));
        let cycle = profile(&[vec![-1, 1, 0, 0], vec![-1, 0, 1, 0], vec![-1, 0, 0, 1]]);
        assert_eq!(cycle.rho0(), &big(1));
    }

    #[test]
    fn subgroup_sizes() {
        let p = profile(&[vec![2, 0], vec![0, 4]]);
        assert_eq!(p.h_subgroup_size(p.full_mask(), &big(4)), big(8));
        assert_eq!(p.h_subgroup_size(0, &big(5)), big(25));
        assert_eq!(p.kernel_size(&big(3)), big(1));
    }

    #[test]
    fn census_counts_every_subset() {
        let p = profile(&[vec![1, 0, 1, 1], vec![0, 1, 1, -1]]);
        let total: u64 = p.census().iter().map(|e| e.count).sum();
        assert_eq!(total, 16);
        assert_eq!(p.rho0(), &big(2));
    }
}
