//! Weight-enumerator quasi-polynomials.
//!
//! For every divisor class `m` of `ρ₀` and weight `i` the constituent is
//!
//! ```text
//! f_i^m(t) = Σ_{|J| = n-i} Σ_{K ⊇ J} (-1)^{|K|-|J|} B_K^m(t),
//! B_K^m(t) = ∏ gcd(m, e_{ℓ,K}) / ∏ gcd(m, e_{ℓ,E}) · t^{r(E) - r(K)}.
//! ```
//!
//! [`weight_quasi`] evaluates the inner sum with a superset Möbius transform
//! per class. [`weight_census`] keeps the same data symbolically (one integer
//! weight per distinct divisor chain and weight index) so that matrices whose
//! `ρ₀` has too many divisors to enumerate can still be evaluated at any `q`.

use std::borrow::Cow;
use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::{binomial, Integer};
use num_traits::{One, Pow, Signed, Zero};
use rayon::prelude::*;
use serde::de::Error as _;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::exact::{divisors, product_gcd};
use crate::minweight::MinWeight;
use crate::profile::DivisorProfile;
use crate::snf::DivisorChain;
use crate::{BiPoly, Error, IntPoly, Rational, Result, UniPoly};

/// Default refusal threshold for enumerating divisor classes of `ρ₀`.
pub const DEFAULT_MAX_CLASSES: usize = 4096;

/// A quasi-polynomial with the gcd property: one constituent per positive
/// divisor of the period, selected at `q` by `gcd(q, period)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiPolynomial {
    period: BigInt,
    constituents: BTreeMap<BigInt, UniPoly>,
}

impl QuasiPolynomial {
    /// Keys must be exactly the positive divisors of `period`.
    pub fn new(period: BigInt, constituents: BTreeMap<BigInt, UniPoly>) -> Result<Self> {
        if !period.is_positive() {
            return Err(Error::OutOfRange(format!("period must be positive, got {period}")));
        }
        let expected = divisors(&period);
        if constituents.len() != expected.len()
            || !expected.iter().all(|d| constituents.contains_key(d))
        {
            return Err(Error::InvalidMatrix(format!(
                "constituent keys {:?} are not the divisors of {period}",
                constituents.keys().map(ToString::to_string).collect::<Vec<_>>()
            )));
        }
        Ok(Self {
            period,
            constituents,
        })
    }

    pub fn from_fn(period: BigInt, f: impl Fn(&BigInt) -> Result<UniPoly>) -> Result<Self> {
        let constituents = divisors(&period)
            .into_iter()
            .map(|m| f(&m).map(|p| (m, p)))
            .collect::<Result<_>>()?;
        Self::new(period, constituents)
    }

    /// A genuine polynomial, viewed as a quasi-polynomial of period 1.
    pub fn constant_period(p: UniPoly) -> Self {
        let mut constituents = BTreeMap::new();
        constituents.insert(BigInt::one(), p);
        Self {
            period: BigInt::one(),
            constituents,
        }
    }

    pub fn period(&self) -> &BigInt {
        &self.period
    }

    pub fn class_of(&self, q: &BigInt) -> BigInt {
        q.gcd(&self.period)
    }

    /// Constituent keyed by the divisor `m` itself.
    pub fn constituent(&self, m: &BigInt) -> Option<&UniPoly> {
        self.constituents.get(m)
    }

    /// Constituent that applies at `q`.
    pub fn constituent_for(&self, q: &BigInt) -> &UniPoly {
        &self.constituents[&self.class_of(q)]
    }

    pub fn constituents(&self) -> impl Iterator<Item = (&BigInt, &UniPoly)> {
        self.constituents.iter()
    }

    pub fn eval(&self, q: &BigInt) -> Rational {
        self.constituent_for(q).eval(&Rational::from_integer(q.clone()))
    }
}

#[derive(Deserialize)]
struct QuasiRepr {
    #[serde(with = "crate::json::big_int")]
    period: BigInt,
    constituents: BTreeMap<String, UniPoly>,
}

impl Serialize for QuasiPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Keyed<'a>(&'a BTreeMap<BigInt, UniPoly>);
        impl Serialize for Keyed<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                s.collect_map(self.0.iter().map(|(m, p)| (m.to_string(), p)))
            }
        }
        let mut st = s.serialize_struct("QuasiPolynomial", 2)?;
        st.serialize_field("period", &crate::json::bigint_to_value(&self.period))?;
        st.serialize_field("constituents", &Keyed(&self.constituents))?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for QuasiPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = QuasiRepr::deserialize(d)?;
        let constituents = repr
            .constituents
            .into_iter()
            .map(|(k, p)| {
                k.trim()
                    .parse::<BigInt>()
                    .map(|m| (m, p))
                    .map_err(|_| D::Error::custom(format!("bad class key {k:?}")))
            })
            .collect::<std::result::Result<_, _>>()?;
        QuasiPolynomial::new(repr.period, constituents).map_err(D::Error::custom)
    }
}

/// Smallest divisor `d` of the period with `f^m = f^{gcd(m, d)}` for all `m`.
pub fn minimum_period(qp: &QuasiPolynomial) -> BigInt {
    for d in divisors(&qp.period) {
        let ok = qp
            .constituents
            .iter()
            .all(|(m, p)| qp.constituents[&m.gcd(&d)] == *p);
        if ok {
            return d;
        }
    }
    qp.period.clone()
}

/// Anything that yields the weight constituents `f_0^m, ..., f_n^m` for the
/// class of an arbitrary `q ≥ 1`.
pub trait WeightSource: Sync {
    fn n(&self) -> usize;
    fn k(&self) -> usize;
    fn rank(&self) -> usize;
    fn rho0(&self) -> &BigInt;
    /// Elementary divisors of the full matrix `G_E`.
    fn kernel_chain(&self) -> &DivisorChain;
    /// `f_0^m, ..., f_n^m` for `m = gcd(q, ρ₀)`.
    fn constituents_at(&self, q: &BigInt) -> Cow<'_, [UniPoly]>;

    /// `|Ker φ_{G,q}| = ∏ gcd(q, e_{ℓ,E}) · q^(k - r(E))`.
    fn kernel_size(&self, q: &BigInt) -> BigInt {
        product_gcd(q, self.kernel_chain().divisors()) * Pow::pow(q, (self.k() - self.rank()) as u32)
    }
}

/// The materialized weight quasi-polynomial: every constituent for every
/// divisor class of `ρ₀`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightQuasi {
    n: usize,
    k: usize,
    rank: usize,
    rho0: BigInt,
    kernel: DivisorChain,
    classes: BTreeMap<BigInt, Vec<UniPoly>>,
}

impl WeightQuasi {
    /// Divisor classes of `ρ₀`, ascending.
    pub fn classes(&self) -> impl Iterator<Item = &BigInt> {
        self.classes.keys()
    }

    pub fn constituents(&self, m: &BigInt) -> Option<&[UniPoly]> {
        self.classes.get(m).map(Vec::as_slice)
    }

    /// `f_i` as a quasi-polynomial of period `ρ₀`.
    pub fn weight_poly(&self, i: usize) -> QuasiPolynomial {
        QuasiPolynomial {
            period: self.rho0.clone(),
            constituents: self
                .classes
                .iter()
                .map(|(m, fs)| (m.clone(), fs[i].clone()))
                .collect(),
        }
    }

    pub fn weight_polys(&self) -> Vec<QuasiPolynomial> {
        (0..=self.n).map(|i| self.weight_poly(i)).collect()
    }

    /// Minimum period of the whole family `(f_0, ..., f_n)`.
    pub fn minimum_period(&self) -> BigInt {
        (0..=self.n)
            .map(|i| minimum_period(&self.weight_poly(i)))
            .fold(BigInt::one(), |acc, d| acc.lcm(&d))
    }
}

impl WeightSource for WeightQuasi {
    fn n(&self) -> usize {
        self.n
    }
    fn k(&self) -> usize {
        self.k
    }
    fn rank(&self) -> usize {
        self.rank
    }
    fn rho0(&self) -> &BigInt {
        &self.rho0
    }
    fn kernel_chain(&self) -> &DivisorChain {
        &self.kernel
    }
    fn constituents_at(&self, q: &BigInt) -> Cow<'_, [UniPoly]> {
        Cow::Borrowed(&self.classes[&q.gcd(&self.rho0)])
    }
}

#[derive(Serialize, Deserialize)]
struct WeightQuasiRepr {
    n: usize,
    k: usize,
    rank: usize,
    #[serde(with = "crate::json::big_int")]
    rho0: BigInt,
    kernel_divisors: DivisorChain,
    weights: Vec<QuasiPolynomial>,
}

impl Serialize for WeightQuasi {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WeightQuasiRepr {
            n: self.n,
            k: self.k,
            rank: self.rank,
            rho0: self.rho0.clone(),
            kernel_divisors: self.kernel.clone(),
            weights: self.weight_polys(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for WeightQuasi {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = WeightQuasiRepr::deserialize(d)?;
        if repr.weights.len() != repr.n + 1 {
            return Err(D::Error::custom(format!(
                "expected {} weight quasi-polynomials, got {}",
                repr.n + 1,
                repr.weights.len()
            )));
        }
        if repr.weights.iter().any(|w| w.period != repr.rho0) {
            return Err(D::Error::custom("every weight must have period rho0"));
        }
        let classes = divisors(&repr.rho0)
            .into_iter()
            .map(|m| {
                let fs = repr.weights.iter().map(|w| w.constituents[&m].clone()).collect();
                (m, fs)
            })
            .collect();
        Ok(WeightQuasi {
            n: repr.n,
            k: repr.k,
            rank: repr.rank,
            rho0: repr.rho0,
            kernel: repr.kernel_divisors,
            classes,
        })
    }
}

/// In-place superset Möbius transform over a table indexed by bitmasks:
/// afterwards `values[J] = Σ_{K ⊇ J} (-1)^{|K|-|J|} old[K]`.
pub fn superset_mobius<V, F>(values: &mut [V], sub: F)
where
    V: Send,
    F: Fn(&mut V, &V) + Sync,
{
    assert!(values.len().is_power_of_two(), "table length must be a power of two");
    let mut step = 1;
    while step < values.len() {
        let body = |chunk: &mut [V]| {
            let (lo, hi) = chunk.split_at_mut(step);
            for (a, b) in lo.iter_mut().zip(hi.iter()) {
                sub(a, b);
            }
        };
        if values.len() >= 1 << 12 {
            values.par_chunks_mut(2 * step).for_each(body);
        } else {
            values.chunks_mut(2 * step).for_each(body);
        }
        step *= 2;
    }
}

/// `f_0^m, ..., f_n^m` by the superset Möbius transform, one degree of `t`
/// at a time so only one table of integers is live per degree.
pub fn mobius_constituents(profile: &DivisorProfile, m: &BigInt) -> Vec<UniPoly> {
    let n = profile.n();
    let r = profile.full_rank();
    let total = 1usize << n;
    let numerators: Vec<BigInt> = profile
        .distinct_chains()
        .iter()
        .map(|c| product_gcd(m, c.divisors()))
        .collect();
    let codims: Vec<usize> = profile
        .distinct_chains()
        .iter()
        .map(|c| r - c.rank())
        .collect();
    let denom = product_gcd(m, profile.full_chain().divisors());

    let mut coeffs = vec![vec![BigInt::zero(); r + 1]; n + 1];
    for d in 0..=r {
        if !codims.contains(&d) {
            continue;
        }
        let mut table: Vec<BigInt> = (0..total as u64)
            .into_par_iter()
            .map(|mask| {
                let c = profile.chain_index(mask);
                if codims[c] == d {
                    numerators[c].clone()
                } else {
                    BigInt::zero()
                }
            })
            .collect();
        superset_mobius(&mut table, |a, b| *a -= b);
        let mut by_size = vec![BigInt::zero(); n + 1];
        for (mask, v) in table.iter().enumerate() {
            if !v.is_zero() {
                by_size[mask.count_ones() as usize] += v;
            }
        }
        for (size, v) in by_size.into_iter().enumerate() {
            coeffs[n - size][d] = v;
        }
    }
    coeffs
        .into_iter()
        .map(|cs| ratio_poly(cs, &denom))
        .collect()
}

fn ratio_poly(numerators: Vec<BigInt>, denom: &BigInt) -> UniPoly {
    UniPoly::from_coeffs(
        numerators
            .into_iter()
            .map(|c| Rational::new(c, denom.clone()))
            .collect(),
    )
}

/// Reference evaluation of the double sum over `J ⊆ K`, exponential in `3^n`.
/// Kept for cross-checking the transform on small inputs.
pub fn naive_constituents(profile: &DivisorProfile, m: &BigInt) -> Vec<UniPoly> {
    let n = profile.n();
    let r = profile.full_rank();
    let full = profile.full_mask();
    let denom = product_gcd(m, profile.full_chain().divisors());
    let mut out = vec![IntPoly::zero(); n + 1];
    for j in 0..=full {
        let rest = full & !j;
        let mut sub = rest;
        let mut acc = IntPoly::zero();
        loop {
            let kmask = j | sub;
            let chain = profile.chain(kmask);
            let term = IntPoly::monomial(product_gcd(m, chain.divisors()), r - chain.rank());
            if sub.count_ones().is_multiple_of(2) {
                acc.add_assign_ref(&term);
            } else {
                acc.sub_assign_ref(&term);
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
        out[n - j.count_ones() as usize].add_assign_ref(&acc);
    }
    out.into_iter()
        .map(|p| ratio_poly(p.into_coeffs(), &denom))
        .collect()
}

/// Every constituent for every divisor class of `ρ₀`.
pub fn weight_quasi(profile: &DivisorProfile) -> Result<WeightQuasi> {
    weight_quasi_with(profile, DEFAULT_MAX_CLASSES)
}

pub fn weight_quasi_with(profile: &DivisorProfile, max_classes: usize) -> Result<WeightQuasi> {
    let classes = profile.classes(max_classes)?;
    let built: Vec<(BigInt, Vec<UniPoly>)> = classes
        .into_par_iter()
        .map(|m| {
            let fs = mobius_constituents(profile, &m);
            (m, fs)
        })
        .collect();
    for (m, fs) in &built {
        if fs[0] != UniPoly::one() {
            return Err(Error::Consistency(format!(
                "f_0 for class {m} is {} instead of 1",
                fs[0]
            )));
        }
    }
    Ok(WeightQuasi {
        n: profile.n(),
        k: profile.k(),
        rank: profile.full_rank(),
        rho0: profile.rho0().clone(),
        kernel: profile.full_chain().clone(),
        classes: built.into_iter().collect(),
    })
}

/// Symbolic form of the weight quasi-polynomial: for each distinct divisor
/// chain `c` of some `G_K`, the integer weights
/// `w_{i,c} = Σ_{K : chain(K) = c} (-1)^{|K|-n+i} C(|K|, n-i)`, so that
/// `f_i^m(t) = Σ_c w_{i,c} · ∏ gcd(m, e_c) / ∏ gcd(m, e_E) · t^{r(E)-r(c)}`.
#[derive(Clone, Debug)]
pub struct WeightCensus {
    n: usize,
    k: usize,
    rank: usize,
    rho0: BigInt,
    kernel: DivisorChain,
    terms: Vec<CensusTerm>,
}

#[derive(Clone, Debug)]
struct CensusTerm {
    chain: DivisorChain,
    codim: usize,
    weights: Vec<BigInt>,
}

pub fn weight_census(profile: &DivisorProfile) -> WeightCensus {
    let n = profile.n();
    let r = profile.full_rank();
    let mut acc: HashMap<usize, Vec<BigInt>> = HashMap::new();
    for e in profile.census() {
        let w = acc.entry(e.chain).or_insert_with(|| vec![BigInt::zero(); n + 1]);
        for (i, wi) in w.iter_mut().enumerate() {
            let j = n - i;
            if e.size < j {
                continue;
            }
            let c = BigInt::from(binomial(e.size as u64, j as u64)) * BigInt::from(e.count);
            if (e.size - j).is_multiple_of(2) {
                *wi += c;
            } else {
                *wi -= c;
            }
        }
    }
    let mut terms: Vec<CensusTerm> = acc
        .into_iter()
        .filter(|(_, w)| w.iter().any(|v| !v.is_zero()))
        .map(|(c, weights)| {
            let chain = profile.distinct_chains()[c].clone();
            CensusTerm {
                codim: r - chain.rank(),
                chain,
                weights,
            }
        })
        .collect();
    terms.sort_by(|a, b| a.chain.cmp(&b.chain));
    WeightCensus {
        n,
        k: profile.k(),
        rank: r,
        rho0: profile.rho0().clone(),
        kernel: profile.full_chain().clone(),
        terms,
    }
}

impl WeightCensus {
    /// Number of distinct chains carrying a nonzero weight.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// `f_0^m, ..., f_n^m` for `m = gcd(q, ρ₀)`; `q` need not divide `ρ₀`.
    pub fn constituents(&self, q: &BigInt) -> Vec<UniPoly> {
        let m = q.gcd(&self.rho0);
        let denom = product_gcd(&m, self.kernel.divisors());
        let mut coeffs = vec![vec![BigInt::zero(); self.rank + 1]; self.n + 1];
        for term in &self.terms {
            let num = product_gcd(&m, term.chain.divisors());
            for (i, w) in term.weights.iter().enumerate() {
                if !w.is_zero() {
                    coeffs[i][term.codim] += w * &num;
                }
            }
        }
        coeffs
            .into_iter()
            .map(|cs| ratio_poly(cs, &denom))
            .collect()
    }

    /// Materialize all classes; refuses when `ρ₀` has more than
    /// `max_classes` divisors.
    pub fn materialize(&self, max_classes: usize) -> Result<WeightQuasi> {
        let count = crate::exact::divisor_count(&crate::exact::factorize(&self.rho0));
        if count > BigInt::from(max_classes) {
            return Err(Error::Budget(format!(
                "rho0 = {} has {count} divisor classes, above the cap of {max_classes}",
                self.rho0
            )));
        }
        Ok(WeightQuasi {
            n: self.n,
            k: self.k,
            rank: self.rank,
            rho0: self.rho0.clone(),
            kernel: self.kernel.clone(),
            classes: divisors(&self.rho0)
                .into_par_iter()
                .map(|m| {
                    let fs = self.constituents(&m);
                    (m, fs)
                })
                .collect(),
        })
    }
}

impl WeightSource for WeightCensus {
    fn n(&self) -> usize {
        self.n
    }
    fn k(&self) -> usize {
        self.k
    }
    fn rank(&self) -> usize {
        self.rank
    }
    fn rho0(&self) -> &BigInt {
        &self.rho0
    }
    fn kernel_chain(&self) -> &DivisorChain {
        &self.kernel
    }
    fn constituents_at(&self, q: &BigInt) -> Cow<'_, [UniPoly]> {
        Cow::Owned(self.constituents(q))
    }
}

/// Concrete weight distribution `A_0(q), ..., A_n(q)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightDistribution {
    #[serde(with = "crate::json::big_int")]
    pub q: BigInt,
    #[serde(with = "crate::json::big_ints")]
    pub counts: Vec<BigInt>,
}

impl WeightDistribution {
    pub fn n(&self) -> usize {
        self.counts.len() - 1
    }

    /// `|C_G(q)|`.
    pub fn total(&self) -> BigInt {
        self.counts.iter().sum()
    }

    pub fn min_weight(&self) -> MinWeight {
        self.counts
            .iter()
            .enumerate()
            .skip(1)
            .find(|(_, c)| !c.is_zero())
            .map_or(MinWeight::Infinite, |(i, _)| MinWeight::Finite(i))
    }

    /// Weights `i > 0` with `A_i ≠ 0`.
    pub fn support(&self) -> Vec<usize> {
        self.counts
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| i)
            .collect()
    }

    /// `Σ A_i x^(n-i) y^i`.
    pub fn enumerator(&self) -> BiPoly {
        let n = self.n() as u32;
        let mut w = BiPoly::zero();
        for (i, c) in self.counts.iter().enumerate() {
            w.add_term(n - i as u32, i as u32, Rational::from_integer(c.clone()));
        }
        w
    }
}

/// `A_i(q) = f_i^{gcd(q, ρ₀)}(q)`, with integrality, nonnegativity and mass
/// checks.
pub fn weight_distribution<W: WeightSource + ?Sized>(wq: &W, q: &BigInt) -> Result<WeightDistribution> {
    if !q.is_positive() {
        return Err(Error::OutOfRange(format!("q must be a positive integer, got {q}")));
    }
    let fs = wq.constituents_at(q);
    let tq = Rational::from_integer(q.clone());
    let mut counts = Vec::with_capacity(fs.len());
    for (i, f) in fs.iter().enumerate() {
        let v = f.eval(&tq);
        if !v.is_integer() || v.is_negative() {
            return Err(Error::Consistency(format!(
                "A_{i}({q}) evaluates to {v}, not a nonnegative integer"
            )));
        }
        counts.push(v.to_integer());
    }
    if !counts[0].is_one() {
        return Err(Error::Consistency(format!("A_0({q}) = {} instead of 1", counts[0])));
    }
    let total: BigInt = counts.iter().sum();
    let space: BigInt = Pow::pow(q, wq.k() as u32);
    if total * wq.kernel_size(q) != space {
        return Err(Error::Consistency(format!(
            "weight counts at q = {q} do not account for all of Z_q^{}",
            wq.k()
        )));
    }
    Ok(WeightDistribution {
        q: q.clone(),
        counts,
    })
}

/// `W_G(x, y; q)` as a bivariate polynomial in `(x, y)`.
pub fn weight_enumerator<W: WeightSource + ?Sized>(wq: &W, q: &BigInt) -> Result<BiPoly> {
    weight_distribution(wq, q).map(|d| d.enumerator())
}

/// `χ^m(t) = f_n^m(t) · ∏ gcd(m, e_{ℓ,E}) · t^(k - r(E))`, checked monic over `Z`.
pub fn characteristic_constituent<W: WeightSource + ?Sized>(wq: &W, m: &BigInt) -> Result<UniPoly> {
    let fs = wq.constituents_at(m);
    let scale = Rational::from_integer(product_gcd(m, wq.kernel_chain().divisors()));
    let chi = fs[wq.n()].scale(&scale).shift(wq.k() - wq.rank());
    if !chi.is_monic() || chi.coeffs().iter().any(|c| !c.is_integer()) {
        return Err(Error::Consistency(format!(
            "characteristic constituent for class {} is not monic over Z: {chi}",
            m.gcd(wq.rho0())
        )));
    }
    Ok(chi)
}

/// Characteristic quasi-polynomial of the arrangement of column hyperplanes.
pub fn characteristic_quasi(profile: &DivisorProfile, wq: &WeightQuasi) -> Result<QuasiPolynomial> {
    if profile.rho0() != wq.rho0() || profile.n() != wq.n() {
        return Err(Error::Consistency(
            "profile and weight quasi-polynomial describe different matrices".into(),
        ));
    }
    QuasiPolynomial::from_fn(wq.rho0().clone(), |m| characteristic_constituent(wq, m))
}

/// Indices `i_0 < i_1 < ... < i_r` with `i_s = min{i : deg f_i^m = s}`,
/// cross-checked against `n - max{|J| : r(E) - r(J) = s}`.
pub fn degree_ladder<W: WeightSource + ?Sized>(
    profile: &DivisorProfile,
    wq: &W,
    m: &BigInt,
) -> Result<Vec<usize>> {
    let n = profile.n();
    let r = profile.full_rank();
    let fs = wq.constituents_at(m);

    let mut widest = vec![None::<usize>; r + 1];
    for mask in 0..=profile.full_mask() {
        let s = r - profile.rank(mask);
        let size = mask.count_ones() as usize;
        if widest[s].is_none_or(|w| size > w) {
            widest[s] = Some(size);
        }
    }

    let mut ladder = Vec::with_capacity(r + 1);
    for s in 0..=r {
        let i_s = (0..=n)
            .find(|&i| fs[i].degree() == Some(s))
            .ok_or_else(|| {
                Error::Consistency(format!("class {m}: no weight constituent has degree {s}"))
            })?;
        let expected = widest[s].map(|w| n - w);
        if expected != Some(i_s) {
            return Err(Error::Consistency(format!(
                "class {m}: degree {s} first appears at i = {i_s}, subsets predict {expected:?}"
            )));
        }
        if ladder.last().is_some_and(|&prev| prev >= i_s) {
            return Err(Error::Consistency(format!(
                "class {m}: degree ladder {ladder:?} then {i_s} is not strictly increasing"
            )));
        }
        ladder.push(i_s);
    }
    Ok(ladder)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::{build_profile, IntegerMatrix};

    fn prof(rows: &[Vec<i64>]) -> DivisorProfile {
        build_profile(&IntegerMatrix::from_i64(rows).unwrap()).unwrap()
    }

    fn poly(cs: &[(i64, i64)]) -> UniPoly {
        UniPoly::from_coeffs(
            cs.iter()
                .map(|&(a, b)| Rational::new(a.into(), b.into()))
                .collect(),
        )
    }

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn diag_two_four_class_two() {
        let p = prof(&[vec![2, 0], vec![0, 4]]);
        let wq = weight_quasi(&p).unwrap();
        let fs = wq.constituents(&big(2)).unwrap();
        assert_eq!(fs[1], poly(&[(-2, 1), (1, 1)]));
        assert_eq!(fs[2], poly(&[(1, 1), (-1, 1), (1, 4)]));
    }

    #[test]
    fn skew_odd_class() {
        let p = prof(&[vec![1, 0, 1, 1], vec![0, 1, 1, -1]]);
        let wq = weight_quasi(&p).unwrap();
        let fs = wq.constituents(&big(1)).unwrap();
        assert!(fs[1].is_zero() && fs[2].is_zero());
        assert_eq!(fs[3], poly(&[(-4, 1), (4, 1)]));
        assert_eq!(fs[4], poly(&[(3, 1), (-4, 1), (1, 1)]));
    }

    #[test]
    fn distributions_at_small_q() {
        let p = prof(&[vec![2, 0], vec![0, 4]]);
        let wq = weight_quasi(&p).unwrap();
        let d = weight_distribution(&wq, &big(4)).unwrap();
        assert_eq!(d.counts, vec![big(1), big(1), big(0)]);
        let d = weight_distribution(&wq, &big(1)).unwrap();
        assert_eq!(d.counts, vec![big(1), big(0), big(0)]);
        assert_eq!(d.min_weight(), MinWeight::Infinite);
        assert!(weight_distribution(&wq, &big(0)).is_err());

        let p = prof(&[vec![2, 0], vec![0, 2]]);
        let wq = weight_quasi(&p).unwrap();
        let d = weight_distribution(&wq, &big(4)).unwrap();
        assert_eq!(d.counts, vec![big(1), big(2), big(1)]);
    }

    #[test]
    fn enumerator_of_four_cycle() {
        let p = prof(&[
            vec![1, 0, 0, 1],
            vec![1, 1, 0, 0],
            vec![0, 1, 1, 0],
            vec![0, 0, 1, 1],
        ]);
        let wq = weight_quasi(&p).unwrap();
        let w = weight_enumerator(&wq, &big(2)).unwrap();
        assert_eq!(w.display_with("x", "y"), "x^4 + 6*x^2*y^2 + y^4");
        assert_eq!(wq.minimum_period(), big(1));
    }

    #[test]
    fn mobius_matches_naive_and_census() {
        let p = prof(&[vec![1, 2, 0, 3, 1], vec![0, 2, 2, -1, 4]]);
        let census = weight_census(&p);
        for m in divisors(p.rho0()) {
            let fast = mobius_constituents(&p, &m);
            assert_eq!(fast, naive_constituents(&p, &m));
            assert_eq!(fast, census.constituents(&m));
        }
    }

    #[test]
    fn mobius_transform_small() {
        let mut v = vec![5i64, 3, 2, 1];
        superset_mobius(&mut v, |a, b| *a -= *b);
        // J = {}: 5 - 3 - 2 + 1
        assert_eq!(v, vec![1, 2, 1, 1]);
    }

    #[test]
    fn characteristic_of_skew_matrix() {
        let p = prof(&[vec![1, 0, 1, 1], vec![0, 1, 1, -1]]);
        let wq = weight_quasi(&p).unwrap();
        let chi = characteristic_quasi(&p, &wq).unwrap();
        assert_eq!(chi.period(), &big(2));
        assert_eq!(chi.constituent(&big(1)).unwrap(), &poly(&[(3, 1), (-4, 1), (1, 1)]));
    }

    #[test]
    fn period_detection() {
        let one = poly(&[(1, 1)]);
        let flat = QuasiPolynomial::from_fn(big(12), |_| Ok(one.clone())).unwrap();
        assert_eq!(minimum_period(&flat), big(1));
        let split = QuasiPolynomial::from_fn(big(12), |m| {
            Ok(if (m % 3u32).is_zero() { poly(&[(2, 1)]) } else { one.clone() })
        })
        .unwrap();
        assert_eq!(minimum_period(&split), big(3));
    }

    #[test]
    fn quasi_json_round_trip() {
        let qp = QuasiPolynomial::from_fn(big(4), |m| Ok(poly(&[(1, 1), (m.try_into().unwrap(), 3)]))).unwrap();
        let text = serde_json::to_string(&qp).unwrap();
        assert!(text.starts_with(r#"{"period":4,"constituents":{"1":["1","1/3"]"#));
        let back: QuasiPolynomial = serde_json::from_str(&text).unwrap();
        assert_eq!(back, qp);
        assert!(serde_json::from_str::<QuasiPolynomial>(r#"{"period":4,"constituents":{"1":[]}}"#).is_err());
    }

    #[test]
    fn ladder_for_diag() {
        let p = prof(&[vec![2, 0], vec![0, 4]]);
        let wq = weight_quasi(&p).unwrap();
        assert_eq!(degree_ladder(&p, &wq, &big(1)).unwrap(), vec![0, 1, 2]);
    }
}
