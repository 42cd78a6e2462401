//! Minimum weights `d_q`, generic minimum weights `d'_m` and the stability
//! criterion deciding whether `d_m = d'_m` at the boundary value `q = m`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::exact::{divisors, product_gcd, smallest_coprime_above_one};
use crate::profile::DivisorProfile;
use crate::quasi::{weight_distribution, WeightSource};
use crate::{Error, Rational, Result, UniPoly};

/// A minimum weight; `Infinite` is the value for the zero code and compares
/// above every finite weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MinWeight {
    Finite(usize),
    Infinite,
}

impl MinWeight {
    pub fn finite(self) -> Option<usize> {
        match self {
            MinWeight::Finite(d) => Some(d),
            MinWeight::Infinite => None,
        }
    }
}

impl fmt::Display for MinWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MinWeight::Finite(d) => write!(f, "{d}"),
            MinWeight::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for MinWeight {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            MinWeight::Finite(d) => s.serialize_u64(*d as u64),
            MinWeight::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for MinWeight {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::Number(n) => n
                .as_u64()
                .map(|v| MinWeight::Finite(v as usize))
                .ok_or_else(|| D::Error::custom("minimum weight must be a nonnegative integer")),
            serde_json::Value::String(s) if s == "inf" => Ok(MinWeight::Infinite),
            other => Err(D::Error::custom(format!("bad minimum weight {other}"))),
        }
    }
}

/// `d_q`: the least positive weight at `q`, `Infinite` when the code is `{0}`.
pub fn min_weight_at<W: WeightSource + ?Sized>(wq: &W, q: &BigInt) -> Result<MinWeight> {
    weight_distribution(wq, q).map(|d| d.min_weight())
}

/// `d'_m` together with `f^m_{d'_m}` as recomputed from the closed form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericMinWeight {
    pub m: BigInt,
    pub d_prime: MinWeight,
    /// `None` when `d'_m` is infinite.
    pub leading: Option<UniPoly>,
}

/// `d'_m = min{i > 0 : f_i^m ≠ 0}`, with the closed form
/// `f^m_{d'} = Σ_{|J| = n-d'} (∏_{ℓ≤r(J)} gcd(m, e_{ℓ,J}) / ∏_{ℓ≤r(E)} gcd(m, e_{ℓ,E}) · t^{r(E)-r(J)} - 1)`
/// checked against the pipeline constituent.
pub fn generic_min_weight<W: WeightSource + ?Sized>(
    profile: &DivisorProfile,
    wq: &W,
    m: &BigInt,
) -> Result<GenericMinWeight> {
    let fs = wq.constituents_at(m);
    let n = profile.n();
    let Some(d) = (1..=n).find(|&i| !fs[i].is_zero()) else {
        return Ok(GenericMinWeight {
            m: m.clone(),
            d_prime: MinWeight::Infinite,
            leading: None,
        });
    };

    let r = profile.full_rank();
    let denom = product_gcd(m, profile.full_chain().divisors());
    let mut closed = UniPoly::zero();
    for mask in sized_subsets(n, n - d) {
        let chain = profile.chain(mask);
        let ratio = Rational::new(product_gcd(m, chain.divisors()), denom.clone());
        let term = &UniPoly::monomial(ratio, r - chain.rank()) - &UniPoly::one();
        closed.add_assign_ref(&term);
    }
    if closed != fs[d] {
        return Err(Error::Consistency(format!(
            "class {m}: closed form {closed} disagrees with f_{d} = {}",
            fs[d]
        )));
    }
    if closed.degree().is_some_and(|deg| deg > 1) {
        return Err(Error::Consistency(format!(
            "class {m}: f_{d} = {closed} has degree above 1"
        )));
    }
    Ok(GenericMinWeight {
        m: m.clone(),
        d_prime: MinWeight::Finite(d),
        leading: Some(closed),
    })
}

/// Which clause of the stability criterion a witness satisfies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Condition {
    /// `∏_{ℓ≤r(J)} gcd(m, e_{ℓ,J}) ≠ ∏_{ℓ≤r(J)} gcd(m, e_{ℓ,E})`.
    #[serde(rename = "i")]
    GcdRatio,
    /// `r(E) = r(J) + 1` and `m ∤ e_{r(J)+1,E}`.
    #[serde(rename = "ii")]
    RankStep,
}

/// Outcome of the stability test at `q = m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stability {
    pub d_prime: MinWeight,
    pub stable_at_m: bool,
    pub condition: Option<Condition>,
    /// Bitmask of the witness subset `J`.
    pub witness: Option<u64>,
}

/// Decides `d_m = d'_m` by searching for a witness `J` with `|J| = n - d'_m`,
/// then confirms the verdict by evaluating `f^m_{d'_m}(m)`.
pub fn stability_check<W: WeightSource + ?Sized>(
    profile: &DivisorProfile,
    wq: &W,
    m: &BigInt,
) -> Result<Stability> {
    if !m.is_positive() {
        return Err(Error::OutOfRange(format!("class must be positive, got {m}")));
    }
    let generic = generic_min_weight(profile, wq, m)?;
    let (MinWeight::Finite(d), Some(leading)) = (generic.d_prime, generic.leading) else {
        return Ok(Stability {
            d_prime: MinWeight::Infinite,
            stable_at_m: true,
            condition: None,
            witness: None,
        });
    };

    let n = profile.n();
    let r = profile.full_rank();
    let full = profile.full_chain().divisors();
    let mut found = None;
    for mask in sized_subsets(n, n - d) {
        let chain = profile.chain(mask);
        let rj = chain.rank();
        if product_gcd(m, chain.divisors()) != product_gcd(m, &full[..rj]) {
            found = Some((Condition::GcdRatio, mask));
            break;
        }
        if r == rj + 1 && !(&full[rj] % m).is_zero() {
            found = Some((Condition::RankStep, mask));
            break;
        }
    }

    let at_m = leading.eval(&Rational::from_integer(m.clone()));
    if found.is_some() == at_m.is_zero() {
        return Err(Error::Consistency(format!(
            "class {m}: witness search says {} but f_{d}({m}) = {at_m}",
            if found.is_some() { "stable" } else { "unstable" }
        )));
    }
    Ok(Stability {
        d_prime: MinWeight::Finite(d),
        stable_at_m: found.is_some(),
        condition: found.map(|(c, _)| c),
        witness: found.map(|(_, j)| j),
    })
}

/// All `n`-bit masks with exactly `size` bits set.
fn sized_subsets(n: usize, size: usize) -> impl Iterator<Item = u64> {
    let full: u64 = (1u64 << n) - 1;
    let start: u64 = if size == 0 { 0 } else { (1u64 << size) - 1 };
    let mut next = Some(start);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 {
            None
        } else {
            // Gosper's hack.
            let c = cur & cur.wrapping_neg();
            let r = cur + c;
            let nxt = (((r ^ cur) >> 2) / c) | r;
            (nxt <= full && nxt > cur).then_some(nxt)
        };
        Some(cur)
    })
}

/// Column indices of a mask, numbered from 1.
pub fn mask_columns(mask: u64) -> Vec<usize> {
    (0..64).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect()
}

/// Values `q` with `m < q ≤ limit` and `gcd(q, ρ₀) = m`, at most `max_samples`.
pub fn class_samples(rho0: &BigInt, m: &BigInt, limit: &BigInt, max_samples: usize) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut q = m + 1u32;
    while &q <= limit && out.len() < max_samples {
        if &q.gcd(rho0) == m {
            out.push(q.clone());
        }
        q += 1u32;
    }
    out
}

/// Per-class row of the report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassReport {
    #[serde(with = "crate::json::big_int")]
    pub m: BigInt,
    pub d_prime: MinWeight,
    /// Actual minimum weight at `q = m`.
    pub d_at_m: MinWeight,
    pub stable_at_m: bool,
    pub condition: Option<Condition>,
    /// 1-based column indices of the witness `J`.
    pub witness_subset: Option<Vec<usize>>,
    /// `m ≥ 2` and `gcd(m, e_r) = 1`: stability is guaranteed.
    pub coprime_to_last_divisor: bool,
    /// `m ≥ 2` and `m | e_1`: instability is guaranteed.
    pub divides_first_divisor: bool,
}

/// Minimum-weight periodicity report across all divisor classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityReport {
    #[serde(with = "crate::json::big_int")]
    pub rho0: BigInt,
    /// Smallest `q > 1` coprime to `ρ₀`.
    #[serde(with = "crate::json::big_int")]
    pub m0: BigInt,
    pub d_m0: MinWeight,
    pub classes: Vec<ClassReport>,
    /// Classes that are stable although `gcd(m, e_r) ≠ 1`.
    #[serde(with = "crate::json::big_ints")]
    pub coprime_converse_fails: Vec<BigInt>,
    /// Classes that are unstable although `m ∤ e_1`.
    #[serde(with = "crate::json::big_ints")]
    pub divisibility_converse_fails: Vec<BigInt>,
}

/// Builds the report, checking on each class that `d_q = d'_m` for sampled
/// `q > m` up to `4ρ₀ + m`, and that the coprimality and divisibility
/// criteria are consistent with the observed stability.
pub fn stability_report<W: WeightSource + ?Sized>(
    profile: &DivisorProfile,
    wq: &W,
    max_classes: usize,
    samples_per_class: usize,
) -> Result<StabilityReport> {
    let rho0 = profile.rho0().clone();
    let full = profile.full_chain();
    let e_first = full.first().cloned().unwrap_or_else(BigInt::one);
    let e_last = full.last().cloned().unwrap_or_else(BigInt::one);

    let m0 = smallest_coprime_above_one(&rho0);
    let d_m0 = min_weight_at(wq, &m0)?;

    let mut classes = Vec::new();
    let mut coprime_converse_fails = Vec::new();
    let mut divisibility_converse_fails = Vec::new();
    for m in profile.classes(max_classes)? {
        let st = stability_check(profile, wq, &m)?;
        let d_at_m = min_weight_at(wq, &m)?;
        if st.stable_at_m != (d_at_m == st.d_prime) {
            return Err(Error::Consistency(format!(
                "class {m}: stability verdict {} but d_m = {d_at_m}, d'_m = {}",
                st.stable_at_m, st.d_prime
            )));
        }
        let limit = &rho0 * 4u32 + &m;
        for q in class_samples(&rho0, &m, &limit, samples_per_class) {
            let dq = min_weight_at(wq, &q)?;
            if dq != st.d_prime {
                return Err(Error::Consistency(format!(
                    "class {m}: d_{q} = {dq} differs from d'_m = {}",
                    st.d_prime
                )));
            }
        }
        if m == BigInt::one() && st.d_prime != d_m0 {
            return Err(Error::Consistency(format!(
                "d_(m0) = {d_m0} differs from d'_1 = {}",
                st.d_prime
            )));
        }

        let big = m > BigInt::one();
        let coprime = big && m.gcd(&e_last).is_one();
        let divides = big && (&e_first % &m).is_zero();
        if coprime && !st.stable_at_m {
            return Err(Error::Consistency(format!(
                "class {m} is coprime to e_r yet unstable"
            )));
        }
        if divides && st.stable_at_m {
            return Err(Error::Consistency(format!(
                "class {m} divides e_1 yet is stable"
            )));
        }
        if big && !coprime && st.stable_at_m {
            coprime_converse_fails.push(m.clone());
        }
        if big && !divides && !st.stable_at_m {
            divisibility_converse_fails.push(m.clone());
        }
        classes.push(ClassReport {
            m,
            d_prime: st.d_prime,
            d_at_m,
            stable_at_m: st.stable_at_m,
            condition: st.condition,
            witness_subset: st.witness.map(mask_columns),
            coprime_to_last_divisor: coprime,
            divides_first_divisor: divides,
        });
    }
    Ok(StabilityReport {
        rho0,
        m0,
        d_m0,
        classes,
        coprime_converse_fails,
        divisibility_converse_fails,
    })
}

/// `d_q` over an inclusive range of `q`.
pub fn min_weights_over<W: WeightSource + ?Sized>(
    wq: &W,
    from: &BigInt,
    to: &BigInt,
) -> Result<Vec<(BigInt, MinWeight)>> {
    let mut out = Vec::new();
    let mut q = from.clone();
    while &q <= to {
        out.push((q.clone(), min_weight_at(wq, &q)?));
        q += 1u32;
    }
    Ok(out)
}

/// Divisors `m ≥ 2` of `ρ₀` for which `gcd(m, e_r) = 1` already guarantees a
/// constant minimum weight on the class.
pub fn coprime_classes(profile: &DivisorProfile) -> Vec<BigInt> {
    let e_last = profile.full_chain().last().cloned().unwrap_or_else(BigInt::one);
    divisors(profile.rho0())
        .into_iter()
        .filter(|m| m > &BigInt::one() && m.gcd(&e_last).is_one())
        .collect()
}
