//! Tutte quasi-polynomials and the two directions of the Greene-type identity
//! linking them to weight enumerators.
//!
//! The constituent for class `m` is
//! `Q^m(u, v) = Σ_K ∏ gcd(m, e_{ℓ,K}) (u-1)^(r(E)-r(K)) (v-1)^(|K|-r(K))`
//! and applies at `(u, v)` when `gcd((u-1)(v-1), ρ₀) = m`, with
//! `gcd(0, ρ₀) = ρ₀`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::{binomial, Integer};
use num_traits::{One, Pow, Signed, Zero};
use rayon::prelude::*;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::exact::{divisors, format_rational, parse_rational, product_gcd};
use crate::profile::DivisorProfile;
use crate::quasi::{weight_distribution, WeightSource, DEFAULT_MAX_CLASSES};
use crate::{BiPoly, Error, Rational, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TutteQuasi {
    rho0: BigInt,
    rank: usize,
    classes: BTreeMap<BigInt, BiPoly>,
}

impl TutteQuasi {
    pub fn rho0(&self) -> &BigInt {
        &self.rho0
    }

    pub fn classes(&self) -> impl Iterator<Item = (&BigInt, &BiPoly)> {
        self.classes.iter()
    }

    pub fn constituent(&self, m: &BigInt) -> Option<&BiPoly> {
        self.classes.get(m)
    }

    /// Class selected by an integer `N = (u-1)(v-1)`.
    pub fn class_of(&self, n: &BigInt) -> BigInt {
        n.abs().gcd(&self.rho0)
    }
}

/// Shifted coefficients: `(corank, nullity) -> Σ ∏ gcd(m, e_K)` over `K`.
type Shifted = HashMap<(u32, u32), BigInt>;

pub fn tutte_quasi(profile: &DivisorProfile) -> Result<TutteQuasi> {
    tutte_quasi_with(profile, DEFAULT_MAX_CLASSES)
}

pub fn tutte_quasi_with(profile: &DivisorProfile, max_classes: usize) -> Result<TutteQuasi> {
    let r = profile.full_rank();
    let census = profile.census();
    let classes = profile
        .classes(max_classes)?
        .into_par_iter()
        .map(|m| {
            let mut shifted = Shifted::new();
            for e in &census {
                let chain = &profile.distinct_chains()[e.chain];
                let key = ((r - chain.rank()) as u32, (e.size - chain.rank()) as u32);
                *shifted.entry(key).or_default() +=
                    product_gcd(&m, chain.divisors()) * BigInt::from(e.count);
            }
            (m, unshift(&shifted))
        })
        .collect();
    Ok(TutteQuasi {
        rho0: profile.rho0().clone(),
        rank: r,
        classes,
    })
}

/// Expands `Σ c_{a,b} (u-1)^a (v-1)^b` in powers of `u` and `v`.
fn unshift(shifted: &Shifted) -> BiPoly {
    let mut out = BiPoly::zero();
    for (&(a, b), c) in shifted {
        for i in 0..=a {
            let ci = signed_binomial(a, i);
            for j in 0..=b {
                let cj = signed_binomial(b, j);
                out.add_term(i, j, Rational::from_integer(c * &ci * &cj));
            }
        }
    }
    out
}

/// Coefficient of `x^i` in `(x - 1)^a`.
fn signed_binomial(a: u32, i: u32) -> BigInt {
    let c = BigInt::from(binomial(a as u64, i as u64));
    if (a - i).is_multiple_of(2) {
        c
    } else {
        -c
    }
}

/// Arithmetic Tutte polynomial `Σ_K ∏ e_{ℓ,K} (u-1)^(r(E)-r(K)) (v-1)^(|K|-r(K))`
/// by a direct pass over subsets, independent of the class machinery.
pub fn arithmetic_tutte(profile: &DivisorProfile) -> BiPoly {
    let r = profile.full_rank();
    let mut shifted = Shifted::new();
    for mask in 0..=profile.full_mask() {
        let chain = profile.chain(mask);
        let key = (
            (r - chain.rank()) as u32,
            (mask.count_ones() as usize - chain.rank()) as u32,
        );
        *shifted.entry(key).or_default() += chain.divisors().iter().product::<BigInt>();
    }
    unshift(&shifted)
}

fn integral_product(u: &Rational, v: &Rational) -> Result<BigInt> {
    let n = (u - Rational::one()) * (v - Rational::one());
    if !n.is_integer() {
        return Err(Error::Domain(format!(
            "(u-1)(v-1) = {} is not an integer",
            format_rational(&n)
        )));
    }
    Ok(n.to_integer())
}

/// `Q_G(u, v)` using the constituent selected by `(u-1)(v-1)`.
pub fn tutte_eval(tq: &TutteQuasi, u: &Rational, v: &Rational) -> Result<Rational> {
    let n = integral_product(u, v)?;
    Ok(tq.classes[&tq.class_of(&n)].eval(u, v))
}

/// Both sides of one instance of the Greene-type identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GreeneCheck {
    pub lhs: Rational,
    pub rhs: Rational,
}

impl GreeneCheck {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

fn rpow(base: &Rational, exp: usize) -> Rational {
    Pow::pow(base, exp as u32)
}

fn ensure_same_code<W: WeightSource + ?Sized>(
    profile: &DivisorProfile,
    wq: &W,
    tq: &TutteQuasi,
) -> Result<()> {
    if profile.rho0() != wq.rho0() || profile.rho0() != tq.rho0() || profile.n() != wq.n() {
        return Err(Error::Consistency(
            "profile, weight and Tutte quasi-polynomials describe different matrices".into(),
        ));
    }
    Ok(())
}

/// `W_G(x, y; q) = y^(n-r) (x-y)^r / |Ker φ_{G,q}| · Q_G((x+(q-1)y)/(x-y), x/y)`.
pub fn greene_forward_check<W: WeightSource + ?Sized>(
    profile: &DivisorProfile,
    wq: &W,
    tq: &TutteQuasi,
    q: &BigInt,
    x: &BigInt,
    y: &BigInt,
) -> Result<GreeneCheck> {
    ensure_same_code(profile, wq, tq)?;
    if y.is_zero() || x == y {
        return Err(Error::Domain(format!(
            "forward identity needs y ≠ 0 and x ≠ y, got x = {x}, y = {y}"
        )));
    }
    let n = profile.n();
    let r = profile.full_rank();
    let (xr, yr) = (Rational::from_integer(x.clone()), Rational::from_integer(y.clone()));
    let lhs = weight_distribution(wq, q)?.enumerator().eval(&xr, &yr);

    let qr = Rational::from_integer(q.clone());
    let u = (&xr + (&qr - Rational::one()) * &yr) / (&xr - &yr);
    let v = &xr / &yr;
    let rhs = rpow(&yr, n - r) * rpow(&(&xr - &yr), r)
        / Rational::from_integer(profile.kernel_size(q))
        * tutte_eval(tq, &u, &v)?;
    Ok(GreeneCheck { lhs, rhs })
}

/// `Q_G(u, v) = |Ker φ_{G,N}| / (v-1)^r · W_G(v, 1; N)` with `N = (u-1)(v-1) ≥ 1`.
pub fn greene_inverse_check<W: WeightSource + ?Sized>(
    profile: &DivisorProfile,
    wq: &W,
    tq: &TutteQuasi,
    u: &BigInt,
    v: &BigInt,
) -> Result<GreeneCheck> {
    ensure_same_code(profile, wq, tq)?;
    let one = BigInt::one();
    let q = (u - &one) * (v - &one);
    if v == &one || !q.is_positive() {
        return Err(Error::Domain(format!(
            "inverse identity needs v ≠ 1 and (u-1)(v-1) ≥ 1, got u = {u}, v = {v}"
        )));
    }
    let (ur, vr) = (Rational::from_integer(u.clone()), Rational::from_integer(v.clone()));
    let lhs = tutte_eval(tq, &ur, &vr)?;
    let w = weight_distribution(wq, &q)?
        .enumerator()
        .eval(&vr, &Rational::one());
    let rhs = Rational::from_integer(profile.kernel_size(&q)) / rpow(&(&vr - Rational::one()), profile.full_rank())
        * w;
    Ok(GreeneCheck { lhs, rhs })
}

#[derive(Serialize, Deserialize)]
struct TutteRepr {
    #[serde(with = "crate::json::big_int")]
    rho0: BigInt,
    rank: usize,
    constituents: BTreeMap<String, Vec<(u32, u32, String)>>,
}

impl Serialize for TutteQuasi {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TutteRepr {
            rho0: self.rho0.clone(),
            rank: self.rank,
            constituents: self
                .classes
                .iter()
                .map(|(m, p)| {
                    let triples = p.terms().map(|(a, b, c)| (a, b, format_rational(c))).collect();
                    (m.to_string(), triples)
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TutteQuasi {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = TutteRepr::deserialize(d)?;
        let mut classes = BTreeMap::new();
        for (key, triples) in repr.constituents {
            let m: BigInt = key
                .trim()
                .parse()
                .map_err(|_| D::Error::custom(format!("bad class key {key:?}")))?;
            let mut p = BiPoly::zero();
            for (a, b, c) in triples {
                p.add_term(a, b, parse_rational(&c).map_err(D::Error::custom)?);
            }
            classes.insert(m, p);
        }
        let expected = divisors(&repr.rho0);
        if classes.len() != expected.len() || !expected.iter().all(|m| classes.contains_key(m)) {
            return Err(D::Error::custom("class keys are not the divisors of rho0"));
        }
        Ok(TutteQuasi {
            rho0: repr.rho0,
            rank: repr.rank,
            classes,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::{build_profile, IntegerMatrix};
    use crate::quasi::weight_quasi;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn rat(v: i64) -> Rational {
        Rational::from_integer(big(v))
    }

    fn prof(rows: &[Vec<i64>]) -> DivisorProfile {
        build_profile(&IntegerMatrix::from_i64(rows).unwrap()).unwrap()
    }

    #[test]
    fn diag_two_four_constituents() {
        let p = prof(&[vec![2, 0], vec![0, 4]]);
        let tq = tutte_quasi(&p).unwrap();
        let q1 = tq.constituent(&big(1)).unwrap();
        assert_eq!(q1.display_with("u", "v"), "u^2");
        let q4 = tq.constituent(&big(4)).unwrap();
        // (u-1)^2 + 2(u-1) + 4(u-1) + 8
        assert_eq!(q4.eval(&rat(1), &rat(7)), rat(8));
        assert_eq!(tutte_eval(&tq, &rat(1), &rat(1)).unwrap(), rat(8));
        assert_eq!(tq.constituent(&big(4)), Some(&arithmetic_tutte(&p)));
    }

    #[test]
    fn non_integer_product_is_rejected() {
        let p = prof(&[vec![1, 1]]);
        let tq = tutte_quasi(&p).unwrap();
        let half = Rational::new(big(3), big(2));
        assert!(matches!(tutte_eval(&tq, &half, &rat(2)), Err(Error::Domain(_))));
    }

    #[test]
    fn unimodular_all_subsets() {
        let p = prof(&[
            vec![1, 0, 0, 1],
            vec![1, 1, 0, 0],
            vec![0, 1, 1, 0],
            vec![0, 0, 1, 1],
        ]);
        let tq = tutte_quasi(&p).unwrap();
        assert_eq!(tutte_eval(&tq, &rat(2), &rat(2)).unwrap(), rat(16));
    }

    #[test]
    fn greene_both_directions_small() {
        let p = prof(&[vec![2, 0], vec![0, 4]]);
        let wq = weight_quasi(&p).unwrap();
        let tq = tutte_quasi(&p).unwrap();
        assert!(greene_forward_check(&p, &wq, &tq, &big(2), &big(3), &big(1)).unwrap().holds());
        assert!(greene_inverse_check(&p, &wq, &tq, &big(3), &big(3)).unwrap().holds());
        assert!(greene_forward_check(&p, &wq, &tq, &big(2), &big(1), &big(1)).is_err());
        assert!(greene_inverse_check(&p, &wq, &tq, &big(1), &big(3)).is_err());
    }

    #[test]
    fn json_round_trip() {
        let p = prof(&[vec![2, 0, 1], vec![0, 4, 1]]);
        let tq = tutte_quasi(&p).unwrap();
        let text = serde_json::to_string(&tq).unwrap();
        let back: TutteQuasi = serde_json::from_str(&text).unwrap();
        assert_eq!(back, tq);
    }
}
