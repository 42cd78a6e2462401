use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Prime factorization `[(p, e)]` of a positive integer, primes ascending.
pub fn factorize(n: &BigInt) -> Vec<(BigInt, u32)> {
    assert!(n.is_positive(), "factorize expects a positive integer");
    if let Some(small) = n.to_u64() {
        return factorize_u64(small)
            .into_iter()
            .map(|(p, e)| (BigInt::from(p), e))
            .collect();
    }
    let mut rest = n.clone();
    let mut out = Vec::new();
    let mut p = BigInt::from(2);
    while &p * &p <= rest {
        let mut e = 0;
        while (&rest % &p).is_zero() {
            rest /= &p;
            e += 1;
        }
        if e > 0 {
            out.push((p.clone(), e));
        }
        p += if p == BigInt::from(2) { 1 } else { 2 };
    }
    if !rest.is_one() {
        out.push((rest, 1));
    }
    out
}

fn factorize_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Factorization of `lcm(values)`, from the factorizations of the parts.
pub fn lcm_factorization<'a>(values: impl IntoIterator<Item = &'a BigInt>) -> Vec<(BigInt, u32)> {
    let mut exps: BTreeMap<BigInt, u32> = BTreeMap::new();
    for v in values {
        for (p, e) in factorize(v) {
            let slot = exps.entry(p).or_insert(0);
            *slot = (*slot).max(e);
        }
    }
    exps.into_iter().collect()
}

/// Number of positive divisors, without enumerating them.
pub fn divisor_count(factors: &[(BigInt, u32)]) -> BigInt {
    factors.iter().map(|(_, e)| BigInt::from(e + 1)).product()
}

/// All positive divisors in increasing order.
pub fn divisors_from(factors: &[(BigInt, u32)]) -> Vec<BigInt> {
    let mut out = vec![BigInt::one()];
    for (p, e) in factors {
        let mut next = Vec::with_capacity(out.len() * (*e as usize + 1));
        for d in &out {
            let mut acc = d.clone();
            for _ in 0..=*e {
                next.push(acc.clone());
                acc *= p;
            }
        }
        out = next;
    }
    out.sort();
    out
}

pub fn divisors(n: &BigInt) -> Vec<BigInt> {
    divisors_from(&factorize(n))
}

/// Smallest `q > 1` with `gcd(q, n) = 1`.
pub fn smallest_coprime_above_one(n: &BigInt) -> BigInt {
    let mut q = BigInt::from(2);
    while !q.gcd(n).is_one() {
        q += 1;
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn factor_and_divisors() {
        assert_eq!(factorize(&b(12)), vec![(b(2), 2), (b(3), 1)]);
        assert_eq!(factorize(&b(1)), vec![]);
        assert_eq!(divisors(&b(12)), [1, 2, 3, 4, 6, 12].map(b).to_vec());
        assert_eq!(divisors(&b(1)), vec![b(1)]);
        assert_eq!(divisor_count(&factorize(&b(60))), b(12));
    }

    #[test]
    fn big_factorization() {
        let n = b(1 << 40) * b(3) * b(1_000_003);
        assert_eq!(factorize(&(n.clone() * n.clone()))[0], (b(2), 80));
    }

    #[test]
    fn lcm_merge() {
        let vals = [b(4), b(6), b(10)];
        assert_eq!(lcm_factorization(vals.iter()), vec![(b(2), 2), (b(3), 1), (b(5), 1)]);
    }

    #[test]
    fn coprime_search() {
        assert_eq!(smallest_coprime_above_one(&b(1)), b(2));
        assert_eq!(smallest_coprime_above_one(&b(6)), b(5));
        assert_eq!(smallest_coprime_above_one(&b(2)), b(3));
    }
}
