mod common;

use common::big;
use num_integer::Integer;
use num_traits::{One, Zero};
use proptest::prelude::*;
use quasiweight::exact::{format_rational, parse_rational, Bivariate};
use quasiweight::quasi::{mobius_constituents, naive_constituents};
use quasiweight::snf::{minor_gcd, smith_divisors};
use quasiweight::{build_profile, BigInt, IntegerMatrix, Rational, UniPoly};

fn rational() -> impl Strategy<Value = Rational> {
    (-50i64..=50, 1i64..=12).prop_map(|(n, d)| Rational::new(big(n), big(d)))
}

fn poly() -> impl Strategy<Value = UniPoly> {
    prop::collection::vec(rational(), 0..5).prop_map(UniPoly::from_coeffs)
}

fn bipoly() -> impl Strategy<Value = Bivariate<Rational>> {
    prop::collection::vec((0u32..3, 0u32..3, rational()), 0..5).prop_map(|terms| {
        let mut b = Bivariate::zero();
        for (a, c, v) in terms {
            b.add_term(a, c, v);
        }
        b
    })
}

fn rows(max_k: usize, max_n: usize, bound: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max_k, 1..=max_n).prop_flat_map(move |(k, n)| {
        prop::collection::vec(prop::collection::vec(-bound..=bound, n), k)
    })
}

fn matrix(max_k: usize, max_n: usize, bound: i64) -> impl Strategy<Value = IntegerMatrix> {
    rows(max_k, max_n, bound).prop_filter_map("zero column", |r| IntegerMatrix::from_i64(&r).ok())
}

fn to_big(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| r.iter().map(|&v| big(v)).collect()).collect()
}

fn mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    a.iter()
        .map(|row| {
            (0..b[0].len())
                .map(|j| row.iter().zip(b).map(|(x, r)| x * &r[j]).sum())
                .collect()
        })
        .collect()
}

/// Identity plus `c` at `(i, j)`, `i != j`.
fn elementary(size: usize, i: usize, j: usize, c: i64) -> Vec<Vec<BigInt>> {
    (0..size)
        .map(|r| {
            (0..size)
                .map(|s| match (r == s, r == i && s == j && i != j) {
                    (true, _) => BigInt::one(),
                    (false, true) => big(c),
                    _ => BigInt::zero(),
                })
                .collect()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn polynomial_ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&(&a - &a), &UniPoly::zero());
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in poly(), b in poly(), t in rational()) {
        prop_assert_eq!((&a * &b).eval(&t), a.eval(&t) * b.eval(&t));
        prop_assert_eq!((&a + &b).eval(&t), a.eval(&t) + b.eval(&t));
    }

    #[test]
    fn bivariate_evaluation_is_a_homomorphism(
        a in bipoly(), b in bipoly(), x in rational(), y in rational()
    ) {
        prop_assert_eq!((&a * &b).eval(&x, &y), a.eval(&x, &y) * b.eval(&x, &y));
        prop_assert_eq!((&a - &b).eval(&x, &y), a.eval(&x, &y) - b.eval(&x, &y));
    }

    #[test]
    fn rationals_are_canonical(n in -1000i64..1000, d in 1i64..100, s in 1i64..20) {
        let r = Rational::new(big(n * s), big(d * s));
        prop_assert_eq!(&r, &Rational::new(big(n), big(d)));
        prop_assert!(r.denom() > &BigInt::zero());
        prop_assert!(r.numer().gcd(r.denom()).is_one());
        prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
    }

    #[test]
    fn snf_products_are_minor_gcds(r in rows(3, 4, 5)) {
        let g = to_big(&r);
        let chain = smith_divisors(&g);
        for j in 1..=chain.rank() {
            prop_assert_eq!(chain.prefix_product(j), minor_gcd(&g, j).unwrap());
        }
        let dim = r.len().min(r[0].len());
        if chain.rank() < dim {
            prop_assert!(minor_gcd(&g, chain.rank() + 1).unwrap().is_zero());
        }
        for w in chain.divisors().windows(2) {
            prop_assert!(w[1].is_multiple_of(&w[0]));
        }
    }

    #[test]
    fn snf_is_unimodular_invariant(
        r in rows(3, 4, 5), i in 0usize..4, j in 0usize..4, c in -3i64..=3
    ) {
        let g = to_big(&r);
        let (k, n) = (r.len(), r[0].len());
        let left = elementary(k, i % k, j % k, c);
        let right = elementary(n, j % n, i % n, -c);
        let h = mul(&mul(&left, &g), &right);
        prop_assert_eq!(smith_divisors(&h), smith_divisors(&g));
    }

    #[test]
    fn divisor_products_divide(g in matrix(3, 6, 3), a in any::<u64>(), b in any::<u64>(), q in 1i64..=12) {
        let p = build_profile(&g).unwrap();
        let small = a & p.full_mask();
        let large = small | (b & p.full_mask());
        let (cj, cl) = (p.chain(small), p.chain(large));
        prop_assert!(cj.rank() <= cl.rank());
        let q = big(q);
        let (mut gj, mut gl) = (BigInt::one(), BigInt::one());
        for l in 0..cj.rank() {
            prop_assert!(cj.prefix_product(l + 1).is_multiple_of(&cl.prefix_product(l + 1)));
            gj *= cj.divisors()[l].gcd(&q);
            gl *= cl.divisors()[l].gcd(&q);
            prop_assert!(gj.is_multiple_of(&gl));
        }
    }

    #[test]
    fn subgroup_sizes_match_brute_force(g in matrix(3, 4, 4), mask in any::<u64>(), q in 1i64..=5) {
        let p = build_profile(&g).unwrap();
        let mask = mask & p.full_mask();
        let cols = g.columns(mask);
        let k = g.k();
        let mut count = 0i64;
        for idx in 0..q.pow(k as u32) {
            let u: Vec<i64> = (0..k).map(|j| idx / q.pow(j as u32) % q).collect();
            let zero = (0..mask.count_ones() as usize).all(|c| {
                let s: BigInt = u.iter().zip(&cols).map(|(x, row)| big(*x) * &row[c]).sum();
                s.mod_floor(&big(q)).is_zero()
            });
            count += i64::from(zero);
        }
        prop_assert_eq!(p.h_subgroup_size(mask, &big(q)), big(count));
    }

    #[test]
    fn mobius_matches_naive_sum(g in matrix(4, 7, 3), q in 1i64..=6) {
        let p = build_profile(&g).unwrap();
        let m = big(q).gcd(p.rho0());
        prop_assert_eq!(mobius_constituents(&p, &m), naive_constituents(&p, &m));
    }
}
