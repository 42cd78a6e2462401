mod common;

use std::collections::HashSet;

use common::{big, find, golden};
use quasiweight::oracle::{enumerate, enumerate_with};
use quasiweight::{Error, IntegerMatrix};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Collects the code itself as a set of words.
fn code_words(rows: &[Vec<i64>], q: i64) -> HashSet<Vec<i64>> {
    let (k, n) = (rows.len(), rows[0].len());
    let mut out = HashSet::new();
    for idx in 0..q.pow(k as u32) {
        let mut word = vec![0i64; n];
        let mut rest = idx;
        for row in rows {
            let c = rest % q;
            rest /= q;
            for (w, e) in word.iter_mut().zip(row) {
                *w = (*w + c * e).rem_euclid(q);
            }
        }
        out.insert(word);
    }
    out
}

#[test]
fn matches_explicit_code_on_random_matrices() {
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..40 {
        let k = rng.gen_range(1..=3);
        let n = rng.gen_range(1..=5);
        let rows: Vec<Vec<i64>> = (0..k)
            .map(|_| (0..n).map(|_| rng.gen_range(-4..=4)).collect())
            .collect();
        let Ok(g) = IntegerMatrix::from_i64(&rows) else { continue };
        for q in 1..=6 {
            let words = code_words(&rows, q);
            let mut counts = vec![0i64; n + 1];
            for w in &words {
                counts[w.iter().filter(|&&x| x != 0).count()] += 1;
            }
            let r = enumerate(&g, &big(q)).unwrap();
            let expected: Vec<_> = counts.into_iter().map(big).collect();
            assert_eq!(r.distribution.counts, expected, "{rows:?} q={q}");
            let kernel = q.pow(k as u32) / words.len() as i64;
            assert_eq!(r.kernel_size, big(kernel));
        }
    }
}

#[test]
fn totals_are_code_sizes() {
    for g in golden() {
        for q in 2..=5 {
            let r = enumerate(&g.matrix, &big(q)).unwrap();
            let total = big(q).pow(g.matrix.k() as u32) / &r.kernel_size;
            assert_eq!(r.distribution.total(), total, "{}", g.name);
            assert_eq!(r.q(), &big(q));
        }
    }
}

#[test]
fn parallel_chunks_cover_large_spaces() {
    let g = find("hamming74").matrix;
    let r = enumerate(&g, &big(7)).unwrap();
    assert_eq!(r.distribution.total(), big(7).pow(4));
    assert_eq!(r.kernel_size, big(1));
}

#[test]
fn budget_is_enforced() {
    let g = find("p8").matrix;
    assert!(matches!(enumerate_with(&g, &big(10), 9_999), Err(Error::Budget(_))));
    assert!(enumerate_with(&g, &big(10), 10_000).is_ok());
    assert_eq!(Error::Budget(String::new()).exit_code(), 3);
}
