mod common;

use common::{big, find, golden, matrix};
use num_integer::Integer;
use quasiweight::exact::divisors;
use quasiweight::families::{generator, FamilyTag};
use quasiweight::oracle::enumerate;
use quasiweight::quasi::{
    characteristic_quasi, degree_ladder, minimum_period, weight_census, weight_distribution,
    weight_enumerator, weight_quasi,
};
use quasiweight::{build_profile, BigInt, Rational, UniPoly, WeightQuasi, WeightSource};

fn poly(cs: &[i64]) -> UniPoly {
    UniPoly::from_coeffs(cs.iter().map(|&c| Rational::from_integer(big(c))).collect())
}

#[test]
fn constituents_match_printed_tables() {
    for g in golden() {
        let p = build_profile(&g.matrix).unwrap();
        assert_eq!(p.rho0(), &g.rho0, "{}", g.name);
        let wq = weight_quasi(&p).unwrap();
        let classes: Vec<BigInt> = wq.classes().cloned().collect();
        assert_eq!(classes, g.constituents.keys().cloned().collect::<Vec<_>>(), "{}", g.name);
        for (m, expected) in &g.constituents {
            assert_eq!(wq.constituents(m).unwrap(), expected.as_slice(), "{} class {m}", g.name);
        }
    }
}

#[test]
fn distributions_agree_with_enumeration() {
    for g in golden() {
        let p = build_profile(&g.matrix).unwrap();
        let wq = weight_quasi(&p).unwrap();
        for q in 1..=8 {
            let q = big(q);
            let oracle = enumerate(&g.matrix, &q).unwrap();
            assert_eq!(weight_distribution(&wq, &q).unwrap(), oracle.distribution, "{} q={q}", g.name);
            assert_eq!(oracle.kernel_size, p.kernel_size(&q));
        }
    }
}

#[test]
fn periods_and_structure() {
    for g in golden() {
        let p = build_profile(&g.matrix).unwrap();
        let wq = weight_quasi(&p).unwrap();
        assert_eq!(wq.minimum_period(), g.rho0, "{}", g.name);
        for i in 0..=p.n() {
            let d = minimum_period(&wq.weight_poly(i));
            assert!(g.rho0.is_multiple_of(&d));
        }
        for m in divisors(&g.rho0) {
            let fs = wq.constituents(&m).unwrap();
            assert_eq!(fs[0], UniPoly::one());
            let ladder = degree_ladder(&p, &wq, &m).unwrap();
            assert_eq!(ladder.len(), p.full_rank() + 1);
            assert_eq!(ladder[0], 0);
        }
        let chi = characteristic_quasi(&p, &wq).unwrap();
        assert!(chi.constituents().all(|(_, c)| c.is_monic()));
    }
}

#[test]
fn census_agrees_with_transform() {
    for g in golden() {
        let p = build_profile(&g.matrix).unwrap();
        let wq = weight_quasi(&p).unwrap();
        let census = weight_census(&p);
        assert_eq!(census.materialize(64).unwrap(), wq, "{}", g.name);
        // gcd property: q and q + ρ₀ select the same constituents
        for q in 1..=6 {
            let q = big(q);
            let shifted = &q + &g.rho0;
            assert_eq!(census.constituents(&q), census.constituents(&shifted));
        }
    }
}

#[test]
fn reduction_keeps_weights() {
    for g in golden() {
        let p = build_profile(&g.matrix).unwrap();
        let wq = weight_quasi(&p).unwrap();
        for m in 1..=6i64 {
            for mult in 2..=3 {
                let small = weight_distribution(&wq, &big(m)).unwrap().support();
                let large = weight_distribution(&wq, &big(m * mult)).unwrap().support();
                assert!(small.iter().all(|i| large.contains(i)), "{} {m}", g.name);
            }
        }
    }
}

#[test]
fn spec_enumerators() {
    let k4 = build_profile(&find("kerdock_k4").matrix).unwrap();
    let w = weight_enumerator(&weight_quasi(&k4).unwrap(), &big(3)).unwrap();
    assert_eq!(w.display_with("x", "y"), "x^4 + 12*x^2*y^2 + 8*x*y^3 + 6*y^4");

    let c4 = build_profile(&find("cycle4").matrix).unwrap();
    let wq = weight_quasi(&c4).unwrap();
    let w = weight_enumerator(&wq, &big(2)).unwrap();
    assert_eq!(w.display_with("x", "y"), "x^4 + 6*x^2*y^2 + y^4");
    assert_eq!(weight_enumerator(&wq, &big(1)).unwrap().display_with("x", "y"), "x^4");
}

#[test]
fn characteristic_examples() {
    let n4 = build_profile(&find("exham_n4").matrix).unwrap();
    let wq = weight_quasi(&n4).unwrap();
    let chi = characteristic_quasi(&n4, &wq).unwrap();
    let expected = &poly(&[-1, 1]) * &poly(&[-25, 21, -7, 1]);
    assert_eq!(chi.constituent(&big(1)).unwrap(), &expected);
    assert_eq!(minimum_period(&chi), big(6));

    let doubled = build_profile(&matrix(&[&[2, 0], &[0, 2]])).unwrap();
    let chi = characteristic_quasi(&doubled, &weight_quasi(&doubled).unwrap()).unwrap();
    assert_eq!(chi.constituent(&big(1)).unwrap(), &poly(&[1, -2, 1]));
    for q in [3, 5, 7] {
        assert_eq!(chi.eval(&big(q)), Rational::from_integer(big((q - 1) * (q - 1))));
    }
}

#[test]
fn degree_ladder_of_z5_climbs() {
    let spec = generator(FamilyTag::Z, 5).unwrap();
    let p = build_profile(&spec.generator).unwrap();
    assert_eq!(p.rho0(), &big(12));
    let wq = weight_quasi(&p).unwrap();
    let ladder = degree_ladder(&p, &wq, &big(2)).unwrap();
    assert_eq!(ladder.len(), 6);
    let fs = wq.constituents(&big(2)).unwrap();
    let degrees: Vec<Option<usize>> = fs.iter().map(UniPoly::degree).collect();
    assert!(degrees.windows(2).any(|w| w[0] > w[1]), "degrees are not monotone: {degrees:?}");
}

#[test]
fn profile_examples() {
    let n4 = build_profile(&find("exham_n4").matrix).unwrap();
    assert_eq!(n4.kernel_size(&big(6)), big(1));
    assert_eq!(n4.h_subgroup_size(0, &big(5)), big(625));
    assert_eq!(build_profile(&find("p8").matrix).unwrap().rho0(), &big(4));
}

#[test]
fn json_round_trip() {
    let p = build_profile(&find("ex2004").matrix).unwrap();
    let wq = weight_quasi(&p).unwrap();
    let text = serde_json::to_string(&wq).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["rho0"], 4);
    assert_eq!(v["weights"][1]["constituents"]["2"], serde_json::json!(["-2", "1"]));
    let back: WeightQuasi = serde_json::from_str(&text).unwrap();
    assert_eq!(back, wq);
    let d = weight_distribution(&back, &big(4)).unwrap();
    let back_d = serde_json::from_str(&serde_json::to_string(&d).unwrap()).unwrap();
    assert_eq!(d, back_d);
    assert_eq!(back.rank(), 2);
}
