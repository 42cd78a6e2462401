#![allow(dead_code)]

use std::collections::BTreeMap;

use quasiweight::exact::parse_rational;
use quasiweight::{BigInt, IntegerMatrix, UniPoly};
use serde_json::Value;

pub struct Golden {
    pub name: String,
    pub matrix: IntegerMatrix,
    pub rho0: BigInt,
    /// class -> [f_0, ..., f_n]
    pub constituents: BTreeMap<BigInt, Vec<UniPoly>>,
}

pub fn golden() -> Vec<Golden> {
    let text = include_str!("../fixtures/golden.json");
    let root: BTreeMap<String, Value> = serde_json::from_str(text).expect("fixture parses");
    let order = [
        "ex2004", "b2_skew", "b2_double", "hamming74", "exham_n4", "simplex_z3", "kerdock_k2",
        "cycle4", "kerdock_k4", "p8", "z5",
    ];
    order
        .iter()
        .map(|&name| {
            let e = &root[name];
            let matrix: IntegerMatrix = serde_json::from_value(e["matrix"].clone()).unwrap();
            let rho0 = BigInt::from(e["rho0"].as_u64().unwrap());
            let constituents = e["constituents"]
                .as_object()
                .unwrap()
                .iter()
                .map(|(m, rows)| {
                    let fs = rows
                        .as_array()
                        .unwrap()
                        .iter()
                        .map(|cs| {
                            UniPoly::from_coeffs(
                                cs.as_array()
                                    .unwrap()
                                    .iter()
                                    .map(|c| parse_rational(c.as_str().unwrap()).unwrap())
                                    .collect(),
                            )
                        })
                        .collect();
                    (m.parse().unwrap(), fs)
                })
                .collect();
            Golden {
                name: name.to_string(),
                matrix,
                rho0,
                constituents,
            }
        })
        .collect()
}

pub fn find(name: &str) -> Golden {
    golden().into_iter().find(|g| g.name == name).expect("known example")
}

pub fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn matrix(rows: &[&[i64]]) -> IntegerMatrix {
    IntegerMatrix::from_i64(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
}
