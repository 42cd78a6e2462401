//! Serde helpers: integers are written as JSON numbers when they fit in
//! `u64`/`i64` and as decimal strings otherwise; both forms are accepted.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serializer};
use serde_json::Value;

pub fn bigint_to_value(v: &BigInt) -> Value {
    if let Some(u) = v.to_u64() {
        Value::from(u)
    } else if let Some(i) = v.to_i64() {
        Value::from(i)
    } else {
        Value::from(v.to_string())
    }
}

pub fn bigint_from_value(v: &Value) -> Option<BigInt> {
    match v {
        Value::Number(n) => n
            .as_u64()
            .map(BigInt::from)
            .or_else(|| n.as_i64().map(BigInt::from)),
        Value::String(s) => s.trim().parse().ok(),
        _ => None,
    }
}

pub mod big_int {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        serde::Serialize::serialize(&bigint_to_value(v), s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let v = Value::deserialize(d)?;
        bigint_from_value(&v).ok_or_else(|| D::Error::custom(format!("expected an integer, got {v}")))
    }
}

pub mod big_ints {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(bigint_to_value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let raw = Vec::<Value>::deserialize(d)?;
        raw.iter()
            .map(|v| {
                bigint_from_value(v)
                    .ok_or_else(|| D::Error::custom(format!("expected an integer, got {v}")))
            })
            .collect()
    }
}

pub mod big_int_rows {
    use super::*;

    pub fn serialize<S: Serializer>(rows: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(
            rows.iter()
                .map(|r| r.iter().map(bigint_to_value).collect::<Vec<_>>()),
        )
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigInt>>, D::Error> {
        let raw = Vec::<Vec<Value>>::deserialize(d)?;
        raw.iter()
            .map(|r| {
                r.iter()
                    .map(|v| {
                        bigint_from_value(v).ok_or_else(|| {
                            D::Error::custom(format!("expected an integer, got {v}"))
                        })
                    })
                    .collect()
            })
            .collect()
    }
}
