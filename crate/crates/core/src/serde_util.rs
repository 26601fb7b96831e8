//! Serialization helpers: big integers as decimal strings, floats at 17 significant digits.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::ser::SerializeSeq;
use serde::Serializer;
use serde_json::Number;

use crate::arith::IntPoly;

pub fn int_str<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub fn opt_int_str<S: Serializer>(x: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_str(&v.to_string()),
        None => s.serialize_none(),
    }
}

pub fn rat_str<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub fn poly_strs<S: Serializer>(p: &IntPoly, s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(p.coeffs().len()))?;
    for c in p.coeffs() {
        seq.serialize_element(&c.to_string())?;
    }
    seq.end()
}

/// A float as a JSON number with 17 significant digits (non-finite values become null).
pub fn number17(x: f64) -> Option<Number> {
    if !x.is_finite() {
        return None;
    }
    Number::from_str(&format!("{x:.16e}")).ok()
}

pub fn f64_17<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&number17(*x), s)
}

pub fn opt_f64_17<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&x.and_then(number17), s)
}

pub fn vec_f64_17<S: Serializer>(xs: &[f64], s: S) -> Result<S::Ok, S::Error> {
    let nums: Vec<Option<Number>> = xs.iter().map(|&x| number17(x)).collect();
    serde::Serialize::serialize(&nums, s)
}

/// `|x| <= 2^53` as a JSON number, anything larger as a decimal string.
pub fn json_int(x: &BigInt) -> serde_json::Value {
    if x.magnitude() <= &(num_bigint::BigUint::from(1u8) << 53) {
        serde_json::Value::Number(Number::from_str(&x.to_string()).expect("integer literal"))
    } else {
        serde_json::Value::String(x.to_string())
    }
}

pub fn int_json<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&json_int(x), s)
}

/// Integer from a JSON number or decimal string.
pub fn parse_json_int(v: &serde_json::Value) -> Option<BigInt> {
    match v {
        serde_json::Value::Number(n) => n.to_string().parse().ok(),
        serde_json::Value::String(s) => s.trim().parse().ok(),
        _ => None,
    }
}
