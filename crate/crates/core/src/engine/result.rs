//! Mean-value results and their JSON form.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exact integer, an exact rational, or a double.
///
/// Serialized as a string: `"123"`, `"7/9"` (always with a denominator),
/// or a shortest round-trip float such as `"1.5"` or `"2e-7"`.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Integer(BigInt),
    Rational(BigRational),
    Float(f64),
}

impl Value {
    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Integer(v) => v.to_f64().unwrap_or(f64::INFINITY),
            Value::Rational(r) => r.to_f64().unwrap_or(f64::NAN),
            Value::Float(f) => *f,
        }
    }

    pub fn as_integer(&self) -> Option<&BigInt> {
        match self {
            Value::Integer(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match self {
            Value::Integer(v) => Some(BigRational::from_integer(v.clone())),
            Value::Rational(r) => Some(r.clone()),
            Value::Float(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Value::Integer(v) => v.is_zero(),
            Value::Rational(r) => r.is_zero(),
            Value::Float(f) => *f == 0.0,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Integer(v) => write!(f, "{v}"),
            Value::Rational(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Value::Float(x) => write!(f, "{x:?}"),
        }
    }
}

impl FromStr for Value {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::input(format!("not a value: {s:?}"));
        if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n.parse().map_err(|_| bad())?;
            let d: BigInt = d.parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            return Ok(Value::Rational(BigRational::new(n, d)));
        }
        if let Ok(v) = s.parse::<BigInt>() {
            return Ok(Value::Integer(v));
        }
        s.parse::<f64>().map(Value::Float).map_err(|_| bad())
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Value {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanValueResult {
    pub s: usize,
    pub k: usize,
    pub interval: [i64; 2],
    pub value: Value,
    pub normalized: bool,
    pub table_entries: u64,
    pub elapsed_ms: u64,
    /// Worst-case absolute error, present for floating results only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error_bound: Option<f64>,
}

impl MeanValueResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("result serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::input(format!("result json: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_round_trip_through_strings() {
        let cases = [
            Value::Integer(BigInt::from(10).pow(40)),
            Value::Rational(BigRational::new(BigInt::from(6), BigInt::from(3))),
            Value::Rational(BigRational::new(BigInt::from(-7), BigInt::from(9))),
            Value::Float(1.0),
            Value::Float(2.5e-300),
        ];
        for v in cases {
            assert_eq!(v.to_string().parse::<Value>().unwrap(), v);
        }
        assert_eq!(Value::Rational(BigRational::from_integer(BigInt::from(2))).to_string(), "2/1");
    }

    #[test]
    fn result_json_uses_decimal_strings() {
        let r = MeanValueResult {
            s: 3,
            k: 2,
            interval: [1, 2],
            value: Value::Integer(BigInt::from(20)),
            normalized: false,
            table_entries: 7,
            elapsed_ms: 0,
            error_bound: None,
        };
        let j = r.to_json();
        assert!(j.contains("\"value\":\"20\""), "{j}");
        assert_eq!(MeanValueResult::from_json(&j).unwrap(), r);
    }
}
