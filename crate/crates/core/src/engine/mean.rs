//! Mean values `sum_m |r_s(m)|^2` over intervals, plus a brute-force oracle.

use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::amplitude::AmpValue;
use super::kernel::{build_table, AmpKind, EngineConfig, PointSet, PointWeights, RepTable, TableSpec};
use super::result::{MeanValueResult, Value};
use super::weights::WeightSeq;
use crate::error::{Error, Result};
use crate::polysys::PolynomialSystem;

/// Default cap on the number of `(x, y)` tuples visited by the oracle.
pub const ORACLE_CAP: u128 = 100_000_000;

pub fn system_points(sys: &PolynomialSystem, xs: &[i64]) -> Vec<Vec<BigInt>> {
    xs.iter().map(|&x| sys.eval(&BigInt::from(x))).collect()
}

fn check_interval(interval: (i64, i64)) -> Result<()> {
    if interval.1 < interval.0 {
        return Err(Error::input(format!("empty interval [{}, {}]", interval.0, interval.1)));
    }
    Ok(())
}

fn check_weights(interval: (i64, i64), w: &WeightSeq) -> Result<Vec<i64>> {
    let support = w.support();
    if support.iter().any(|&n| n < interval.0 || n > interval.1) {
        return Err(Error::input("weight support must lie inside the interval"));
    }
    Ok(support)
}

fn interval_points(
    sys: &PolynomialSystem,
    interval: (i64, i64),
    weights: Option<&WeightSeq>,
) -> Result<PointSet> {
    check_interval(interval)?;
    Ok(match weights {
        None => {
            let xs: Vec<i64> = (interval.0..=interval.1).collect();
            PointSet::unweighted(system_points(sys, &xs))
        }
        Some(w) => {
            let xs = check_weights(interval, w)?;
            PointSet {
                values: system_points(sys, &xs),
                weights: w.point_weights(&xs),
            }
        }
    })
}

/// Table of `r_s(m)` (or weighted amplitudes) for `x_i` in the interval.
pub fn build_rep_table(
    sys: &PolynomialSystem,
    interval: (i64, i64),
    s: usize,
    weights: Option<&WeightSeq>,
    cfg: &EngineConfig,
) -> Result<RepTable> {
    if s == 0 {
        return Err(Error::input("s must be a positive integer"));
    }
    let points = interval_points(sys, interval, weights)?;
    build_table(&TableSpec::single(sys.k(), None, points, s), cfg)
}

/// `sum_m |A(m)|^2` of a table, with an error bound for floating tables.
///
/// `l1` is the sum of `|a_n|` over the points, used only for the bound.
pub fn table_norm(table: &RepTable, l1: f64) -> (Value, Option<f64>) {
    let acc = table.norm();
    match table.kind() {
        AmpKind::Count | AmpKind::Gaussian => (Value::Integer(BigInt::from(acc.exact())), None),
        AmpKind::Float => {
            let sum = acc.float();
            let u = f64::EPSILON / 2.0;
            let n = table.summands() as f64 + table.records() as f64;
            let gamma = (n * u) / (1.0 - n * u).max(f64::MIN_POSITIVE);
            let t = l1.powi(table.summands() as i32);
            let bound = (2.0 * gamma + gamma * gamma) * t * t + sum.error_bound();
            (Value::Float(sum.value()), Some(bound))
        }
    }
}

/// Divides by `rho_0^{2s}`; the zero sequence normalizes to zero.
pub fn normalize_value(v: &Value, rho0_sq: &Value, s: usize) -> Value {
    match (v, rho0_sq) {
        (Value::Float(x), r) => {
            let r = r.to_f64();
            Value::Float(if r == 0.0 { 0.0 } else { x / r.powi(s as i32) })
        }
        (exact, r) => match (exact.as_rational(), r.as_rational()) {
            (Some(x), Some(r)) if !r.is_zero() => Value::Rational(x / r.pow(s as i32)),
            (Some(_), Some(_)) => Value::Rational(BigRational::zero()),
            _ => Value::Float(exact.to_f64() / r.to_f64().powi(s as i32)),
        },
    }
}

fn rho0_sq(interval: (i64, i64), weights: Option<&WeightSeq>) -> Value {
    match weights {
        None => Value::Integer(BigInt::from(interval.1 - interval.0 + 1)),
        Some(w) => match w.rho0_sq() {
            Some(r) => Value::Integer(BigInt::from(r)),
            None => Value::Float(w.rho0_sq_f64()),
        },
    }
}

fn l1(interval: (i64, i64), weights: Option<&WeightSeq>) -> f64 {
    match weights {
        None => (interval.1 - interval.0 + 1) as f64,
        Some(w) => (w.lo()..=w.hi()).map(|n| w.complex_at(n).norm()).sum(),
    }
}

/// `J_{s}` for the system over the interval, or its weighted analogue.
pub fn mean_value(
    sys: &PolynomialSystem,
    interval: (i64, i64),
    s: usize,
    weights: Option<&WeightSeq>,
    normalize: bool,
    cfg: &EngineConfig,
) -> Result<MeanValueResult> {
    let start = Instant::now();
    let table = build_rep_table(sys, interval, s, weights, cfg)?;
    let (mut value, mut bound) = table_norm(&table, l1(interval, weights));
    if normalize {
        let r = rho0_sq(interval, weights);
        value = normalize_value(&value, &r, s);
        bound = bound.map(|b| b / r.to_f64().powi(s as i32));
    }
    Ok(MeanValueResult {
        s,
        k: sys.k(),
        interval: [interval.0, interval.1],
        value,
        normalized: normalize,
        table_entries: table.len() as u64,
        elapsed_ms: start.elapsed().as_millis() as u64,
        error_bound: bound,
    })
}

/// Unweighted mean value with the variables restricted to an arbitrary point list.
pub fn mean_value_over(sys: &PolynomialSystem, xs: &[BigInt], s: usize, cfg: &EngineConfig) -> Result<BigUint> {
    if s == 0 {
        return Err(Error::input("s must be a positive integer"));
    }
    let values = xs.iter().map(|x| sys.eval(x)).collect();
    let table = build_table(&TableSpec::single(sys.k(), None, PointSet::unweighted(values), s), cfg)?;
    Ok(table.norm().exact())
}

enum OracleWeight {
    One,
    Exact(BigInt, BigInt),
    Float(Complex64),
}

/// Direct evaluation of `sum_{x,y} prod a_{x_i} conj(prod a_{y_i})` over all
/// ordered tuples whose component sums agree (modulo `modulus` when given).
pub fn oracle_sum(
    values: &[Vec<BigInt>],
    weights: &PointWeights,
    s: usize,
    modulus: Option<&BigInt>,
    cap: u128,
) -> Result<Value> {
    let n = values.len() as u128;
    let tuples = n.checked_pow(s as u32).unwrap_or(u128::MAX);
    let visits = tuples.saturating_mul(tuples);
    if visits > cap {
        return Err(Error::Resource {
            what: "oracle tuples",
            needed: visits,
            cap,
        });
    }
    let arity = values.first().map_or(0, Vec::len);
    let weight = |i: usize| match weights {
        PointWeights::Ones => OracleWeight::One,
        PointWeights::Gaussian(w) => OracleWeight::Exact(BigInt::from(w[i].re), BigInt::from(w[i].im)),
        PointWeights::Float(w) => OracleWeight::Float(w[i]),
    };
    let mut sums: Vec<(Vec<BigInt>, OracleWeight)> = Vec::with_capacity(tuples as usize);
    let mut idx = vec![0usize; s];
    if n > 0 {
        loop {
            let mut m = vec![BigInt::zero(); arity];
            let mut w = OracleWeight::One;
            for &i in &idx {
                for (acc, v) in m.iter_mut().zip(&values[i]) {
                    *acc += v;
                }
                w = match (w, weight(i)) {
                    (OracleWeight::One, b) => b,
                    (a, OracleWeight::One) => a,
                    (OracleWeight::Exact(a, b), OracleWeight::Exact(c, d)) => {
                        OracleWeight::Exact(&a * &c - &b * &d, &a * &d + &b * &c)
                    }
                    (OracleWeight::Float(a), OracleWeight::Float(b)) => OracleWeight::Float(a * b),
                    _ => unreachable!("mixed weight kinds"),
                };
            }
            if let Some(md) = modulus {
                for c in m.iter_mut() {
                    *c = crate::arith::mod_floor(c, md);
                }
            }
            sums.push((m, w));
            let mut pos = 0;
            loop {
                if pos == s {
                    break;
                }
                idx[pos] += 1;
                if idx[pos] < values.len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos == s {
                break;
            }
        }
    }
    let mut count = BigInt::zero();
    let mut re = BigInt::zero();
    let mut im = BigInt::zero();
    let mut fre = 0.0f64;
    let mut fim = 0.0f64;
    for (mx, wx) in &sums {
        for (my, wy) in &sums {
            if mx != my {
                continue;
            }
            match (wx, wy) {
                (OracleWeight::One, OracleWeight::One) => count += 1,
                (OracleWeight::Exact(a, b), OracleWeight::Exact(c, d)) => {
                    re += a * c + b * d;
                    im += b * c - a * d;
                }
                (OracleWeight::Float(a), OracleWeight::Float(b)) => {
                    let z = a * b.conj();
                    fre += z.re;
                    fim += z.im;
                }
                _ => unreachable!("mixed weight kinds"),
            }
        }
    }
    Ok(match weights {
        PointWeights::Ones => Value::Integer(count),
        PointWeights::Gaussian(_) => {
            debug_assert!(im.is_zero());
            Value::Integer(re)
        }
        PointWeights::Float(_) => {
            let _ = fim;
            Value::Float(fre)
        }
    })
}

/// Independent enumeration of every `(x, y)` tuple in the interval.
pub fn brute_force_mean_value(
    sys: &PolynomialSystem,
    interval: (i64, i64),
    s: usize,
    weights: Option<&WeightSeq>,
    normalize: bool,
    cap: u128,
) -> Result<MeanValueResult> {
    if s == 0 {
        return Err(Error::input("s must be a positive integer"));
    }
    check_interval(interval)?;
    let start = Instant::now();
    let xs: Vec<i64> = (interval.0..=interval.1).collect();
    let pw = match weights {
        None => PointWeights::Ones,
        Some(w) => {
            check_weights(interval, w)?;
            w.point_weights(&xs)
        }
    };
    let mut value = oracle_sum(&system_points(sys, &xs), &pw, s, None, cap)?;
    if normalize {
        value = normalize_value(&value, &rho0_sq(interval, weights), s);
    }
    Ok(MeanValueResult {
        s,
        k: sys.k(),
        interval: [interval.0, interval.1],
        value,
        normalized: normalize,
        table_entries: 0,
        elapsed_ms: start.elapsed().as_millis() as u64,
        error_bound: None,
    })
}

/// Amplitude as an exact Gaussian integer, when it is one.
pub fn amp_gaussian(a: &AmpValue) -> Option<(BigInt, BigInt)> {
    match a {
        AmpValue::Count(c) => Some((BigInt::from(c.clone()), BigInt::zero())),
        AmpValue::Gaussian(re, im) => Some((re.clone(), im.clone())),
        AmpValue::Float(_) => None,
    }
}

/// `(s!/prod mult!)^2` summed over multisets of size `s` from `n` points: the
/// mean value whenever equal power sums force equal multisets.
pub fn multiset_forcing_value(n: u64, s: usize) -> BigUint {
    fn rec(n: u64, left: usize, fact: &[BigUint], denom: BigUint, acc: &mut BigUint, s: usize) {
        if n == 0 {
            if left == 0 {
                let a = &fact[s] / denom;
                *acc += &a * &a;
            }
            return;
        }
        for m in 0..=left {
            rec(n - 1, left - m, fact, &denom * &fact[m], acc, s);
        }
    }
    let fact: Vec<BigUint> = (0..=s as u64).map(crate::arith::factorial).collect();
    let mut acc = BigUint::zero();
    rec(n, s, &fact, BigUint::one(), &mut acc, s);
    acc
}
