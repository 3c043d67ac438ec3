//! Exponent bookkeeping for Hua-type inequalities and Waring's problem.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::arith::isqrt;
use crate::error::{Error, Result};

/// Largest `d` accepted by the closed-form bounds.
pub const MAX_D: u64 = 1 << 31;
/// `waring_s0` minimizes over `d` candidates.
pub const MAX_D_S0: u64 = 1 << 20;

fn check_degrees(degrees: &[u64]) -> Result<()> {
    if degrees.is_empty() {
        return Err(Error::input("need at least one degree"));
    }
    if degrees.last() == Some(&0) || degrees.windows(2).any(|w| w[0] <= w[1]) {
        return Err(Error::input("degrees must be strictly decreasing and positive"));
    }
    Ok(())
}

/// `Delta_{r,d} = sum_i max(0, d_i - (r - i + 1))` for `d_1 > ... > d_k >= 1`.
pub fn delta_rd(r: u64, degrees: &[u64]) -> Result<u64> {
    check_degrees(degrees)?;
    Ok(degrees
        .iter()
        .enumerate()
        .map(|(i, &d)| {
            let shift = r as i128 - i as i128;
            (d as i128 - shift).max(0) as u64
        })
        .sum())
}

/// The exponent pair `(r(r+1)/2, r(r+1) - D + Delta_{r,d})` with `D = sum d_j`.
pub fn hua_exponent(r: u64, degrees: &[u64]) -> Result<(i64, i64)> {
    let delta = delta_rd(r, degrees)? as i64;
    let r = r as i64;
    let big_d: i64 = degrees.iter().map(|&d| d as i64).sum();
    Ok((r * (r + 1) / 2, r * (r + 1) - big_d + delta))
}

/// 1 when `2d + 2 >= m^2 + m` with `m = floor(sqrt(2d + 2))`, else 2.
pub fn theta_d(d: u64) -> Result<u8> {
    if d == 0 || d > MAX_D {
        return Err(Error::input(format!("d must lie in [1, {MAX_D}]")));
    }
    let n = 2 * d + 2;
    let m = isqrt(n);
    Ok(if n >= m * m + m { 1 } else { 2 })
}

/// `s_0 = d(d-1) + min_{0 <= m < d} (2d + m(m-1)) / (m+1)`.
pub fn waring_s0(d: u64) -> Result<BigRational> {
    if !(2..=MAX_D_S0).contains(&d) {
        return Err(Error::input(format!("d must lie in [2, {MAX_D_S0}]")));
    }
    let d = BigInt::from(d);
    let best = (0..d.to_u64().unwrap())
        .map(|m| {
            let m = BigInt::from(m);
            BigRational::new(&d * 2u8 + &m * (&m - 1u8), &m + 1u8)
        })
        .min()
        .unwrap();
    Ok(BigRational::from_integer(&d * (&d - 1u8)) + best)
}

/// `d^2 - d + 2 floor(sqrt(2d+2)) - theta(d)`.
pub fn gtilde_bound(d: u64) -> Result<u64> {
    if !(2..=MAX_D).contains(&d) {
        return Err(Error::input(format!("d must lie in [2, {MAX_D}]")));
    }
    let m = isqrt(2 * d + 2);
    Ok(d * d - d + 2 * m - theta_d(d)? as u64)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub d: u64,
    pub theta: u8,
    /// `s_0` as `p/q`.
    pub s0: String,
    pub s0_floor_plus_one: u64,
    pub gtilde_bound: u64,
}

pub fn bound_report(d: u64) -> Result<BoundReport> {
    let s0 = waring_s0(d)?;
    let fl = s0.numer().div_floor(s0.denom()).to_u64().unwrap() + 1;
    Ok(BoundReport {
        d,
        theta: theta_d(d)?,
        s0: format!("{}/{}", s0.numer(), s0.denom()),
        s0_floor_plus_one: fl,
        gtilde_bound: gtilde_bound(d)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn delta_examples() {
        for d in 1..12 {
            for r in 0..=d {
                assert_eq!(delta_rd(r, &[d]).unwrap(), d - r);
            }
            assert_eq!(delta_rd(d + 3, &[d]).unwrap(), 0);
        }
        for d in 3..12u64 {
            let mut prof = vec![d];
            prof.extend((2..d).map(|i| d - i));
            assert_eq!(delta_rd(d - 1, &prof).unwrap(), 1);
            assert_eq!(delta_rd(d, &prof).unwrap(), 0);
        }
        assert!(delta_rd(1, &[2, 2]).is_err());
        assert!(delta_rd(1, &[1, 2]).is_err());
        assert!(delta_rd(1, &[]).is_err());
    }

    #[test]
    fn hua_examples() {
        for d in 1..10i64 {
            for r in 0..=d {
                assert_eq!(hua_exponent(r as u64, &[d as u64]).unwrap().1, r * r);
            }
        }
        for k in 1..8u64 {
            let degs: Vec<u64> = (1..=k).rev().collect();
            let t = (k * (k + 1) / 2) as i64;
            assert_eq!(hua_exponent(k, &degs).unwrap(), (t, t));
        }
        assert_eq!(hua_exponent(6, &[5, 2]).unwrap(), (21, 42 - 7));
    }

    #[test]
    fn theta_examples() {
        assert_eq!(theta_d(10).unwrap(), 1);
        assert_eq!(theta_d(6).unwrap(), 1);
        assert_eq!(theta_d(7).unwrap(), 2);
        assert!(theta_d(0).is_err());
    }

    #[test]
    fn waring_examples() {
        assert_eq!(waring_s0(10).unwrap(), q(482, 5));
        let r = bound_report(10).unwrap();
        assert_eq!((r.s0_floor_plus_one, r.gtilde_bound), (97, 97));
        assert_eq!(waring_s0(2).unwrap(), q(4, 1));
        assert_eq!(waring_s0(4).unwrap(), q(12, 1) + q(10, 3));
        assert_eq!(bound_report(4).unwrap().s0_floor_plus_one, 16);
        assert!(waring_s0(1).is_err());
    }
}
