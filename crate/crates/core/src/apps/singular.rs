//! Truncated singular series and singular integral for the Vinogradov system.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::CompensatedSum;
use crate::error::{Error, Result};

/// Largest `Q` accepted by `singular_series`.
pub const MAX_Q: u64 = 200;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularSeries {
    pub k: usize,
    pub s: usize,
    pub q_max: u64,
    /// `partial_sums[q - 1]` is the sum over moduli up to `q`.
    pub partial_sums: Vec<f64>,
    pub value: f64,
}

impl SingularSeries {
    /// `S(q) - S(floor(q/2))`, the contribution of moduli in `(q/2, q]`.
    pub fn block_increment(&self, q: u64) -> Option<f64> {
        if q == 0 || q > self.q_max {
            return None;
        }
        let lo = if q >= 2 { self.partial_sums[(q / 2 - 1) as usize] } else { 0.0 };
        Some(self.partial_sums[(q - 1) as usize] - lo)
    }

    /// Per-modulus contributions.
    pub fn increments(&self) -> Vec<f64> {
        let mut prev = 0.0;
        self.partial_sums
            .iter()
            .map(|&v| {
                let d = v - prev;
                prev = v;
                d
            })
            .collect()
    }
}

/// `sum_{a mod q, gcd(q, a) = 1} |q^{-1} S(q, a)|^{2s}` with
/// `S(q, a) = sum_{x mod q} e((a_1 x + ... + a_k x^k) / q)`.
fn modulus_term(k: usize, s: usize, q: u64) -> f64 {
    let roots: Vec<Complex64> = (0..q).map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / q as f64)).collect();
    // powers[x][j-1] = x^j mod q
    let powers: Vec<Vec<u64>> = (0..q)
        .map(|x| {
            let mut p = 1u64;
            (0..k)
                .map(|_| {
                    p = p * x % q;
                    p
                })
                .collect()
        })
        .collect();
    let mut a = vec![0u64; k];
    let mut acc = CompensatedSum::default();
    loop {
        if a.iter().fold(q, |g, &x| g.gcd(&x)) == 1 {
            let mut re = CompensatedSum::default();
            let mut im = CompensatedSum::default();
            for px in &powers {
                let ph = a.iter().zip(px).fold(0u64, |t, (&ai, &xi)| (t + ai * xi) % q);
                re.add(roots[ph as usize].re);
                im.add(roots[ph as usize].im);
            }
            let norm = (re.value() * re.value() + im.value() * im.value()) / (q as f64 * q as f64);
            acc.add(norm.powi(s as i32));
        }
        let mut i = 0;
        loop {
            if i == k {
                return acc.value();
            }
            a[i] += 1;
            if a[i] < q {
                break;
            }
            a[i] = 0;
            i += 1;
        }
    }
}

/// Partial sums of the singular series over moduli `q <= q_max`.
pub fn singular_series(k: usize, s: usize, q_max: u64) -> Result<SingularSeries> {
    if k == 0 {
        return Err(Error::input("k must be positive"));
    }
    if 2 * s < k * (k + 1) / 2 + 2 {
        return Err(Error::input("the singular series needs 2s >= k(k+1)/2 + 2"));
    }
    if q_max == 0 || q_max > MAX_Q {
        return Err(Error::input(format!("Q must lie in [1, {MAX_Q}]")));
    }
    if (q_max as f64).powi(k as i32 + 1) > 1e11 {
        return Err(Error::input("Q^(k+1) exceeds the evaluation budget"));
    }
    let terms: Vec<f64> = (1..=q_max).into_par_iter().map(|q| modulus_term(k, s, q)).collect();
    let mut acc = CompensatedSum::default();
    let partial_sums: Vec<f64> = terms
        .iter()
        .map(|&t| {
            acc.add(t);
            acc.value()
        })
        .collect();
    Ok(SingularSeries {
        k,
        s,
        q_max,
        value: acc.value(),
        partial_sums,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularIntegral {
    pub k: usize,
    pub s: usize,
    pub half_width: f64,
    pub points: usize,
    pub estimate: f64,
    /// Change from halving the box.
    pub truncation_delta: f64,
    /// Change from halving the number of grid intervals.
    pub refinement_delta: f64,
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    (1..=n)
        .map(|i| {
            let mut x = (PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for j in 2..=n {
                    let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

struct Inner {
    rule: Vec<(f64, f64)>,
}

impl Inner {
    fn panels(&self, beta: &[f64], n: usize) -> Complex64 {
        let h = 1.0 / n as f64;
        let mut re = CompensatedSum::default();
        let mut im = CompensatedSum::default();
        for p in 0..n {
            let mid = (p as f64 + 0.5) * h;
            for &(x, w) in &self.rule {
                let g = mid + 0.5 * h * x;
                let phase = beta.iter().rev().fold(0.0, |acc, b| (acc + b) * g);
                let z = Complex64::from_polar(0.5 * h * w, 2.0 * PI * phase);
                re.add(z.re);
                im.add(z.im);
            }
        }
        Complex64::new(re.value(), im.value())
    }

    /// `int_0^1 e(beta_1 g + ... + beta_k g^k) dg`, doubling the panel count
    /// until the relative change is below `1e-10` (absolute `1e-14` near zeros).
    fn integral(&self, beta: &[f64]) -> Complex64 {
        let spread: f64 = beta.iter().enumerate().map(|(j, b)| b.abs() * (j + 1) as f64).sum();
        let mut n = (spread.ceil() as usize).max(1);
        let mut prev = self.panels(beta, n);
        for _ in 0..12 {
            n *= 2;
            let cur = self.panels(beta, n);
            if (cur - prev).norm() <= (1e-10 * cur.norm()).max(1e-14) {
                return cur;
            }
            prev = cur;
        }
        prev
    }
}

fn tensor_trapezoid(inner: &Inner, k: usize, s: usize, half_width: f64, intervals: usize) -> f64 {
    if half_width == 0.0 {
        return 0.0;
    }
    let m = intervals + 1;
    let h = 2.0 * half_width / intervals as f64;
    let total = (m as u128).pow(k as u32) as usize;
    let parts: Vec<f64> = (0..total)
        .into_par_iter()
        .map(|mut idx| {
            let mut beta = Vec::with_capacity(k);
            let mut w = 1.0;
            for _ in 0..k {
                let i = idx % m;
                idx /= m;
                beta.push(-half_width + i as f64 * h);
                if i == 0 || i == intervals {
                    w *= 0.5;
                }
            }
            w * inner.integral(&beta).norm().powi(2 * s as i32)
        })
        .collect();
    let mut acc = CompensatedSum::default();
    parts.iter().for_each(|&v| acc.add(v));
    acc.value() * h.powi(k as i32)
}

/// Trapezoid estimate of `int_{[-L, L]^k} |I(beta)|^{2s} d beta` on a grid
/// with `points` nodes per axis.
pub fn singular_integral(k: usize, s: usize, half_width: f64, points: usize) -> Result<SingularIntegral> {
    if k == 0 {
        return Err(Error::input("k must be positive"));
    }
    if 2 * s < k * (k + 1) / 2 + 1 {
        return Err(Error::input("the singular integral needs 2s >= k(k+1)/2 + 1"));
    }
    if !(half_width >= 0.0 && half_width.is_finite()) {
        return Err(Error::input("box half-width must be finite and nonnegative"));
    }
    if points < 3 {
        return Err(Error::input("need at least three grid points per axis"));
    }
    if (points as f64).powi(k as i32) > 1e8 {
        return Err(Error::input("grid exceeds 1e8 nodes"));
    }
    let inner = Inner { rule: gauss_legendre(10) };
    let intervals = points - 1;
    let estimate = tensor_trapezoid(&inner, k, s, half_width, intervals);
    let coarse = tensor_trapezoid(&inner, k, s, half_width, intervals.div_ceil(2));
    let half_box = tensor_trapezoid(&inner, k, s, half_width / 2.0, intervals.div_ceil(2));
    Ok(SingularIntegral {
        k,
        s,
        half_width,
        points,
        estimate,
        truncation_delta: (estimate - half_box).abs(),
        refinement_delta: (estimate - coarse).abs(),
    })
}
