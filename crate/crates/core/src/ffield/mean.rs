//! Counting solutions of power-sum systems over `F_q[t]`.

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::field::{FqBox, FqPoly, FqPolyRing, GaloisField};
use crate::engine::fit::{conjectured_exponent, fit_loglog, FitReport};
use crate::engine::kernel::{build_table, EngineConfig, PointSet, TableSpec};
use crate::error::{Error, Result};
use crate::ring::bareiss_det;

/// Polynomials `phi_j(x)` with coefficients in `F_q[t]`, listed by power of `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FfSystem {
    ring: FqPolyRing,
    polys: Vec<Vec<FqPoly>>,
}

impl FfSystem {
    pub fn new(field: GaloisField, polys: Vec<Vec<FqPoly>>) -> Result<Self> {
        if polys.is_empty() {
            return Err(Error::input("system needs at least one polynomial"));
        }
        let q = field.q();
        let polys: Vec<Vec<FqPoly>> = polys
            .into_iter()
            .map(|mut p| {
                while p.last().is_some_and(|c| c.is_zero()) {
                    p.pop();
                }
                p
            })
            .collect();
        if polys.iter().flatten().flat_map(|c| c.coeffs()).any(|&c| c >= q) {
            return Err(Error::input(format!("coefficients must lie in [0, {q})")));
        }
        Ok(FfSystem {
            ring: FqPolyRing::new(field),
            polys,
        })
    }

    /// `(x, x^2, ..., x^k)`.
    pub fn vinogradov(field: GaloisField, k: usize) -> Self {
        let polys = (1..=k)
            .map(|j| {
                let mut p = vec![FqPoly::zero(); j + 1];
                p[j] = FqPoly::constant(1);
                p
            })
            .collect();
        FfSystem {
            ring: FqPolyRing::new(field),
            polys,
        }
    }

    pub fn k(&self) -> usize {
        self.polys.len()
    }

    pub fn field(&self) -> &GaloisField {
        self.ring.field()
    }

    pub fn ring(&self) -> &FqPolyRing {
        &self.ring
    }

    pub fn polys(&self) -> &[Vec<FqPoly>] {
        &self.polys
    }

    pub fn eval(&self, x: &FqPoly) -> Vec<FqPoly> {
        self.polys
            .iter()
            .map(|p| {
                p.iter()
                    .rev()
                    .fold(FqPoly::zero(), |acc, c| self.ring.add(&self.ring.mul(&acc, x), c))
            })
            .collect()
    }

    /// Degree in `t` of `phi_j(x)` for `deg x <= d`, bounded above.
    fn value_degree(&self, j: usize, d: usize) -> usize {
        self.polys[j]
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.degree().map(|g| g + i * d))
            .max()
            .unwrap_or(0)
    }

    /// The system `phi_j(alpha x + beta)`.
    pub fn compose_affine(&self, alpha: &FqPoly, beta: &FqPoly) -> FfSystem {
        let r = &self.ring;
        let lin = [beta.clone(), alpha.clone()];
        let polys = self
            .polys
            .iter()
            .map(|p| {
                p.iter().rev().fold(Vec::<FqPoly>::new(), |acc, c| {
                    // acc * lin + c
                    let mut out = vec![FqPoly::zero(); acc.len() + 1];
                    for (i, a) in acc.iter().enumerate() {
                        for (j, l) in lin.iter().enumerate() {
                            out[i + j] = r.add(&out[i + j], &r.mul(a, l));
                        }
                    }
                    out[0] = r.add(&out[0], c);
                    while out.last().is_some_and(|c| c.is_zero()) {
                        out.pop();
                    }
                    out
                })
            })
            .collect();
        FfSystem {
            ring: self.ring.clone(),
            polys,
        }
    }

    fn x_derivative(&self, p: &[FqPoly]) -> Vec<FqPoly> {
        let f = self.field();
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| self.ring.scale(c, f.from_int(i as i64)))
            .collect()
    }

    /// Whether the Wronskian in `x` vanishes identically over `F_q(t)`.
    ///
    /// Entries of `F_q[t][x]` are mapped to `F_q[z]` by `x -> z`, `t -> z^N`
    /// with `N` above every minor's `x`-degree, which keeps Bareiss exact.
    pub fn wronskian_is_zero(&self) -> bool {
        let k = self.k();
        let mut rows: Vec<Vec<Vec<FqPoly>>> = Vec::with_capacity(k);
        let mut cur = self.polys.clone();
        for _ in 0..k {
            cur = cur.iter().map(|p| self.x_derivative(p)).collect();
            rows.push(cur.clone());
        }
        let max_x = self.polys.iter().map(|p| p.len()).max().unwrap_or(0);
        let n = k * max_x + 1;
        let kron = |p: &[FqPoly]| {
            let mut z = Vec::new();
            for (i, c) in p.iter().enumerate() {
                for (a, &v) in c.coeffs().iter().enumerate() {
                    let idx = a * n + i;
                    if z.len() <= idx {
                        z.resize(idx + 1, 0);
                    }
                    z[idx] = v;
                }
            }
            FqPoly::new(z)
        };
        let matrix: Vec<Vec<FqPoly>> = rows.iter().map(|row| row.iter().map(|p| kron(p)).collect()).collect();
        bareiss_det(&self.ring, matrix).is_zero()
    }

    fn check(&self) -> Result<()> {
        if self.field().characteristic() as usize <= self.k() {
            return Err(Error::input(format!(
                "need characteristic > k, got p = {} and k = {}",
                self.field().characteristic(),
                self.k()
            )));
        }
        if self.wronskian_is_zero() {
            return Err(Error::input("the Wronskian of the system vanishes identically"));
        }
        Ok(())
    }
}

/// `N_{s,phi}(d, q)`: solutions of `sum phi_j(x_i) = sum phi_j(y_i)` with all
/// variables in `O_d`.
pub fn ff_mean_value(sys: &FfSystem, d: u32, s: usize, cfg: &EngineConfig) -> Result<BigUint> {
    sys.check()?;
    if s == 0 {
        return Err(Error::input("s must be positive"));
    }
    let field = sys.field();
    let bx = FqBox::new(field.q(), d);
    let n = bx
        .len()
        .filter(|&n| (n as u128) * (sys.k() as u128) <= cfg.memory_cap)
        .ok_or(Error::Resource {
            what: "function-field box",
            needed: u128::MAX,
            cap: cfg.memory_cap,
        })?;
    let degs: Vec<usize> = (0..sys.k()).map(|j| sys.value_degree(j, d as usize)).collect();
    let arity: usize = degs.iter().map(|g| (g + 1) * field.degree() as usize).sum();
    let values: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let vals = sys.eval(&bx.get(i));
            let mut key = Vec::with_capacity(arity);
            for (v, &g) in vals.iter().zip(&degs) {
                for a in 0..=g {
                    key.extend(field.digits(v.coeff(a)).into_iter().map(BigInt::from));
                }
            }
            key
        })
        .collect();
    let spec = TableSpec::single(arity, Some(BigInt::from(field.p())), PointSet::unweighted(values), s);
    Ok(build_table(&spec, cfg)?.norm().exact())
}

/// Pairwise comparison of all ordered `s`-tuples; at most `cap` comparisons.
pub fn ff_brute_force(sys: &FfSystem, d: u32, s: usize, cap: u128) -> Result<BigUint> {
    sys.check()?;
    let bx = FqBox::new(sys.field().q(), d);
    let n = bx.len().ok_or_else(|| Error::input("box too large"))?;
    let tuples = (n as u128).checked_pow(s as u32).unwrap_or(u128::MAX);
    if tuples.saturating_mul(tuples) > cap {
        return Err(Error::Resource {
            what: "brute-force tuple pairs",
            needed: tuples.saturating_mul(tuples),
            cap,
        });
    }
    let vals: Vec<Vec<FqPoly>> = (0..n).map(|i| sys.eval(&bx.get(i))).collect();
    let r = sys.ring();
    let mut sums = Vec::with_capacity(tuples as usize);
    for mut t in 0..tuples as usize {
        let mut acc = vec![FqPoly::zero(); sys.k()];
        for _ in 0..s {
            let v = &vals[t % n];
            t /= n;
            for (a, b) in acc.iter_mut().zip(v) {
                *a = r.add(a, b);
            }
        }
        sums.push(acc);
    }
    let mut count = 0u64;
    for a in &sums {
        for b in &sums {
            if a == b {
                count += 1;
            }
        }
    }
    Ok(BigUint::from(count))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FfExponentReport {
    pub q: u32,
    pub k: usize,
    pub s: usize,
    pub counts: Vec<(u32, String)>,
    /// Fit against `q^d`.
    pub against_qd: FitReport,
    /// Fit against `|O_d| = q^{d+1}`.
    pub against_box: FitReport,
}

/// Growth exponent of the Vinogradov count over `F_q[t]` as `d` varies.
pub fn ff_exponent_probe(q: u32, k: usize, s: usize, dlist: &[u32], cfg: &EngineConfig) -> Result<FfExponentReport> {
    let field = GaloisField::new(q)?;
    let sys = FfSystem::vinogradov(field, k);
    let mut counts = Vec::with_capacity(dlist.len());
    let mut qd = Vec::with_capacity(dlist.len());
    let mut qd1 = Vec::with_capacity(dlist.len());
    for &d in dlist {
        let c = ff_mean_value(&sys, d, s, cfg)?;
        let y = c.to_f64().unwrap_or(f64::INFINITY);
        qd.push(((q as f64).powi(d as i32), y));
        qd1.push(((q as f64).powi(d as i32 + 1), y));
        counts.push((d, c.to_string()));
    }
    let conj = conjectured_exponent(s, k);
    Ok(FfExponentReport {
        q,
        k,
        s,
        counts,
        against_qd: fit_loglog(&qd, conj)?,
        against_box: fit_loglog(&qd1, conj)?,
    })
}
