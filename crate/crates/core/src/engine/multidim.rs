//! Systems of forms in several variables, including restriction of scalars
//! from a quadratic ring `Z[sqrt D]` down to `Z`.

use std::fmt;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::kernel::{build_table, EngineConfig, PointSet, PointWeights, TableSpec};
use super::mean::{oracle_sum, table_norm};
use super::result::{MeanValueResult, Value};
use crate::arith::binomial;
use crate::error::{Error, Result};

/// Integer polynomial in `n` variables as a sorted list of terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    n: usize,
    terms: Vec<(Vec<u32>, BigInt)>,
}

impl MultiPoly {
    pub fn new(n: usize, mut terms: Vec<(Vec<u32>, BigInt)>) -> Self {
        terms.retain(|t| !t.1.is_zero());
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<(Vec<u32>, BigInt)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            assert_eq!(e.len(), n, "exponent arity");
            match out.last_mut() {
                Some(last) if last.0 == e => last.1 += c,
                _ => out.push((e, c)),
            }
        }
        out.retain(|t| !t.1.is_zero());
        MultiPoly { n, terms: out }
    }

    pub fn terms(&self) -> &[(Vec<u32>, BigInt)] {
        &self.terms
    }

    pub fn eval(&self, x: &[BigInt]) -> BigInt {
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut v = c.clone();
                for (xi, &ei) in x.iter().zip(e) {
                    v *= xi.pow(ei);
                }
                v
            })
            .sum()
    }

    pub fn content(&self) -> BigInt {
        self.terms.iter().fold(BigInt::zero(), |g, t| g.gcd(&t.1))
    }

    /// Divides by the content, leaving a positive leading coefficient.
    pub fn primitive(&self) -> Self {
        let mut g = self.content();
        if g.is_zero() {
            return self.clone();
        }
        if self.terms[0].1.is_negative() {
            g = -g;
        }
        MultiPoly {
            n: self.n,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c / &g)).collect(),
        }
    }
}

const VARS: [&str; 6] = ["x", "y", "z", "u", "v", "w"];

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0)
                .map(|(v, &p)| {
                    let name = VARS.get(v).map_or_else(|| format!("x{v}"), |s| s.to_string());
                    if p == 1 {
                        name
                    } else {
                        format!("{name}^{p}")
                    }
                })
                .collect();
            if mono.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{a}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

/// An `n x k` array of forms `psi_{l,j}` in `n` variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiDimSystem {
    n: usize,
    forms: Vec<Vec<MultiPoly>>,
}

impl MultiDimSystem {
    pub fn new(n: usize, forms: Vec<Vec<MultiPoly>>) -> Result<Self> {
        if n == 0 || forms.len() != n {
            return Err(Error::input("need one row of forms per variable"));
        }
        let k = forms[0].len();
        if k == 0 || forms.iter().any(|row| row.len() != k || row.iter().any(|p| p.n != n)) {
            return Err(Error::input("form array must be n x k with matching arity"));
        }
        Ok(MultiDimSystem { n, forms })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.forms[0].len()
    }

    /// `forms()[l][j]` is the `l`-th component of the degree `j+1` layer.
    pub fn forms(&self) -> &[Vec<MultiPoly>] {
        &self.forms
    }

    /// Every form divided by its content. Solution counts over the integers
    /// are unchanged since each equation is only rescaled.
    pub fn primitive_forms(&self) -> Self {
        MultiDimSystem {
            n: self.n,
            forms: self
                .forms
                .iter()
                .map(|row| row.iter().map(MultiPoly::primitive).collect())
                .collect(),
        }
    }

    /// The `n k` form values at a point, layer by layer.
    pub fn eval(&self, x: &[BigInt]) -> Vec<BigInt> {
        let mut out = Vec::with_capacity(self.n * self.k());
        for j in 0..self.k() {
            for row in &self.forms {
                out.push(row[j].eval(x));
            }
        }
        out
    }
}

fn is_squarefree(d: i64) -> bool {
    let d = d.unsigned_abs();
    let mut f = 2u64;
    while f * f <= d {
        if d.is_multiple_of(f * f) {
            return false;
        }
        f += 1;
    }
    true
}

/// Expands `(x + y sqrt D)^j = phi_j + psi_j sqrt D` for `j = 1..k`.
pub fn multidim_from_quadratic(d: i64, k: usize) -> Result<MultiDimSystem> {
    if d == 0 || d == 1 {
        return Err(Error::input("D must differ from 0 and 1"));
    }
    if !is_squarefree(d) {
        return Err(Error::input(format!("D = {d} is not squarefree")));
    }
    if k == 0 {
        return Err(Error::input("k must be positive"));
    }
    let dd = BigInt::from(d);
    let mut phi = Vec::with_capacity(k);
    let mut psi = Vec::with_capacity(k);
    for j in 1..=k as u32 {
        let mut even = Vec::new();
        let mut odd = Vec::new();
        for i in 0..=j {
            let c = BigInt::from(binomial(j as u64, i as u64)) * dd.pow(i / 2);
            let term = (vec![j - i, i], c);
            if i % 2 == 0 {
                even.push(term);
            } else {
                odd.push(term);
            }
        }
        phi.push(MultiPoly::new(2, even));
        psi.push(MultiPoly::new(2, odd));
    }
    MultiDimSystem::new(2, vec![phi, psi])
}

/// Checks `(x + y sqrt D)^j` computed by repeated multiplication in `Z[sqrt D]`
/// against the forms at one point.
pub fn restriction_identity_holds(msys: &MultiDimSystem, d: i64, x: i64, y: i64) -> bool {
    let (x, y, d) = (BigInt::from(x), BigInt::from(y), BigInt::from(d));
    let (mut a, mut b) = (BigInt::one(), BigInt::zero());
    let pt = [x.clone(), y.clone()];
    for j in 0..msys.k() {
        let na = &a * &x + &b * &d * &y;
        let nb = &a * &y + &b * &x;
        a = na;
        b = nb;
        if msys.forms[0][j].eval(&pt) != a || msys.forms[1][j].eval(&pt) != b {
            return false;
        }
    }
    true
}

fn box_points(bx: &[(i64, i64)]) -> Result<Vec<Vec<BigInt>>> {
    if bx.iter().any(|&(lo, hi)| hi < lo) {
        return Ok(Vec::new());
    }
    let mut out: Vec<Vec<BigInt>> = vec![Vec::new()];
    for &(lo, hi) in bx {
        let mut next = Vec::with_capacity(out.len() * (hi - lo + 1) as usize);
        for p in &out {
            for v in lo..=hi {
                let mut q = p.clone();
                q.push(BigInt::from(v));
                next.push(q);
            }
        }
        out = next;
    }
    Ok(out)
}

fn check_box(msys: &MultiDimSystem, bx: &[(i64, i64)], s: usize) -> Result<()> {
    if bx.len() != msys.n {
        return Err(Error::input("box needs one interval per variable"));
    }
    if s == 0 {
        return Err(Error::input("s must be a positive integer"));
    }
    Ok(())
}

/// Solutions of `sum_i psi(u_i) = sum_i psi(w_i)` for every form, with all
/// points in the box. `interval` in the result is the first axis.
pub fn multidim_mean_value(
    msys: &MultiDimSystem,
    bx: &[(i64, i64)],
    s: usize,
    cfg: &EngineConfig,
) -> Result<MeanValueResult> {
    check_box(msys, bx, s)?;
    let start = Instant::now();
    let values: Vec<Vec<BigInt>> = box_points(bx)?.iter().map(|p| msys.eval(p)).collect();
    let (value, entries) = if values.is_empty() {
        (Value::Integer(BigInt::zero()), 0)
    } else {
        let spec = TableSpec::single(msys.n * msys.k(), None, PointSet::unweighted(values), s);
        let table = build_table(&spec, cfg)?;
        (table_norm(&table, 0.0).0, table.len() as u64)
    };
    Ok(MeanValueResult {
        s,
        k: msys.k(),
        interval: [bx[0].0, bx[0].1],
        value,
        normalized: false,
        table_entries: entries,
        elapsed_ms: start.elapsed().as_millis() as u64,
        error_bound: None,
    })
}

/// Brute-force count over all `(u, w)` tuples of box points.
pub fn multidim_brute_force(msys: &MultiDimSystem, bx: &[(i64, i64)], s: usize, cap: u128) -> Result<BigInt> {
    check_box(msys, bx, s)?;
    let values: Vec<Vec<BigInt>> = box_points(bx)?.iter().map(|p| msys.eval(p)).collect();
    match oracle_sum(&values, &PointWeights::Ones, s, None, cap)? {
        Value::Integer(v) => Ok(v),
        _ => unreachable!("count oracle is exact"),
    }
}
