//! Mean values modulo `p^B`, their residue-class restrictions, the bilinear
//! means `K^r_{a,b}`, and short-interval congruence counts.
//!
//! Each integral over `p^{-B}`-rational points is evaluated through its
//! counting interpretation: a representation table keyed on power-sum vectors
//! reduced modulo `p^B`. With Gaussian-integer weights every quantity here is
//! an exact rational.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::is_prime;
use crate::engine::kernel::{build_table, EngineConfig, PointSet, PointWeights, TableSpec};
use crate::engine::result::Value;
use crate::engine::weights::{WeightSeq, WeightValues};
use crate::engine::GaussInt;
use crate::error::{Error, Result};
use crate::polysys::{is_pc_spaced, wronskian_unit_filter, PolynomialSystem, RationalFunctionSystem};

/// The prime `p` with exponents `B`, `H`, `c` and the separation exponent `nu`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PadicContext {
    pub p: u64,
    pub b: u32,
    pub h: u32,
    pub c: u32,
    pub nu: u32,
}

impl PadicContext {
    /// `H = ceil(B/k)`, `c = 1`, `nu = 0`.
    pub fn new(p: u64, k: usize, b: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::input("k must be positive"));
        }
        let ctx = PadicContext {
            p,
            b,
            h: b.div_ceil(k as u32),
            c: 1.min(b),
            nu: 0,
        };
        ctx.validate()?;
        Ok(ctx)
    }

    pub fn with_h(mut self, h: u32) -> Result<Self> {
        self.h = h;
        self.validate()?;
        Ok(self)
    }

    pub fn with_c(mut self, c: u32) -> Result<Self> {
        self.c = c;
        self.validate()?;
        Ok(self)
    }

    pub fn with_nu(mut self, nu: u32) -> Result<Self> {
        self.nu = nu;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !is_prime(self.p) {
            return Err(Error::input(format!("p = {} is not prime", self.p)));
        }
        if self.b == 0 {
            return Err(Error::input("B must be positive"));
        }
        if self.h > self.b {
            return Err(Error::input("H must not exceed B"));
        }
        if self.nu > self.c || self.c > self.b {
            return Err(Error::input("need 0 <= nu <= c <= B"));
        }
        if self.p.checked_pow(self.b).is_none_or(|m| m > 1 << 62) {
            return Err(Error::input("p^B is too large"));
        }
        Ok(())
    }

    pub fn pow(&self, e: u32) -> i64 {
        self.p.pow(e) as i64
    }

    pub fn modulus(&self) -> BigInt {
        BigInt::from(self.pow(self.b))
    }

    fn check_system(&self, sys: &PolynomialSystem) -> Result<()> {
        self.validate()?;
        if self.p as usize <= sys.k() {
            return Err(Error::input(format!("need p > k, got p = {} and k = {}", self.p, sys.k())));
        }
        if !is_pc_spaced(sys, self.p, self.c)? {
            return Err(Error::input(format!("system is not p^c-spaced for p = {}, c = {}", self.p, self.c)));
        }
        Ok(())
    }
}

/// Weights grouped by residue class, with exact `rho_h(xi)^2`.
#[derive(Debug, Clone)]
pub struct ResidueWeightSeq {
    points: Vec<(i64, GaussInt)>,
    rho0_sq: BigUint,
}

impl ResidueWeightSeq {
    pub fn new(w: &WeightSeq) -> Result<Self> {
        if !matches!(w.values(), WeightValues::Gaussian(_)) {
            return Err(Error::input("congruence mean values need Gaussian-integer weights"));
        }
        let points: Vec<(i64, GaussInt)> = w.support().into_iter().map(|n| (n, w.gaussian_at(n).unwrap())).collect();
        let rho0_sq = points.iter().map(|(_, g)| g.norm()).sum();
        Ok(ResidueWeightSeq { points, rho0_sq })
    }

    pub fn rho0_sq(&self) -> &BigUint {
        &self.rho0_sq
    }

    /// Nonempty classes modulo `m`: residue, `rho^2`, and the points.
    pub fn classes(&self, m: i64) -> BTreeMap<i64, (BigUint, Vec<(i64, GaussInt)>)> {
        let mut out: BTreeMap<i64, (BigUint, Vec<(i64, GaussInt)>)> = BTreeMap::new();
        for &(n, g) in &self.points {
            let e = out.entry(n.rem_euclid(m)).or_insert_with(|| (BigUint::zero(), Vec::new()));
            e.0 += g.norm();
            e.1.push((n, g));
        }
        out
    }

    /// `rho_h(xi)^2` for every nonempty class modulo `m`.
    pub fn rho_sq(&self, m: i64) -> BTreeMap<i64, BigUint> {
        self.classes(m).into_iter().map(|(k, v)| (k, v.0)).collect()
    }

    pub fn points(&self) -> &[(i64, GaussInt)] {
        &self.points
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CongruenceKind {
    #[serde(rename = "U_B")]
    UB,
    #[serde(rename = "U_Bh")]
    UBh,
    #[serde(rename = "K_rabc")]
    K,
}

impl fmt::Display for CongruenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CongruenceKind::UB => "U_B",
            CongruenceKind::UBh => "U_Bh",
            CongruenceKind::K => "K_rabc",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CongruenceMeanValue {
    pub kind: CongruenceKind,
    pub s: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<u32>,
    pub value: Value,
    /// Set when the residue sum has no admissible terms.
    #[serde(default)]
    pub vacuous: bool,
}

impl CongruenceMeanValue {
    pub fn exact(&self) -> BigRational {
        self.value.as_rational().expect("congruence values are exact")
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }
}

fn rat(v: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(v.clone()))
}

/// `rho^{-2e}` as an exact rational, for `rho^2 > 0`.
fn inv_pow(rho_sq: &BigUint, e: usize) -> BigRational {
    rat(rho_sq).pow(-(e as i32))
}

struct Counter<'a> {
    sys: &'a PolynomialSystem,
    modulus: BigInt,
    cfg: &'a EngineConfig,
}

impl Counter<'_> {
    fn points(&self, pts: &[(i64, GaussInt)]) -> PointSet {
        PointSet {
            values: pts.iter().map(|&(n, _)| self.sys.eval(&BigInt::from(n))).collect(),
            weights: PointWeights::Gaussian(pts.iter().map(|p| p.1).collect()),
        }
    }

    /// `sum_m |A(m)|^2` for the product of `parts`, keys reduced mod `p^B`.
    fn norm(&self, parts: &[(&[(i64, GaussInt)], usize)]) -> Result<BigUint> {
        let parts: Vec<(PointSet, usize)> = parts
            .iter()
            .filter(|(_, s)| *s > 0)
            .map(|(p, s)| (self.points(p), *s))
            .collect();
        if parts.is_empty() {
            return Ok(BigUint::one());
        }
        let spec = TableSpec {
            arity: self.sys.k(),
            modulus: Some(self.modulus.clone()),
            parts,
        };
        Ok(build_table(&spec, self.cfg)?.norm().exact())
    }
}

/// Unnormalized weighted count of solutions of the congruence system.
pub fn congruence_count(
    ctx: &PadicContext,
    sys: &PolynomialSystem,
    weights: &WeightSeq,
    s: usize,
    cfg: &EngineConfig,
) -> Result<BigUint> {
    ctx.check_system(sys)?;
    let rw = ResidueWeightSeq::new(weights)?;
    let counter = Counter {
        sys,
        modulus: ctx.modulus(),
        cfg,
    };
    counter.norm(&[(rw.points(), s)])
}

/// `U^B = rho_0^{-2s} sum |A(m)|^2`.
pub fn u_mean(
    ctx: &PadicContext,
    sys: &PolynomialSystem,
    weights: &WeightSeq,
    s: usize,
    cfg: &EngineConfig,
) -> Result<CongruenceMeanValue> {
    if s == 0 {
        return Err(Error::input("s must be positive"));
    }
    let rw = ResidueWeightSeq::new(weights)?;
    let raw = congruence_count(ctx, sys, weights, s, cfg)?;
    let value = if rw.rho0_sq().is_zero() {
        BigRational::zero()
    } else {
        rat(&raw) * inv_pow(rw.rho0_sq(), s)
    };
    Ok(CongruenceMeanValue {
        kind: CongruenceKind::UB,
        s,
        r: None,
        a: None,
        b: None,
        h: None,
        value: Value::Rational(value),
        vacuous: rw.rho0_sq().is_zero(),
    })
}

/// `U^{B,h} = rho_0^{-2} sum_xi rho_h(xi)^{2-2s} C_h(xi)`, with `C_h(xi)` the
/// weighted count with every variable in the class `xi` mod `p^h`.
pub fn u_mean_restricted(
    ctx: &PadicContext,
    sys: &PolynomialSystem,
    weights: &WeightSeq,
    s: usize,
    h: u32,
    cfg: &EngineConfig,
) -> Result<CongruenceMeanValue> {
    if s == 0 {
        return Err(Error::input("s must be positive"));
    }
    if h > ctx.b {
        return Err(Error::input("need h <= B"));
    }
    ctx.check_system(sys)?;
    let rw = ResidueWeightSeq::new(weights)?;
    let counter = Counter {
        sys,
        modulus: ctx.modulus(),
        cfg,
    };
    let mut total = BigRational::zero();
    for (rho_sq, pts) in rw.classes(ctx.pow(h)).values() {
        let c = counter.norm(&[(pts, s)])?;
        total += rat(&c) * inv_pow(rho_sq, s - 1);
    }
    let value = if rw.rho0_sq().is_zero() {
        BigRational::zero()
    } else {
        total / rat(rw.rho0_sq())
    };
    Ok(CongruenceMeanValue {
        kind: CongruenceKind::UBh,
        s,
        r: None,
        a: None,
        b: None,
        h: Some(h),
        value: Value::Rational(value),
        vacuous: rw.rho0_sq().is_zero(),
    })
}

fn k_mean_inner(
    ctx: &PadicContext,
    sys: &PolynomialSystem,
    weights: &WeightSeq,
    s: usize,
    r: usize,
    a: u32,
    b: u32,
    separate: bool,
    cfg: &EngineConfig,
) -> Result<CongruenceMeanValue> {
    let big_r = r * (r + 1) / 2;
    if r > sys.k() || big_r > s {
        return Err(Error::input("need 0 <= r <= k and r(r+1)/2 <= s"));
    }
    if a > ctx.b || b > ctx.b {
        return Err(Error::input("need a, b <= B"));
    }
    ctx.check_system(sys)?;
    let rw = ResidueWeightSeq::new(weights)?;
    let counter = Counter {
        sys,
        modulus: ctx.modulus(),
        cfg,
    };
    let sep = ctx.pow(ctx.nu);
    let ca = rw.classes(ctx.pow(a));
    let cb = rw.classes(ctx.pow(b));
    let mut total = BigRational::zero();
    let mut pairs = 0usize;
    for (xi, (ra, pa)) in &ca {
        for (eta, (rb, pb)) in &cb {
            if separate && (xi - eta).rem_euclid(sep) == 0 {
                continue;
            }
            pairs += 1;
            let n = counter.norm(&[(pa, big_r), (pb, s - big_r)])?;
            // rho_a^2 rho_b^2 * rho_a^{-2R} rho_b^{-2(s-R)} * N
            let mut term = rat(&n);
            term *= rat(ra).pow(1 - big_r as i32);
            term *= rat(rb).pow(1 - (s - big_r) as i32);
            total += term;
        }
    }
    let vacuous = pairs == 0 || rw.rho0_sq().is_zero();
    let value = if vacuous {
        BigRational::zero()
    } else {
        total * rat(rw.rho0_sq()).pow(-2)
    };
    Ok(CongruenceMeanValue {
        kind: CongruenceKind::K,
        s,
        r: Some(r),
        a: Some(a),
        b: Some(b),
        h: None,
        value: Value::Rational(value),
        vacuous,
    })
}

/// `K^r_{a,b}`: the sum over `xi mod p^a`, `eta mod p^b` with
/// `xi != eta (mod p^nu)` of `rho_a^2 rho_b^2 K(xi, eta)`, over `rho_0^4`.
#[allow(clippy::too_many_arguments)]
pub fn k_mean(
    ctx: &PadicContext,
    sys: &PolynomialSystem,
    weights: &WeightSeq,
    s: usize,
    r: usize,
    a: u32,
    b: u32,
    cfg: &EngineConfig,
) -> Result<CongruenceMeanValue> {
    if a < ctx.nu || b < ctx.nu {
        return Err(Error::input("need a, b >= nu"));
    }
    k_mean_inner(ctx, sys, weights, s, r, a, b, true, cfg)
}

/// `K^r_{a,b}` with the separation condition dropped, summing over all pairs.
#[allow(clippy::too_many_arguments)]
pub fn k_mean_all_pairs(
    ctx: &PadicContext,
    sys: &PolynomialSystem,
    weights: &WeightSeq,
    s: usize,
    r: usize,
    a: u32,
    b: u32,
    cfg: &EngineConfig,
) -> Result<CongruenceMeanValue> {
    k_mean_inner(ctx, sys, weights, s, r, a, b, false, cfg)
}

/// `(K / (p^{Delta H} U^{B,H}))^{(k-1)/(r(k-r))}`.
pub fn bracket(ctx: &PadicContext, k: usize, kval: &CongruenceMeanValue, ubh: &CongruenceMeanValue, delta: f64, r: usize) -> Result<f64> {
    if r == 0 || r >= k {
        return Err(Error::input("bracket needs 1 <= r <= k-1"));
    }
    let u = ubh.to_f64();
    if u == 0.0 {
        return Err(Error::input("bracket: U^{B,H} is zero"));
    }
    let scale = (ctx.p as f64).powf(delta * ctx.h as f64);
    let ratio = kval.to_f64() / (scale * u);
    let e = (k - 1) as f64 / (r * (k - r)) as f64;
    Ok(ratio.powf(e))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaEstimate {
    pub ratios: Vec<f64>,
    pub sup: f64,
    pub argmax: usize,
}

/// `log(U^B / U^{B,H}) / log(p^H)` with `H = ceil(B/k)` for each family member.
pub fn lambda_probe(
    p: u64,
    k: usize,
    s: usize,
    c: u32,
    family: &[(u32, PolynomialSystem, WeightSeq)],
    cfg: &EngineConfig,
) -> Result<LambdaEstimate> {
    if family.is_empty() {
        return Err(Error::input("lambda probe needs a nonempty family"));
    }
    let mut ratios = Vec::with_capacity(family.len());
    for (b, sys, w) in family {
        if sys.k() != k {
            return Err(Error::input("family systems must all have k polynomials"));
        }
        let ctx = PadicContext::new(p, k, *b)?.with_c(c.min(*b))?;
        ratios.push(lambda_ratio(&ctx, sys, w, s, cfg)?);
    }
    let (argmax, sup) = ratios
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, r)| if r > acc.1 { (i, r) } else { acc });
    Ok(LambdaEstimate { ratios, sup, argmax })
}

/// One ratio of the probe; zero when `H = 0`.
pub fn lambda_ratio(ctx: &PadicContext, sys: &PolynomialSystem, w: &WeightSeq, s: usize, cfg: &EngineConfig) -> Result<f64> {
    let ub = u_mean(ctx, sys, w, s, cfg)?;
    let ubh = u_mean_restricted(ctx, sys, w, s, ctx.h, cfg)?;
    if ubh.exact().is_zero() {
        return Err(Error::input("lambda probe: U^{B,H} vanishes for the zero sequence"));
    }
    if ctx.h == 0 {
        return Ok(0.0);
    }
    let q = ub.exact() / ubh.exact();
    Ok(log_rational(&q) / ((ctx.h as f64) * (ctx.p as f64).ln()))
}

fn log_rational(q: &BigRational) -> f64 {
    let n = q.numer().to_f64().unwrap_or(f64::INFINITY);
    let d = q.denom().to_f64().unwrap_or(f64::INFINITY);
    if n.is_finite() && d.is_finite() {
        (n / d).ln()
    } else {
        let ln = |v: &BigInt| {
            let bits = v.bits();
            let shift = bits.saturating_sub(60);
            (v >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
        };
        ln(q.numer()) - ln(q.denom())
    }
}

/// `U^B <= p^{sH} U^{B,H}`, checked exactly.
pub fn check_u_holder(ctx: &PadicContext, sys: &PolynomialSystem, w: &WeightSeq, s: usize, cfg: &EngineConfig) -> Result<bool> {
    let ub = u_mean(ctx, sys, w, s, cfg)?.exact();
    let ubh = u_mean_restricted(ctx, sys, w, s, ctx.h, cfg)?.exact();
    let factor = BigRational::from_integer(BigInt::from(ctx.p).pow(s as u32 * ctx.h));
    Ok(ub <= factor * ubh)
}

/// Both sides of `rho_a(xi)^{2-2w} C_a(xi) <= p^{(b-a)w} sum_zeta rho_b(zeta)^{2-2w} C_b(zeta)`
/// for every nonempty class `xi` mod `p^a`.
#[allow(clippy::too_many_arguments)]
pub fn class_refinement_sides(
    ctx: &PadicContext,
    sys: &PolynomialSystem,
    weights: &WeightSeq,
    w: usize,
    a: u32,
    b: u32,
    cfg: &EngineConfig,
) -> Result<Vec<(i64, BigRational, BigRational)>> {
    if a > b || b > ctx.b || w == 0 {
        return Err(Error::input("need a <= b <= B and w >= 1"));
    }
    ctx.check_system(sys)?;
    let rw = ResidueWeightSeq::new(weights)?;
    let counter = Counter {
        sys,
        modulus: ctx.modulus(),
        cfg,
    };
    let ma = ctx.pow(a);
    let cb = rw.classes(ctx.pow(b));
    let mut out = Vec::new();
    for (xi, (ra, pa)) in rw.classes(ma) {
        let lhs = rat(&counter.norm(&[(&pa, w)])?) * inv_pow(&ra, w - 1);
        let mut sum = BigRational::zero();
        for (zeta, (rb, pb)) in &cb {
            if zeta.rem_euclid(ma) == xi {
                sum += rat(&counter.norm(&[(pb, w)])?) * inv_pow(rb, w - 1);
            }
        }
        let factor = BigRational::from_integer(BigInt::from(ctx.p).pow((b - a) * w as u32));
        out.push((xi, lhs, factor * sum));
    }
    Ok(out)
}

/// Both sides of `(K^r_{b',b})^m <= K^{k-r}_{b,b'} (K^{r-1}_{b',b})^{m-1}`,
/// `m = k-r+1`, at `s = k(k+1)/2`.
pub fn holder_k_sides(
    ctx: &PadicContext,
    sys: &PolynomialSystem,
    weights: &WeightSeq,
    r: usize,
    b_prime: u32,
    b: u32,
    cfg: &EngineConfig,
) -> Result<(BigRational, BigRational)> {
    let k = sys.k();
    if r == 0 || r >= k {
        return Err(Error::input("need 1 <= r <= k-1"));
    }
    let s = k * (k + 1) / 2;
    let m = (k - r + 1) as i32;
    let lhs = k_mean(ctx, sys, weights, s, r, b_prime, b, cfg)?.exact().pow(m);
    let first = k_mean(ctx, sys, weights, s, k - r, b, b_prime, cfg)?.exact();
    let second = k_mean(ctx, sys, weights, s, r - 1, b_prime, b, cfg)?.exact();
    Ok((lhs, first * second.pow(m - 1)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalCount {
    pub count: Value,
    /// Points of the window passing the unit filter.
    pub admissible: usize,
    pub window: usize,
}

/// `N_B(X, Y)`: solutions with `X < x_i, y_i <= X + Y`, every variable passing
/// the Wronskian-unit filter, values taken modulo `p^B`.
pub fn interval_congruence_count(
    ctx: &PadicContext,
    rsys: &RationalFunctionSystem,
    x: i64,
    y: i64,
    s: usize,
    cfg: &EngineConfig,
) -> Result<IntervalCount> {
    ctx.validate()?;
    if s == 0 {
        return Err(Error::input("s must be positive"));
    }
    if y < 0 {
        return Err(Error::input("Y must be nonnegative"));
    }
    if ctx.p as usize <= rsys.k() {
        return Err(Error::input("need p > k"));
    }
    let modulus = ctx.modulus();
    let mut values = Vec::new();
    for n in x + 1..=x + y {
        let nb = BigInt::from(n);
        if !wronskian_unit_filter(rsys, ctx.p, &nb, ctx.b)? {
            continue;
        }
        let v: Option<Vec<BigInt>> = (0..rsys.k()).map(|j| rsys.value_mod(j, &nb, &modulus)).collect();
        values.push(v.ok_or_else(|| Error::input("denominator is not invertible after filtering"))?);
    }
    let admissible = values.len();
    let count = if values.is_empty() {
        BigInt::zero()
    } else {
        let spec = TableSpec::single(rsys.k(), Some(modulus), PointSet::unweighted(values), s);
        BigInt::from(build_table(&spec, cfg)?.norm().exact())
    };
    Ok(IntervalCount {
        count: Value::Integer(count),
        admissible,
        window: y as usize,
    })
}
