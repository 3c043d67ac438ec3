//! Value types stored in representation tables.
//!
//! Integer amplitude widths are chosen from an a-priori bound on the table
//! mass, so arithmetic inside the hot loops never needs overflow checks.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub trait Amplitude: Clone + Send + Sync + fmt::Debug + 'static {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn add_assign(&mut self, other: &Self);
    fn mul(&self, other: &Self) -> Self;
    fn scale(&self, m: u64) -> Self;
    fn accumulate_norm(&self, acc: &mut NormAccumulator);
    fn value(&self) -> AmpValue;
}

/// Exact or floating table entry, as exposed to callers.
#[derive(Debug, Clone, PartialEq)]
pub enum AmpValue {
    Count(BigUint),
    Gaussian(BigInt, BigInt),
    Float(Complex64),
}

impl AmpValue {
    /// Modulus as a float, for diagnostics and inequality checks.
    pub fn abs_f64(&self) -> f64 {
        match self {
            AmpValue::Count(c) => c.to_f64().unwrap_or(f64::INFINITY),
            AmpValue::Gaussian(re, im) => {
                let (re, im) = (re.to_f64().unwrap_or(f64::INFINITY), im.to_f64().unwrap_or(f64::INFINITY));
                re.hypot(im)
            }
            AmpValue::Float(z) => z.norm(),
        }
    }
}

impl fmt::Display for AmpValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AmpValue::Count(c) => write!(f, "{c}"),
            AmpValue::Gaussian(re, im) => {
                if im.is_negative() {
                    write!(f, "{re}-{}i", -im)
                } else {
                    write!(f, "{re}+{im}i")
                }
            }
            AmpValue::Float(z) => write!(f, "{}+{}i", z.re, z.im),
        }
    }
}

/// Sum of `|A(m)|^2`, exact for integer amplitudes and compensated for floats.
#[derive(Debug, Clone, Default)]
pub struct NormAccumulator {
    small: u128,
    big: BigUint,
    float: CompensatedSum,
    terms: u64,
}

impl NormAccumulator {
    pub fn add_u128(&mut self, v: u128) {
        match self.small.checked_add(v) {
            Some(s) => self.small = s,
            None => {
                self.big += BigUint::from(self.small) + BigUint::from(v);
                self.small = 0;
            }
        }
        self.terms += 1;
    }

    pub fn add_big(&mut self, v: BigUint) {
        self.big += v;
        self.terms += 1;
    }

    pub fn add_f64(&mut self, v: f64) {
        self.float.add(v);
        self.terms += 1;
    }

    pub fn exact(&self) -> BigUint {
        &self.big + BigUint::from(self.small)
    }

    pub fn float(&self) -> &CompensatedSum {
        &self.float
    }

    pub fn terms(&self) -> u64 {
        self.terms
    }
}

/// Neumaier summation with a running absolute sum for error reporting.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
    abs: f64,
    n: u64,
}

impl CompensatedSum {
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
        self.abs += v.abs();
        self.n += 1;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }

    /// Bound on the summation error: `2u|S| + 2 n^2 u^2 sum|t_i|`.
    pub fn error_bound(&self) -> f64 {
        let u = f64::EPSILON / 2.0;
        let n = self.n as f64;
        2.0 * u * self.value().abs() + 2.0 * n * n * u * u * self.abs
    }

    pub fn abs_sum(&self) -> f64 {
        self.abs
    }
}

impl Amplitude for u64 {
    fn zero() -> Self {
        0
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn add_assign(&mut self, other: &Self) {
        *self += *other;
    }
    fn mul(&self, other: &Self) -> Self {
        *self * *other
    }
    fn scale(&self, m: u64) -> Self {
        *self * m
    }
    fn accumulate_norm(&self, acc: &mut NormAccumulator) {
        let v = *self as u128;
        acc.add_u128(v * v);
    }
    fn value(&self) -> AmpValue {
        AmpValue::Count(BigUint::from(*self))
    }
}

impl Amplitude for u128 {
    fn zero() -> Self {
        0
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn add_assign(&mut self, other: &Self) {
        *self += *other;
    }
    fn mul(&self, other: &Self) -> Self {
        *self * *other
    }
    fn scale(&self, m: u64) -> Self {
        *self * m as u128
    }
    fn accumulate_norm(&self, acc: &mut NormAccumulator) {
        match self.checked_mul(*self) {
            Some(sq) => acc.add_u128(sq),
            None => {
                let b = BigUint::from(*self);
                acc.add_big(&b * &b);
            }
        }
    }
    fn value(&self) -> AmpValue {
        AmpValue::Count(BigUint::from(*self))
    }
}

impl Amplitude for BigUint {
    fn zero() -> Self {
        <BigUint as Zero>::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_assign(&mut self, other: &Self) {
        *self += other;
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, m: u64) -> Self {
        self * m
    }
    fn accumulate_norm(&self, acc: &mut NormAccumulator) {
        acc.add_big(self * self);
    }
    fn value(&self) -> AmpValue {
        AmpValue::Count(self.clone())
    }
}

/// Gaussian integer with 128-bit components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct GaussInt {
    pub re: i128,
    pub im: i128,
}

impl GaussInt {
    pub const fn new(re: i128, im: i128) -> Self {
        GaussInt { re, im }
    }

    pub fn conj(self) -> Self {
        GaussInt::new(self.re, -self.im)
    }

    /// `re^2 + im^2` as an exact integer.
    pub fn norm(self) -> BigUint {
        let re = BigInt::from(self.re);
        let im = BigInt::from(self.im);
        (&re * &re + &im * &im).to_biguint().unwrap()
    }

    /// `|re| + |im|`, an upper bound for the modulus.
    pub fn l1(self) -> u128 {
        self.re.unsigned_abs() + self.im.unsigned_abs()
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re as f64, self.im as f64)
    }
}

impl Add for GaussInt {
    type Output = GaussInt;
    fn add(self, o: GaussInt) -> GaussInt {
        GaussInt::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for GaussInt {
    type Output = GaussInt;
    fn sub(self, o: GaussInt) -> GaussInt {
        GaussInt::new(self.re - o.re, self.im - o.im)
    }
}

impl Mul for GaussInt {
    type Output = GaussInt;
    fn mul(self, o: GaussInt) -> GaussInt {
        GaussInt::new(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
    }
}

impl Amplitude for GaussInt {
    fn zero() -> Self {
        GaussInt::default()
    }
    fn is_zero(&self) -> bool {
        self.re == 0 && self.im == 0
    }
    fn add_assign(&mut self, other: &Self) {
        *self = *self + *other;
    }
    fn mul(&self, other: &Self) -> Self {
        *self * *other
    }
    fn scale(&self, m: u64) -> Self {
        GaussInt::new(self.re * m as i128, self.im * m as i128)
    }
    fn accumulate_norm(&self, acc: &mut NormAccumulator) {
        let (re, im) = (self.re.unsigned_abs(), self.im.unsigned_abs());
        if re < (1 << 63) && im < (1 << 63) {
            acc.add_u128(re * re + im * im);
        } else {
            acc.add_big(self.norm());
        }
    }
    fn value(&self) -> AmpValue {
        AmpValue::Gaussian(BigInt::from(self.re), BigInt::from(self.im))
    }
}

/// Gaussian integer with arbitrary-precision components.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BigGauss {
    pub re: BigInt,
    pub im: BigInt,
}

impl From<GaussInt> for BigGauss {
    fn from(g: GaussInt) -> Self {
        BigGauss {
            re: BigInt::from(g.re),
            im: BigInt::from(g.im),
        }
    }
}

impl Amplitude for BigGauss {
    fn zero() -> Self {
        BigGauss::default()
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn add_assign(&mut self, other: &Self) {
        self.re += &other.re;
        self.im += &other.im;
    }
    fn mul(&self, o: &Self) -> Self {
        BigGauss {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
    fn scale(&self, m: u64) -> Self {
        BigGauss {
            re: &self.re * m,
            im: &self.im * m,
        }
    }
    fn accumulate_norm(&self, acc: &mut NormAccumulator) {
        let n = &self.re * &self.re + &self.im * &self.im;
        acc.add_big(n.to_biguint().unwrap());
    }
    fn value(&self) -> AmpValue {
        AmpValue::Gaussian(self.re.clone(), self.im.clone())
    }
}

impl Amplitude for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn add_assign(&mut self, other: &Self) {
        *self += *other;
    }
    fn mul(&self, other: &Self) -> Self {
        *self * *other
    }
    fn scale(&self, m: u64) -> Self {
        *self * m as f64
    }
    fn accumulate_norm(&self, acc: &mut NormAccumulator) {
        acc.add_f64(self.norm_sqr());
    }
    fn value(&self) -> AmpValue {
        AmpValue::Float(*self)
    }
}
