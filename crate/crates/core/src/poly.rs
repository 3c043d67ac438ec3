//! Dense univariate polynomials with arbitrary-precision integer coefficients.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::ring::IntegralDomain;

/// Degree of a polynomial; the zero polynomial gets its own marker.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(usize),
}

impl Degree {
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::NegInfinity => None,
            Degree::Finite(d) => Some(d),
        }
    }
}

/// Polynomial in `Z[t]`, constant term first, with no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::new(vec![c.into()])
    }

    /// `c * t^d`
    pub fn monomial(c: impl Into<BigInt>, d: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); d + 1];
        coeffs[d] = c.into();
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::NegInfinity,
            n => Degree::Finite(n - 1),
        }
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Horner evaluation in checked 128-bit arithmetic.
    pub fn eval_i128(&self, x: i128) -> Option<i128> {
        let mut acc: i128 = 0;
        for c in self.coeffs.iter().rev() {
            acc = acc.checked_mul(x)?.checked_add(c.to_i128()?)?;
        }
        Some(acc)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn nth_derivative(&self, n: usize) -> Self {
        (0..n).fold(self.clone(), |p, _| p.derivative())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// `self(other(t))`
    pub fn compose(&self, other: &Self) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| acc.mul(other).add(&Self::constant(c.clone())))
    }

    /// Quotient when `divisor` divides `self` exactly in `Z[t]`.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let (q, r) = self.divrem_over_z(divisor)?;
        r.is_zero().then_some(q)
    }

    /// Long division that succeeds only while every step divides in `Z`.
    fn divrem_over_z(&self, divisor: &Self) -> Option<(Self, Self)> {
        let lead = divisor.leading()?.clone();
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Some((Self::zero(), self.clone()));
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let top = rem[i + dd].clone();
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(&lead);
            if !r.is_zero() {
                return None;
            }
            for (j, c) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= &q * c;
            }
            quot[i] = q;
        }
        Some((Self::new(quot), Self::new(rem)))
    }

    /// Gcd of the coefficients (nonnegative; zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.content();
        if self.leading().is_some_and(Signed::is_negative) {
            c = -c;
        }
        Self::new(self.coeffs.iter().map(|a| a / &c).collect())
    }

    /// Pseudo-remainder of `self` by `divisor`.
    pub fn pseudo_rem(&self, divisor: &Self) -> Self {
        let dd = match divisor.degree() {
            Degree::Finite(d) => d,
            Degree::NegInfinity => panic!("pseudo-remainder by zero polynomial"),
        };
        let lead = divisor.leading().unwrap().clone();
        let mut r = self.clone();
        while let Degree::Finite(dr) = r.degree() {
            if dr < dd {
                break;
            }
            let top = r.leading().unwrap().clone();
            let shifted = divisor.mul(&Self::monomial(top, dr - dd));
            r = r.scale(&lead).sub(&shifted);
        }
        r
    }

    /// Greatest common divisor over `Q`, returned as a primitive integer polynomial.
    pub fn gcd_over_q(&self, other: &Self) -> Self {
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        a
    }

    pub fn reduce_mod(&self, m: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.mod_floor(m)).collect())
    }

    /// Integer zeros `x` with `|x| <= bound`, found by direct scan.
    pub fn integer_zeros(&self, bound: u64) -> Vec<i64> {
        if self.is_zero() {
            return Vec::new();
        }
        let b = bound.min(i64::MAX as u64) as i64;
        (-b..=b)
            .filter(|&x| self.eval(&BigInt::from(x)).is_zero())
            .collect()
    }

    /// Largest absolute value of any coefficient.
    pub fn height(&self) -> BigInt {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_default()
    }

    pub fn is_monomial(&self, d: usize) -> bool {
        self.coeffs.len() == d + 1
            && self.coeffs[d].is_one()
            && self.coeffs[..d].iter().all(Zero::is_zero)
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPolynomial({self})")
    }
}

/// Literal form: comma-separated coefficients, constant term first.
impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for IntPolynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::input("empty polynomial literal"));
        }
        let coeffs = s
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<BigInt>()
                    .map_err(|_| Error::input(format!("bad coefficient {tok:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(coeffs))
    }
}

/// `Z[t]` as an integral domain, for Bareiss determinants of derivative matrices.
pub struct IntPolyRing;

impl IntegralDomain for IntPolyRing {
    type Elem = IntPolynomial;

    fn zero(&self) -> IntPolynomial {
        IntPolynomial::zero()
    }
    fn one(&self) -> IntPolynomial {
        IntPolynomial::constant(1)
    }
    fn is_zero(&self, a: &IntPolynomial) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &IntPolynomial, b: &IntPolynomial) -> IntPolynomial {
        a.add(b)
    }
    fn sub(&self, a: &IntPolynomial, b: &IntPolynomial) -> IntPolynomial {
        a.sub(b)
    }
    fn mul(&self, a: &IntPolynomial, b: &IntPolynomial) -> IntPolynomial {
        a.mul(b)
    }
    fn div_exact(&self, a: &IntPolynomial, b: &IntPolynomial) -> IntPolynomial {
        a.div_exact(b).expect("Bareiss division must be exact")
    }
}

/// Falling factorial `n (n-1) ... (n-r+1)`.
pub fn falling_factorial(n: i64, r: usize) -> BigInt {
    (0..r as i64).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_polynomial_has_sentinel_degree() {
        assert_eq!(IntPolynomial::zero().degree(), Degree::NegInfinity);
        assert_eq!(IntPolynomial::from_i64s(&[0, 0, 0]).degree(), Degree::NegInfinity);
        assert_eq!(IntPolynomial::from_i64s(&[1, 0, 3, 0]).degree(), Degree::Finite(2));
    }

    #[test]
    fn literal_round_trip() {
        let p: IntPolynomial = "0,1,0,2".parse().unwrap();
        assert_eq!(p, IntPolynomial::from_i64s(&[0, 1, 0, 2]));
        assert_eq!(p.to_string(), "0,1,0,2");
        assert_eq!(p.eval(&BigInt::from(3)), BigInt::from(57));
        assert!("1,x".parse::<IntPolynomial>().is_err());
        assert!("".parse::<IntPolynomial>().is_err());
    }

    #[test]
    fn exact_division_and_gcd() {
        let a = IntPolynomial::from_i64s(&[-1, 0, 1]); // t^2 - 1
        let b = IntPolynomial::from_i64s(&[-1, 1]); // t - 1
        assert_eq!(a.div_exact(&b), Some(IntPolynomial::from_i64s(&[1, 1])));
        assert_eq!(a.div_exact(&IntPolynomial::from_i64s(&[0, 2])), None);
        let g = a.gcd_over_q(&IntPolynomial::from_i64s(&[-2, 2]));
        assert_eq!(g, b);
        let coprime = IntPolynomial::from_i64s(&[0, 1]).gcd_over_q(&b);
        assert_eq!(coprime.degree(), Degree::Finite(0));
    }

    #[test]
    fn composition_and_zeros() {
        let p = IntPolynomial::from_i64s(&[0, 0, 1]);
        let shift = IntPolynomial::from_i64s(&[1, 2]);
        assert_eq!(p.compose(&shift), IntPolynomial::from_i64s(&[1, 4, 4]));
        let w = IntPolynomial::from_i64s(&[-6, 1, 1]); // (t+3)(t-2)
        assert_eq!(w.integer_zeros(10), vec![-3, 2]);
    }

    #[test]
    fn checked_eval_overflows_to_none() {
        let p = IntPolynomial::monomial(1, 40);
        assert_eq!(p.eval_i128(2), Some(1i128 << 40));
        assert_eq!(p.eval_i128(1 << 20), None);
    }
}
