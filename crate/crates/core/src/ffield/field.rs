//! Finite fields `F_q` and the polynomial ring `F_q[t]`.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::ring::IntegralDomain;

/// Irreducible moduli for the non-prime fields, constant coefficient first.
const MODULI: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (2, 5, &[1, 0, 1, 0, 0, 1]),
    (2, 6, &[1, 1, 0, 1, 1, 0, 1]),
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (5, 2, &[2, 4, 1]),
    (7, 2, &[3, 6, 1]),
];

/// Largest prime accepted for a prime field.
pub const MAX_PRIME: u32 = 1 << 16;

/// `F_q` with `q = p^l`. Elements are integers in `[0, q)` whose base-`p`
/// digits are the coefficients over `F_p` in the basis `1, g, g^2, ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaloisField {
    p: u32,
    l: u32,
    q: u32,
    modulus: Vec<u32>,
    add: Vec<u32>,
    mul: Vec<u32>,
}

impl GaloisField {
    pub fn new(q: u32) -> Result<Self> {
        if q >= 2 && is_prime(q as u64) {
            if q > MAX_PRIME {
                return Err(Error::input(format!("prime fields are supported up to {MAX_PRIME}")));
            }
            return Ok(GaloisField {
                p: q,
                l: 1,
                q,
                modulus: vec![0, 1],
                add: Vec::new(),
                mul: Vec::new(),
            });
        }
        let &(p, l, modulus) = MODULI
            .iter()
            .find(|(p, l, _)| p.pow(*l) == q)
            .ok_or_else(|| Error::input(format!("no field of order {q} is available")))?;
        let mut f = GaloisField {
            p,
            l,
            q,
            modulus: modulus.to_vec(),
            add: Vec::new(),
            mul: Vec::new(),
        };
        let n = q as usize;
        let mut add = vec![0; n * n];
        let mut mul = vec![0; n * n];
        for a in 0..q {
            for b in 0..q {
                add[(a * q + b) as usize] = f.slow_add(a, b);
                mul[(a * q + b) as usize] = f.slow_mul(a, b);
            }
        }
        f.add = add;
        f.mul = mul;
        Ok(f)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.l
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn digits(&self, a: u32) -> Vec<u32> {
        let mut a = a;
        (0..self.l)
            .map(|_| {
                let d = a % self.p;
                a /= self.p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0, |acc, &x| acc * self.p + x % self.p)
    }

    fn slow_add(&self, a: u32, b: u32) -> u32 {
        let s: Vec<u32> = self.digits(a).iter().zip(self.digits(b)).map(|(x, y)| (x + y) % self.p).collect();
        self.from_digits(&s)
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let p = self.p;
        let l = self.l as usize;
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u32; 2 * l - 1];
        for i in 0..l {
            for j in 0..l {
                prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
            }
        }
        // modulus is monic of degree l
        for i in (l..prod.len()).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            for (j, &m) in self.modulus.iter().enumerate() {
                prod[i - l + j] = (prod[i - l + j] + (p - c) * m) % p;
            }
        }
        self.from_digits(&prod[..l])
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.l == 1 {
            ((a as u64 + b as u64) % self.p as u64) as u32
        } else {
            self.add[(a * self.q + b) as usize]
        }
    }

    pub fn neg(&self, a: u32) -> u32 {
        if self.l == 1 {
            (self.p - a) % self.p
        } else {
            let d: Vec<u32> = self.digits(a).iter().map(|x| (self.p - x) % self.p).collect();
            self.from_digits(&d)
        }
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if self.l == 1 {
            ((a as u64 * b as u64) % self.p as u64) as u32
        } else {
            self.mul[(a * self.q + b) as usize]
        }
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let (mut base, mut acc) = (a, 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.pow(a, self.q as u64 - 2))
    }

    /// The image of the integer `n` under `Z -> F_p -> F_q`.
    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }
}

/// A polynomial in `t` over `F_q`, constant coefficient first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FqPoly {
    coeffs: Vec<u32>,
}

impl FqPoly {
    pub fn new(mut coeffs: Vec<u32>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FqPoly { coeffs }
    }

    pub fn zero() -> Self {
        FqPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: u32) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `ord`; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }
}

/// Arithmetic in `F_q[t]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FqPolyRing {
    field: GaloisField,
}

impl FqPolyRing {
    pub fn new(field: GaloisField) -> Self {
        FqPolyRing { field }
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    /// `<a> = q^{ord a}`, and `<0> = 0`.
    pub fn abs(&self, a: &FqPoly) -> BigUint {
        match a.degree() {
            Some(d) => BigUint::from(self.field.q()).pow(d as u32),
            None => BigUint::zero(),
        }
    }

    pub fn add(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        let n = a.coeffs.len().max(b.coeffs.len());
        FqPoly::new((0..n).map(|i| self.field.add(a.coeff(i), b.coeff(i))).collect())
    }

    pub fn neg(&self, a: &FqPoly) -> FqPoly {
        FqPoly::new(a.coeffs.iter().map(|&c| self.field.neg(c)).collect())
    }

    pub fn sub(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, a: &FqPoly, c: u32) -> FqPoly {
        FqPoly::new(a.coeffs.iter().map(|&x| self.field.mul(x, c)).collect())
    }

    pub fn mul(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        if a.is_zero() || b.is_zero() {
            return FqPoly::zero();
        }
        let mut out = vec![0u32; a.coeffs.len() + b.coeffs.len() - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                out[i + j] = self.field.add(out[i + j], self.field.mul(x, y));
            }
        }
        FqPoly::new(out)
    }

    /// Quotient and remainder; `None` when dividing by zero.
    pub fn div_rem(&self, a: &FqPoly, b: &FqPoly) -> Option<(FqPoly, FqPoly)> {
        let db = b.degree()?;
        let lead_inv = self.field.inv(b.coeffs[db]).unwrap();
        let mut r = a.coeffs.clone();
        if r.len() <= db {
            return Some((FqPoly::zero(), a.clone()));
        }
        let mut quot = vec![0u32; r.len() - db];
        for i in (db..r.len()).rev() {
            let c = self.field.mul(r[i], lead_inv);
            if c == 0 {
                continue;
            }
            quot[i - db] = c;
            for (j, &bj) in b.coeffs.iter().enumerate() {
                r[i - db + j] = self.field.sub(r[i - db + j], self.field.mul(c, bj));
            }
        }
        Some((FqPoly::new(quot), FqPoly::new(r)))
    }
}

impl IntegralDomain for FqPolyRing {
    type Elem = FqPoly;

    fn zero(&self) -> FqPoly {
        FqPoly::zero()
    }
    fn one(&self) -> FqPoly {
        FqPoly::constant(1)
    }
    fn is_zero(&self, a: &FqPoly) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        FqPolyRing::add(self, a, b)
    }
    fn sub(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        FqPolyRing::sub(self, a, b)
    }
    fn mul(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        FqPolyRing::mul(self, a, b)
    }
    fn div_exact(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        self.div_rem(a, b).expect("division by zero").0
    }
}

/// `O_d`: the polynomials of degree at most `d`, indexed by their base-`q`
/// coefficient digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FqBox {
    q: u32,
    d: u32,
}

impl FqBox {
    pub fn new(q: u32, d: u32) -> Self {
        FqBox { q, d }
    }

    pub fn degree_bound(&self) -> u32 {
        self.d
    }

    /// `q^{d+1}`.
    pub fn cardinality(&self) -> BigUint {
        BigUint::from(self.q).pow(self.d + 1)
    }

    /// The cardinality when it fits in memory-sized indices.
    pub fn len(&self) -> Option<usize> {
        (self.q as usize).checked_pow(self.d + 1)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, mut i: usize) -> FqPoly {
        let q = self.q as usize;
        FqPoly::new(
            (0..=self.d)
                .map(|_| {
                    let c = (i % q) as u32;
                    i /= q;
                    c
                })
                .collect(),
        )
    }

    pub fn iter(&self) -> impl Iterator<Item = FqPoly> + '_ {
        let n = self.len().expect("box too large to enumerate");
        (0..n).map(move |i| self.get(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn field_axioms() {
        for q in [2u32, 3, 4, 5, 8, 9] {
            let f = GaloisField::new(q).unwrap();
            for a in 0..q {
                assert_eq!(f.add(a, 0), a);
                assert_eq!(f.mul(a, 1), a);
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1, "q={q} a={a}");
                }
                for b in 0..q {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in 0..q {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn every_table_modulus_is_irreducible() {
        for q in [4u32, 8, 16, 32, 64, 9, 27, 25, 49] {
            let f = GaloisField::new(q).unwrap();
            let units: HashSet<u32> = (1..q).map(|a| f.mul(a, f.inv(a).unwrap())).collect();
            assert_eq!(units, HashSet::from([1]), "q={q}");
            // Frobenius fixes exactly F_p
            let fixed = (0..q).filter(|&a| f.pow(a, f.p() as u64) == a).count();
            assert_eq!(fixed as u32, f.p());
        }
        assert!(GaloisField::new(6).is_err());
        assert!(GaloisField::new(81).is_err());
    }

    #[test]
    fn box_enumeration() {
        for q in [2u32, 3, 4, 5, 7, 8, 9] {
            for d in 0..=3 {
                let b = FqBox::new(q, d);
                let all: HashSet<FqPoly> = b.iter().collect();
                assert_eq!(BigUint::from(all.len()), b.cardinality());
                assert_eq!(b.cardinality(), BigUint::from(q).pow(d + 1));
                assert!(all.iter().all(|p| p.degree().is_none_or(|g| g <= d as usize)));
            }
        }
    }

    #[test]
    fn poly_division() {
        let r = FqPolyRing::new(GaloisField::new(9).unwrap());
        let a = FqPoly::new(vec![1, 5, 0, 7]);
        let b = FqPoly::new(vec![3, 1]);
        let (quot, rem) = r.div_rem(&a, &b).unwrap();
        assert_eq!(r.add(&r.mul(&quot, &b), &rem), a);
        assert!(rem.degree().is_none_or(|d| d < 1));
        assert_eq!(r.abs(&a), BigUint::from(729u32));
        assert_eq!(r.abs(&FqPoly::zero()), BigUint::zero());
    }
}
