//! Polynomial and rational-function systems: Wronskians, `p^c`-spacing, and
//! the translation-dilation map on solutions of the Vinogradov system.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{is_prime, mod_inverse, pow_big};
use crate::error::{Error, Result};
use crate::poly::{Degree, IntPolyRing, IntPolynomial};
use crate::ring::{bareiss_det, Rationals};

/// A `k`-tuple of integer polynomials `(phi_1, ..., phi_k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolynomialSystem {
    polys: Vec<IntPolynomial>,
}

impl PolynomialSystem {
    pub fn new(polys: Vec<IntPolynomial>) -> Result<Self> {
        if polys.is_empty() {
            return Err(Error::input("a polynomial system needs k >= 1 polynomials"));
        }
        Ok(PolynomialSystem { polys })
    }

    /// The Vinogradov system `(t, t^2, ..., t^k)`.
    pub fn vinogradov(k: usize) -> Self {
        assert!(k >= 1, "k must be positive");
        PolynomialSystem {
            polys: (1..=k).map(|j| IntPolynomial::monomial(1, j)).collect(),
        }
    }

    /// The monomial system `(t^{d_1}, ..., t^{d_k})`.
    pub fn monomials(degrees: &[usize]) -> Result<Self> {
        Self::new(degrees.iter().map(|&d| IntPolynomial::monomial(1, d)).collect())
    }

    pub fn k(&self) -> usize {
        self.polys.len()
    }

    pub fn polys(&self) -> &[IntPolynomial] {
        &self.polys
    }

    pub fn is_vinogradov(&self) -> bool {
        self.polys
            .iter()
            .enumerate()
            .all(|(i, p)| p.is_monomial(i + 1))
    }

    /// Values `(phi_1(x), ..., phi_k(x))`.
    pub fn eval(&self, x: &BigInt) -> Vec<BigInt> {
        self.polys.iter().map(|p| p.eval(x)).collect()
    }
}

impl fmt::Display for PolynomialSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.polys.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", parts.join(";"))
    }
}

/// Semicolon-separated list of polynomial literals.
impl FromStr for PolynomialSystem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let polys = s
            .split(';')
            .filter(|part| !part.trim().is_empty())
            .map(str::parse)
            .collect::<Result<Vec<IntPolynomial>>>()?;
        Self::new(polys)
    }
}

/// `det(phi_j^{(i)}(t))_{1 <= i, j <= k}` as an integer polynomial.
pub fn wronskian(sys: &PolynomialSystem) -> IntPolynomial {
    let k = sys.k();
    let matrix = (1..=k)
        .map(|i| sys.polys.iter().map(|p| p.nth_derivative(i)).collect())
        .collect();
    bareiss_det(&IntPolyRing, matrix)
}

/// Whether `phi_j(t) = t^j (mod p^c)` coefficient-wise for every `j`.
pub fn is_pc_spaced(sys: &PolynomialSystem, p: u64, c: u32) -> Result<bool> {
    if !is_prime(p) {
        return Err(Error::input(format!("{p} is not prime")));
    }
    let modulus = pow_big(p, c);
    Ok(sys.polys.iter().enumerate().all(|(i, phi)| {
        let target = IntPolynomial::monomial(1, i + 1);
        phi.sub(&target).reduce_mod(&modulus).is_zero()
    }))
}

/// A solution `(x, y)` of the Vinogradov system with `s` variables per side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub x: Vec<BigInt>,
    pub y: Vec<BigInt>,
}

impl Solution {
    pub fn from_i64s(x: &[i64], y: &[i64]) -> Self {
        Solution {
            x: x.iter().map(|&v| BigInt::from(v)).collect(),
            y: y.iter().map(|&v| BigInt::from(v)).collect(),
        }
    }

    pub fn satisfies(&self, sys: &PolynomialSystem) -> bool {
        self.x.len() == self.y.len()
            && sys.polys.iter().all(|p| {
                let lhs: BigInt = self.x.iter().map(|v| p.eval(v)).sum();
                let rhs: BigInt = self.y.iter().map(|v| p.eval(v)).sum();
                lhs == rhs
            })
    }
}

/// Applies `x -> q x + xi` to every coordinate of a Vinogradov solution.
pub fn tdi_map(sys: &PolynomialSystem, q: u64, xi: &BigInt, sol: &Solution) -> Result<Solution> {
    if !sys.is_vinogradov() {
        return Err(Error::input(
            "translation-dilation map is only defined for the system (t, ..., t^k)",
        ));
    }
    if q == 0 {
        return Err(Error::input("dilation factor must be positive"));
    }
    if !sol.satisfies(sys) {
        return Err(Error::input("tuple is not a solution of the system"));
    }
    let q = BigInt::from(q);
    let map = |v: &BigInt| &q * v + xi;
    Ok(Solution {
        x: sol.x.iter().map(map).collect(),
        y: sol.y.iter().map(map).collect(),
    })
}

/// Rational functions `chi_j = phi_j / gamma_j` with coprime numerator and denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalFunctionSystem {
    numerators: Vec<IntPolynomial>,
    denominators: Vec<IntPolynomial>,
}

impl RationalFunctionSystem {
    pub fn new(numerators: Vec<IntPolynomial>, denominators: Vec<IntPolynomial>) -> Result<Self> {
        if numerators.is_empty() || numerators.len() != denominators.len() {
            return Err(Error::input(
                "need k >= 1 numerators and the same number of denominators",
            ));
        }
        for (j, (num, den)) in numerators.iter().zip(&denominators).enumerate() {
            if den.is_zero() {
                return Err(Error::input(format!("denominator {} is zero", j + 1)));
            }
            if num.is_zero() {
                if den.degree() != Degree::Finite(0) {
                    return Err(Error::input(format!(
                        "chi_{} = 0 must be written with a constant denominator",
                        j + 1
                    )));
                }
                continue;
            }
            if num.gcd_over_q(den).degree() != Degree::Finite(0) {
                return Err(Error::input(format!(
                    "numerator and denominator {} share a factor",
                    j + 1
                )));
            }
        }
        Ok(RationalFunctionSystem {
            numerators,
            denominators,
        })
    }

    /// Polynomial system viewed as rational functions with denominator 1.
    pub fn from_polynomials(sys: &PolynomialSystem) -> Self {
        RationalFunctionSystem {
            numerators: sys.polys.clone(),
            denominators: vec![IntPolynomial::constant(1); sys.k()],
        }
    }

    pub fn k(&self) -> usize {
        self.numerators.len()
    }

    pub fn numerators(&self) -> &[IntPolynomial] {
        &self.numerators
    }

    pub fn denominators(&self) -> &[IntPolynomial] {
        &self.denominators
    }

    /// `W(n; chi)` as an exact rational, or `None` when some `gamma_j(n) = 0`.
    pub fn wronskian_at(&self, n: &BigInt) -> Option<BigRational> {
        let k = self.k();
        let mut columns = Vec::with_capacity(k);
        for (num, den) in self.numerators.iter().zip(&self.denominators) {
            let series = taylor_quotient(num, den, n, k)?;
            columns.push(series);
        }
        let mut fact = BigInt::one();
        let mut matrix = Vec::with_capacity(k);
        for i in 1..=k {
            fact *= BigInt::from(i);
            let f = BigRational::from_integer(fact.clone());
            matrix.push(columns.iter().map(|col| &col[i] * &f).collect());
        }
        Some(bareiss_det(&Rationals, matrix))
    }

    /// `chi_j(x) mod m`, using the inverse of `gamma_j(x)`; `None` if it is not a unit.
    pub fn value_mod(&self, j: usize, x: &BigInt, m: &BigInt) -> Option<BigInt> {
        let den = self.denominators[j].eval(x);
        let inv = mod_inverse(&den, m)?;
        Some((self.numerators[j].eval(x) * inv).mod_floor(m))
    }
}

/// Taylor coefficients of `num/den` at `n` up to `h^order`.
fn taylor_quotient(
    num: &IntPolynomial,
    den: &IntPolynomial,
    n: &BigInt,
    order: usize,
) -> Option<Vec<BigRational>> {
    let a = taylor_shift(num, n, order);
    let b = taylor_shift(den, n, order);
    if b[0].is_zero() {
        return None;
    }
    let b0 = BigRational::from_integer(b[0].clone());
    let mut q: Vec<BigRational> = Vec::with_capacity(order + 1);
    for i in 0..=order {
        let mut acc = BigRational::from_integer(a[i].clone());
        for l in 1..=i {
            acc -= BigRational::from_integer(b[l].clone()) * &q[i - l];
        }
        q.push(acc / &b0);
    }
    Some(q)
}

/// Coefficients `c_i` of `p(n + h) = sum c_i h^i` for `i <= order`.
fn taylor_shift(p: &IntPolynomial, n: &BigInt, order: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); order + 1];
    let mut deriv = p.clone();
    let mut fact = BigInt::one();
    for (i, slot) in out.iter_mut().enumerate() {
        if i > 0 {
            fact *= BigInt::from(i);
            deriv = deriv.derivative();
        }
        *slot = deriv.eval(n) / &fact;
    }
    out
}

/// The per-point admissibility test: all `gamma_j(n)` and the normalised
/// Wronskian `A Q^{-1}` must be units modulo `p`.
pub fn wronskian_unit_filter(
    rsys: &RationalFunctionSystem,
    p: u64,
    n: &BigInt,
    b: u32,
) -> Result<bool> {
    if !is_prime(p) {
        return Err(Error::input(format!("{p} is not prime")));
    }
    if p <= rsys.k() as u64 {
        return Err(Error::input(format!("need p > k, got p = {p}, k = {}", rsys.k())));
    }
    let pb = BigInt::from(p);
    for den in &rsys.denominators {
        if den.eval(n).mod_floor(&pb).is_zero() {
            return Ok(false);
        }
    }
    let Some(w) = rsys.wronskian_at(n) else {
        return Ok(false);
    };
    let modulus = pow_big(p, b.max(1));
    let Some(q_inv) = mod_inverse(w.denom(), &modulus) else {
        return Ok(false);
    };
    let normalised = (w.numer() * q_inv).mod_floor(&modulus);
    Ok(!normalised.mod_floor(&pb).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    #[test]
    fn wronskian_of_vinogradov_system_is_product_of_factorials() {
        assert_eq!(wronskian(&PolynomialSystem::vinogradov(3)), IntPolynomial::constant(12));
        assert_eq!(wronskian(&PolynomialSystem::vinogradov(1)), IntPolynomial::constant(1));
        assert_eq!(wronskian(&PolynomialSystem::vinogradov(4)), IntPolynomial::constant(288));
    }

    #[test]
    fn wronskian_of_t_and_t_cubed() {
        // det [[1, 3t^2], [0, 6t]]
        let sys = PolynomialSystem::monomials(&[1, 3]).unwrap();
        assert_eq!(wronskian(&sys), IntPolynomial::monomial(6, 1));
    }

    #[test]
    fn dependent_system_has_zero_wronskian() {
        let sys = PolynomialSystem::new(vec![poly(&[0, 1, 1]), poly(&[0, 2, 2])]).unwrap();
        assert!(wronskian(&sys).is_zero());
    }

    #[test]
    fn spacing_examples() {
        let v = PolynomialSystem::vinogradov(3);
        assert!(is_pc_spaced(&v, 7, 5).unwrap());
        let a = PolynomialSystem::new(vec![poly(&[0, 1, 25])]).unwrap();
        assert!(is_pc_spaced(&a, 5, 2).unwrap());
        let b = PolynomialSystem::new(vec![poly(&[0, 1, 5])]).unwrap();
        assert!(!is_pc_spaced(&b, 5, 2).unwrap());
        assert!(is_pc_spaced(&b, 5, 1).unwrap());
        assert!(is_pc_spaced(&v, 6, 1).is_err());
    }

    #[test]
    fn tdi_examples() {
        let v2 = PolynomialSystem::vinogradov(2);
        let diag = Solution::from_i64s(&[3], &[3]);
        let out = tdi_map(&v2, 2, &BigInt::from(1), &diag).unwrap();
        assert_eq!(out, Solution::from_i64s(&[7], &[7]));

        let v1 = PolynomialSystem::vinogradov(1);
        let sol = Solution::from_i64s(&[1, 4], &[2, 3]);
        let out = tdi_map(&v1, 3, &BigInt::zero(), &sol).unwrap();
        assert_eq!(out, Solution::from_i64s(&[3, 12], &[6, 9]));
        assert!(out.satisfies(&v1));

        assert!(tdi_map(&v2, 3, &BigInt::zero(), &sol).is_err());
        let not_vino = PolynomialSystem::monomials(&[1, 3]).unwrap();
        assert!(tdi_map(&not_vino, 1, &BigInt::zero(), &diag).is_err());
    }

    #[test]
    fn system_literal_parsing() {
        let sys: PolynomialSystem = "0,1;0,0,1".parse().unwrap();
        assert!(sys.is_vinogradov());
        assert_eq!(sys.to_string(), "0,1;0,0,1");
        assert!("".parse::<PolynomialSystem>().is_err());
    }

    #[test]
    fn rational_system_rejects_common_factor() {
        let num = poly(&[-1, 0, 1]);
        let den = poly(&[-1, 1]);
        assert!(RationalFunctionSystem::new(vec![num], vec![den]).is_err());
        assert!(RationalFunctionSystem::new(vec![poly(&[0, 1])], vec![IntPolynomial::zero()]).is_err());
    }

    #[test]
    fn unit_filter_examples() {
        let id = RationalFunctionSystem::new(vec![poly(&[0, 1])], vec![poly(&[1])]).unwrap();
        for n in -5..20 {
            assert!(wronskian_unit_filter(&id, 5, &BigInt::from(n), 2).unwrap());
        }

        let frac = RationalFunctionSystem::new(vec![poly(&[0, 1])], vec![poly(&[-1, 1])]).unwrap();
        assert!(!wronskian_unit_filter(&frac, 5, &BigInt::one(), 2).unwrap());

        let v2 = RationalFunctionSystem::from_polynomials(&PolynomialSystem::vinogradov(2));
        assert_eq!(
            v2.wronskian_at(&BigInt::from(5)),
            Some(BigRational::from_integer(BigInt::from(2)))
        );
        assert!(wronskian_unit_filter(&v2, 5, &BigInt::from(5), 2).unwrap());
        assert!(wronskian_unit_filter(&v2, 2, &BigInt::from(5), 2).is_err());
    }

    #[test]
    fn rational_wronskian_of_reciprocal() {
        // chi = 1/t: W = chi' = -1/t^2, at t = 3 gives -1/9
        let rs = RationalFunctionSystem::new(vec![poly(&[1])], vec![poly(&[0, 1])]).unwrap();
        let w = rs.wronskian_at(&BigInt::from(3)).unwrap();
        assert_eq!(w, BigRational::new(BigInt::from(-1), BigInt::from(9)));
        // denominator 9 is a unit mod 5, numerator -1 too
        assert!(wronskian_unit_filter(&rs, 5, &BigInt::from(3), 3).unwrap());
        // at t = 5 the denominator vanishes mod 5
        assert!(!wronskian_unit_filter(&rs, 5, &BigInt::from(5), 3).unwrap());
    }
}
