//! Fraction-free determinants over exact integral domains.

/// An integral domain with exact division, described by a context value so
/// that rings needing runtime parameters (such as `F_q[t]`) fit the same API.
pub trait IntegralDomain {
    type Elem: Clone;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        self.sub(&self.zero(), a)
    }
    /// `a / b`, where the caller guarantees that `b` divides `a`.
    fn div_exact(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
}

/// Determinant of a square matrix by Bareiss elimination.
///
/// Every intermediate entry is a minor of the input, so the only divisions
/// performed are exact.
pub fn bareiss_det<D: IntegralDomain>(ring: &D, mut m: Vec<Vec<D::Elem>>) -> D::Elem {
    let n = m.len();
    if n == 0 {
        return ring.one();
    }
    debug_assert!(m.iter().all(|row| row.len() == n));
    let mut negate = false;
    let mut prev = ring.one();
    for k in 0..n - 1 {
        if ring.is_zero(&m[k][k]) {
            match (k + 1..n).find(|&r| !ring.is_zero(&m[r][k])) {
                Some(r) => {
                    m.swap(k, r);
                    negate = !negate;
                }
                None => return ring.zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = ring.sub(
                    &ring.mul(&m[i][j], &m[k][k]),
                    &ring.mul(&m[i][k], &m[k][j]),
                );
                m[i][j] = ring.div_exact(&t, &prev);
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        ring.neg(&det)
    } else {
        det
    }
}

/// The rational numbers, used for Wronskians of rational functions at a point.
pub struct Rationals;

impl IntegralDomain for Rationals {
    type Elem = num_rational::BigRational;

    fn zero(&self) -> Self::Elem {
        num_traits::Zero::zero()
    }
    fn one(&self) -> Self::Elem {
        num_traits::One::one()
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        num_traits::Zero::is_zero(a)
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a + b
    }
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a - b
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a * b
    }
    fn div_exact(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a / b
    }
}

/// The rational integers.
pub struct Integers;

impl IntegralDomain for Integers {
    type Elem = num_bigint::BigInt;

    fn zero(&self) -> Self::Elem {
        num_traits::Zero::zero()
    }
    fn one(&self) -> Self::Elem {
        num_traits::One::one()
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        num_traits::Zero::is_zero(a)
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a + b
    }
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a - b
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a * b
    }
    fn div_exact(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a / b
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn m(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect()
    }

    // Leibniz expansion as an independent check.
    fn leibniz(a: &[Vec<BigInt>]) -> BigInt {
        let n = a.len();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut total = BigInt::from(0);
        fn rec(i: usize, perm: &mut Vec<usize>, a: &[Vec<BigInt>], sign: i64, total: &mut BigInt) {
            let n = perm.len();
            if i == n {
                let mut prod = BigInt::from(sign);
                for (r, &c) in perm.iter().enumerate() {
                    prod *= &a[r][c];
                }
                *total += prod;
                return;
            }
            for j in i..n {
                perm.swap(i, j);
                rec(i + 1, perm, a, if i == j { sign } else { -sign }, total);
                perm.swap(i, j);
            }
        }
        rec(0, &mut perm, a, 1, &mut total);
        total
    }

    #[test]
    fn integer_determinants_match_leibniz() {
        let cases = [
            m(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 1]]),
            m(&[&[0, 1, 2], &[1, 0, 3], &[4, -3, 8]]),
            m(&[&[0, 0], &[0, 5]]),
            m(&[&[1, 2, 3, 4], &[2, 3, 4, 1], &[3, 4, 1, 2], &[4, 1, 2, 3]]),
        ];
        for c in cases {
            assert_eq!(bareiss_det(&Integers, c.clone()), leibniz(&c));
        }
    }
}
