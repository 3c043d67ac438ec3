//! Encodings of power-sum vectors as hashable, totally ordered keys.
//!
//! Packed encodings place component 1 in the most significant digit, so the
//! integer order of keys is the lexicographic order of the vectors.

use std::fmt::Debug;
use std::hash::Hash;
use std::ops::{Add, Div, Mul, Rem, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

pub trait KeySpace: Send + Sync + 'static {
    type Key: Clone + Eq + Ord + Hash + Send + Sync + Debug + 'static;

    /// Number of components of a power-sum vector.
    fn arity(&self) -> usize;
    /// Key of the empty sum.
    fn zero(&self) -> Self::Key;
    fn add(&self, a: &Self::Key, b: &Self::Key) -> Self::Key;
    /// Key of a single point from its component values.
    fn encode_point(&self, values: &[BigInt]) -> Self::Key;
    /// Key of a power-sum vector built from `summands` points, if representable.
    fn encode_vector(&self, m: &[BigInt], summands: usize) -> Option<Self::Key>;
    fn decode(&self, key: &Self::Key, summands: usize) -> Vec<BigInt>;
    /// Approximate memory per stored key.
    fn key_bytes(&self) -> usize;
    /// Number of distinct keys the space can hold, when finite and known.
    fn capacity(&self) -> Option<u128> {
        None
    }
}

/// Fixed-width unsigned word used by the packed encodings.
pub trait Word:
    Copy
    + Ord
    + Eq
    + Hash
    + Send
    + Sync
    + Debug
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Rem<Output = Self>
{
    const ZERO: Self;
    const MAX_U128: u128;
    fn from_u128(v: u128) -> Self;
    fn to_u128(self) -> u128;
}

impl Word for u64 {
    const ZERO: Self = 0;
    const MAX_U128: u128 = u64::MAX as u128;
    fn from_u128(v: u128) -> Self {
        v as u64
    }
    fn to_u128(self) -> u128 {
        self as u128
    }
}

impl Word for u128 {
    const ZERO: Self = 0;
    const MAX_U128: u128 = u128::MAX;
    fn from_u128(v: u128) -> Self {
        v
    }
    fn to_u128(self) -> u128 {
        self
    }
}

/// Mixed-radix packing of integer power sums offset by their minimum.
///
/// Packing is additive: the key of a multiset is the sum of its point keys.
#[derive(Debug, Clone)]
pub struct LinearPacked<W: Word> {
    min: Vec<BigInt>,
    digits: Vec<u128>,
    place: Vec<W>,
    capacity: u128,
}

impl<W: Word> LinearPacked<W> {
    /// Plans an encoding able to hold sums of up to `max_summands` points.
    pub fn plan(points: &[Vec<BigInt>], arity: usize, max_summands: usize) -> Option<Self> {
        let mut min = vec![BigInt::zero(); arity];
        let mut max = vec![BigInt::zero(); arity];
        for (i, p) in points.iter().enumerate() {
            for j in 0..arity {
                if i == 0 || p[j] < min[j] {
                    min[j] = p[j].clone();
                }
                if i == 0 || p[j] > max[j] {
                    max[j] = p[j].clone();
                }
            }
        }
        let mut digits = Vec::with_capacity(arity);
        for j in 0..arity {
            let span = ((&max[j] - &min[j]) * BigInt::from(max_summands) + 1u32).to_u128()?;
            digits.push(span);
        }
        let mut place = vec![W::ZERO; arity];
        let mut acc: u128 = 1;
        for j in (0..arity).rev() {
            place[j] = W::from_u128(acc);
            acc = acc.checked_mul(digits[j])?;
            if acc - 1 > W::MAX_U128 {
                return None;
            }
        }
        Some(LinearPacked {
            min,
            digits,
            place,
            capacity: acc,
        })
    }
}

impl<W: Word> KeySpace for LinearPacked<W> {
    type Key = W;

    fn arity(&self) -> usize {
        self.min.len()
    }

    fn zero(&self) -> W {
        W::ZERO
    }

    #[inline]
    fn add(&self, a: &W, b: &W) -> W {
        *a + *b
    }

    fn encode_point(&self, values: &[BigInt]) -> W {
        let mut key = W::ZERO;
        for j in 0..self.min.len() {
            let d = (&values[j] - &self.min[j]).to_u128().expect("point outside planned range");
            key = key + W::from_u128(d) * self.place[j];
        }
        key
    }

    fn encode_vector(&self, m: &[BigInt], summands: usize) -> Option<W> {
        if m.len() != self.min.len() {
            return None;
        }
        let mut key = W::ZERO;
        for j in 0..m.len() {
            let d = (&m[j] - &self.min[j] * BigInt::from(summands)).to_u128()?;
            if d >= self.digits[j] {
                return None;
            }
            key = key + W::from_u128(d) * self.place[j];
        }
        Some(key)
    }

    fn decode(&self, key: &W, summands: usize) -> Vec<BigInt> {
        let k = key.to_u128();
        (0..self.min.len())
            .map(|j| {
                let d = (k / self.place[j].to_u128()) % self.digits[j];
                BigInt::from(d) + &self.min[j] * BigInt::from(summands)
            })
            .collect()
    }

    fn key_bytes(&self) -> usize {
        std::mem::size_of::<W>()
    }

    fn capacity(&self) -> Option<u128> {
        Some(self.capacity)
    }
}

/// Packing of residue vectors modulo a common modulus `M`.
#[derive(Debug, Clone)]
pub struct ModPacked<W: Word> {
    modulus: W,
    arity: usize,
}

impl<W: Word> ModPacked<W> {
    pub fn plan(modulus: u128, arity: usize) -> Option<Self> {
        let mut acc: u128 = 1;
        for _ in 0..arity {
            acc = acc.checked_mul(modulus)?;
        }
        if acc - 1 > W::MAX_U128 {
            return None;
        }
        Some(ModPacked {
            modulus: W::from_u128(modulus),
            arity,
        })
    }
}

impl<W: Word> KeySpace for ModPacked<W> {
    type Key = W;

    fn arity(&self) -> usize {
        self.arity
    }

    fn zero(&self) -> W {
        W::ZERO
    }

    #[inline]
    fn add(&self, a: &W, b: &W) -> W {
        let m = self.modulus;
        let (mut a, mut b) = (*a, *b);
        let mut out = W::ZERO;
        let mut place = W::from_u128(1);
        for j in 0..self.arity {
            let mut d = a % m + b % m;
            if d >= m {
                d = d - m;
            }
            out = out + d * place;
            a = a / m;
            b = b / m;
            if j + 1 < self.arity {
                place = place * m;
            }
        }
        out
    }

    fn encode_point(&self, values: &[BigInt]) -> W {
        self.encode_vector(values, 1).expect("residue encoding")
    }

    fn encode_vector(&self, m: &[BigInt], _summands: usize) -> Option<W> {
        if m.len() != self.arity {
            return None;
        }
        let modulus = BigInt::from(self.modulus.to_u128());
        let mut key = W::ZERO;
        for v in m {
            let r = v.mod_floor(&modulus).to_u128()?;
            key = key * self.modulus + W::from_u128(r);
        }
        Some(key)
    }

    fn decode(&self, key: &W, _summands: usize) -> Vec<BigInt> {
        let m = self.modulus.to_u128();
        let mut k = key.to_u128();
        let mut out = vec![BigInt::zero(); self.arity];
        for slot in out.iter_mut().rev() {
            *slot = BigInt::from(k % m);
            k /= m;
        }
        out
    }

    fn key_bytes(&self) -> usize {
        std::mem::size_of::<W>()
    }

    fn capacity(&self) -> Option<u128> {
        self.modulus.to_u128().checked_pow(self.arity as u32)
    }
}

/// Fallback encoding storing the components themselves.
#[derive(Debug, Clone)]
pub struct WideSpace {
    arity: usize,
    modulus: Option<BigInt>,
}

impl WideSpace {
    pub fn new(arity: usize, modulus: Option<BigInt>) -> Self {
        WideSpace { arity, modulus }
    }

    fn reduce(&self, v: BigInt) -> BigInt {
        match &self.modulus {
            Some(m) => v.mod_floor(m),
            None => v,
        }
    }
}

impl KeySpace for WideSpace {
    type Key = Box<[BigInt]>;

    fn arity(&self) -> usize {
        self.arity
    }

    fn zero(&self) -> Self::Key {
        vec![BigInt::zero(); self.arity].into_boxed_slice()
    }

    fn add(&self, a: &Self::Key, b: &Self::Key) -> Self::Key {
        a.iter()
            .zip(b.iter())
            .map(|(x, y)| self.reduce(x + y))
            .collect()
    }

    fn encode_point(&self, values: &[BigInt]) -> Self::Key {
        values.iter().map(|v| self.reduce(v.clone())).collect()
    }

    fn encode_vector(&self, m: &[BigInt], _summands: usize) -> Option<Self::Key> {
        (m.len() == self.arity).then(|| self.encode_point(m))
    }

    fn decode(&self, key: &Self::Key, _summands: usize) -> Vec<BigInt> {
        key.to_vec()
    }

    fn key_bytes(&self) -> usize {
        16 + self.arity * 32
    }
}
