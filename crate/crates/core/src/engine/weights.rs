//! Finitely supported complex weight sequences.

use num_bigint::BigUint;
use num_complex::Complex64;
use serde_json::Value as Json;

use super::amplitude::GaussInt;
use super::kernel::PointWeights;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum WeightValues {
    Gaussian(Vec<GaussInt>),
    Float(Vec<Complex64>),
}

/// Weights `a_n` for `lo <= n <= hi`, zero elsewhere.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSeq {
    lo: i64,
    values: WeightValues,
}

impl WeightSeq {
    pub fn gaussian(lo: i64, w: Vec<GaussInt>) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::input("weight sequence needs a nonempty support"));
        }
        Ok(WeightSeq {
            lo,
            values: WeightValues::Gaussian(w),
        })
    }

    pub fn float(lo: i64, w: Vec<Complex64>) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::input("weight sequence needs a nonempty support"));
        }
        if w.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::input("weights must be finite"));
        }
        Ok(WeightSeq {
            lo,
            values: WeightValues::Float(w),
        })
    }

    /// All-ones weights on `[lo, hi]`.
    pub fn indicator(lo: i64, hi: i64) -> Result<Self> {
        if hi < lo {
            return Err(Error::input("empty interval"));
        }
        Self::gaussian(lo, vec![GaussInt::new(1, 0); (hi - lo + 1) as usize])
    }

    /// The zero sequence on `[lo, hi]`.
    pub fn zero(lo: i64, hi: i64) -> Result<Self> {
        if hi < lo {
            return Err(Error::input("empty interval"));
        }
        Self::gaussian(lo, vec![GaussInt::default(); (hi - lo + 1) as usize])
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        match &self.values {
            WeightValues::Gaussian(w) => w.len(),
            WeightValues::Float(w) => w.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn values(&self) -> &WeightValues {
        &self.values
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.values, WeightValues::Gaussian(_))
    }

    pub fn gaussian_at(&self, n: i64) -> Option<GaussInt> {
        match &self.values {
            WeightValues::Gaussian(w) => {
                let i = n.checked_sub(self.lo)?;
                if i < 0 {
                    return Some(GaussInt::default());
                }
                Some(w.get(i as usize).copied().unwrap_or_default())
            }
            WeightValues::Float(_) => None,
        }
    }

    pub fn complex_at(&self, n: i64) -> Complex64 {
        let i = n - self.lo;
        if i < 0 || i as usize >= self.len() {
            return Complex64::new(0.0, 0.0);
        }
        match &self.values {
            WeightValues::Gaussian(w) => w[i as usize].to_complex(),
            WeightValues::Float(w) => w[i as usize],
        }
    }

    pub fn is_zero_at(&self, n: i64) -> bool {
        let z = self.complex_at(n);
        z.re == 0.0 && z.im == 0.0
    }

    /// Support points with nonzero weight, in increasing order.
    pub fn support(&self) -> Vec<i64> {
        (self.lo..=self.hi()).filter(|&n| !self.is_zero_at(n)).collect()
    }

    /// `rho_0^2 = sum |a_n|^2`, exactly.
    pub fn rho0_sq(&self) -> Option<BigUint> {
        match &self.values {
            WeightValues::Gaussian(w) => Some(w.iter().map(|g| g.norm()).sum()),
            WeightValues::Float(_) => None,
        }
    }

    pub fn rho0_sq_f64(&self) -> f64 {
        match &self.values {
            WeightValues::Gaussian(w) => w.iter().map(|g| g.to_complex().norm_sqr()).sum(),
            WeightValues::Float(w) => w.iter().map(|z| z.norm_sqr()).sum(),
        }
    }

    /// Kernel weights for the given points; points outside the support get zero.
    pub fn point_weights(&self, xs: &[i64]) -> PointWeights {
        match &self.values {
            WeightValues::Gaussian(_) => {
                PointWeights::Gaussian(xs.iter().map(|&x| self.gaussian_at(x).unwrap()).collect())
            }
            WeightValues::Float(_) => PointWeights::Float(xs.iter().map(|&x| self.complex_at(x)).collect()),
        }
    }

    /// Parses `{"lo":..,"hi":..,"weights":[[re,im],..]}`. Integer entries give
    /// exact Gaussian weights; any fractional entry switches to doubles.
    pub fn from_json(text: &str) -> Result<Self> {
        let v: Json = serde_json::from_str(text).map_err(|e| Error::input(format!("weights: {e}")))?;
        let lo = v["lo"].as_i64().ok_or_else(|| Error::input("weights: missing integer \"lo\""))?;
        let hi = v["hi"].as_i64().ok_or_else(|| Error::input("weights: missing integer \"hi\""))?;
        let arr = v["weights"]
            .as_array()
            .ok_or_else(|| Error::input("weights: missing \"weights\" array"))?;
        if hi < lo || arr.len() as i64 != hi - lo + 1 {
            return Err(Error::input("weights: length must equal hi - lo + 1"));
        }
        let mut pairs = Vec::with_capacity(arr.len());
        for e in arr {
            let pair = e.as_array().filter(|p| p.len() == 2).ok_or_else(|| Error::input("weights: entries are [re, im]"))?;
            pairs.push((pair[0].clone(), pair[1].clone()));
        }
        let exact = pairs.iter().all(|(a, b)| a.is_i64() && b.is_i64());
        if exact {
            let w = pairs
                .iter()
                .map(|(a, b)| GaussInt::new(a.as_i64().unwrap() as i128, b.as_i64().unwrap() as i128))
                .collect();
            Self::gaussian(lo, w)
        } else {
            let mut w = Vec::with_capacity(pairs.len());
            for (a, b) in pairs {
                let re = a.as_f64().ok_or_else(|| Error::input("weights: non-numeric entry"))?;
                let im = b.as_f64().ok_or_else(|| Error::input("weights: non-numeric entry"))?;
                w.push(Complex64::new(re, im));
            }
            Self::float(lo, w)
        }
    }

    pub fn to_json(&self) -> String {
        let weights: Vec<Json> = match &self.values {
            WeightValues::Gaussian(w) => w
                .iter()
                .map(|g| serde_json::json!([g.re as i64, g.im as i64]))
                .collect(),
            WeightValues::Float(w) => w.iter().map(|z| serde_json::json!([z.re, z.im])).collect(),
        };
        serde_json::json!({"lo": self.lo, "hi": self.hi(), "weights": weights}).to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let w = WeightSeq::gaussian(-1, vec![GaussInt::new(1, 0), GaussInt::new(0, -2), GaussInt::new(3, 4)]).unwrap();
        let back = WeightSeq::from_json(&w.to_json()).unwrap();
        assert_eq!(w, back);
        assert_eq!(back.rho0_sq(), Some(BigUint::from(30u8)));
        let f = WeightSeq::from_json(r#"{"lo":0,"hi":1,"weights":[[0.5,0],[1,1]]}"#).unwrap();
        assert!(!f.is_exact());
        assert!(WeightSeq::from_json(r#"{"lo":0,"hi":3,"weights":[[1,0]]}"#).is_err());
    }

    #[test]
    fn support_skips_zeros() {
        let w = WeightSeq::gaussian(5, vec![GaussInt::new(0, 0), GaussInt::new(0, 1), GaussInt::new(0, 0)]).unwrap();
        assert_eq!(w.support(), vec![6]);
        assert_eq!(w.gaussian_at(100), Some(GaussInt::default()));
    }
}
