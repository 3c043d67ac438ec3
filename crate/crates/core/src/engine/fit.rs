//! Least-squares growth exponents on log-log data.

use serde::{Deserialize, Serialize};

use super::result::MeanValueResult;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub pairs: Vec<(f64, f64)>,
    pub slope: f64,
    pub intercept: f64,
    pub conjectured: f64,
    /// RMS of the log residuals.
    pub residual: f64,
}

/// `max(s, 2s - k(k+1)/2)`.
pub fn conjectured_exponent(s: usize, k: usize) -> f64 {
    let s = s as i64;
    let k = k as i64;
    s.max(2 * s - k * (k + 1) / 2) as f64
}

/// Fits `log y = slope * log x + intercept`.
pub fn fit_loglog(pairs: &[(f64, f64)], conjectured: f64) -> Result<FitReport> {
    let mut xs: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    if xs.len() < 3 {
        return Err(Error::input("fit needs at least three distinct abscissae"));
    }
    if pairs.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0 && x.is_finite() && y.is_finite())) {
        return Err(Error::input("fit needs positive finite data"));
    }
    let n = pairs.len() as f64;
    let lx: Vec<f64> = pairs.iter().map(|p| p.0.ln()).collect();
    let ly: Vec<f64> = pairs.iter().map(|p| p.1.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = lx
        .iter()
        .zip(&ly)
        .map(|(x, y)| {
            let r = y - (slope * x + intercept);
            r * r
        })
        .sum();
    Ok(FitReport {
        pairs: pairs.to_vec(),
        slope,
        intercept,
        conjectured,
        residual: (rss / n).sqrt(),
    })
}

/// Slope of `log J` against `log X` with the main-conjecture exponent attached.
pub fn exponent_fit(values: &[(f64, MeanValueResult)], s: usize, k: usize) -> Result<FitReport> {
    let pairs: Vec<(f64, f64)> = values.iter().map(|(x, r)| (*x, r.value.to_f64())).collect();
    fit_loglog(&pairs, conjectured_exponent(s, k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_series() {
        let pairs: Vec<(f64, f64)> = [10.0, 20.0, 40.0, 80.0].iter().map(|&x| (x, 2.0 * x * x - x)).collect();
        let f = fit_loglog(&pairs, conjectured_exponent(2, 2)).unwrap();
        // 2 - 1/X grows with X, so the fitted slope sits just above 2.
        assert!((f.slope - 2.021_324_49).abs() < 1e-8, "{}", f.slope);
        assert_eq!(f.conjectured, 2.0);
        let lin: Vec<(f64, f64)> = (1..6).map(|x| (x as f64, x as f64)).collect();
        let f = fit_loglog(&lin, conjectured_exponent(1, 1)).unwrap();
        assert!((f.slope - 1.0).abs() < 1e-12);
        assert_eq!(f.conjectured, 1.0);
        let flat: Vec<(f64, f64)> = (1..6).map(|x| (x as f64, 1.0)).collect();
        assert!(fit_loglog(&flat, 0.0).unwrap().slope.abs() < 1e-12);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(fit_loglog(&[(2.0, 1.0), (2.0, 3.0), (2.0, 4.0)], 1.0).is_err());
        assert!(fit_loglog(&[(1.0, 1.0), (2.0, 0.0), (3.0, 4.0)], 1.0).is_err());
        assert_eq!(conjectured_exponent(6, 3), 6.0);
        assert_eq!(conjectured_exponent(8, 3), 10.0);
    }
}
