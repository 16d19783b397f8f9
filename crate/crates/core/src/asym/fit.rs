use rug::Float;
use serde::Serialize;

use crate::error::{Error, Result};

/// Samples used by a fit: at most this many, the smallest `t` values.
pub const MAX_FIT_SAMPLES: usize = 5;

/// One `(t, residual)` point; the residual is kept as its natural log so
/// values far below the `f64` range survive.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RateSample {
    pub t: f64,
    pub ln_residual: f64,
}

/// Least-squares fit of `ln residual ≈ ln A − C/t`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RateFit {
    pub samples: Vec<RateSample>,
    pub c_fit: f64,
    pub c_pred: Option<f64>,
    pub rel_err: Option<f64>,
}

impl RateFit {
    /// Residuals strictly decrease along the (decreasing) `t` grid and the
    /// fitted constant is positive.
    pub fn decays(&self) -> bool {
        self.c_fit > 0.0 && self.samples.windows(2).all(|w| w[1].ln_residual < w[0].ln_residual)
    }

    /// Local power-law exponent `Δ ln r / Δ ln t` between the two smallest `t`.
    pub fn last_power(&self) -> f64 {
        let n = self.samples.len();
        let (a, b) = (&self.samples[n - 2], &self.samples[n - 1]);
        (a.ln_residual - b.ln_residual) / (a.t.ln() - b.t.ln())
    }
}

/// Fits `C` from `(t, residual)` pairs given in strictly decreasing `t`.
/// Only the last [`MAX_FIT_SAMPLES`] points enter the fit.
pub fn rate_fit(samples: &[(f64, Float)], c_pred: Option<f64>) -> Result<RateFit> {
    if samples.len() < 3
        || samples.windows(2).any(|w| w[1].0.partial_cmp(&w[0].0) != Some(std::cmp::Ordering::Less))
        || samples.iter().any(|s| s.0.is_nan() || s.0 <= 0.0)
    {
        return Err(Error::InsufficientSamples);
    }
    let mut pts = Vec::with_capacity(samples.len());
    for (idx, (t, r)) in samples.iter().enumerate() {
        if r.is_nan() || *r <= 0 || r.is_infinite() {
            return Err(Error::NonPositiveResidual(idx));
        }
        pts.push(RateSample { t: *t, ln_residual: r.clone().ln().to_f64() });
    }
    let used = &pts[pts.len().saturating_sub(MAX_FIT_SAMPLES)..];
    let n = used.len() as f64;
    let xs: Vec<f64> = used.iter().map(|s| -1.0 / s.t).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = used.iter().map(|s| s.ln_residual).sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (x, s) in xs.iter().zip(used) {
        sxy += (x - mx) * (s.ln_residual - my);
        sxx += (x - mx) * (x - mx);
    }
    let c_fit = sxy / sxx;
    let rel_err = c_pred.map(|p| (c_fit - p).abs() / p.abs());
    Ok(RateFit { samples: pts, c_fit, c_pred, rel_err })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synth(c: f64, a: f64, ts: &[f64]) -> Vec<(f64, Float)> {
        ts.iter().map(|&t| (t, Float::with_val(128, a * (-c / t).exp()))).collect()
    }

    #[test]
    fn synthetic_exponential() {
        let fit = rate_fit(&synth(5.0, 1.0, &[1.0, 0.5, 0.25]), Some(5.0)).unwrap();
        assert!((fit.c_fit - 5.0).abs() < 1e-12);
        assert!(fit.rel_err.unwrap() < 1e-12);
        assert!(fit.decays());
    }

    #[test]
    fn prefactor_does_not_change_slope() {
        let fit = rate_fit(&synth(7.5, 123.0, &[0.6, 0.4, 0.3, 0.2]), None).unwrap();
        assert!((fit.c_fit - 7.5).abs() < 1e-10);
    }

    #[test]
    fn only_smallest_t_enter() {
        let mut s = synth(3.0, 1.0, &[0.3, 0.25, 0.2, 0.15, 0.1]);
        s.insert(0, (10.0, Float::with_val(64, 1e-300)));
        let fit = rate_fit(&s, None).unwrap();
        assert!((fit.c_fit - 3.0).abs() < 1e-9);
        assert_eq!(fit.samples.len(), 6);
    }

    #[test]
    fn tiny_residuals_survive() {
        let s: Vec<_> = [0.5, 0.25, 0.125]
            .iter()
            .map(|&t: &f64| (t, Float::with_val(64, Float::i_exp(1, -(800.0 * 0.125 / t) as i32))))
            .collect();
        let fit = rate_fit(&s, None).unwrap();
        assert!((fit.c_fit - 100.0 * std::f64::consts::LN_2).abs() < 1e-6);
    }

    #[test]
    fn errors() {
        assert_eq!(rate_fit(&synth(1.0, 1.0, &[1.0, 0.5]), None), Err(Error::InsufficientSamples));
        assert_eq!(rate_fit(&synth(1.0, 1.0, &[0.5, 1.0, 0.25]), None), Err(Error::InsufficientSamples));
        let mut s = synth(1.0, 1.0, &[1.0, 0.5, 0.25]);
        s[1].1 = Float::with_val(64, 0);
        assert_eq!(rate_fit(&s, None), Err(Error::NonPositiveResidual(1)));
    }

    #[test]
    fn power_law_exponent() {
        let s: Vec<_> = [0.5, 0.25, 0.125].iter().map(|&t: &f64| (t, Float::with_val(64, t.powi(9)))).collect();
        let fit = rate_fit(&s, None).unwrap();
        assert!((fit.last_power() - 9.0).abs() < 1e-9);
    }
}
