use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Least-squares power law `error ≈ 2^intercept · k^slope`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    /// RMS residual in log2 units.
    pub residual: f64,
    pub ks: Vec<f64>,
    pub errors: Vec<f64>,
}

impl RateFit {
    pub fn predict(&self, k: f64) -> f64 {
        (self.intercept + self.slope * k.log2()).exp2()
    }
}

/// Fits the slope of `log2(error)` against `log2(k)` using every point.
pub fn fit_rate(points: &[(f64, f64)]) -> Result<RateFit> {
    if points.len() < 3 {
        return Err(Error::DegenerateFit(format!(
            "need at least 3 points, got {}",
            points.len()
        )));
    }
    for w in points.windows(2) {
        if !(w[1].0 < w[0].0) {
            return Err(Error::DegenerateFit(
                "step sizes must be strictly decreasing".into(),
            ));
        }
    }
    for &(k, e) in points {
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::DegenerateFit(format!("step size {k} is not positive")));
        }
        if !(e > 0.0 && e.is_finite()) {
            return Err(Error::DegenerateFit(format!("error {e} at k = {k} is not positive")));
        }
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.log2()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.log2()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(RateFit {
        slope,
        intercept,
        residual,
        ks: points.iter().map(|p| p.0).collect(),
        errors: points.iter().map(|p| p.1).collect(),
    })
}
