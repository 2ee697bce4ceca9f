use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `K = 4 exp(1 + 1/(2e))` from the maximal inequality for `N` stochastic integrals.
pub fn maximal_inequality_constant() -> f64 {
    4.0 * (1.0 + 1.0 / (2.0 * std::f64::consts::E)).exp()
}

/// Burkholder–Davis–Gundy constant: `B_2 = 2`, `B_p = 4√p` for `p > 2`.
pub fn bdg_constant(p: f64) -> Result<f64> {
    if !(p >= 2.0) || !p.is_finite() {
        return Err(Error::InvalidArgument(format!("p must be at least 2, got {p}")));
    }
    Ok(if p == 2.0 { 2.0 } else { 4.0 * p.sqrt() })
}

/// `φ(t) ≤ α(1+β²t)^{1/2} exp(½ + ½β²t)` whenever
/// `φ(t) ≤ α + β(∫_0^t φ²)^{1/2}`.
pub fn gronwall_continuous_bound(alpha: f64, beta: f64, t: f64) -> f64 {
    let b2t = beta * beta * t;
    alpha * (1.0 + b2t).sqrt() * (0.5 + 0.5 * b2t).exp()
}

/// Discrete analogue for `φ_j ≤ α + β(Σ_{i<j} φ_i²)^{1/2}`.
pub fn gronwall_discrete_bound(alpha: f64, beta: f64, j: u64) -> f64 {
    gronwall_continuous_bound(alpha, beta, j as f64)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundConstants {
    pub c_f: f64,
    pub c_g: f64,
    pub t_final: f64,
    pub p: f64,
    pub b_p: f64,
    /// `C = C_F √T + B_p C_G`.
    pub c: f64,
    /// `(1 + C²T)^{1/2} e^{(1+C²T)/2}`; the same expression serves as
    /// `C_bdd` and `C_e`.
    pub c_stab: f64,
}

/// Stability constant of contractive schemes with linear-growth coefficients.
pub fn stability_constant(c_f: f64, c_g: f64, t_final: f64, p: f64) -> Result<BoundConstants> {
    if !(c_f >= 0.0 && c_g >= 0.0 && t_final >= 0.0) {
        return Err(Error::InvalidArgument(
            "growth constants and T must be non-negative".into(),
        ));
    }
    let b_p = bdg_constant(p)?;
    let c = c_f * t_final.sqrt() + b_p * c_g;
    let s = 1.0 + c * c * t_final;
    Ok(BoundConstants {
        c_f,
        c_g,
        t_final,
        p,
        b_p,
        c,
        c_stab: s.sqrt() * (0.5 * s).exp(),
    })
}
