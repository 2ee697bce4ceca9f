use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::schemes::SchemeKind;

/// Problem class for the rate lookup.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ProblemClass {
    /// `F = G = 0`: order of `R` on `D((−A)^β)`.
    Deterministic,
    /// Additive noise, rates up to 1.
    SdeAdditive,
    /// Multiplicative noise, rates capped at ½.
    SdeMultiplicative,
    /// Dirichlet wave with trace-class noise and `X_β` data (`β ≤ 1`).
    WaveTraceClass,
    /// Dirichlet wave with space-time white noise. Rates are suprema that are
    /// not attained.
    WaveWhite,
    /// Torus wave with smooth noise of regularity `δ ∈ (1, 2]`.
    WaveSmooth { delta: f64 },
}

/// Predicted rate. `limit` marks a supremum approached from below.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoreticalRate {
    pub alpha: f64,
    pub limit: bool,
}

fn exact(alpha: f64) -> TheoreticalRate {
    TheoreticalRate { alpha, limit: false }
}

/// Order of `R` on `D((−A)^β)`, capped at `cap`.
fn scheme_order(scheme: SchemeKind, beta: f64, cap: f64) -> Result<f64> {
    match scheme {
        SchemeKind::ExponentialEuler => Ok(beta.min(cap)),
        SchemeKind::ImplicitEuler => Ok((beta / 2.0).min(cap)),
        SchemeKind::CrankNicolson => Ok((2.0 * beta / 3.0).min(cap)),
        SchemeKind::CustomRational => Err(Error::InvalidArgument(
            "no tabulated rate for custom rational schemes".into(),
        )),
    }
}

/// Convergence rate of EE/IE/CN for data in `Y = D((−A)^β)`.
///
/// Deterministic EE is exact and reported as `+∞`. For the wave classes `β`
/// is the smoothness of the data in the `X_β` scale.
pub fn theoretical_rate(
    scheme: SchemeKind,
    beta: f64,
    problem: ProblemClass,
) -> Result<TheoreticalRate> {
    if !(beta > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "smoothness must be positive, got {beta}"
        )));
    }
    match problem {
        ProblemClass::Deterministic => match scheme {
            SchemeKind::ExponentialEuler => Ok(exact(f64::INFINITY)),
            SchemeKind::ImplicitEuler => scheme_order(scheme, beta, 1.0).map(exact),
            _ => scheme_order(scheme, beta, 2.0).map(exact),
        },
        ProblemClass::SdeAdditive | ProblemClass::WaveTraceClass => {
            scheme_order(scheme, beta.min(1.0), 1.0).map(exact)
        }
        ProblemClass::SdeMultiplicative => scheme_order(scheme, beta, 0.5).map(exact),
        ProblemClass::WaveWhite => Ok(TheoreticalRate {
            alpha: scheme_order(scheme, beta.min(0.5), 1.0)?,
            limit: true,
        }),
        ProblemClass::WaveSmooth { delta } => {
            if !(delta > 1.0 && delta <= 2.0) {
                return Err(Error::InvalidArgument(format!(
                    "smooth-noise regularity must lie in (1, 2], got {delta}"
                )));
            }
            scheme_order(scheme, beta.min(delta), 1.0).map(exact)
        }
    }
}

/// `δ = min(1 + β/2, 2)` for noise with eigenvalues `q_j = j^{−β}`.
pub fn smooth_noise_delta(q_decay: f64) -> f64 {
    (1.0 + q_decay / 2.0).min(2.0)
}
