use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{FrequencyLattice, GeneratorKind, SpectralState};

fn one() -> f64 {
    1.0
}

/// Spectral initial data (also used for the potential).
///
/// Scalar variants fill the first component; on a wave lattice the velocity
/// is zero unless a `pair` is given.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum InitialData {
    Zero,
    /// `c_ℓ = a / (1 + |ℓ|^exponent)`.
    AlgebraicDecay {
        exponent: f64,
        #[serde(default = "one")]
        amplitude: f64,
    },
    /// `c_ℓ = a (1 + |ℓ|)^{−rho}`.
    PowerDecay {
        rho: f64,
        #[serde(default = "one")]
        amplitude: f64,
    },
    /// `a e_mode`.
    SingleMode {
        mode: i64,
        #[serde(default = "one")]
        amplitude: f64,
    },
    /// Position and velocity of a wave state.
    Pair {
        u: Box<InitialData>,
        v: Box<InitialData>,
    },
}

impl InitialData {
    fn scalar_coeffs(&self, lattice: &FrequencyLattice) -> Result<Vec<Complex64>> {
        let modes = lattice.modes();
        let c = |f: &dyn Fn(f64) -> f64| -> Vec<Complex64> {
            modes
                .iter()
                .map(|&l| Complex64::new(f(l.unsigned_abs() as f64), 0.0))
                .collect()
        };
        match *self {
            InitialData::Zero => Ok(vec![Complex64::new(0.0, 0.0); modes.len()]),
            InitialData::AlgebraicDecay { exponent, amplitude } => {
                Ok(c(&|l| amplitude / (1.0 + l.powf(exponent))))
            }
            InitialData::PowerDecay { rho, amplitude } => Ok(c(&|l| amplitude * (1.0 + l).powf(-rho))),
            InitialData::SingleMode { mode, amplitude } => {
                let idx = lattice.index_of(mode).ok_or_else(|| {
                    Error::InvalidArgument(format!("mode {mode} is not on the lattice"))
                })?;
                let mut v = vec![Complex64::new(0.0, 0.0); modes.len()];
                v[idx] = Complex64::new(amplitude, 0.0);
                Ok(v)
            }
            InitialData::Pair { .. } => Err(Error::InvalidArgument(
                "a (u, v) pair cannot be nested or used as scalar data".into(),
            )),
        }
    }

    pub fn build(&self, lattice: &Arc<FrequencyLattice>) -> Result<SpectralState> {
        match (self, lattice.generator()) {
            (InitialData::Pair { u, v }, GeneratorKind::Wave) => {
                SpectralState::from_pair(lattice, &u.scalar_coeffs(lattice)?, &v.scalar_coeffs(lattice)?)
            }
            (InitialData::Pair { .. }, GeneratorKind::Schrodinger) => Err(Error::InvalidArgument(
                "(u, v) data needs a wave lattice".into(),
            )),
            (_, GeneratorKind::Wave) => {
                let zero = vec![Complex64::new(0.0, 0.0); lattice.len()];
                SpectralState::from_pair(lattice, &self.scalar_coeffs(lattice)?, &zero)
            }
            (_, GeneratorKind::Schrodinger) => SpectralState::from_coeffs(lattice, self.scalar_coeffs(lattice)?),
        }
    }

    /// Decay exponent `e` with `|c_ℓ| ≍ |ℓ|^{−e}`; infinite for finitely many modes.
    fn decay(&self) -> f64 {
        match *self {
            InitialData::AlgebraicDecay { exponent, .. } => exponent,
            InitialData::PowerDecay { rho, .. } => rho,
            _ => f64::INFINITY,
        }
    }

    /// Critical exponent `β` of `D((−A)^β)` (or `X_β` for the wave) that the
    /// untruncated data just fails to reach.
    ///
    /// On the torus `D((−A)^β) = H^{2β}` for the Schrödinger generator, so
    /// `β = (2e − 1)/4`; in the wave scale `X_β` weighs `u` by `λ^β ≍ ℓ^{2β}`
    /// and `v` by `λ^{β−1}`.
    pub fn smoothness(&self, generator: GeneratorKind) -> f64 {
        match (self, generator) {
            (InitialData::Pair { u, v }, _) => {
                let bu = (2.0 * u.decay() - 1.0) / 2.0;
                let bv = (2.0 * v.decay() + 1.0) / 2.0;
                bu.min(bv)
            }
            (_, GeneratorKind::Schrodinger) => (2.0 * self.decay() - 1.0) / 4.0,
            (_, GeneratorKind::Wave) => (2.0 * self.decay() - 1.0) / 2.0,
        }
    }
}
