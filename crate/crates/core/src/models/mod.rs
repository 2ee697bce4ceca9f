//! Right-hand sides: stochastic Schrödinger and abstract wave models with
//! Nemytskij coefficients.

mod scalar_map;

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use scalar_map::ScalarMap;

use crate::error::{Error, Result};
use crate::noise::CovarianceSpec;
use crate::spectral::{BasisKind, FrequencyLattice, GeneratorKind, SpectralState};


const MINUS_I: Complex64 = Complex64::new(0.0, -1.0);

/// A semilinear right-hand side `F`, `G` on a fixed lattice.
pub trait Model: Send + Sync {
    fn lattice(&self) -> &Arc<FrequencyLattice>;

    fn covariance(&self) -> &CovarianceSpec;

    /// `F(t, U)` without the linear part carried by the propagator.
    fn drift(&self, t: f64, state: &SpectralState) -> Result<SpectralState>;

    /// `G(t, U) ΔW` for per-mode increments `dw`.
    fn diffusion_increment(&self, t: f64, state: &SpectralState, dw: &[f64]) -> Result<SpectralState>;

    /// `coeffs += k F(t, U) + G(t, U) ΔW` with `U` the incoming `coeffs`.
    ///
    /// Hot-loop entry point; the caller guarantees the layout of `coeffs` and
    /// `dw`. Both terms see the same input state.
    fn accumulate_forcing(&self, t: f64, k: f64, coeffs: &mut [Complex64], dw: &[f64]);

    /// Lipschitz constant of `F` on `L²` (`X` for the wave).
    fn drift_lipschitz(&self) -> f64;

    /// Lipschitz constant of `G` into the Hilbert–Schmidt operators.
    fn diffusion_lipschitz(&self) -> f64;

    /// `G` does not depend on the state.
    fn is_additive(&self) -> bool;
}

fn check_state(lattice: &Arc<FrequencyLattice>, state: &SpectralState) -> Result<()> {
    if crate::spectral::same_lattice(lattice, state.lattice()) {
        Ok(())
    } else {
        Err(Error::LatticeMismatch)
    }
}

fn check_dw(lattice: &FrequencyLattice, dw: &[f64]) -> Result<()> {
    if dw.len() != lattice.len() {
        return Err(Error::ComponentMismatch {
            expected: lattice.len(),
            found: dw.len(),
        });
    }
    Ok(())
}

fn noise_field(lattice: &FrequencyLattice, dw: &[f64]) -> Vec<Complex64> {
    let c: Vec<Complex64> = dw.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    lattice.to_grid(&c)
}

/// `sup_ℓ ‖e_ℓ‖²_∞` of the basis.
fn basis_sup_sqr(lattice: &FrequencyLattice) -> f64 {
    match lattice.basis() {
        BasisKind::TorusComplex => 1.0 / (2.0 * std::f64::consts::PI),
        BasisKind::DirichletSine => 2.0,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseMode {
    /// `−i dW`.
    Additive,
    /// `−i u dW`.
    MultiplicativeLinear,
    /// `−i ψ(u) dW`.
    MultiplicativeNonlinear,
}

/// `du = −i(Δu + Vu + φ(u)) dt − i ψ(u) dW` on the torus with `A = −iΔ`.
#[derive(Clone, Debug)]
pub struct SchrodingerModel {
    lattice: Arc<FrequencyLattice>,
    noise_mode: NoiseMode,
    potential: Option<SpectralState>,
    potential_grid: Option<Vec<Complex64>>,
    phi: ScalarMap,
    psi: ScalarMap,
    cov: CovarianceSpec,
    cov_trace: f64,
}

impl SchrodingerModel {
    pub fn new(
        lattice: &Arc<FrequencyLattice>,
        noise_mode: NoiseMode,
        cov: CovarianceSpec,
    ) -> Result<Self> {
        if lattice.generator() != GeneratorKind::Schrodinger {
            return Err(Error::UnsupportedPair {
                basis: lattice.basis().name(),
                generator: lattice.generator().name(),
            });
        }
        let cov_trace = cov.variances(lattice)?.iter().sum();
        let psi = match noise_mode {
            NoiseMode::MultiplicativeLinear => ScalarMap::Identity,
            _ => ScalarMap::Zero,
        };
        Ok(SchrodingerModel {
            lattice: Arc::clone(lattice),
            noise_mode,
            potential: None,
            potential_grid: None,
            phi: ScalarMap::Zero,
            psi,
            cov,
            cov_trace,
        })
    }

    /// Sets the potential `V` (spectral coefficients on the same lattice).
    pub fn with_potential(mut self, v: SpectralState) -> Result<Self> {
        check_state(&self.lattice, &v)?;
        self.potential_grid = Some(v.to_grid(0));
        self.potential = Some(v);
        Ok(self)
    }

    pub fn with_phi(mut self, phi: ScalarMap) -> Self {
        self.phi = phi;
        self
    }

    /// Sets `ψ`; only meaningful for [`NoiseMode::MultiplicativeNonlinear`].
    pub fn with_psi(mut self, psi: ScalarMap) -> Result<Self> {
        if self.noise_mode != NoiseMode::MultiplicativeNonlinear {
            return Err(Error::InvalidArgument(
                "ψ can only be chosen for nonlinear multiplicative noise".into(),
            ));
        }
        self.psi = psi;
        Ok(self)
    }

    pub fn noise_mode(&self) -> NoiseMode {
        self.noise_mode
    }

    pub fn potential(&self) -> Option<&SpectralState> {
        self.potential.as_ref()
    }

    pub fn phi(&self) -> &ScalarMap {
        &self.phi
    }

    pub fn psi(&self) -> &ScalarMap {
        &self.psi
    }

    fn needs_grid(&self) -> bool {
        self.potential_grid.is_some()
            || !self.phi.is_zero()
            || self.noise_mode != NoiseMode::Additive
    }

    /// Grid values of `k·(−i)(Vu + φ(u))`, added into `acc`.
    fn drift_grid(&self, k: f64, u: &[Complex64], acc: &mut [Complex64]) {
        let scale = MINUS_I * k;
        if let Some(vg) = &self.potential_grid {
            for ((a, x), v) in acc.iter_mut().zip(u).zip(vg) {
                *a += scale * v * x;
            }
        }
        if !self.phi.is_zero() {
            for (a, &x) in acc.iter_mut().zip(u) {
                *a += scale * self.phi.apply(x);
            }
        }
    }

    fn multiplicative_grid(&self, u: &[Complex64], dw: &[f64], acc: &mut [Complex64]) {
        let w = noise_field(&self.lattice, dw);
        for ((a, &x), wv) in acc.iter_mut().zip(u).zip(&w) {
            *a += MINUS_I * self.psi.apply(x) * wv;
        }
    }
}

impl Model for SchrodingerModel {
    fn lattice(&self) -> &Arc<FrequencyLattice> {
        &self.lattice
    }

    fn covariance(&self) -> &CovarianceSpec {
        &self.cov
    }

    fn drift(&self, _t: f64, state: &SpectralState) -> Result<SpectralState> {
        check_state(&self.lattice, state)?;
        if self.potential_grid.is_none() && self.phi.is_zero() {
            return Ok(SpectralState::zeros(&self.lattice));
        }
        let u = state.to_grid(0);
        let mut acc = vec![Complex64::new(0.0, 0.0); u.len()];
        self.drift_grid(1.0, &u, &mut acc);
        SpectralState::from_coeffs(&self.lattice, self.lattice.from_grid(&acc))
    }

    fn diffusion_increment(&self, _t: f64, state: &SpectralState, dw: &[f64]) -> Result<SpectralState> {
        check_state(&self.lattice, state)?;
        check_dw(&self.lattice, dw)?;
        match self.noise_mode {
            NoiseMode::Additive => SpectralState::from_coeffs(
                &self.lattice,
                dw.iter().map(|&x| MINUS_I * x).collect(),
            ),
            _ => {
                let u = state.to_grid(0);
                let mut acc = vec![Complex64::new(0.0, 0.0); u.len()];
                self.multiplicative_grid(&u, dw, &mut acc);
                SpectralState::from_coeffs(&self.lattice, self.lattice.from_grid(&acc))
            }
        }
    }

    fn accumulate_forcing(&self, _t: f64, k: f64, coeffs: &mut [Complex64], dw: &[f64]) {
        if self.needs_grid() {
            let u = self.lattice.to_grid(coeffs);
            let mut acc = vec![Complex64::new(0.0, 0.0); u.len()];
            self.drift_grid(k, &u, &mut acc);
            if self.noise_mode != NoiseMode::Additive {
                self.multiplicative_grid(&u, dw, &mut acc);
            }
            let back = self.lattice.from_grid(&acc);
            coeffs.iter_mut().zip(&back).for_each(|(c, b)| *c += b);
        }
        if self.noise_mode == NoiseMode::Additive {
            for (c, &x) in coeffs.iter_mut().zip(dw) {
                *c += MINUS_I * x;
            }
        }
    }

    fn drift_lipschitz(&self) -> f64 {
        let v = self
            .potential_grid
            .as_ref()
            .map_or(0.0, |g| g.iter().map(|z| z.norm()).fold(0.0, f64::max));
        self.phi.lipschitz() + v
    }

    fn diffusion_lipschitz(&self) -> f64 {
        match self.noise_mode {
            NoiseMode::Additive => 0.0,
            _ => self.psi.lipschitz() * (self.cov_trace * basis_sup_sqr(&self.lattice)).sqrt(),
        }
    }

    fn is_additive(&self) -> bool {
        self.noise_mode == NoiseMode::Additive || self.psi.constant_value().is_some()
    }
}

/// Noise regularity class of a wave model.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum NoiseRegularity {
    TraceClass,
    WhiteNoise,
    Smooth { delta: f64 },
}

/// `d u̇ = (−Λu + φ(u)) dt + ψ(u) dW` as a first-order system in `(u, v)`.
#[derive(Clone, Debug)]
pub struct WaveModel {
    lattice: Arc<FrequencyLattice>,
    cov: CovarianceSpec,
    phi: ScalarMap,
    psi: ScalarMap,
    regularity: NoiseRegularity,
    cov_trace: f64,
}

impl WaveModel {
    pub fn new(
        lattice: &Arc<FrequencyLattice>,
        cov: CovarianceSpec,
        phi: ScalarMap,
        psi: ScalarMap,
        regularity: NoiseRegularity,
    ) -> Result<Self> {
        if lattice.generator() != GeneratorKind::Wave {
            return Err(Error::UnsupportedPair {
                basis: lattice.basis().name(),
                generator: lattice.generator().name(),
            });
        }
        match regularity {
            NoiseRegularity::WhiteNoise if lattice.basis() != BasisKind::DirichletSine => {
                return Err(Error::InvalidArgument(
                    "white noise is only supported on the Dirichlet interval".into(),
                ))
            }
            NoiseRegularity::TraceClass if cov == CovarianceSpec::Identity => {
                return Err(Error::InvalidArgument(
                    "trace-class preset needs a summable covariance".into(),
                ))
            }
            NoiseRegularity::Smooth { delta } if !(delta > 1.0 && delta <= 2.0) => {
                return Err(Error::InvalidArgument(format!(
                    "smooth-noise regularity must lie in (1, 2], got {delta}"
                )))
            }
            _ => {}
        }
        let cov_trace = cov.variances(lattice)?.iter().sum();
        Ok(WaveModel {
            lattice: Arc::clone(lattice),
            cov,
            phi,
            psi,
            regularity,
            cov_trace,
        })
    }

    /// Smooth-noise preset: `q_j = j^{−β}` with `δ = min(1 + β/2, 2)`.
    pub fn smooth(
        lattice: &Arc<FrequencyLattice>,
        q_decay: f64,
        phi: ScalarMap,
        psi: ScalarMap,
    ) -> Result<Self> {
        let delta = crate::analysis::smooth_noise_delta(q_decay);
        WaveModel::new(
            lattice,
            CovarianceSpec::RankDecay { beta: q_decay },
            phi,
            psi,
            NoiseRegularity::Smooth { delta },
        )
    }

    /// White-noise preset: `Q = I` on the Dirichlet interval.
    pub fn white_noise(lattice: &Arc<FrequencyLattice>, phi: ScalarMap, psi: ScalarMap) -> Result<Self> {
        WaveModel::new(lattice, CovarianceSpec::Identity, phi, psi, NoiseRegularity::WhiteNoise)
    }

    pub fn regularity(&self) -> NoiseRegularity {
        self.regularity
    }

    pub fn phi(&self) -> &ScalarMap {
        &self.phi
    }

    pub fn psi(&self) -> &ScalarMap {
        &self.psi
    }

    fn state_dependent(&self) -> bool {
        !self.phi.is_zero() || self.psi.constant_value().is_none()
    }

    /// Adds the grid values of `k φ(u) + ψ(u) W` into `acc`; constant `ψ` is
    /// handled spectrally by the caller.
    fn forcing_grid(&self, k: f64, u: &[Complex64], dw: &[f64], acc: &mut [Complex64]) {
        if !self.phi.is_zero() {
            for (a, &x) in acc.iter_mut().zip(u) {
                *a += k * self.phi.apply(x);
            }
        }
        if self.psi.constant_value().is_none() {
            let w = noise_field(&self.lattice, dw);
            for ((a, &x), wv) in acc.iter_mut().zip(u).zip(&w) {
                *a += self.psi.apply(x) * wv;
            }
        }
    }
}

impl Model for WaveModel {
    fn lattice(&self) -> &Arc<FrequencyLattice> {
        &self.lattice
    }

    fn covariance(&self) -> &CovarianceSpec {
        &self.cov
    }

    fn drift(&self, _t: f64, state: &SpectralState) -> Result<SpectralState> {
        check_state(&self.lattice, state)?;
        let mut out = SpectralState::zeros(&self.lattice);
        if !self.phi.is_zero() {
            let u = state.to_grid(0);
            let g: Vec<Complex64> = u.iter().map(|&x| self.phi.apply(x)).collect();
            out.component_mut(1).copy_from_slice(&self.lattice.from_grid(&g));
        }
        Ok(out)
    }

    fn diffusion_increment(&self, _t: f64, state: &SpectralState, dw: &[f64]) -> Result<SpectralState> {
        check_state(&self.lattice, state)?;
        check_dw(&self.lattice, dw)?;
        let mut out = SpectralState::zeros(&self.lattice);
        if let Some(c) = self.psi.constant_value() {
            for (o, &x) in out.component_mut(1).iter_mut().zip(dw) {
                *o = Complex64::new(c * x, 0.0);
            }
        } else {
            let u = state.to_grid(0);
            let w = noise_field(&self.lattice, dw);
            let g: Vec<Complex64> = u.iter().zip(&w).map(|(&x, wv)| self.psi.apply(x) * wv).collect();
            out.component_mut(1).copy_from_slice(&self.lattice.from_grid(&g));
        }
        Ok(out)
    }

    fn accumulate_forcing(&self, _t: f64, k: f64, coeffs: &mut [Complex64], dw: &[f64]) {
        let m = self.lattice.len();
        let (u, v) = coeffs.split_at_mut(m);
        if self.state_dependent() {
            let ug = self.lattice.to_grid(u);
            let mut acc = vec![Complex64::new(0.0, 0.0); m];
            self.forcing_grid(k, &ug, dw, &mut acc);
            let back = self.lattice.from_grid(&acc);
            v.iter_mut().zip(&back).for_each(|(c, b)| *c += b);
        }
        if let Some(c) = self.psi.constant_value() {
            if c != 0.0 {
                for (vi, &x) in v.iter_mut().zip(dw) {
                    *vi += c * x;
                }
            }
        }
    }

    fn drift_lipschitz(&self) -> f64 {
        self.phi.lipschitz()
    }

    fn diffusion_lipschitz(&self) -> f64 {
        self.psi.lipschitz() * (self.cov_trace * basis_sup_sqr(&self.lattice)).sqrt()
    }

    fn is_additive(&self) -> bool {
        self.psi.constant_value().is_some()
    }
}
