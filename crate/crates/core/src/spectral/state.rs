use std::sync::Arc;

use num_complex::Complex64;

use super::lattice::{FrequencyLattice, GeneratorKind};
use crate::error::{Error, Result};

/// Coefficients of a field in the lattice basis.
///
/// Scalar states hold `M` coefficients. Wave states hold `2M`: the position
/// `u` first, then the velocity `v`.
#[derive(Clone, Debug)]
pub struct SpectralState {
    lattice: Arc<FrequencyLattice>,
    coeffs: Vec<Complex64>,
}

impl PartialEq for SpectralState {
    fn eq(&self, other: &Self) -> bool {
        same_lattice(&self.lattice, &other.lattice) && self.coeffs == other.coeffs
    }
}

pub(crate) fn same_lattice(a: &Arc<FrequencyLattice>, b: &Arc<FrequencyLattice>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl SpectralState {
    pub fn zeros(lattice: &Arc<FrequencyLattice>) -> Self {
        let n = lattice.len() * lattice.components();
        SpectralState {
            lattice: Arc::clone(lattice),
            coeffs: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    pub fn from_coeffs(lattice: &Arc<FrequencyLattice>, coeffs: Vec<Complex64>) -> Result<Self> {
        let expected = lattice.len() * lattice.components();
        if coeffs.len() != expected {
            return Err(Error::ComponentMismatch {
                expected,
                found: coeffs.len(),
            });
        }
        Ok(SpectralState {
            lattice: Arc::clone(lattice),
            coeffs,
        })
    }

    /// Wave state from position and velocity coefficients.
    pub fn from_pair(
        lattice: &Arc<FrequencyLattice>,
        u: &[Complex64],
        v: &[Complex64],
    ) -> Result<Self> {
        if lattice.generator() != GeneratorKind::Wave {
            return Err(Error::ComponentMismatch {
                expected: lattice.components(),
                found: 2,
            });
        }
        let mut coeffs = Vec::with_capacity(u.len() + v.len());
        coeffs.extend_from_slice(u);
        coeffs.extend_from_slice(v);
        Self::from_coeffs(lattice, coeffs)
    }

    /// Single basis function `e_mode` (in the first component).
    pub fn basis_vector(lattice: &Arc<FrequencyLattice>, mode: i64) -> Result<Self> {
        let idx = lattice.index_of(mode).ok_or_else(|| {
            Error::InvalidArgument(format!("mode {mode} is not on the lattice"))
        })?;
        let mut s = Self::zeros(lattice);
        s.coeffs[idx] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    pub fn lattice(&self) -> &Arc<FrequencyLattice> {
        &self.lattice
    }

    pub fn components(&self) -> usize {
        self.lattice.components()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Coefficients of component `c` (0 = `u`, 1 = `v`).
    pub fn component(&self, c: usize) -> &[Complex64] {
        let m = self.lattice.len();
        &self.coeffs[c * m..(c + 1) * m]
    }

    pub fn component_mut(&mut self, c: usize) -> &mut [Complex64] {
        let m = self.lattice.len();
        &mut self.coeffs[c * m..(c + 1) * m]
    }

    pub fn check_compatible(&self, other: &SpectralState) -> Result<()> {
        if same_lattice(&self.lattice, &other.lattice) {
            Ok(())
        } else {
            Err(Error::LatticeMismatch)
        }
    }

    pub fn set_zero(&mut self) {
        self.coeffs.fill(Complex64::new(0.0, 0.0));
    }

    /// `self += a · x`.
    pub fn axpy(&mut self, a: Complex64, x: &SpectralState) -> Result<()> {
        self.check_compatible(x)?;
        for (y, &xv) in self.coeffs.iter_mut().zip(&x.coeffs) {
            *y += a * xv;
        }
        Ok(())
    }

    pub fn scale(&mut self, a: Complex64) {
        self.coeffs.iter_mut().for_each(|c| *c *= a);
    }

    pub fn sub(&self, other: &SpectralState) -> Result<SpectralState> {
        self.check_compatible(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(SpectralState {
            lattice: Arc::clone(&self.lattice),
            coeffs,
        })
    }

    /// Squared `σ`-norm, see [`sobolev_norm`].
    pub fn sobolev_norm_sqr(&self, sigma: f64) -> f64 {
        weighted_norm_sqr(&self.coeffs, &self.lattice.norm_weights(sigma))
    }

    /// Grid values of component `c`.
    pub fn to_grid(&self, c: usize) -> Vec<Complex64> {
        self.lattice.to_grid(self.component(c))
    }
}

/// `Σ w_i |c_i|²`.
pub fn weighted_norm_sqr(coeffs: &[Complex64], weights: &[f64]) -> f64 {
    coeffs
        .iter()
        .zip(weights)
        .map(|(c, w)| w * c.norm_sqr())
        .sum()
}

/// Discrete Sobolev norm.
///
/// Torus Schrödinger: `(Σ (1+ℓ²)^σ |c_ℓ|²)^{1/2}`. Wave: `(‖u‖²_{V_σ} + ‖v‖²_{V_{σ-1}})^{1/2}`
/// with `‖u‖²_{V_σ} = Σ λ^σ |u_i|²`.
pub fn sobolev_norm(state: &SpectralState, sigma: f64) -> f64 {
    state.sobolev_norm_sqr(sigma).sqrt()
}

/// Pointwise product of two scalar fields on the collocation grid, truncated
/// back to the lattice.
pub fn physical_product(a: &SpectralState, b: &SpectralState) -> Result<SpectralState> {
    a.check_compatible(b)?;
    if a.components() != 1 {
        return Err(Error::ComponentMismatch {
            expected: 1,
            found: a.components(),
        });
    }
    let mut ga = a.to_grid(0);
    let gb = b.to_grid(0);
    ga.iter_mut().zip(&gb).for_each(|(x, y)| *x *= y);
    SpectralState::from_coeffs(a.lattice(), a.lattice().from_grid(&ga))
}
