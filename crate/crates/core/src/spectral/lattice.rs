use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::transform::Transform;
use crate::error::{Error, Result};

/// Spectral basis of a one-dimensional lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisKind {
    /// `(2π)^{-1/2} exp(iℓx)` on the torus `[0, 2π)`, `ℓ ∈ {−M/2+1, …, M/2}`.
    TorusComplex,
    /// `√2 sin(iπξ)` on `(0, 1)` with Dirichlet conditions, `i ∈ {1, …, M}`.
    DirichletSine,
}

impl BasisKind {
    pub fn name(self) -> &'static str {
        match self {
            BasisKind::TorusComplex => "torus_complex",
            BasisKind::DirichletSine => "dirichlet_sine",
        }
    }
}

/// Which evolution operator the lattice diagonalises.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    /// `A = −iΔ`, per-mode eigenvalue `a_ℓ = iℓ²`, scalar states.
    Schrodinger,
    /// First-order wave system with `Λ = −Δ` (Dirichlet) or `Λ = 1 − Δ` (torus),
    /// phase-pair states `(u, v)`.
    Wave,
}

impl GeneratorKind {
    pub fn name(self) -> &'static str {
        match self {
            GeneratorKind::Schrodinger => "schrodinger",
            GeneratorKind::Wave => "wave",
        }
    }

    /// Number of field components carried by a state.
    pub fn components(self) -> usize {
        match self {
            GeneratorKind::Schrodinger => 1,
            GeneratorKind::Wave => 2,
        }
    }
}

/// The truncated spectral basis together with per-mode eigenvalues.
///
/// For the Schrödinger generator `eigenvalues()[i]` holds `a_ℓ = iℓ²`; for the
/// wave generator it holds the (real) eigenvalue `λ` of `Λ`.
pub struct FrequencyLattice {
    basis: BasisKind,
    generator: GeneratorKind,
    modes: Vec<i64>,
    eigen: Vec<Complex64>,
    weight: Vec<f64>,
    transform: Transform,
}

impl fmt::Debug for FrequencyLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FrequencyLattice")
            .field("basis", &self.basis)
            .field("generator", &self.generator)
            .field("m", &self.modes.len())
            .finish()
    }
}

impl PartialEq for FrequencyLattice {
    fn eq(&self, other: &Self) -> bool {
        self.basis == other.basis
            && self.generator == other.generator
            && self.modes.len() == other.modes.len()
    }
}

/// Builds a lattice with `m` modes.
///
/// Supported pairs: torus/Schrödinger, torus/wave (`Λ = 1 − Δ`, `λ_ℓ = 1 + ℓ²`)
/// and Dirichlet/wave (`Λ = −Δ`, `λ_i = π² i²`).
pub fn build_lattice(
    basis: BasisKind,
    m: usize,
    generator: GeneratorKind,
) -> Result<Arc<FrequencyLattice>> {
    if m < 2 {
        return Err(Error::InvalidModeCount {
            m,
            reason: "at least two modes are required",
        });
    }
    let (modes, eigen, weight, transform) = match (basis, generator) {
        (BasisKind::TorusComplex, _) => {
            if !m.is_power_of_two() {
                return Err(Error::InvalidModeCount {
                    m,
                    reason: "torus lattices need a power-of-two mode count",
                });
            }
            let half = (m / 2) as i64;
            let modes: Vec<i64> = (-half + 1..=half).collect();
            let eigen = modes
                .iter()
                .map(|&l| {
                    let l2 = (l * l) as f64;
                    match generator {
                        GeneratorKind::Schrodinger => Complex64::new(0.0, l2),
                        GeneratorKind::Wave => Complex64::new(1.0 + l2, 0.0),
                    }
                })
                .collect();
            let weight = modes.iter().map(|&l| 1.0 + (l * l) as f64).collect();
            let transform = Transform::fourier(&modes);
            (modes, eigen, weight, transform)
        }
        (BasisKind::DirichletSine, GeneratorKind::Wave) => {
            let modes: Vec<i64> = (1..=m as i64).collect();
            let lambda: Vec<f64> = modes.iter().map(|&i| PI * PI * (i * i) as f64).collect();
            let eigen = lambda.iter().map(|&l| Complex64::new(l, 0.0)).collect();
            (modes, eigen, lambda, Transform::sine(m))
        }
        (BasisKind::DirichletSine, GeneratorKind::Schrodinger) => {
            return Err(Error::UnsupportedPair {
                basis: basis.name(),
                generator: generator.name(),
            })
        }
    };
    Ok(Arc::new(FrequencyLattice {
        basis,
        generator,
        modes,
        eigen,
        weight,
        transform,
    }))
}

impl FrequencyLattice {
    pub fn basis(&self) -> BasisKind {
        self.basis
    }

    pub fn generator(&self) -> GeneratorKind {
        self.generator
    }

    /// Mode count `M`.
    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn components(&self) -> usize {
        self.generator.components()
    }

    /// Wave numbers in storage order.
    pub fn modes(&self) -> &[i64] {
        &self.modes
    }

    pub fn eigenvalues(&self) -> &[Complex64] {
        &self.eigen
    }

    /// Storage index of wave number `mode`, if it is on the lattice.
    pub fn index_of(&self, mode: i64) -> Option<usize> {
        let first = *self.modes.first()?;
        let idx = mode - first;
        (idx >= 0 && (idx as usize) < self.modes.len()).then_some(idx as usize)
    }

    /// Base weight `w` of the discrete Sobolev scale: `1 + ℓ²` on the
    /// Schrödinger torus, `λ` for wave lattices.
    pub fn sobolev_weights(&self) -> &[f64] {
        &self.weight
    }

    /// Per-coefficient squared-norm weights for the `σ`-scale, laid out like
    /// `SpectralState::coeffs`. Wave states use `λ^σ` on `u` and `λ^{σ-1}` on `v`.
    pub fn norm_weights(&self, sigma: f64) -> Vec<f64> {
        let pow = |w: f64, s: f64| if s == 0.0 { 1.0 } else { w.powf(s) };
        match self.generator {
            GeneratorKind::Schrodinger => self.weight.iter().map(|&w| pow(w, sigma)).collect(),
            GeneratorKind::Wave => self
                .weight
                .iter()
                .map(|&w| pow(w, sigma))
                .chain(self.weight.iter().map(|&w| pow(w, sigma - 1.0)))
                .collect(),
        }
    }

    /// Collocation nodes: `2πm/M` on the torus, `m/(M+1)` on the interval.
    pub fn grid_points(&self) -> Vec<f64> {
        let m = self.len();
        match self.basis {
            BasisKind::TorusComplex => (0..m).map(|j| 2.0 * PI * j as f64 / m as f64).collect(),
            BasisKind::DirichletSine => (1..=m).map(|j| j as f64 / (m as f64 + 1.0)).collect(),
        }
    }

    /// Quadrature weight making the grid sum of `|f|²` equal to `‖f‖²_{L²}`.
    pub fn quadrature_weight(&self) -> f64 {
        let m = self.len() as f64;
        match self.basis {
            BasisKind::TorusComplex => 2.0 * PI / m,
            BasisKind::DirichletSine => 1.0 / (m + 1.0),
        }
    }

    /// Grid values of the field with coefficients `coeffs` (one component).
    pub fn to_grid(&self, coeffs: &[Complex64]) -> Vec<Complex64> {
        debug_assert_eq!(coeffs.len(), self.len());
        self.transform.to_grid(coeffs)
    }

    /// Lattice coefficients of grid values (aliasing folded in, no dealiasing).
    pub fn from_grid(&self, values: &[Complex64]) -> Vec<Complex64> {
        debug_assert_eq!(values.len(), self.len());
        self.transform.from_grid(values)
    }
}
