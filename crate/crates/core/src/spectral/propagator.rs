use num_complex::Complex64;

use super::lattice::{FrequencyLattice, GeneratorKind};
use super::state::SpectralState;
use crate::error::{Error, Result};

/// Real 2×2 block acting on a wave mode `(u_i, v_i)`, row-major.
pub type Block = [[f64; 2]; 2];

pub const IDENTITY_BLOCK: Block = [[1.0, 0.0], [0.0, 1.0]];

/// Operator that is diagonal in the lattice basis.
#[derive(Clone, Debug, PartialEq)]
pub enum DiagonalPropagator {
    /// One complex multiplier per mode.
    Scalar(Vec<Complex64>),
    /// One real block per mode, for phase-pair states.
    Block(Vec<Block>),
}

impl DiagonalPropagator {
    pub fn identity(lattice: &FrequencyLattice) -> Self {
        match lattice.generator() {
            GeneratorKind::Schrodinger => {
                DiagonalPropagator::Scalar(vec![Complex64::new(1.0, 0.0); lattice.len()])
            }
            GeneratorKind::Wave => DiagonalPropagator::Block(vec![IDENTITY_BLOCK; lattice.len()]),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            DiagonalPropagator::Scalar(m) => m.len(),
            DiagonalPropagator::Block(b) => b.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Whether the propagator fits states on `lattice`.
    pub fn matches(&self, lattice: &FrequencyLattice) -> bool {
        let kind_ok = matches!(
            (self, lattice.generator()),
            (DiagonalPropagator::Scalar(_), GeneratorKind::Schrodinger)
                | (DiagonalPropagator::Block(_), GeneratorKind::Wave)
        );
        kind_ok && self.len() == lattice.len()
    }

    /// Applies the propagator in place.
    pub fn apply(&self, state: &mut SpectralState) -> Result<()> {
        if !self.matches(state.lattice()) {
            return Err(Error::LatticeMismatch);
        }
        self.apply_coeffs(state.coeffs_mut());
        Ok(())
    }

    /// Applies to a raw coefficient vector laid out like [`SpectralState`].
    /// The caller guarantees the layout.
    pub fn apply_coeffs(&self, coeffs: &mut [Complex64]) {
        match self {
            DiagonalPropagator::Scalar(mult) => {
                for (c, m) in coeffs.iter_mut().zip(mult) {
                    *c *= m;
                }
            }
            DiagonalPropagator::Block(blocks) => {
                let (u, v) = coeffs.split_at_mut(blocks.len());
                for ((ui, vi), b) in u.iter_mut().zip(v.iter_mut()).zip(blocks) {
                    let (x, y) = (*ui, *vi);
                    *ui = x * b[0][0] + y * b[0][1];
                    *vi = x * b[1][0] + y * b[1][1];
                }
            }
        }
    }

    /// `self ∘ other`, i.e. `other` acts first.
    pub fn compose(&self, other: &DiagonalPropagator) -> Result<DiagonalPropagator> {
        match (self, other) {
            (DiagonalPropagator::Scalar(a), DiagonalPropagator::Scalar(b)) if a.len() == b.len() => {
                Ok(DiagonalPropagator::Scalar(
                    a.iter().zip(b).map(|(x, y)| x * y).collect(),
                ))
            }
            (DiagonalPropagator::Block(a), DiagonalPropagator::Block(b)) if a.len() == b.len() => {
                Ok(DiagonalPropagator::Block(
                    a.iter().zip(b).map(|(x, y)| block_mul(x, y)).collect(),
                ))
            }
            _ => Err(Error::LatticeMismatch),
        }
    }

    /// `self^n` by repeated squaring.
    pub fn power(&self, mut n: u64) -> DiagonalPropagator {
        let mut result = match self {
            DiagonalPropagator::Scalar(m) => {
                DiagonalPropagator::Scalar(vec![Complex64::new(1.0, 0.0); m.len()])
            }
            DiagonalPropagator::Block(b) => DiagonalPropagator::Block(vec![IDENTITY_BLOCK; b.len()]),
        };
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                result = result.compose(&base).expect("same shape");
            }
            n >>= 1;
            if n > 0 {
                base = base.compose(&base).expect("same shape");
            }
        }
        result
    }
}

pub fn block_mul(a: &Block, b: &Block) -> Block {
    [
        [
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
        ],
        [
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        ],
    ]
}

/// Exact wave block `exp(t A_λ)` with `A_λ = [[0, 1], [−λ, 0]]`.
pub fn wave_semigroup_block(lambda: f64, t: f64) -> Block {
    let mu = lambda.sqrt();
    let (s, c) = (t * mu).sin_cos();
    [[c, s / mu], [-mu * s, c]]
}

/// The exact semigroup `S(t)` on the lattice.
pub fn semigroup_propagator(lattice: &FrequencyLattice, t: f64) -> DiagonalPropagator {
    match lattice.generator() {
        GeneratorKind::Schrodinger => DiagonalPropagator::Scalar(
            lattice
                .eigenvalues()
                .iter()
                .map(|&a| {
                    // a = iℓ², so exp(ta) = cis(tℓ²) with unit modulus by construction
                    Complex64::from_polar(1.0, t * a.im)
                })
                .collect(),
        ),
        GeneratorKind::Wave => DiagonalPropagator::Block(
            lattice
                .eigenvalues()
                .iter()
                .map(|l| wave_semigroup_block(l.re, t))
                .collect(),
        ),
    }
}
