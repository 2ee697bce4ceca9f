//! Spectral bases, diagonal operators, Sobolev norms and collocation products.

mod lattice;
mod propagator;
mod state;
mod transform;

pub use lattice::{build_lattice, BasisKind, FrequencyLattice, GeneratorKind};
pub use propagator::{
    block_mul, semigroup_propagator, wave_semigroup_block, Block, DiagonalPropagator,
    IDENTITY_BLOCK,
};
pub use state::{physical_product, sobolev_norm, weighted_norm_sqr, SpectralState};

pub(crate) use state::same_lattice;
