//! Spectral-Galerkin time-integration laboratory for stochastic Schrödinger
//! and wave equations.

pub mod analysis;
pub mod cli;
mod error;
pub mod integrator;
pub mod models;
pub mod noise;
pub mod schemes;
pub mod spectral;

pub use error::{Error, Result};
