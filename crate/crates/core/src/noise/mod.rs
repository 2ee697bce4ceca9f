//! Seeded Q-Wiener increments at the finest resolution and their coupled
//! coarsenings.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{BasisKind, FrequencyLattice};


/// Covariance `Q`, diagonal in the lattice basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum CovarianceSpec {
    /// `q_ℓ = (1 + |ℓ|^β)^{-1}` in terms of the wave number.
    PowerLaw { beta: f64 },
    /// `q_j = j^{-β}` with `j` the 1-based rank of the mode:
    /// `j = i` on the interval, `j = 1, 2, 3, …` for `ℓ = 0, 1, −1, …` on the torus.
    RankDecay { beta: f64 },
    /// Cylindrical noise, `q ≡ 1`.
    Identity,
    /// Explicit variances in lattice storage order.
    Eigenlist { values: Vec<f64> },
}

impl CovarianceSpec {
    /// Per-mode variances `q` on `lattice`, in storage order.
    pub fn variances(&self, lattice: &FrequencyLattice) -> Result<Vec<f64>> {
        let q: Vec<f64> = match self {
            CovarianceSpec::PowerLaw { beta } => lattice
                .modes()
                .iter()
                .map(|&l| 1.0 / (1.0 + (l.unsigned_abs() as f64).powf(*beta)))
                .collect(),
            CovarianceSpec::RankDecay { beta } => lattice
                .modes()
                .iter()
                .map(|&l| (mode_rank(lattice.basis(), l) as f64).powf(-beta))
                .collect(),
            CovarianceSpec::Identity => vec![1.0; lattice.len()],
            CovarianceSpec::Eigenlist { values } => {
                if values.len() != lattice.len() {
                    return Err(Error::InvalidArgument(format!(
                        "eigenlist has {} entries for {} modes",
                        values.len(),
                        lattice.len()
                    )));
                }
                values.clone()
            }
        };
        if let Some(bad) = q.iter().find(|v| !(**v >= 0.0 && v.is_finite())) {
            return Err(Error::InvalidArgument(format!(
                "covariance eigenvalue {bad} is not a finite non-negative number"
            )));
        }
        Ok(q)
    }
}

fn mode_rank(basis: BasisKind, l: i64) -> u64 {
    match basis {
        BasisKind::DirichletSine => l as u64,
        BasisKind::TorusComplex if l > 0 => 2 * l as u64,
        BasisKind::TorusComplex => 2 * l.unsigned_abs() + 1,
    }
}

/// Seed of sample `s` derived from a base seed (SplitMix64 finaliser).
pub fn sample_seed(base: u64, sample: u64) -> u64 {
    let mut z = base
        .wrapping_add(sample.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Fine-grid increments of a Q-Wiener process with real Gaussian amplitude
/// per lattice mode, stored row-major `(mode, increment)`.
#[derive(Clone, Debug, PartialEq)]
pub struct WienerPath {
    seed: u64,
    n_fine: usize,
    modes: usize,
    t_final: f64,
    data: Vec<f64>,
}

/// Samples a path. Mode `m` draws from its own ChaCha stream, so each mode's
/// increments depend only on `(seed, m)`.
pub fn sample_path(
    seed: u64,
    cov: &CovarianceSpec,
    lattice: &FrequencyLattice,
    n_fine: usize,
    t_final: f64,
) -> Result<WienerPath> {
    let q = cov.variances(lattice)?;
    sample_path_with_variances(seed, &q, n_fine, t_final)
}

/// As [`sample_path`] with precomputed variances.
pub fn sample_path_with_variances(
    seed: u64,
    q: &[f64],
    n_fine: usize,
    t_final: f64,
) -> Result<WienerPath> {
    if !n_fine.is_power_of_two() {
        return Err(Error::NotPowerOfTwo("N_fine", n_fine));
    }
    if !(t_final > 0.0 && t_final.is_finite()) {
        return Err(Error::InvalidArgument(format!("T must be positive, got {t_final}")));
    }
    let dt = t_final / n_fine as f64;
    let mut data = vec![0.0; q.len() * n_fine];
    for (m, (row, &qm)) in data.chunks_exact_mut(n_fine).zip(q).enumerate() {
        if qm == 0.0 {
            continue;
        }
        let sd = (qm * dt).sqrt();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(m as u64);
        for x in row.iter_mut() {
            let z: f64 = rng.sample(StandardNormal);
            *x = sd * z;
        }
    }
    Ok(WienerPath {
        seed,
        n_fine,
        modes: q.len(),
        t_final,
        data,
    })
}

impl WienerPath {
    /// Builds a path from explicit row-major increments.
    pub fn from_increments(
        seed: u64,
        modes: usize,
        n_fine: usize,
        t_final: f64,
        data: Vec<f64>,
    ) -> Result<Self> {
        if !n_fine.is_power_of_two() {
            return Err(Error::NotPowerOfTwo("N_fine", n_fine));
        }
        if data.len() != modes * n_fine {
            return Err(Error::InvalidArgument(format!(
                "expected {} increments, got {}",
                modes * n_fine,
                data.len()
            )));
        }
        Ok(WienerPath {
            seed,
            n_fine,
            modes,
            t_final,
            data,
        })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn n_fine(&self) -> usize {
        self.n_fine
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn t_final(&self) -> f64 {
        self.t_final
    }

    pub fn dt(&self) -> f64 {
        self.t_final / self.n_fine as f64
    }

    /// Fine increments of mode `m`.
    pub fn mode(&self, m: usize) -> &[f64] {
        &self.data[m * self.n_fine..(m + 1) * self.n_fine]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// `W_m(T)`, summed in the same dyadic order as [`coarsen`].
    pub fn terminal_value(&self, m: usize) -> f64 {
        let mut buf = self.mode(m).to_vec();
        pairwise_reduce(&mut buf, self.n_fine);
        buf[0]
    }

    /// Writes the dump format: `u32` LE `N_fine`, `u32` LE mode count, then
    /// the row-major increments as `f64` LE.
    pub fn write_binary(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        w.write_all(&(self.n_fine as u32).to_le_bytes())?;
        w.write_all(&(self.modes as u32).to_le_bytes())?;
        for x in &self.data {
            w.write_all(&x.to_le_bytes())?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads a dump written by [`WienerPath::write_binary`]. The seed is not
    /// stored and must be supplied.
    pub fn read_binary(path: &Path, seed: u64, t_final: f64) -> Result<Self> {
        let corrupt = |reason: &str| Error::CorruptResult {
            path: path.display().to_string(),
            reason: reason.into(),
        };
        let mut bytes = Vec::new();
        BufReader::new(File::open(path)?).read_to_end(&mut bytes)?;
        if bytes.len() < 8 {
            return Err(corrupt("missing header"));
        }
        let n_fine = u32::from_le_bytes(bytes[0..4].try_into().expect("4 bytes")) as usize;
        let modes = u32::from_le_bytes(bytes[4..8].try_into().expect("4 bytes")) as usize;
        let body = &bytes[8..];
        if body.len() != 8 * n_fine * modes {
            return Err(corrupt("body length does not match header"));
        }
        let data = body
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
            .collect();
        WienerPath::from_increments(seed, modes, n_fine, t_final, data)
    }
}

/// Increments on a uniform grid, stored step-major: `data[j * modes + m]`.
#[derive(Clone, Debug, PartialEq)]
pub struct IncrementGrid {
    steps: usize,
    modes: usize,
    data: Vec<f64>,
}

impl IncrementGrid {
    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    /// Increments of step `j` (1-based step `j + 1`) across all modes.
    pub fn step(&self, j: usize) -> &[f64] {
        &self.data[j * self.modes..(j + 1) * self.modes]
    }

    /// Further coarsening; `coarsen(coarsen(p, a), b)` equals `coarsen(p, a·b)` bit for bit.
    pub fn coarsen(&self, factor: usize) -> Result<IncrementGrid> {
        check_factor(factor, self.steps)?;
        let steps = self.steps / factor;
        let mut data = vec![0.0; steps * self.modes];
        let mut buf = vec![0.0; factor];
        for c in 0..steps {
            for m in 0..self.modes {
                for (i, b) in buf.iter_mut().enumerate() {
                    *b = self.data[(c * factor + i) * self.modes + m];
                }
                pairwise_reduce(&mut buf, factor);
                data[c * self.modes + m] = buf[0];
            }
        }
        Ok(IncrementGrid {
            steps,
            modes: self.modes,
            data,
        })
    }
}

fn check_factor(factor: usize, n: usize) -> Result<()> {
    if factor == 0 || !factor.is_power_of_two() || !n.is_multiple_of(factor) {
        return Err(Error::BadFactor { factor, n_fine: n });
    }
    Ok(())
}

/// In-place dyadic tree sum of `buf[..len]` (len a power of two) into `buf[0]`.
fn pairwise_reduce(buf: &mut [f64], len: usize) {
    let mut width = len;
    while width > 1 {
        width /= 2;
        for i in 0..width {
            buf[i] = buf[2 * i] + buf[2 * i + 1];
        }
    }
}

/// Coupled increments for step `k = factor · T/N_fine`: each coarse increment
/// is the dyadic tree sum of `factor` consecutive fine increments.
pub fn coarsen(path: &WienerPath, factor: usize) -> Result<IncrementGrid> {
    check_factor(factor, path.n_fine)?;
    let steps = path.n_fine / factor;
    let mut data = vec![0.0; steps * path.modes];
    let mut buf = vec![0.0; factor];
    for m in 0..path.modes {
        let row = path.mode(m);
        for (j, block) in row.chunks_exact(factor).enumerate() {
            buf.copy_from_slice(block);
            pairwise_reduce(&mut buf, factor);
            data[j * path.modes + m] = buf[0];
        }
    }
    Ok(IncrementGrid {
        steps,
        modes: path.modes,
        data,
    })
}
