//! The one-step recursion, trajectories, reference solutions and the three
//! error functionals.

mod study;

use num_complex::Complex64;

pub use study::{ConvergenceStudy, ErrorReport, StudyOutcome};

use crate::error::{Error, Result};
use crate::models::Model;
use crate::noise::{coarsen, WienerPath};
use crate::schemes::{discrete_propagator, step_count, SchemeSpec};
use crate::spectral::{DiagonalPropagator, SpectralState};


/// `U^j = R_k (U^{j−1} + k F(t_{j−1}, U^{j−1}) + G(t_{j−1}, U^{j−1}) ΔW_j)`.
///
/// `k = 0` returns the state unchanged.
pub fn step(
    r: &DiagonalPropagator,
    model: &dyn Model,
    state: &SpectralState,
    t_prev: f64,
    k: f64,
    dw: &[f64],
) -> Result<SpectralState> {
    if k == 0.0 {
        return Ok(state.clone());
    }
    if !r.matches(model.lattice()) || !crate::spectral::same_lattice(model.lattice(), state.lattice()) {
        return Err(Error::LatticeMismatch);
    }
    if dw.len() != model.lattice().len() {
        return Err(Error::ComponentMismatch {
            expected: model.lattice().len(),
            found: dw.len(),
        });
    }
    let mut next = state.clone();
    step_in_place(r, model, next.coeffs_mut(), t_prev, k, dw);
    Ok(next)
}

pub(crate) fn step_in_place(
    r: &DiagonalPropagator,
    model: &dyn Model,
    coeffs: &mut [Complex64],
    t_prev: f64,
    k: f64,
    dw: &[f64],
) {
    model.accumulate_forcing(t_prev, k, coeffs, dw);
    r.apply_coeffs(coeffs);
}

/// Which step indices a trajectory keeps.
#[derive(Clone, Debug, PartialEq)]
pub enum Record {
    All,
    Final,
    Indices(Vec<usize>),
}

/// States `U^j` at `t_j = j k` for the recorded indices.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    k: f64,
    steps: usize,
    indices: Vec<usize>,
    states: Vec<SpectralState>,
}

impl Trajectory {
    /// Trajectory from explicit states on indices `0..states.len()`.
    pub fn from_states(k: f64, states: Vec<SpectralState>) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::EmptyBatch);
        }
        Ok(Trajectory {
            k,
            steps: states.len() - 1,
            indices: (0..states.len()).collect(),
            states,
        })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    /// `N_k`.
    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn states(&self) -> &[SpectralState] {
        &self.states
    }

    pub fn times(&self) -> Vec<f64> {
        self.indices.iter().map(|&j| j as f64 * self.k).collect()
    }

    pub fn last(&self) -> &SpectralState {
        self.states.last().expect("trajectories are non-empty")
    }

    /// State at step `j`, if recorded.
    pub fn at(&self, j: usize) -> Option<&SpectralState> {
        self.indices.binary_search(&j).ok().map(|i| &self.states[i])
    }
}

/// Factor between the fine resolution `T/n_fine` and step `k`.
pub(crate) fn coarsening_factor(n_fine: usize, t_final: f64, k: f64) -> Result<usize> {
    let incompatible = || Error::IncompatibleStep { k, n_fine, t_final };
    let n = step_count(t_final, k).ok_or_else(incompatible)?;
    if !n_fine.is_multiple_of(n) || !(n_fine / n).is_power_of_two() {
        return Err(incompatible());
    }
    Ok(n_fine / n)
}

/// Runs `scheme` with step `k` on the increments of `path` summed to step `k`.
pub fn run_trajectory(
    model: &dyn Model,
    scheme: &SchemeSpec,
    k: f64,
    u0: &SpectralState,
    path: &WienerPath,
    record: &Record,
) -> Result<Trajectory> {
    let factor = coarsening_factor(path.n_fine(), path.t_final(), k)?;
    let r = discrete_propagator(scheme, model.lattice(), k)?;
    run_with_propagator(model, &r, k, factor, u0, path, record)
}

fn run_with_propagator(
    model: &dyn Model,
    r: &DiagonalPropagator,
    k: f64,
    factor: usize,
    u0: &SpectralState,
    path: &WienerPath,
    record: &Record,
) -> Result<Trajectory> {
    if !crate::spectral::same_lattice(model.lattice(), u0.lattice()) {
        return Err(Error::LatticeMismatch);
    }
    if path.modes() != model.lattice().len() {
        return Err(Error::ComponentMismatch {
            expected: model.lattice().len(),
            found: path.modes(),
        });
    }
    let grid = coarsen(path, factor)?;
    let n = grid.steps();
    let keep = |j: usize| match record {
        Record::All => true,
        Record::Final => j == n,
        Record::Indices(v) => v.contains(&j),
    };
    if let Record::Indices(v) = record {
        if let Some(bad) = v.iter().find(|&&j| j > n) {
            return Err(Error::InvalidArgument(format!(
                "record index {bad} exceeds N_k = {n}"
            )));
        }
    }
    let mut indices = Vec::new();
    let mut states = Vec::new();
    let mut cur = u0.clone();
    if keep(0) {
        indices.push(0);
        states.push(cur.clone());
    }
    for j in 1..=n {
        step_in_place(r, model, cur.coeffs_mut(), (j - 1) as f64 * k, k, grid.step(j - 1));
        if keep(j) {
            indices.push(j);
            states.push(cur.clone());
        }
    }
    Ok(Trajectory {
        k,
        steps: n,
        indices,
        states,
    })
}

/// Exponential Euler at the finest resolution of `path`, recorded at every step.
pub fn reference_trajectory(
    model: &dyn Model,
    u0: &SpectralState,
    path: &WienerPath,
    k_ref: f64,
) -> Result<Trajectory> {
    if (k_ref - path.dt()).abs() > 1e-15 * path.dt() {
        return Err(Error::IncompatibleStep {
            k: k_ref,
            n_fine: path.n_fine(),
            t_final: path.t_final(),
        });
    }
    run_trajectory(
        model,
        &SchemeSpec::exponential_euler(),
        path.dt(),
        u0,
        path,
        &Record::All,
    )
}

/// `‖a − b‖_{H^σ}^2` with precomputed weights.
pub(crate) fn distance_sqr(a: &[Complex64], b: &[Complex64], weights: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .zip(weights)
        .map(|((x, y), w)| w * (x - y).norm_sqr())
        .sum()
}

fn check_batch(refs: &[Trajectory], approx: &[Trajectory]) -> Result<()> {
    if refs.is_empty() || approx.is_empty() {
        return Err(Error::EmptyBatch);
    }
    if refs.len() != approx.len() {
        return Err(Error::GridMismatch(format!(
            "{} reference paths for {} approximations",
            refs.len(),
            approx.len()
        )));
    }
    Ok(())
}

/// Ratio `k / k_ref` as an integer.
fn grid_ratio(reference: &Trajectory, approx: &Trajectory) -> Result<usize> {
    let ratio = approx.k / reference.k;
    let f = ratio.round();
    if f < 1.0 || (ratio - f).abs() > 1e-9 || approx.steps * f as usize != reference.steps {
        return Err(Error::GridMismatch(format!(
            "step {} is not a multiple of the reference step {} on the same interval",
            approx.k, reference.k
        )));
    }
    Ok(f as usize)
}

/// Per-sample distances `d_{s,j}` on the approximation's recorded indices.
fn grid_distances(
    refs: &[Trajectory],
    approx: &[Trajectory],
    sigma: f64,
) -> Result<Vec<Vec<f64>>> {
    check_batch(refs, approx)?;
    let weights = approx[0].states[0].lattice().norm_weights(sigma);
    refs.iter()
        .zip(approx)
        .map(|(r, a)| {
            let f = grid_ratio(r, a)?;
            if a.indices != approx[0].indices {
                return Err(Error::GridMismatch("samples record different indices".into()));
            }
            a.indices
                .iter()
                .zip(&a.states)
                .map(|(&j, s)| {
                    let rs = r.at(j * f).ok_or_else(|| {
                        Error::GridMismatch(format!("reference lacks fine index {}", j * f))
                    })?;
                    Ok(distance_sqr(rs.coeffs(), s.coeffs(), &weights).sqrt())
                })
                .collect()
        })
        .collect()
}

/// `(mean_s max_j ‖U_s(t_j) − U_s^j‖^p)^{1/p}`, sup inside the expectation.
pub fn uniform_error(refs: &[Trajectory], approx: &[Trajectory], p: f64, sigma: f64) -> Result<f64> {
    let d = grid_distances(refs, approx, sigma)?;
    Ok(uniform_from_distances(&d, p))
}

/// `max_j (mean_s ‖U_s(t_j) − U_s^j‖^p)^{1/p}`, sup outside the expectation.
pub fn pointwise_error(refs: &[Trajectory], approx: &[Trajectory], p: f64, sigma: f64) -> Result<f64> {
    let d = grid_distances(refs, approx, sigma)?;
    Ok(pointwise_from_distances(&d, p))
}

/// Uniform error over the fine grid against the piecewise constant extension
/// `Ũ(t) = U^{⌊t/k⌋}` of each approximation.
pub fn full_interval_error(
    refs: &[Trajectory],
    approx: &[Trajectory],
    p: f64,
    sigma: f64,
) -> Result<f64> {
    check_batch(refs, approx)?;
    let weights = approx[0].states[0].lattice().norm_weights(sigma);
    let mut per_sample = Vec::with_capacity(refs.len());
    for (r, a) in refs.iter().zip(approx) {
        let f = grid_ratio(r, a)?;
        if r.indices.len() != r.steps + 1 {
            return Err(Error::GridMismatch("reference must record every fine step".into()));
        }
        if a.indices.len() != a.steps + 1 {
            return Err(Error::GridMismatch("approximation must record every step".into()));
        }
        let mut worst = 0.0f64;
        for (i, rs) in r.states.iter().enumerate() {
            let held = &a.states[(i / f).min(a.steps)];
            worst = worst.max(distance_sqr(rs.coeffs(), held.coeffs(), &weights).sqrt());
        }
        per_sample.push(vec![worst]);
    }
    Ok(uniform_from_distances(&per_sample, p))
}

/// Uniform error from per-sample, per-index distances.
pub fn uniform_from_distances(d: &[Vec<f64>], p: f64) -> f64 {
    let s = d.len() as f64;
    let sum: f64 = d
        .iter()
        .map(|row| row.iter().copied().fold(0.0, f64::max).powf(p))
        .sum();
    (sum / s).powf(1.0 / p)
}

/// Pointwise error from per-sample, per-index distances.
pub fn pointwise_from_distances(d: &[Vec<f64>], p: f64) -> f64 {
    let s = d.len() as f64;
    let n = d.iter().map(Vec::len).max().unwrap_or(0);
    (0..n)
        .map(|j| {
            let sum: f64 = d.iter().map(|row| row.get(j).copied().unwrap_or(0.0).powf(p)).sum();
            (sum / s).powf(1.0 / p)
        })
        .fold(0.0, f64::max)
}
