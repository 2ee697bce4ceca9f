use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{coarsening_factor, distance_sqr, step_in_place};
use crate::analysis::{fit_rate, RateFit};
use crate::error::{Error, Result};
use crate::models::Model;
use crate::noise::{coarsen, sample_path_with_variances, sample_seed, IncrementGrid};
use crate::schemes::{discrete_propagator, SchemeSpec};
use crate::spectral::{semigroup_propagator, DiagonalPropagator, SpectralState};

/// Errors of one `(scheme, k)` pair over a sample batch.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub scheme: String,
    pub k: f64,
    pub uniform_error: f64,
    pub pointwise_error: f64,
    pub full_interval_error: Option<f64>,
    pub p: f64,
    pub sample_count: usize,
    pub seeds: Vec<u64>,
    /// Summed per-sample time spent stepping and measuring this pair.
    pub wall_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StudyOutcome {
    /// Ordered by scheme, then by the configured `k` order.
    pub reports: Vec<ErrorReport>,
    /// Fit of the uniform error per scheme; `None` with fewer than three
    /// step sizes or a vanishing error.
    pub fits: Vec<(String, Option<RateFit>)>,
    pub threads: usize,
    /// Noise amplitudes per mode: always `"real"`.
    pub noise_amplitudes: String,
    /// How coarse increments relate to the reference path.
    pub coupling: String,
}

impl StudyOutcome {
    pub fn fit(&self, scheme: &str) -> Option<&RateFit> {
        self.fits
            .iter()
            .find(|(s, _)| s == scheme)
            .and_then(|(_, f)| f.as_ref())
    }

    pub fn report(&self, scheme: &str, k: f64) -> Option<&ErrorReport> {
        self.reports.iter().find(|r| r.scheme == scheme && r.k == k)
    }
}

/// Monte-Carlo convergence study streamed sample by sample.
///
/// For each sample the reference (exponential Euler at `T/n_fine`) and every
/// `(scheme, k)` approximation advance together along the fine grid; only
/// running maxima and per-grid-point sums are kept. Per-sample results are
/// reduced in sample order, so the output does not depend on the thread count.
pub struct ConvergenceStudy<'a> {
    pub model: &'a dyn Model,
    pub schemes: Vec<SchemeSpec>,
    pub u0: SpectralState,
    pub t_final: f64,
    pub ks: Vec<f64>,
    pub n_fine: usize,
    pub samples: usize,
    pub seed: u64,
    pub p: f64,
    pub sigma: f64,
    pub full_interval: bool,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
    /// Record wall time; off gives `wall_ms = 0` for reproducible output.
    pub timing: bool,
}

struct Prepared {
    q: Vec<f64>,
    weights: Vec<f64>,
    reference: DiagonalPropagator,
    dt: f64,
    /// Distinct coarsening factors, aligned with `self.ks`.
    factors: Vec<usize>,
    /// `(scheme index, k index, propagator)` per combination.
    combos: Vec<(usize, usize, DiagonalPropagator)>,
}

struct ComboSample {
    grid_max: f64,
    full_max: f64,
    /// `d_j^p` for `j = 0..=N_k`.
    grid_pow: Vec<f64>,
    nanos: u128,
}

impl ConvergenceStudy<'_> {
    fn prepare(&self) -> Result<Prepared> {
        if self.schemes.is_empty() {
            return Err(Error::InvalidArgument("no schemes configured".into()));
        }
        if self.samples == 0 {
            return Err(Error::EmptyBatch);
        }
        if !(self.p >= 1.0 && self.p.is_finite()) {
            return Err(Error::InvalidArgument(format!("p must be at least 1, got {}", self.p)));
        }
        if !self.n_fine.is_power_of_two() {
            return Err(Error::NotPowerOfTwo("N_fine", self.n_fine));
        }
        let lattice = self.model.lattice();
        if !crate::spectral::same_lattice(lattice, self.u0.lattice()) {
            return Err(Error::LatticeMismatch);
        }
        let q = self.model.covariance().variances(lattice)?;
        let factors = self
            .ks
            .iter()
            .map(|&k| coarsening_factor(self.n_fine, self.t_final, k))
            .collect::<Result<Vec<_>>>()?;
        let mut combos = Vec::new();
        for (si, scheme) in self.schemes.iter().enumerate() {
            for (ki, &k) in self.ks.iter().enumerate() {
                combos.push((si, ki, discrete_propagator(scheme, lattice, k)?));
            }
        }
        let dt = self.t_final / self.n_fine as f64;
        Ok(Prepared {
            q,
            weights: lattice.norm_weights(self.sigma),
            reference: semigroup_propagator(lattice, dt),
            dt,
            factors,
            combos,
        })
    }

    fn run_sample(&self, prep: &Prepared, seed: u64) -> Result<Vec<ComboSample>> {
        let path = sample_path_with_variances(seed, &prep.q, self.n_fine, self.t_final)?;
        let fine = coarsen(&path, 1)?;
        let grids: Vec<IncrementGrid> = prep
            .factors
            .iter()
            .map(|&f| coarsen(&path, f))
            .collect::<Result<_>>()?;
        let mut reference = self.u0.coeffs().to_vec();
        let mut states: Vec<Vec<_>> = prep.combos.iter().map(|_| reference.clone()).collect();
        let mut out: Vec<ComboSample> = prep
            .combos
            .iter()
            .map(|&(_, ki, _)| {
                let n = self.n_fine / prep.factors[ki];
                ComboSample {
                    grid_max: 0.0,
                    full_max: 0.0,
                    grid_pow: vec![0.0; n + 1],
                    nanos: 0,
                }
            })
            .collect();
        for i in 1..=self.n_fine {
            step_in_place(
                &prep.reference,
                self.model,
                &mut reference,
                (i - 1) as f64 * prep.dt,
                prep.dt,
                fine.step(i - 1),
            );
            for (c, ((_, ki, r), state)) in prep.combos.iter().zip(states.iter_mut()).enumerate() {
                let clock = self.timing.then(Instant::now);
                let f = prep.factors[*ki];
                let on_grid = i % f == 0;
                if on_grid {
                    let j = i / f;
                    let k = self.ks[*ki];
                    step_in_place(r, self.model, state, (j - 1) as f64 * k, k, grids[*ki].step(j - 1));
                }
                if on_grid || self.full_interval {
                    let d = distance_sqr(&reference, state, &prep.weights).sqrt();
                    let acc = &mut out[c];
                    if self.full_interval {
                        acc.full_max = acc.full_max.max(d);
                    }
                    if on_grid {
                        acc.grid_max = acc.grid_max.max(d);
                        acc.grid_pow[i / f] = d.powf(self.p);
                    }
                }
                if let Some(t) = clock {
                    out[c].nanos += t.elapsed().as_nanos();
                }
            }
        }
        Ok(out)
    }

    pub fn run(&self) -> Result<StudyOutcome> {
        let prep = self.prepare()?;
        let seeds: Vec<u64> = (0..self.samples as u64).map(|s| sample_seed(self.seed, s)).collect();
        let work = || -> Result<Vec<Vec<ComboSample>>> {
            seeds
                .par_iter()
                .map(|&seed| self.run_sample(&prep, seed))
                .collect()
        };
        let (per_sample, threads) = match self.threads {
            Some(n) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(n.max(1))
                    .build()
                    .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
                (pool.install(work)?, pool.current_num_threads())
            }
            None => (work()?, rayon::current_num_threads()),
        };

        let s = self.samples as f64;
        let inv_p = 1.0 / self.p;
        let mut reports = Vec::with_capacity(prep.combos.len());
        for (c, &(si, ki, _)) in prep.combos.iter().enumerate() {
            let n = per_sample[0][c].grid_pow.len();
            let mut uniform = 0.0;
            let mut full = 0.0;
            let mut pointwise = vec![0.0; n];
            let mut nanos = 0u128;
            for sample in &per_sample {
                let a = &sample[c];
                uniform += a.grid_max.powf(self.p);
                full += a.full_max.powf(self.p);
                pointwise.iter_mut().zip(&a.grid_pow).for_each(|(x, y)| *x += y);
                nanos += a.nanos;
            }
            reports.push(ErrorReport {
                scheme: self.schemes[si].label().to_string(),
                k: self.ks[ki],
                uniform_error: (uniform / s).powf(inv_p),
                pointwise_error: pointwise
                    .iter()
                    .map(|x| (x / s).powf(inv_p))
                    .fold(0.0, f64::max),
                full_interval_error: self.full_interval.then(|| (full / s).powf(inv_p)),
                p: self.p,
                sample_count: self.samples,
                seeds: seeds.clone(),
                wall_ms: nanos as f64 / 1e6,
            });
        }

        let fits = self
            .schemes
            .iter()
            .map(|scheme| {
                let mut pts: Vec<(f64, f64)> = reports
                    .iter()
                    .filter(|r| r.scheme == scheme.label())
                    .map(|r| (r.k, r.uniform_error))
                    .collect();
                pts.sort_by(|a, b| b.0.total_cmp(&a.0));
                (scheme.label().to_string(), fit_rate(&pts).ok())
            })
            .collect();

        Ok(StudyOutcome {
            reports,
            fits,
            threads,
            noise_amplitudes: "real".into(),
            coupling: "dyadic increment summation".into(),
        })
    }
}
