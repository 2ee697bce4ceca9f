use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::bounds::maximal_inequality_constant;
use crate::error::{Error, Result};
use crate::integrator::Trajectory;

/// `Ψ(r) = r^α (1 + log(T/r))^{1/2}`.
pub fn log_modulus(r: f64, t_final: f64, alpha: f64) -> Result<f64> {
    if !(r > 0.0 && r <= t_final) {
        return Err(Error::InvalidArgument(format!(
            "modulus argument {r} outside (0, {t_final}]"
        )));
    }
    Ok(r.powf(alpha) * (1.0 + (t_final / r).ln()).sqrt())
}

/// `max_{s<t} d(s, t) / Ψ(t − s)` over all pairs of grid indices.
pub fn estimate_log_holder_path<D>(times: &[f64], t_final: f64, alpha: f64, dist: D) -> Result<f64>
where
    D: Fn(usize, usize) -> f64,
{
    let mut best = 0.0f64;
    for i in 0..times.len() {
        for j in i + 1..times.len() {
            let psi = log_modulus(times[j] - times[i], t_final, alpha)?;
            best = best.max(dist(i, j) / psi);
        }
    }
    Ok(best)
}

/// Log-Hölder seminorm of a recorded trajectory in the `σ = 0` norm.
pub fn estimate_log_holder(trajectory: &Trajectory, alpha: f64) -> Result<f64> {
    let states = trajectory.states();
    let times = trajectory.times();
    let t_final = *times.last().ok_or(Error::EmptyBatch)? - times[0];
    if t_final <= 0.0 {
        return Err(Error::InvalidArgument("trajectory spans no time".into()));
    }
    let shifted: Vec<f64> = times.iter().map(|t| t - times[0]).collect();
    let weights = states[0].lattice().norm_weights(0.0);
    estimate_log_holder_path(&shifted, t_final, alpha, |i, j| {
        states[i]
            .coeffs()
            .iter()
            .zip(states[j].coeffs())
            .zip(&weights)
            .map(|((a, b), w)| w * (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeResult {
    pub n: usize,
    pub samples: usize,
    /// `(E sup_{t,j} |∫_0^t dW_j|²)^{1/2} / (max(√log N, √2) ‖Φ‖)`.
    pub ratio: f64,
    /// Delta-method standard error of `ratio`.
    pub std_error: f64,
    pub constant: f64,
}

impl ProbeResult {
    /// Above `K` by at least three standard errors.
    pub fn significant_violation(&self) -> bool {
        self.ratio - 3.0 * self.std_error > self.constant
    }
}

/// Monte-Carlo check of the maximal inequality with `p = 2` for `N`
/// independent unit integrands on `[0, 1]`, each a Brownian motion sampled on
/// `steps` points.
pub fn maximal_constant_probe(n: usize, samples: usize, steps: usize, seed: u64) -> Result<ProbeResult> {
    if n < 2 || samples == 0 || steps == 0 {
        return Err(Error::InvalidArgument(
            "probe needs N ≥ 2, at least one sample and one step".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sd = (1.0 / steps as f64).sqrt();
    let mut sups = Vec::with_capacity(samples);
    for _ in 0..samples {
        let mut sup = 0.0f64;
        for _ in 0..n {
            let mut b = 0.0f64;
            for _ in 0..steps {
                let z: f64 = StandardNormal.sample(&mut rng);
                b += sd * z;
                sup = sup.max(b.abs());
            }
        }
        sups.push(sup * sup);
    }
    let m = samples as f64;
    let mean = sups.iter().sum::<f64>() / m;
    let var = sups.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (m - 1.0).max(1.0);
    let norm = (n as f64).ln().sqrt().max(2f64.sqrt());
    let ratio = mean.sqrt() / norm;
    // d sqrt(x) = dx / (2 sqrt(x))
    let std_error = (var / m).sqrt() / (2.0 * mean.sqrt()) / norm;
    Ok(ProbeResult {
        n,
        samples,
        ratio,
        std_error,
        constant: maximal_inequality_constant(),
    })
}
