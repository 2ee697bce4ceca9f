use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Collocation transform between lattice coefficients and grid values.
///
/// Torus grid: `x_m = 2πm/M`, basis `e_ℓ = (2π)^{-1/2} exp(iℓx)`.
/// Dirichlet grid: `ξ_m = m/(M+1)`, basis `e_i = √2 sin(iπξ)`.
#[derive(Clone)]
pub(crate) enum Transform {
    Fourier {
        forward: Arc<dyn Fft<f64>>,
        inverse: Arc<dyn Fft<f64>>,
        bins: Vec<usize>,
    },
    Sine {
        fft: Arc<dyn Fft<f64>>,
        m: usize,
    },
}

impl fmt::Debug for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Transform::Fourier { bins, .. } => write!(f, "Fourier({})", bins.len()),
            Transform::Sine { m, .. } => write!(f, "Sine({m})"),
        }
    }
}

impl Transform {
    pub(crate) fn fourier(modes: &[i64]) -> Self {
        let m = modes.len();
        let mut planner = FftPlanner::new();
        let bins = modes.iter().map(|&l| l.rem_euclid(m as i64) as usize).collect();
        Transform::Fourier {
            forward: planner.plan_fft_forward(m),
            inverse: planner.plan_fft_inverse(m),
            bins,
        }
    }

    pub(crate) fn sine(m: usize) -> Self {
        let mut planner = FftPlanner::new();
        Transform::Sine {
            fft: planner.plan_fft_forward(2 * (m + 1)),
            m,
        }
    }

    pub(crate) fn to_grid(&self, coeffs: &[Complex64]) -> Vec<Complex64> {
        match self {
            Transform::Fourier { inverse, bins, .. } => {
                let mut buf = vec![Complex64::new(0.0, 0.0); bins.len()];
                for (&b, &c) in bins.iter().zip(coeffs) {
                    buf[b] = c;
                }
                inverse.process(&mut buf);
                let scale = (2.0 * PI).sqrt().recip();
                buf.iter_mut().for_each(|v| *v *= scale);
                buf
            }
            Transform::Sine { fft, m } => {
                let mut out = sine_sum(fft.as_ref(), *m, coeffs);
                let scale = 2f64.sqrt();
                out.iter_mut().for_each(|v| *v *= scale);
                out
            }
        }
    }

    pub(crate) fn from_grid(&self, values: &[Complex64]) -> Vec<Complex64> {
        match self {
            Transform::Fourier { forward, bins, .. } => {
                let mut buf = values.to_vec();
                forward.process(&mut buf);
                let scale = (2.0 * PI).sqrt() / bins.len() as f64;
                bins.iter().map(|&b| buf[b] * scale).collect()
            }
            Transform::Sine { fft, m } => {
                let mut out = sine_sum(fft.as_ref(), *m, values);
                let scale = 2f64.sqrt() / (*m as f64 + 1.0);
                out.iter_mut().for_each(|v| *v *= scale);
                out
            }
        }
    }
}

/// `out[m-1] = Σ_{i=1}^{M} input[i-1] sin(π i m / (M+1))` via an odd extension
/// of length `2(M+1)`.
fn sine_sum(fft: &dyn Fft<f64>, m: usize, input: &[Complex64]) -> Vec<Complex64> {
    let n = 2 * (m + 1);
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for (i, &c) in input.iter().enumerate() {
        buf[i + 1] = c;
        buf[n - i - 1] = -c;
    }
    fft.process(&mut buf);
    // Y_m = -2i S_m
    let half_i = Complex64::new(0.0, 0.5);
    buf[1..=m].iter().map(|&y| y * half_i).collect()
}
