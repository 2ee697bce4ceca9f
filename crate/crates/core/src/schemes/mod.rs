//! One-step methods `R_k = r(kA)` described by their scalar symbol `r`.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analysis::{fit_rate, RateFit};
use crate::error::{Error, Result};
use crate::spectral::{
    block_mul, semigroup_propagator, weighted_norm_sqr, Block, DiagonalPropagator,
    FrequencyLattice, GeneratorKind, SpectralState,
};

#[cfg(test)]
mod tests;

/// Tolerance used by [`check_contractive`].
pub const CONTRACTIVITY_TOL: f64 = 1e-12;

/// Relative error below which [`empirical_order`] reports the scheme as exact,
/// for up to 32 steps; the threshold grows linearly with the step count to
/// absorb accumulated rounding.
pub const EXACT_TOL: f64 = 1e-13;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    ExponentialEuler,
    ImplicitEuler,
    CrankNicolson,
    CustomRational,
}

/// A one-step method. Rational symbols keep their real coefficient lists in
/// ascending powers of `z`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SchemeRepr", into = "SchemeRepr")]
pub struct SchemeSpec {
    kind: SchemeKind,
    label: String,
    numerator: Vec<f64>,
    denominator: Vec<f64>,
}

impl fmt::Display for SchemeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

impl SchemeSpec {
    /// `r(z) = e^z`, so `R_k = S(k)`.
    pub fn exponential_euler() -> Self {
        SchemeSpec {
            kind: SchemeKind::ExponentialEuler,
            label: "EE".into(),
            numerator: Vec::new(),
            denominator: Vec::new(),
        }
    }

    /// `r(z) = 1/(1−z)`.
    pub fn implicit_euler() -> Self {
        SchemeSpec {
            kind: SchemeKind::ImplicitEuler,
            label: "IE".into(),
            numerator: vec![1.0],
            denominator: vec![1.0, -1.0],
        }
    }

    /// `r(z) = (2+z)/(2−z)`.
    pub fn crank_nicolson() -> Self {
        SchemeSpec {
            kind: SchemeKind::CrankNicolson,
            label: "CN".into(),
            numerator: vec![2.0, 1.0],
            denominator: vec![2.0, -1.0],
        }
    }

    /// Explicit Euler `r(z) = 1 + z`, not contractive on `iℝ`.
    pub fn explicit_euler() -> Self {
        SchemeSpec::custom("explicit_euler", vec![1.0, 1.0], vec![1.0])
            .expect("explicit Euler is a valid rational symbol")
    }

    /// Rational `r = p/q` with ascending coefficients.
    ///
    /// Requires `r(0) = 1`. The denominator is sampled on the closed left
    /// half-plane (rays of radius `1e-3 … 1e4`) and rejected if it vanishes
    /// there; zeros between sample points can slip through.
    pub fn custom(label: &str, numerator: Vec<f64>, denominator: Vec<f64>) -> Result<Self> {
        let numerator = trim(numerator);
        let denominator = trim(denominator);
        if numerator.is_empty() || denominator.is_empty() {
            return Err(Error::InvalidArgument(
                "rational scheme needs non-empty numerator and denominator".into(),
            ));
        }
        if numerator.iter().chain(&denominator).any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument("non-finite scheme coefficient".into()));
        }
        if denominator[0] == 0.0 || (numerator[0] / denominator[0] - 1.0).abs() > 1e-14 {
            return Err(Error::InvalidArgument(format!(
                "scheme {label} is inconsistent: r(0) must equal 1"
            )));
        }
        if let Some(z) = left_half_plane_zero(&denominator) {
            return Err(Error::Pole(z));
        }
        Ok(SchemeSpec {
            kind: SchemeKind::CustomRational,
            label: label.to_string(),
            numerator,
            denominator,
        })
    }

    /// Looks up `EE`, `IE`, `CN` (or their long names) and `explicit_euler`.
    pub fn from_name(name: &str) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "ee" | "exponential_euler" => Ok(Self::exponential_euler()),
            "ie" | "implicit_euler" => Ok(Self::implicit_euler()),
            "cn" | "crank_nicolson" => Ok(Self::crank_nicolson()),
            "explicit_euler" => Ok(Self::explicit_euler()),
            _ => Err(Error::InvalidArgument(format!("unknown scheme '{name}'"))),
        }
    }

    pub fn kind(&self) -> SchemeKind {
        self.kind
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn numerator(&self) -> &[f64] {
        &self.numerator
    }

    pub fn denominator(&self) -> &[f64] {
        &self.denominator
    }
}

fn trim(mut c: Vec<f64>) -> Vec<f64> {
    while c.len() > 1 && c.last() == Some(&0.0) {
        c.pop();
    }
    c
}

fn horner(coeffs: &[f64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

fn horner_scale(coeffs: &[f64], r: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * r + c.abs())
}

fn derivative(coeffs: &[f64]) -> Vec<f64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| i as f64 * c)
        .collect()
}

/// Samples the closed left half-plane on a polar grid and flags a point whose
/// first-order distance to a zero, `|q|/|q'|`, is below the local spacing.
fn left_half_plane_zero(den: &[f64]) -> Option<Complex64> {
    if den[0] == 0.0 {
        return Some(Complex64::new(0.0, 0.0));
    }
    if den.len() < 2 {
        return None;
    }
    let dq = derivative(den);
    let rays = 64;
    let radii = 400;
    let spacing = 0.05;
    for ri in 0..=radii {
        let r = 10f64.powf(-3.0 + 7.0 * ri as f64 / radii as f64);
        for a in 0..=rays {
            let theta = std::f64::consts::FRAC_PI_2 + std::f64::consts::PI * a as f64 / rays as f64;
            let z = Complex64::from_polar(r, theta);
            if horner(den, z).norm() <= horner(&dq, z).norm() * r * spacing {
                return Some(z);
            }
        }
    }
    None
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum SchemeRepr {
    Named(String),
    Custom {
        #[serde(default)]
        label: Option<String>,
        numerator: Vec<f64>,
        denominator: Vec<f64>,
    },
}

impl TryFrom<SchemeRepr> for SchemeSpec {
    type Error = Error;

    fn try_from(r: SchemeRepr) -> Result<Self> {
        match r {
            SchemeRepr::Named(n) => SchemeSpec::from_name(&n),
            SchemeRepr::Custom {
                label,
                numerator,
                denominator,
            } => SchemeSpec::custom(label.as_deref().unwrap_or("custom"), numerator, denominator),
        }
    }
}

impl From<SchemeSpec> for SchemeRepr {
    fn from(s: SchemeSpec) -> Self {
        match s.kind {
            SchemeKind::CustomRational if s.label != "explicit_euler" => SchemeRepr::Custom {
                label: Some(s.label),
                numerator: s.numerator,
                denominator: s.denominator,
            },
            _ => SchemeRepr::Named(s.label),
        }
    }
}

/// Evaluates `r(z)`. Outside the closed left half-plane the value is returned
/// but carries no stability meaning.
pub fn scheme_symbol(scheme: &SchemeSpec, z: Complex64) -> Result<Complex64> {
    if scheme.kind == SchemeKind::ExponentialEuler {
        return Ok(z.exp());
    }
    let q = horner(&scheme.denominator, z);
    if q.norm() <= 1e-14 * horner_scale(&scheme.denominator, z.norm()) {
        return Err(Error::Pole(z));
    }
    Ok(horner(&scheme.numerator, z) / q)
}

fn horner_block(coeffs: &[f64], m: &Block) -> Block {
    let mut acc = [[0.0; 2]; 2];
    for &c in coeffs.iter().rev() {
        acc = block_mul(&acc, m);
        acc[0][0] += c;
        acc[1][1] += c;
    }
    acc
}

fn rational_wave_block(scheme: &SchemeSpec, lambda: f64, k: f64) -> Option<Block> {
    let ka = [[0.0, k], [-k * lambda, 0.0]];
    let p = horner_block(&scheme.numerator, &ka);
    let q = horner_block(&scheme.denominator, &ka);
    let det = q[0][0] * q[1][1] - q[0][1] * q[1][0];
    let scale = q.iter().flatten().map(|x| x.abs()).fold(0.0, f64::max);
    if det.abs() <= 1e-14 * scale * scale {
        return None;
    }
    let inv = [[q[1][1] / det, -q[0][1] / det], [-q[1][0] / det, q[0][0] / det]];
    Some(block_mul(&inv, &p))
}

/// The lifted scheme `R_k = r(kA)` on every lattice mode.
///
/// Wave blocks of rational schemes come from Horner evaluation of numerator
/// and denominator at the 2×2 block `kA_λ` followed by one exact 2×2 solve;
/// exponential Euler uses the exact semigroup block.
pub fn discrete_propagator(
    scheme: &SchemeSpec,
    lattice: &FrequencyLattice,
    k: f64,
) -> Result<DiagonalPropagator> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::InvalidArgument(format!("step size must be positive, got {k}")));
    }
    if scheme.kind == SchemeKind::ExponentialEuler {
        return Ok(semigroup_propagator(lattice, k));
    }
    let modes = lattice.modes();
    match lattice.generator() {
        GeneratorKind::Schrodinger => lattice
            .eigenvalues()
            .iter()
            .zip(modes)
            .map(|(&a, &mode)| {
                let z = a * k;
                scheme_symbol(scheme, z).map_err(|_| Error::PoleAtMode { mode, z })
            })
            .collect::<Result<Vec<_>>>()
            .map(DiagonalPropagator::Scalar),
        GeneratorKind::Wave => lattice
            .eigenvalues()
            .iter()
            .zip(modes)
            .map(|(&l, &mode)| {
                rational_wave_block(scheme, l.re, k).ok_or(Error::PoleAtMode {
                    mode,
                    z: Complex64::new(0.0, k * l.re.sqrt()),
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(DiagonalPropagator::Block),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContractivityReport {
    pub scheme: String,
    pub k: f64,
    pub max_modulus: f64,
    /// Wave number attaining `max_modulus`.
    pub worst_mode: i64,
    pub pass: bool,
}

/// Largest per-mode operator norm of `R_k` on the realised spectrum.
///
/// Wave modes use the energy norm `|u|² + λ^{-1}|v|²`, in which `r(kA_λ)` is
/// normal with eigenvalues `r(±ikμ)`. A pole counts as infinite modulus.
pub fn check_contractive(scheme: &SchemeSpec, lattice: &FrequencyLattice, k: f64) -> ContractivityReport {
    let mut max_modulus = f64::NEG_INFINITY;
    let mut worst_mode = lattice.modes()[0];
    for (&e, &mode) in lattice.eigenvalues().iter().zip(lattice.modes()) {
        let points = match lattice.generator() {
            GeneratorKind::Schrodinger => [e * k, e * k],
            GeneratorKind::Wave => {
                let y = k * e.re.sqrt();
                [Complex64::new(0.0, y), Complex64::new(0.0, -y)]
            }
        };
        let modulus = points
            .iter()
            .map(|&z| scheme_symbol(scheme, z).map_or(f64::INFINITY, |r| r.norm()))
            .fold(0.0, f64::max);
        if modulus > max_modulus {
            max_modulus = modulus;
            worst_mode = mode;
        }
    }
    ContractivityReport {
        scheme: scheme.label.clone(),
        k,
        max_modulus,
        worst_mode,
        pass: max_modulus <= 1.0 + CONTRACTIVITY_TOL,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum OrderEstimate {
    /// Every error is below `EXACT_TOL · max(1, N/32) · ‖u0‖_X` for the largest step count `N`.
    Exact { max_error: f64 },
    Fitted(RateFit),
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrderStudy {
    /// `(k, max_j ‖(S(t_j) − R_k^j) u0‖_X)` per grid point.
    pub errors: Vec<(f64, f64)>,
    pub estimate: OrderEstimate,
}

/// Number of steps `T/k`, provided it is an integer.
pub fn step_count(t_final: f64, k: f64) -> Option<usize> {
    let n = (t_final / k).round();
    (n >= 1.0 && ((n * k - t_final).abs() <= 1e-12 * t_final)).then_some(n as usize)
}

/// Deterministic order study: `max_{j ≤ T/k} ‖(S(t_j) − R_k^j)u0‖_X` for each
/// `k`, measured in the `σ = 0` norm, followed by a log-log fit.
pub fn empirical_order(
    scheme: &SchemeSpec,
    u0: &SpectralState,
    t_final: f64,
    k_grid: &[f64],
) -> Result<OrderStudy> {
    if k_grid.len() < 3 {
        return Err(Error::DegenerateFit("order study needs at least 3 step sizes".into()));
    }
    let lattice = u0.lattice();
    let weights = lattice.norm_weights(0.0);
    let scale = weighted_norm_sqr(u0.coeffs(), &weights).sqrt();
    let mut errors = Vec::with_capacity(k_grid.len());
    for &k in k_grid {
        let n = step_count(t_final, k).ok_or(Error::IncompatibleStep {
            k,
            n_fine: 0,
            t_final,
        })?;
        let r = discrete_propagator(scheme, lattice, k)?;
        let squares = dyadic_powers(&r, n);
        let mut worst = 0.0f64;
        let mut diff = u0.coeffs().to_vec();
        for j in 1..=n {
            let exact = semigroup_propagator(lattice, j as f64 * k);
            diff.copy_from_slice(u0.coeffs());
            exact.apply_coeffs(&mut diff);
            let mut approx = u0.coeffs().to_vec();
            for (bit, sq) in squares.iter().enumerate() {
                if j >> bit & 1 == 1 {
                    sq.apply_coeffs(&mut approx);
                }
            }
            diff.iter_mut().zip(&approx).for_each(|(d, a)| *d -= a);
            worst = worst.max(weighted_norm_sqr(&diff, &weights).sqrt());
        }
        errors.push((k, worst));
    }
    let max_error = errors.iter().map(|e| e.1).fold(0.0, f64::max);
    let max_steps = k_grid
        .iter()
        .filter_map(|&k| step_count(t_final, k))
        .max()
        .unwrap_or(1);
    let tol = EXACT_TOL * (max_steps as f64 / 32.0).max(1.0);
    let estimate = if max_error <= tol * scale.max(f64::MIN_POSITIVE) {
        OrderEstimate::Exact { max_error }
    } else {
        OrderEstimate::Fitted(fit_rate(&errors)?)
    };
    Ok(OrderStudy { errors, estimate })
}

/// `[R, R², R⁴, …]` up to the highest bit of `n`.
fn dyadic_powers(r: &DiagonalPropagator, n: usize) -> Vec<DiagonalPropagator> {
    let bits = usize::BITS - n.leading_zeros();
    let mut out = Vec::with_capacity(bits as usize);
    out.push(r.clone());
    for _ in 1..bits {
        let last = out.last().expect("non-empty");
        let next = last.compose(last).expect("same shape");
        out.push(next);
    }
    out
}
