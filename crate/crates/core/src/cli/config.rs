use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::initial::InitialData;
use crate::error::{Error, Result};
use crate::models::{Model, NoiseMode, NoiseRegularity, ScalarMap, SchrodingerModel, WaveModel};
use crate::noise::CovarianceSpec;
use crate::schemes::{step_count, SchemeSpec};
use crate::spectral::{build_lattice, BasisKind, FrequencyLattice, GeneratorKind, SpectralState};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Schrodinger,
    Wave,
}

/// The equation being simulated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub kind: ModelKind,
    /// Defaults to the torus for Schrödinger and the Dirichlet interval for the wave.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<BasisKind>,
    pub modes: usize,
    /// Sobolev index of the error norm.
    #[serde(default)]
    pub sigma: f64,
    /// Schrödinger only.
    #[serde(default = "additive")]
    pub noise_mode: NoiseMode,
    pub covariance: CovarianceSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub potential: Option<InitialData>,
    #[serde(default = "zero_map")]
    pub phi: ScalarMap,
    /// Noise coefficient. Schrödinger: only with `multiplicative_nonlinear`.
    /// Wave: defaults to the constant 1 (additive noise).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi: Option<ScalarMap>,
    /// Wave only.
    #[serde(default = "trace_class")]
    pub regularity: NoiseRegularity,
    pub u0: InitialData,
}

/// Expected fitted slope of one scheme; checked by `run-convergence`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectedRate {
    pub scheme: String,
    pub rate: f64,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

/// One experiment, read from a JSON file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Stem of the output files.
    #[serde(default = "default_name")]
    pub name: String,
    pub model: ModelConfig,
    #[serde(default = "default_schemes")]
    pub schemes: Vec<SchemeSpec>,
    #[serde(default = "one")]
    pub t_final: f64,
    #[serde(default = "default_ks")]
    pub ks: Vec<f64>,
    #[serde(default = "default_k_ref")]
    pub k_ref: f64,
    #[serde(default = "two")]
    pub p: f64,
    #[serde(default = "hundred")]
    pub samples: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_out")]
    pub out: PathBuf,
    /// Worker threads; absent means all available cores.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    /// Record wall time per pair. Off makes the CSV reproducible byte for byte.
    #[serde(default = "yes")]
    pub timing: bool,
    #[serde(default)]
    pub full_interval: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub expect: Vec<ExpectedRate>,
}

fn additive() -> NoiseMode {
    NoiseMode::Additive
}
fn zero_map() -> ScalarMap {
    ScalarMap::Zero
}
fn trace_class() -> NoiseRegularity {
    NoiseRegularity::TraceClass
}
fn default_tolerance() -> f64 {
    0.1
}
fn default_name() -> String {
    "convergence".into()
}
fn default_schemes() -> Vec<SchemeSpec> {
    vec![
        SchemeSpec::exponential_euler(),
        SchemeSpec::implicit_euler(),
        SchemeSpec::crank_nicolson(),
    ]
}
fn one() -> f64 {
    1.0
}
fn two() -> f64 {
    2.0
}
fn hundred() -> usize {
    100
}
fn yes() -> bool {
    true
}
fn default_ks() -> Vec<f64> {
    (5..=9).map(|e| (-(e as f64)).exp2()).collect()
}
fn default_k_ref() -> f64 {
    (-12f64).exp2()
}
fn default_out() -> PathBuf {
    PathBuf::from("results")
}

/// A validation failure tied to a top-level or model key.
struct Issue {
    key: &'static str,
    message: String,
}

fn issue(key: &'static str, message: impl Into<String>) -> Issue {
    Issue {
        key,
        message: message.into(),
    }
}

impl ExperimentConfig {
    /// Additive Schrödinger experiment with the defaults of the reference
    /// study: `M = 2^10`, `q_ℓ = (1+|ℓ|^5.1)^{−1}`, `u0 = (1+|ℓ|⁶)^{−1}`.
    pub fn schrodinger_additive() -> Self {
        ExperimentConfig {
            name: "schrodinger_additive".into(),
            model: ModelConfig {
                kind: ModelKind::Schrodinger,
                basis: None,
                modes: 1 << 10,
                sigma: 0.0,
                noise_mode: NoiseMode::Additive,
                covariance: CovarianceSpec::PowerLaw { beta: 5.1 },
                potential: None,
                phi: ScalarMap::Zero,
                psi: None,
                regularity: NoiseRegularity::TraceClass,
                u0: InitialData::AlgebraicDecay {
                    exponent: 6.0,
                    amplitude: 1.0,
                },
            },
            schemes: default_schemes(),
            t_final: 1.0,
            ks: default_ks(),
            k_ref: default_k_ref(),
            p: 2.0,
            samples: 100,
            seed: 0,
            out: default_out(),
            threads: None,
            timing: true,
            full_interval: false,
            expect: Vec::new(),
        }
    }

    /// Same as [`Self::schrodinger_additive`] with noise `−i u dW` and `β = 3.1`.
    pub fn schrodinger_multiplicative() -> Self {
        let mut cfg = Self::schrodinger_additive();
        cfg.name = "schrodinger_multiplicative".into();
        cfg.model.noise_mode = NoiseMode::MultiplicativeLinear;
        cfg.model.covariance = CovarianceSpec::PowerLaw { beta: 3.1 };
        cfg
    }

    /// Parses and validates JSON text. Errors carry the line of the offending key.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| {
            Error::Config(format!("line {}, column {}: {}", e.line(), e.column(), strip_position(&e)))
        })?;
        cfg.check().map_err(|i| match locate_key(text, i.key) {
            Some(line) => Error::Config(format!("line {line}: `{}`: {}", i.key, i.message)),
            None => Error::Config(format!("`{}`: {}", i.key, i.message)),
        })?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json_str(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn validate(&self) -> Result<()> {
        self.check()
            .map_err(|i| Error::Config(format!("`{}`: {}", i.key, i.message)))
    }

    fn check(&self) -> std::result::Result<(), Issue> {
        if self.name.is_empty() || self.name.contains(['/', '\\']) {
            return Err(issue("name", "must be a non-empty file stem"));
        }
        if self.schemes.is_empty() {
            return Err(issue("schemes", "at least one scheme is required"));
        }
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return Err(issue("t_final", format!("must be positive, got {}", self.t_final)));
        }
        let n_fine = step_count(self.t_final, self.k_ref)
            .ok_or_else(|| issue("k_ref", format!("{} does not divide T = {}", self.k_ref, self.t_final)))?;
        if !n_fine.is_power_of_two() {
            return Err(issue("k_ref", format!("T/k_ref = {n_fine} is not a power of two")));
        }
        if self.ks.is_empty() {
            return Err(issue("ks", "at least one step size is required"));
        }
        for &k in &self.ks {
            let n = step_count(self.t_final, k)
                .ok_or_else(|| issue("ks", format!("{k} does not divide T = {}", self.t_final)))?;
            if n > n_fine || n_fine % n != 0 || !(n_fine / n).is_power_of_two() {
                return Err(issue("ks", format!("k_ref = {} does not divide {k} dyadically", self.k_ref)));
            }
        }
        if !(self.p >= 1.0 && self.p.is_finite()) {
            return Err(issue("p", format!("must be at least 1, got {}", self.p)));
        }
        if self.samples == 0 {
            return Err(issue("samples", "must be positive"));
        }
        if self.threads == Some(0) {
            return Err(issue("threads", "must be positive"));
        }
        for e in &self.expect {
            if !self.schemes.iter().any(|s| s.label() == e.scheme) {
                return Err(issue("expect", format!("scheme {} is not configured", e.scheme)));
            }
        }
        self.model.check()
    }

    /// Number of reference increments `T / k_ref`.
    pub fn n_fine(&self) -> usize {
        step_count(self.t_final, self.k_ref).unwrap_or(0)
    }
}

impl ModelConfig {
    pub fn generator(&self) -> GeneratorKind {
        match self.kind {
            ModelKind::Schrodinger => GeneratorKind::Schrodinger,
            ModelKind::Wave => GeneratorKind::Wave,
        }
    }

    pub fn basis(&self) -> BasisKind {
        self.basis.unwrap_or(match self.kind {
            ModelKind::Schrodinger => BasisKind::TorusComplex,
            ModelKind::Wave => BasisKind::DirichletSine,
        })
    }

    fn check(&self) -> std::result::Result<(), Issue> {
        if !self.sigma.is_finite() {
            return Err(issue("sigma", "must be finite"));
        }
        if self.kind == ModelKind::Schrodinger {
            if self.psi.is_some() && self.noise_mode != NoiseMode::MultiplicativeNonlinear {
                return Err(issue("psi", "only allowed with noise_mode = multiplicative_nonlinear"));
            }
            if self.regularity != NoiseRegularity::TraceClass {
                return Err(issue("regularity", "only applies to wave models"));
            }
        } else if self.noise_mode != NoiseMode::Additive {
            return Err(issue("noise_mode", "wave models set the noise through psi"));
        }
        for (key, map) in [("phi", Some(&self.phi)), ("psi", self.psi.as_ref())] {
            if map.is_some_and(|m| !m.is_builtin()) {
                return Err(issue(key, "only builtin maps can be configured"));
            }
        }
        let lattice = self.lattice().map_err(|e| issue("modes", e.to_string()))?;
        self.covariance
            .variances(&lattice)
            .map_err(|e| issue("covariance", e.to_string()))?;
        self.u0.build(&lattice).map_err(|e| issue("u0", e.to_string()))?;
        self.build_model(&lattice).map_err(|e| issue("model", e.to_string()))?;
        Ok(())
    }

    pub fn lattice(&self) -> Result<Arc<FrequencyLattice>> {
        build_lattice(self.basis(), self.modes, self.generator())
    }

    fn build_model(&self, lattice: &Arc<FrequencyLattice>) -> Result<Box<dyn Model>> {
        match self.kind {
            ModelKind::Schrodinger => {
                let mut m = SchrodingerModel::new(lattice, self.noise_mode, self.covariance.clone())?
                    .with_phi(self.phi.clone());
                if let Some(v) = &self.potential {
                    m = m.with_potential(v.build(lattice)?)?;
                }
                if let Some(psi) = &self.psi {
                    m = m.with_psi(psi.clone())?;
                }
                Ok(Box::new(m))
            }
            ModelKind::Wave => {
                if self.potential.is_some() {
                    return Err(Error::InvalidArgument("wave models take no potential".into()));
                }
                let psi = self.psi.clone().unwrap_or(ScalarMap::Constant { c: 1.0 });
                Ok(Box::new(WaveModel::new(
                    lattice,
                    self.covariance.clone(),
                    self.phi.clone(),
                    psi,
                    self.regularity,
                )?))
            }
        }
    }

    /// Builds the model and its initial state.
    pub fn build(&self) -> Result<(Box<dyn Model>, SpectralState)> {
        let lattice = self.lattice()?;
        let model = self.build_model(&lattice)?;
        let u0 = self.u0.build(&lattice)?;
        Ok((model, u0))
    }
}

fn strip_position(e: &serde_json::Error) -> String {
    let s = e.to_string();
    match s.rfind(" at line ") {
        Some(i) => s[..i].to_string(),
        None => s,
    }
}

/// 1-based line of the first occurrence of `"key"` used as an object key.
fn locate_key(text: &str, key: &str) -> Option<usize> {
    let needle = format!("\"{key}\"");
    text.lines().enumerate().find_map(|(i, line)| {
        let pos = line.find(&needle)?;
        line[pos + needle.len()..]
            .trim_start()
            .starts_with(':')
            .then_some(i + 1)
    })
}
