//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs with its own `main` so that the lines appear in plain `cargo test`
//! output. Positional arguments select criteria by number or name fragment.

use std::sync::Arc;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spde_lab::analysis::{gronwall_continuous_bound, gronwall_discrete_bound, stability_constant};
use spde_lab::cli::{cmd_run_convergence, run_study, ExperimentConfig, InitialData, ModelKind};
use spde_lab::integrator::{
    pointwise_error, run_trajectory, uniform_error, ConvergenceStudy, Record, StudyOutcome, Trajectory,
};
use spde_lab::models::{Model, NoiseMode, NoiseRegularity, ScalarMap, SchrodingerModel, WaveModel};
use spde_lab::noise::{coarsen, sample_path, CovarianceSpec};
use spde_lab::schemes::{
    check_contractive, empirical_order, scheme_symbol, OrderEstimate, SchemeSpec,
};
use spde_lab::spectral::{build_lattice, BasisKind, FrequencyLattice, GeneratorKind, SpectralState};

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

struct Criterion {
    number: u32,
    name: &'static str,
    run: fn() -> Verdict,
    /// Targets that conflict with the derived asymptotics. A failure is
    /// reported but does not fail the suite; an unexpected pass is flagged.
    known_conflict: Option<&'static str>,
}

fn schemes() -> Vec<SchemeSpec> {
    vec![
        SchemeSpec::exponential_euler(),
        SchemeSpec::implicit_euler(),
        SchemeSpec::crank_nicolson(),
    ]
}

fn dyadic(from: i32, to: i32) -> Vec<f64> {
    (from..=to).map(|e| (-(e as f64)).exp2()).collect()
}

/// Checks every fitted slope against its target; returns the verdict line.
fn rate_verdict(outcome: &StudyOutcome, targets: &[(&str, f64)], tol: f64) -> Verdict {
    let mut pass = true;
    let mut parts = Vec::new();
    for &(scheme, want) in targets {
        match outcome.fit(scheme) {
            Some(f) => {
                let ok = (f.slope - want).abs() <= tol;
                pass &= ok;
                parts.push(format!("{scheme} {:.4} (target {want:.4})", f.slope));
            }
            None => {
                pass = false;
                parts.push(format!("{scheme} no fit"));
            }
        }
    }
    verdict(pass, format!("{} ±{tol}", parts.join(", ")))
}

fn quiet(mut cfg: ExperimentConfig) -> ExperimentConfig {
    cfg.timing = false;
    cfg
}

#[allow(clippy::approx_constant)]
fn c1_schrodinger_additive() -> Verdict {
    let cfg = quiet(ExperimentConfig::schrodinger_additive());
    let out = run_study(&cfg).expect("additive study");
    rate_verdict(&out, &[("EE", 0.9650), ("IE", 0.5510), ("CN", 0.7071)], 0.10)
}

fn c2_schrodinger_multiplicative() -> Verdict {
    let cfg = quiet(ExperimentConfig::schrodinger_multiplicative());
    let out = run_study(&cfg).expect("multiplicative study");
    rate_verdict(&out, &[("EE", 0.5321), ("IE", 0.3025), ("CN", 0.3675)], 0.10)
}

fn slope(study: &spde_lab::schemes::OrderStudy) -> Option<f64> {
    match &study.estimate {
        OrderEstimate::Fitted(f) => Some(f.slope),
        OrderEstimate::Exact { .. } => None,
    }
}

fn c3_deterministic_order() -> Verdict {
    let ks = dyadic(5, 9);
    let mut pass = true;
    let mut notes = Vec::new();
    let torus = build_lattice(BasisKind::TorusComplex, 1 << 10, GeneratorKind::Schrodinger).unwrap();
    let dirichlet = build_lattice(BasisKind::DirichletSine, 1 << 10, GeneratorKind::Wave).unwrap();

    for (lat, mode) in [(&torus, 2), (&dirichlet, 1)] {
        let u0 = SpectralState::basis_vector(lat, mode).unwrap();
        let ee = empirical_order(&SchemeSpec::exponential_euler(), &u0, 1.0, &ks).unwrap();
        let ee_max = ee.errors.iter().map(|e| e.1).fold(0.0, f64::max);
        let ie = slope(&empirical_order(&SchemeSpec::implicit_euler(), &u0, 1.0, &ks).unwrap());
        let cn = slope(&empirical_order(&SchemeSpec::crank_nicolson(), &u0, 1.0, &ks).unwrap());
        let ok = ee_max <= 1e-12
            && ie.is_some_and(|s| (s - 1.0).abs() <= 0.05)
            && cn.is_some_and(|s| (s - 2.0).abs() <= 0.05);
        pass &= ok;
        notes.push(format!(
            "{} e_{mode}: EE {ee_max:.1e}, IE {:.3}, CN {:.3}",
            lat.generator().name(),
            ie.unwrap_or(f64::NAN),
            cn.unwrap_or(f64::NAN)
        ));
    }

    // c_ℓ = 1/(1+|ℓ|^e) lies in H^s for s < e − 1/2, i.e. in D((−A)^β), β = (2e−1)/4
    for e in [1.5, 2.5, 3.5] {
        let beta: f64 = (2.0 * e - 1.0) / 4.0;
        let coeffs = torus
            .modes()
            .iter()
            .map(|&l| Complex64::new(1.0 / (1.0 + (l.abs() as f64).powf(e)), 0.0))
            .collect();
        let u0 = SpectralState::from_coeffs(&torus, coeffs).unwrap();
        let ie = slope(&empirical_order(&SchemeSpec::implicit_euler(), &u0, 1.0, &ks).unwrap());
        let cn = slope(&empirical_order(&SchemeSpec::crank_nicolson(), &u0, 1.0, &ks).unwrap());
        let (want_ie, want_cn) = ((beta / 2.0).min(1.0), (2.0 * beta / 3.0).min(2.0));
        let ok = ie.is_some_and(|s| (s - want_ie).abs() <= 0.1) && cn.is_some_and(|s| (s - want_cn).abs() <= 0.1);
        pass &= ok;
        notes.push(format!(
            "β={beta}: IE {:.3}/{want_ie:.3}, CN {:.3}/{want_cn:.3}",
            ie.unwrap_or(f64::NAN),
            cn.unwrap_or(f64::NAN)
        ));
    }
    verdict(pass, notes.join("; "))
}

fn c4_contractivity() -> Verdict {
    let ks = dyadic(5, 12);
    let lattices = [
        build_lattice(BasisKind::TorusComplex, 1 << 10, GeneratorKind::Schrodinger).unwrap(),
        build_lattice(BasisKind::DirichletSine, 1 << 10, GeneratorKind::Wave).unwrap(),
        build_lattice(BasisKind::TorusComplex, 1 << 10, GeneratorKind::Wave).unwrap(),
    ];
    let mut checked = 0;
    let mut pass = true;
    for lat in &lattices {
        for &k in &ks {
            for s in schemes() {
                let r = check_contractive(&s, lat, k);
                pass &= r.pass && r.max_modulus <= 1.0 + 1e-12;
                checked += 1;
            }
            let ex = check_contractive(&SchemeSpec::explicit_euler(), lat, k);
            pass &= !ex.pass;
            // |1 + z| at the largest |z| on the spectrum
            let zmax = lat
                .eigenvalues()
                .iter()
                .map(|a| match lat.generator() {
                    GeneratorKind::Schrodinger => a.norm(),
                    GeneratorKind::Wave => a.re.sqrt(),
                })
                .fold(0.0, f64::max)
                * k;
            pass &= (ex.max_modulus - (1.0 + zmax * zmax).sqrt()).abs() <= 1e-9 * ex.max_modulus;
        }
    }
    verdict(pass, format!("{checked} scheme/k/lattice checks, explicit Euler rejected on all {} lattice/k pairs", lattices.len() * ks.len()))
}

fn c5_oracle_equivalence() -> Verdict {
    let lat = build_lattice(BasisKind::TorusComplex, 4, GeneratorKind::Schrodinger).unwrap();
    let model = SchrodingerModel::new(&lat, NoiseMode::Additive, CovarianceSpec::PowerLaw { beta: 2.0 }).unwrap();
    let u0 = SpectralState::from_coeffs(
        &lat,
        lat.modes()
            .iter()
            .map(|&l| Complex64::new(1.0 / (1.0 + (l * l) as f64), 0.25 * l as f64))
            .collect(),
    )
    .unwrap();
    let n = 8;
    let k = 1.0 / n as f64;
    let path = sample_path(5, model.covariance(), &lat, 64, 1.0).unwrap();
    let grid = coarsen(&path, 8).unwrap();
    let mut worst = 0.0f64;
    for scheme in schemes() {
        let traj = run_trajectory(&model, &scheme, k, &u0, &path, &Record::All).unwrap();
        for j in 0..=n {
            // R^j u0 + Σ_{i<j} R^{j−i} (−i) ΔW_{i+1}, with powers taken explicitly
            let mut num = 0.0;
            let mut den = 0.0;
            for (m, &a) in lat.eigenvalues().iter().enumerate() {
                let r = scheme_symbol(&scheme, a * k).unwrap();
                let pow = |p: usize| (0..p).fold(Complex64::new(1.0, 0.0), |acc, _| acc * r);
                let mut x = pow(j) * u0.coeffs()[m];
                for i in 0..j {
                    x += pow(j - i) * Complex64::new(0.0, -grid.step(i)[m]);
                }
                num += (traj.at(j).unwrap().coeffs()[m] - x).norm_sqr();
                den += x.norm_sqr();
            }
            worst = worst.max((num / den).sqrt());
        }
    }
    verdict(worst <= 1e-10, format!("max relative deviation {worst:.2e} (≤ 1e-10)"))
}

fn discrete_extremal(alpha: f64, beta: f64, j: u64) -> f64 {
    let mut sum = 0.0;
    let mut phi = alpha;
    for _ in 0..j {
        sum += phi * phi;
        phi = alpha + beta * sum.sqrt();
    }
    phi
}

/// `y' = (α + β√y)²` by RK4; `φ = α + β√y` attains the integral inequality.
fn continuous_extremal(alpha: f64, beta: f64, t: f64, steps: usize) -> f64 {
    let f = |y: f64| (alpha + beta * y.max(0.0).sqrt()).powi(2);
    let h = t / steps as f64;
    let mut y = 0.0;
    for _ in 0..steps {
        let k1 = f(y);
        let k2 = f(y + 0.5 * h * k1);
        let k3 = f(y + 0.5 * h * k2);
        let k4 = f(y + h * k3);
        y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    alpha + beta * y.sqrt()
}

fn c6_gronwall() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut violations = 0;
    for _ in 0..1000 {
        let (alpha, beta, j) = (rng.gen_range(0.0..10.0), rng.gen_range(0.0..3.0), rng.gen_range(0..=60u64));
        if discrete_extremal(alpha, beta, j) > gronwall_discrete_bound(alpha, beta, j) * (1.0 + 1e-12) {
            violations += 1;
        }
        let (beta, t) = (rng.gen_range(0.0..2.0), rng.gen_range(0.0..4.0));
        if continuous_extremal(alpha, beta, t, 4000) > gronwall_continuous_bound(alpha, beta, t) * (1.0 + 1e-9) {
            violations += 1;
        }
    }
    let c_stab = stability_constant(1.0, 1.0, 1.0, 2.0).unwrap().c_stab;
    let independent = 10f64.sqrt() * 5f64.exp();
    let ok_const = (c_stab - independent).abs() <= 1e-9 && c_stab <= 470.0;
    verdict(
        violations == 0 && ok_const,
        format!(
            "{violations} violations in 2×1000 instances; C_stab = {c_stab:.10} vs √10·e⁵ = {independent:.10} (the literal 470.167 differs from √10·e⁵)"
        ),
    )
}

fn c7_conservation() -> Verdict {
    let n = 1 << 10;
    let mut pass = true;
    let mut notes = Vec::new();
    let torus = build_lattice(BasisKind::TorusComplex, 64, GeneratorKind::Schrodinger).unwrap();
    let dirichlet = build_lattice(BasisKind::DirichletSine, 64, GeneratorKind::Wave).unwrap();
    let silent = CovarianceSpec::Eigenlist { values: vec![0.0; 64] };
    let schr = SchrodingerModel::new(&torus, NoiseMode::Additive, silent.clone()).unwrap();
    let wave = WaveModel::new(&dirichlet, silent, ScalarMap::Zero, ScalarMap::Zero, NoiseRegularity::TraceClass).unwrap();
    let models: [(&dyn Model, &Arc<FrequencyLattice>); 2] = [(&schr, &torus), (&wave, &dirichlet)];
    for (model, lat) in models {
        let u0 = match lat.generator() {
            GeneratorKind::Schrodinger => InitialData::AlgebraicDecay { exponent: 2.0, amplitude: 1.0 },
            GeneratorKind::Wave => InitialData::Pair {
                u: Box::new(InitialData::AlgebraicDecay { exponent: 2.0, amplitude: 1.0 }),
                v: Box::new(InitialData::PowerDecay { rho: 1.0, amplitude: 1.0 }),
            },
        }
        .build(lat)
        .unwrap();
        let path = sample_path(0, model.covariance(), lat, n, 1.0).unwrap();
        let norm = |s: &SpectralState| s.sobolev_norm_sqr(0.0).sqrt();
        let n0 = norm(&u0);
        for s in schemes() {
            let traj = run_trajectory(model, &s, 1.0 / n as f64, &u0, &path, &Record::All).unwrap();
            let norms: Vec<f64> = traj.states().iter().map(norm).collect();
            if s.label() == "IE" {
                let ok = norms.windows(2).all(|w| w[1] <= w[0]);
                pass &= ok;
                notes.push(format!("{} IE non-increasing: {ok}", lat.generator().name()));
            } else {
                let drift = norms.iter().map(|x| (x - n0).abs()).fold(0.0, f64::max);
                pass &= drift <= 1e-10;
                notes.push(format!("{} {} drift {drift:.1e}", lat.generator().name(), s.label()));
            }
        }
    }
    verdict(pass, notes.join(", "))
}

/// Dirichlet wave with a smooth Nemytskij coefficient and trace-class noise.
fn c8_wave_trace_class() -> Verdict {
    let mut cfg = quiet(ExperimentConfig::schrodinger_additive());
    cfg.name = "wave_trace_class".into();
    cfg.model.kind = ModelKind::Wave;
    cfg.model.modes = 512;
    cfg.model.covariance = CovarianceSpec::RankDecay { beta: 2.0 };
    cfg.model.psi = Some(ScalarMap::ScaledSin { c: 1.0 });
    cfg.model.regularity = NoiseRegularity::TraceClass;
    // u_j = (1+j)^{−1.55}: Σ λ_j u_j² < ∞, so (u0, 0) ∈ X_1
    cfg.model.u0 = InitialData::Pair {
        u: Box::new(InitialData::PowerDecay { rho: 1.55, amplitude: 1.0 }),
        v: Box::new(InitialData::Zero),
    };
    cfg.t_final = 0.25;
    cfg.ks = dyadic(7, 11);
    cfg.k_ref = (-14f64).exp2();
    let out = run_study(&cfg).expect("trace-class wave study");
    rate_verdict(&out, &[("EE", 1.0), ("IE", 0.5), ("CN", 2.0 / 3.0)], 0.10)
}

fn c9_wave_white_noise() -> Verdict {
    let mut cfg = quiet(ExperimentConfig::schrodinger_additive());
    cfg.name = "wave_white_noise".into();
    cfg.model.kind = ModelKind::Wave;
    cfg.model.modes = 2048;
    cfg.model.covariance = CovarianceSpec::Identity;
    cfg.model.psi = Some(ScalarMap::ScaledSin { c: 1.0 });
    cfg.model.regularity = NoiseRegularity::WhiteNoise;
    cfg.model.u0 = InitialData::AlgebraicDecay { exponent: 4.0, amplitude: 1.0 };
    cfg.t_final = 0.25;
    cfg.ks = dyadic(6, 10);
    cfg.k_ref = (-13f64).exp2();
    let out = run_study(&cfg).expect("white-noise wave study");
    rate_verdict(&out, &[("EE", 0.5), ("IE", 0.25), ("CN", 1.0 / 3.0)], 0.10)
}

fn c10_wave_smooth_noise() -> Verdict {
    let mut cfg = quiet(ExperimentConfig::schrodinger_additive());
    cfg.name = "wave_smooth_noise".into();
    cfg.model.kind = ModelKind::Wave;
    cfg.model.basis = Some(BasisKind::TorusComplex);
    cfg.model.covariance = CovarianceSpec::RankDecay { beta: 1.1 };
    cfg.model.psi = Some(ScalarMap::Identity);
    cfg.model.regularity = NoiseRegularity::Smooth { delta: 1.55 };
    cfg.model.u0 = InitialData::AlgebraicDecay { exponent: 4.0, amplitude: 1.0 };
    let out = run_study(&cfg).expect("smooth-noise wave study");
    let mut v = rate_verdict(&out, &[("IE", 0.775), ("CN", 1.0)], 0.10);
    let local: Vec<String> = out
        .fit("IE")
        .map(|f| {
            f.errors
                .windows(2)
                .map(|w| format!("{:.2}", (w[0] / w[1]).log2()))
                .collect()
        })
        .unwrap_or_default();
    v.detail.push_str(&format!("; IE local slopes {}", local.join(" ")));
    v
}

fn c11_error_ordering() -> Verdict {
    let lat = build_lattice(BasisKind::TorusComplex, 16, GeneratorKind::Schrodinger).unwrap();
    let mut batches = 0;
    let mut pass = true;
    for (i, mode) in [NoiseMode::Additive, NoiseMode::MultiplicativeLinear].into_iter().enumerate() {
        let model = SchrodingerModel::new(&lat, mode, CovarianceSpec::PowerLaw { beta: 1.5 }).unwrap();
        let u0 = InitialData::AlgebraicDecay { exponent: 3.0, amplitude: 1.0 }.build(&lat).unwrap();
        for seed in 0..10u64 {
            let out = ConvergenceStudy {
                model: &model,
                schemes: schemes(),
                u0: u0.clone(),
                t_final: 1.0,
                ks: dyadic(2, 5),
                n_fine: 64,
                samples: 1 + (seed as usize % 4),
                seed: seed + 100 * i as u64,
                p: 1.0 + seed as f64 / 3.0,
                sigma: 0.0,
                full_interval: true,
                threads: None,
                timing: false,
            }
            .run()
            .unwrap();
            for r in &out.reports {
                batches += 1;
                pass &= r.uniform_error >= r.pointwise_error;
                pass &= r.full_interval_error.unwrap() >= r.uniform_error;
            }
        }
    }

    // Moving bump v_N(ω, t) = 1 near t = ω, with ω uniform over the grid
    let one_mode = build_lattice(BasisKind::TorusComplex, 2, GeneratorKind::Schrodinger).unwrap();
    let zero = SpectralState::zeros(&one_mode);
    let mut one = zero.clone();
    one.coeffs_mut()[0] = Complex64::new(1.0, 0.0);
    let mut bump = Vec::new();
    for (n, gamma) in [(64usize, 1.0), (256, 1.0), (128, 0.5)] {
        let k = 1.0 / n as f64;
        let refs: Vec<Trajectory> = (0..=n)
            .map(|_| Trajectory::from_states(k, vec![zero.clone(); n + 1]).unwrap())
            .collect();
        let approx: Vec<Trajectory> = (0..=n)
            .map(|s| {
                let omega = s as f64 * k;
                let states = (0..=n)
                    .map(|j| {
                        if (j as f64 * k - omega).abs() < 0.5 / (n as f64).powf(gamma) {
                            one.clone()
                        } else {
                            zero.clone()
                        }
                    })
                    .collect();
                Trajectory::from_states(k, states).unwrap()
            })
            .collect();
        let uniform = uniform_error(&refs, &approx, 2.0, 0.0).unwrap();
        let pointwise = pointwise_error(&refs, &approx, 2.0, 0.0).unwrap();
        let bound = (n as f64).powf(-gamma / 2.0);
        pass &= uniform == 1.0 && pointwise <= bound + 1e-15;
        bump.push(format!("N={n} γ={gamma}: uniform {uniform}, pointwise {pointwise:.4} ≤ {bound:.4}"));
    }
    verdict(pass, format!("{batches} batches ordered; {}", bump.join("; ")))
}

fn c12_determinism() -> Verdict {
    let mut cfg = quiet(ExperimentConfig::schrodinger_multiplicative());
    cfg.model.modes = 64;
    cfg.samples = 6;
    cfg.ks = dyadic(3, 6);
    cfg.k_ref = (-9f64).exp2();
    cfg.threads = Some(1);
    cfg.full_interval = true;
    let mut files = Vec::new();
    let dirs: Vec<_> = (0..2).map(|_| tempfile::tempdir().unwrap()).collect();
    for d in &dirs {
        cfg.out = d.path().to_path_buf();
        let run = cmd_run_convergence(&cfg).unwrap();
        files.push((std::fs::read(&run.csv_path).unwrap(), std::fs::read(&run.summary_path).unwrap()));
    }
    let same = files[0] == files[1];
    verdict(same, format!("two single-threaded runs, CSV {} bytes, identical: {same}", files[0].0.len()))
}

fn main() {
    let criteria = [
        Criterion { number: 1, name: "schrodinger_additive_rates", run: c1_schrodinger_additive, known_conflict: None },
        Criterion { number: 2, name: "schrodinger_multiplicative_rates", run: c2_schrodinger_multiplicative, known_conflict: None },
        Criterion { number: 3, name: "deterministic_order", run: c3_deterministic_order, known_conflict: None },
        Criterion { number: 4, name: "contractivity", run: c4_contractivity, known_conflict: None },
        Criterion { number: 5, name: "oracle_equivalence", run: c5_oracle_equivalence, known_conflict: None },
        Criterion { number: 6, name: "gronwall", run: c6_gronwall, known_conflict: None },
        Criterion { number: 7, name: "conservation", run: c7_conservation, known_conflict: None },
        Criterion { number: 8, name: "wave_trace_class", run: c8_wave_trace_class, known_conflict: None },
        Criterion { number: 9, name: "wave_white_noise", run: c9_wave_white_noise, known_conflict: None },
        Criterion {
            number: 10,
            name: "wave_smooth_noise",
            run: c10_wave_smooth_noise,
            known_conflict: Some(
                "q_j = j^-1.1 puts the noise in X_δ only for δ < (1+β)/2 = 1.05, so IE and CN tend to 0.525 and 0.70",
            ),
        },
        Criterion { number: 11, name: "error_ordering", run: c11_error_ordering, known_conflict: None },
        Criterion { number: 12, name: "determinism", run: c12_determinism, known_conflict: None },
    ];

    let filters: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let selected = |c: &Criterion| {
        filters.is_empty()
            || filters
                .iter()
                .any(|f| f == &c.number.to_string() || c.name.contains(f.as_str()) || "acceptance".contains(f.as_str()))
    };

    let mut unexpected = 0;
    for c in criteria.iter().filter(|c| selected(c)) {
        let start = Instant::now();
        let v = (c.run)();
        let secs = start.elapsed().as_secs_f64();
        let tag = if v.pass { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {tag} {}: {} [{secs:.1}s]", c.number, c.name, v.detail);
        match (c.known_conflict, v.pass) {
            (None, false) => unexpected += 1,
            (Some(why), false) => println!("             known conflict: {why}"),
            (Some(_), true) => println!("             passed although flagged as a known conflict"),
            (None, true) => {}
        }
    }
    if unexpected > 0 {
        eprintln!("{unexpected} acceptance criteria failed");
        std::process::exit(1);
    }
}
