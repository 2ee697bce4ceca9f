//! Monte-Carlo strong-error study for the stochastic Schrödinger equation with
//! additive noise, driven directly through the library API.
//!
//! cargo run --release --example convergence_study -- [samples]

use spde_lab::cli::InitialData;
use spde_lab::integrator::ConvergenceStudy;
use spde_lab::models::{NoiseMode, SchrodingerModel};
use spde_lab::noise::CovarianceSpec;
use spde_lab::schemes::SchemeSpec;
use spde_lab::spectral::{build_lattice, BasisKind, GeneratorKind};

fn main() -> spde_lab::Result<()> {
    let samples = std::env::args().nth(1).map_or(20, |s| s.parse().expect("sample count"));
    let lattice = build_lattice(BasisKind::TorusComplex, 256, GeneratorKind::Schrodinger)?;
    let model = SchrodingerModel::new(&lattice, NoiseMode::Additive, CovarianceSpec::PowerLaw { beta: 5.1 })?;
    let u0 = InitialData::AlgebraicDecay { exponent: 6.0, amplitude: 1.0 }.build(&lattice)?;

    let study = ConvergenceStudy {
        model: &model,
        schemes: vec![SchemeSpec::exponential_euler(), SchemeSpec::implicit_euler(), SchemeSpec::crank_nicolson()],
        u0,
        t_final: 1.0,
        ks: (5..=9).map(|e| (-(e as f64)).exp2()).collect(),
        n_fine: 1 << 12,
        samples,
        seed: 1,
        p: 2.0,
        sigma: 0.0,
        full_interval: false,
        threads: None,
        timing: true,
    };
    let out = study.run()?;

    println!("{:>6} {:>10} {:>12} {:>12} {:>9}", "scheme", "k", "uniform", "pointwise", "ms");
    for r in &out.reports {
        println!(
            "{:>6} {:>10.3e} {:>12.4e} {:>12.4e} {:>9.1}",
            r.scheme, r.k, r.uniform_error, r.pointwise_error, r.wall_ms
        );
    }
    for (scheme, fit) in &out.fits {
        match fit {
            Some(f) => println!("{scheme}: rate {:.3} (residual {:.2e})", f.slope, f.residual),
            None => println!("{scheme}: no fit"),
        }
    }
    println!("{} threads, noise amplitudes {}, coupling {}", out.threads, out.noise_amplitudes, out.coupling);
    Ok(())
}
