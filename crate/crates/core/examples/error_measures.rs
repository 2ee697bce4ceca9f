//! The three error functionals on a hand-built family: a bump of width
//! `N^{-γ}` travelling with a uniformly distributed position. Its uniform
//! error stays 1 while the pointwise error decays like `N^{-γ/2}`.
//! Also estimates the log-Hölder seminorm of a simulated trajectory.

use num_complex::Complex64;
use spde_lab::analysis::estimate_log_holder;
use spde_lab::cli::InitialData;
use spde_lab::integrator::{pointwise_error, reference_trajectory, uniform_error, Trajectory};
use spde_lab::models::{Model, NoiseMode, SchrodingerModel};
use spde_lab::noise::{sample_path, CovarianceSpec};
use spde_lab::spectral::{build_lattice, BasisKind, GeneratorKind, SpectralState};

fn main() -> spde_lab::Result<()> {
    let lat = build_lattice(BasisKind::TorusComplex, 2, GeneratorKind::Schrodinger)?;
    let zero = SpectralState::zeros(&lat);
    let mut one = zero.clone();
    one.coeffs_mut()[0] = Complex64::new(1.0, 0.0);

    for n in [16usize, 64, 256, 1024] {
        let k = 1.0 / n as f64;
        let refs: Vec<Trajectory> = (0..=n)
            .map(|_| Trajectory::from_states(k, vec![zero.clone(); n + 1]))
            .collect::<Result<_, _>>()?;
        let bumps: Vec<Trajectory> = (0..=n)
            .map(|s| {
                let states = (0..=n).map(|j| if j == s { one.clone() } else { zero.clone() }).collect();
                Trajectory::from_states(k, states)
            })
            .collect::<Result<_, _>>()?;
        println!(
            "N = {n:>4}: uniform {:.4}, pointwise {:.4}",
            uniform_error(&refs, &bumps, 2.0, 0.0)?,
            pointwise_error(&refs, &bumps, 2.0, 0.0)?
        );
    }

    let lat = build_lattice(BasisKind::TorusComplex, 64, GeneratorKind::Schrodinger)?;
    let model = SchrodingerModel::new(&lat, NoiseMode::Additive, CovarianceSpec::PowerLaw { beta: 3.0 })?;
    let u0 = InitialData::AlgebraicDecay { exponent: 3.0, amplitude: 1.0 }.build(&lat)?;
    let path = sample_path(11, model.covariance(), &lat, 1 << 10, 1.0)?;
    let traj = reference_trajectory(&model, &u0, &path, path.dt())?;
    for alpha in [0.25, 0.5] {
        println!("log-Hölder seminorm, α = {alpha}: {:.4}", estimate_log_holder(&traj, alpha)?);
    }
    Ok(())
}
