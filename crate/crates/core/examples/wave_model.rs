//! Stochastic wave equation on (0, 1) with space-time white noise: one
//! trajectory per scheme on a shared noise path, and the energy at `T`.

use spde_lab::cli::InitialData;
use spde_lab::integrator::{reference_trajectory, run_trajectory, Record};
use spde_lab::models::{Model, ScalarMap, WaveModel};
use spde_lab::noise::sample_path;
use spde_lab::schemes::SchemeSpec;
use spde_lab::spectral::{build_lattice, BasisKind, GeneratorKind};

fn main() -> spde_lab::Result<()> {
    let lattice = build_lattice(BasisKind::DirichletSine, 256, GeneratorKind::Wave)?;
    let model = WaveModel::white_noise(&lattice, ScalarMap::Zero, ScalarMap::ScaledSin { c: 1.0 })?;
    let u0 = InitialData::AlgebraicDecay { exponent: 4.0, amplitude: 1.0 }.build(&lattice)?;

    let n_fine = 1 << 12;
    let path = sample_path(3, model.covariance(), &lattice, n_fine, 0.25)?;
    let reference = reference_trajectory(&model, &u0, &path, path.dt())?;
    let exact = reference.last();
    println!("reference energy at T: {:.6}", exact.sobolev_norm_sqr(0.0));

    for s in [SchemeSpec::exponential_euler(), SchemeSpec::implicit_euler(), SchemeSpec::crank_nicolson()] {
        for k in [1.0 / 64.0, 1.0 / 256.0] {
            let traj = run_trajectory(&model, &s, k, &u0, &path, &Record::Final)?;
            let err = traj.last().sub(exact)?.sobolev_norm_sqr(0.0).sqrt();
            println!("{} k = {k:.5}: energy {:.6}, error at T {err:.3e}", s.label(), traj.last().sobolev_norm_sqr(0.0));
        }
    }

    // Physical-space displacement at a few collocation nodes.
    let u = exact.to_grid(0);
    let x = lattice.grid_points();
    for i in (0..x.len()).step_by(64) {
        println!("u(T, {:.3}) = {:.5}", x[i], u[i].re);
    }
    Ok(())
}
