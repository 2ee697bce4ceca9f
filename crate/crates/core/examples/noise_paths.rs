//! Q-Wiener increments: sampling, dyadic coarsening and the variance check
//! `E|W_j(T)|² = q_j T`.

use spde_lab::noise::{coarsen, sample_path, sample_seed, CovarianceSpec};
use spde_lab::spectral::{build_lattice, BasisKind, GeneratorKind};

fn main() -> spde_lab::Result<()> {
    let lattice = build_lattice(BasisKind::DirichletSine, 8, GeneratorKind::Wave)?;
    let cov = CovarianceSpec::RankDecay { beta: 2.0 };
    let q = cov.variances(&lattice)?;

    let path = sample_path(sample_seed(7, 0), &cov, &lattice, 1024, 1.0)?;
    let coarse = coarsen(&path, 64)?;
    println!("fine steps {}, coarse steps {}", path.n_fine(), coarse.steps());
    let summed: f64 = (0..coarse.steps()).map(|j| coarse.step(j)[0]).sum();
    println!("W_1(T): fine {:.12}, coarse {:.12}", path.terminal_value(0), summed);

    let samples = 4000;
    let mut second = vec![0.0; q.len()];
    for s in 0..samples {
        let p = sample_path(sample_seed(7, s), &cov, &lattice, 16, 1.0)?;
        for (m, acc) in second.iter_mut().enumerate() {
            *acc += p.terminal_value(m).powi(2) / samples as f64;
        }
    }
    for (m, (&qm, &e)) in q.iter().zip(&second).enumerate() {
        println!("mode {}: q = {qm:.4}, sample E|W(T)|² = {e:.4}", m + 1);
    }
    Ok(())
}
