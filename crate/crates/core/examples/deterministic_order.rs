//! Deterministic order of the three schemes for initial data of varying
//! smoothness. Data with `c_ℓ = 1/(1+|ℓ|^e)` lies in `D((−A)^β)` for
//! `β < (2e−1)/4`, and the predicted orders are `β/2` (IE) and `2β/3` (CN).

use spde_lab::analysis::{theoretical_rate, ProblemClass};
use spde_lab::cli::InitialData;
use spde_lab::schemes::{empirical_order, OrderEstimate, SchemeSpec};
use spde_lab::spectral::{build_lattice, BasisKind, GeneratorKind};

fn main() -> spde_lab::Result<()> {
    let lattice = build_lattice(BasisKind::TorusComplex, 1024, GeneratorKind::Schrodinger)?;
    let ks: Vec<f64> = (5..=9).map(|e| (-(e as f64)).exp2()).collect();
    for exponent in [1.5, 2.5, 3.5] {
        let data = InitialData::AlgebraicDecay { exponent, amplitude: 1.0 };
        let beta = data.smoothness(GeneratorKind::Schrodinger);
        let u0 = data.build(&lattice)?;
        println!("e = {exponent}, β = {beta}");
        for s in [SchemeSpec::exponential_euler(), SchemeSpec::implicit_euler(), SchemeSpec::crank_nicolson()] {
            let study = empirical_order(&s, &u0, 1.0, &ks)?;
            let expected = theoretical_rate(s.kind(), beta, ProblemClass::Deterministic)?;
            match study.estimate {
                OrderEstimate::Exact { max_error } => println!("  {}: exact, max error {max_error:.1e}", s.label()),
                OrderEstimate::Fitted(f) => println!("  {}: {:.3} (predicted {:.3})", s.label(), f.slope, expected.alpha),
            }
        }
    }
    Ok(())
}
