//! A user-supplied rational scheme: the (2,2) Padé approximant of `e^z`,
//! which is A-stable and of classical order four.

use spde_lab::cli::InitialData;
use spde_lab::schemes::{check_contractive, empirical_order, OrderEstimate, SchemeSpec};
use spde_lab::spectral::{build_lattice, BasisKind, GeneratorKind};

fn main() -> spde_lab::Result<()> {
    let pade = SchemeSpec::custom("pade22", vec![12.0, 6.0, 1.0], vec![12.0, -6.0, 1.0])?;
    let lattice = build_lattice(BasisKind::TorusComplex, 256, GeneratorKind::Schrodinger)?;
    for k in [0.1, 1e-3] {
        let r = check_contractive(&pade, &lattice, k);
        println!("k = {k}: max |r| = {:.15}, contractive: {}", r.max_modulus, r.pass);
    }

    let u0 = InitialData::SingleMode { mode: 3, amplitude: 1.0 }.build(&lattice)?;
    let ks: Vec<f64> = (4..=8).map(|e| (-(e as f64)).exp2()).collect();
    if let OrderEstimate::Fitted(f) = empirical_order(&pade, &u0, 1.0, &ks)?.estimate {
        println!("order on a single mode: {:.3}", f.slope);
    }

    // A denominator vanishing in the left half-plane is refused.
    match SchemeSpec::custom("bad", vec![1.0], vec![1.0, 1.0]) {
        Ok(_) => println!("unexpectedly accepted"),
        Err(e) => println!("rejected: {e}"),
    }
    Ok(())
}
