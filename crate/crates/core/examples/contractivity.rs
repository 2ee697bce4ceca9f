//! Stability functions on the realised spectrum. Explicit Euler is included
//! as the counterexample; its modulus grows like `k ℓ²`.

use num_complex::Complex64;
use spde_lab::schemes::{check_contractive, scheme_symbol, SchemeSpec};
use spde_lab::spectral::{build_lattice, BasisKind, GeneratorKind};

fn main() -> spde_lab::Result<()> {
    let schemes = [
        SchemeSpec::exponential_euler(),
        SchemeSpec::implicit_euler(),
        SchemeSpec::crank_nicolson(),
        SchemeSpec::explicit_euler(),
    ];
    let lattices = [
        build_lattice(BasisKind::TorusComplex, 1024, GeneratorKind::Schrodinger)?,
        build_lattice(BasisKind::DirichletSine, 1024, GeneratorKind::Wave)?,
    ];
    for lat in &lattices {
        println!("{} / {}", lat.basis().name(), lat.generator().name());
        for k in [1.0 / 32.0, 1.0 / 1024.0] {
            for s in &schemes {
                let r = check_contractive(s, lat, k);
                println!(
                    "  {:<15} k = {k:<10.3e} max |r| = {:<12.6e} at mode {:<5} {}",
                    r.scheme,
                    r.max_modulus,
                    r.worst_mode,
                    if r.pass { "ok" } else { "NOT CONTRACTIVE" }
                );
            }
        }
    }

    // Along the imaginary axis CN is unitary and IE damps.
    for y in [0.1, 1.0, 10.0, 100.0] {
        let z = Complex64::new(0.0, y);
        let ie = scheme_symbol(&SchemeSpec::implicit_euler(), z)?.norm();
        let cn = scheme_symbol(&SchemeSpec::crank_nicolson(), z)?.norm();
        println!("|r(i·{y})|: IE {ie:.6}, CN {cn:.6}");
    }
    Ok(())
}
