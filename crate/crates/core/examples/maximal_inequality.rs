//! Monte-Carlo probe of the maximal inequality for `N` independent
//! Brownian integrands: the ratio should stay below the constant `K`.

use spde_lab::analysis::maximal_constant_probe;

fn main() -> spde_lab::Result<()> {
    for n in [2, 16, 128, 1024] {
        let r = maximal_constant_probe(n, 400, 256, 5)?;
        println!(
            "N = {:>4}: ratio {:.4} ± {:.4}, K = {:.4}, violation: {}",
            r.n,
            r.ratio,
            r.std_error,
            r.constant,
            r.significant_violation()
        );
    }
    Ok(())
}
