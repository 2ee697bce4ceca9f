//! Stability constants and the two Gronwall-type bounds, with the extremal
//! sequence that attains the discrete inequality.

use spde_lab::analysis::{
    bdg_constant, gronwall_continuous_bound, gronwall_discrete_bound, maximal_inequality_constant,
    stability_constant,
};

fn main() -> spde_lab::Result<()> {
    let c = stability_constant(1.0, 1.0, 1.0, 2.0)?;
    println!("C_F = C_G = T = 1, p = 2:");
    println!("  B_p = {}, C = {}, C_stab = {:.6}", c.b_p, c.c, c.c_stab);
    println!("  maximal inequality constant K = {}", maximal_inequality_constant());
    for p in [2.0, 4.0, 8.0] {
        println!("  B_{p} = {:.4}", bdg_constant(p)?);
    }

    let (alpha, beta) = (1.0, 0.5);
    let mut sum = 0.0;
    let mut phi = alpha;
    println!("\n j   extremal φ_j   discrete bound");
    for j in 0..=10u64 {
        println!("{j:>2}   {phi:>12.4}   {:>14.4}", gronwall_discrete_bound(alpha, beta, j));
        sum += phi * phi;
        phi = alpha + beta * sum.sqrt();
    }
    for t in [0.5, 1.0, 2.0] {
        println!("continuous bound at t = {t}: {:.4}", gronwall_continuous_bound(alpha, beta, t));
    }
    Ok(())
}
