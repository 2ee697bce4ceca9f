//! Rate fitting, closed-form constants and bounds, rate lookup, and the
//! log-Hölder modulus.

mod bounds;
mod fit;
mod modulus;
mod rates;

pub use bounds::{
    bdg_constant, gronwall_continuous_bound, gronwall_discrete_bound, maximal_inequality_constant,
    stability_constant, BoundConstants,
};
pub use fit::{fit_rate, RateFit};
pub use modulus::{
    estimate_log_holder, estimate_log_holder_path, log_modulus, maximal_constant_probe,
    ProbeResult,
};
pub use rates::{smooth_noise_delta, theoretical_rate, ProblemClass, TheoreticalRate};
