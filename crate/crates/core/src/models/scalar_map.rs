use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

type CustomFn = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// Pointwise map used as a Nemytskij coefficient.
///
/// Real-valued maps act on the real and imaginary parts separately, which
/// keeps the declared Lipschitz constant valid in the complex modulus.
#[derive(Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ScalarMap {
    Zero,
    Identity,
    /// `c · sin(x)`.
    ScaledSin { c: f64 },
    /// `clamp(slope · x, −clip, clip)`.
    ClippedLinear { slope: f64, clip: f64 },
    /// `x ↦ c`, the affine part of an additive coefficient.
    Constant { c: f64 },
    /// User closure with a declared Lipschitz constant; not certified.
    #[serde(skip)]
    Custom { f: CustomFn, lipschitz: f64 },
}

impl fmt::Debug for ScalarMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarMap::Zero => f.write_str("Zero"),
            ScalarMap::Identity => f.write_str("Identity"),
            ScalarMap::ScaledSin { c } => write!(f, "ScaledSin({c})"),
            ScalarMap::ClippedLinear { slope, clip } => write!(f, "ClippedLinear({slope}, {clip})"),
            ScalarMap::Constant { c } => write!(f, "Constant({c})"),
            ScalarMap::Custom { lipschitz, .. } => write!(f, "Custom(L = {lipschitz})"),
        }
    }
}

impl PartialEq for ScalarMap {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (ScalarMap::Zero, ScalarMap::Zero) | (ScalarMap::Identity, ScalarMap::Identity) => true,
            (ScalarMap::ScaledSin { c: a }, ScalarMap::ScaledSin { c: b }) => a == b,
            (
                ScalarMap::ClippedLinear { slope: a, clip: b },
                ScalarMap::ClippedLinear { slope: c, clip: d },
            ) => a == c && b == d,
            (ScalarMap::Constant { c: a }, ScalarMap::Constant { c: b }) => a == b,
            (ScalarMap::Custom { f: a, .. }, ScalarMap::Custom { f: b, .. }) => Arc::ptr_eq(a, b),
            _ => false,
        }
    }
}

impl ScalarMap {
    pub fn custom<F>(f: F, lipschitz: f64) -> Self
    where
        F: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        ScalarMap::Custom {
            f: Arc::new(f),
            lipschitz,
        }
    }

    pub fn apply(&self, x: Complex64) -> Complex64 {
        let parts = |g: &dyn Fn(f64) -> f64| Complex64::new(g(x.re), g(x.im));
        match self {
            ScalarMap::Zero => Complex64::new(0.0, 0.0),
            ScalarMap::Identity => x,
            ScalarMap::ScaledSin { c } => parts(&|v| c * v.sin()),
            ScalarMap::ClippedLinear { slope, clip } => parts(&|v| (slope * v).clamp(-clip, *clip)),
            ScalarMap::Constant { c } => Complex64::new(*c, 0.0),
            ScalarMap::Custom { f, .. } => f(x),
        }
    }

    pub fn lipschitz(&self) -> f64 {
        match self {
            ScalarMap::Zero | ScalarMap::Constant { .. } => 0.0,
            ScalarMap::Identity => 1.0,
            ScalarMap::ScaledSin { c } => c.abs(),
            ScalarMap::ClippedLinear { slope, .. } => slope.abs(),
            ScalarMap::Custom { lipschitz, .. } => *lipschitz,
        }
    }

    /// Whether the constant belongs to the certified built-in set.
    pub fn is_builtin(&self) -> bool {
        !matches!(self, ScalarMap::Custom { .. })
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ScalarMap::Zero) || matches!(self, ScalarMap::Constant { c } if *c == 0.0)
    }

    /// `Some(c)` when the map is the constant `c` (including zero).
    pub fn constant_value(&self) -> Option<f64> {
        match self {
            ScalarMap::Zero => Some(0.0),
            ScalarMap::Constant { c } => Some(*c),
            _ => None,
        }
    }
}
