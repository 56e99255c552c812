//! a-full numbers and their asymptotic constant, moment sums over
//! discriminant multiplicities, and census statistics `N(F,G;X)`.

mod afull;
mod census;
mod euler;

pub use afull::{afull_count, afull_enumerate, verify_afull_asymptotic, AsymptoticReport, MAX_A, MAX_X};
pub use census::{
    chebyshev_exceed_check, dyadic_moment, epsilon_fit, CensusSeries, ChebyshevReport, ExponentFit,
    FitKind,
};
pub use euler::{euler_constant_g, euler_partial_product, EulerConstant};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CountingError {
    #[error("a = {0} out of range (2 <= a <= {MAX_A})")]
    ExponentRange(u32),
    #[error("X = {x} exceeds the enumeration cap {cap}")]
    LimitCap { x: u64, cap: u64 },
    #[error("fit needs at least 3 dyadic points, found {0}")]
    TooFewPoints(usize),
    #[error("invalid census series: {0}")]
    InvalidSeries(String),
    #[error("precision target {0:e} not reached")]
    Precision(f64),
    #[error("invalid argument: {0}")]
    Invalid(String),
}
