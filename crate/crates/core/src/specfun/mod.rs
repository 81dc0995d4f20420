//! Complex special functions behind the closed-form solutions.
//!
//! Every evaluator returns an [`EvalResult`] carrying an error estimate and
//! the method used. Branch cuts are on the negative real axis throughout.

mod aik;
mod airy;
mod bessel;
mod gamma;
mod hyp;
mod su3phi;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use aik::{aik, aik_pair_entire, aik_pair_log, aik_prime};
pub use airy::{airy_ai, airy_ai_prime, airy_pair};
pub use bessel::{bessel_k, bessel_k_pair};
pub use gamma::{gamma, gamma_real};
pub use hyp::hyp0f2;
pub use su3phi::{su3_phi_build, su3_phi_eval, su3_phi_oracle_alpha, Su3Phi, Su3PhiCache};

/// Magnitude of the expansion variable above which asymptotic series are used.
pub const ASYMPTOTIC_CROSSOVER: f64 = 18.0;

/// Estimated error above which a result carries the precision warning.
pub const PRECISION_WARNING: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Series,
    CompensatedSeries,
    ContinuedFraction,
    Asymptotic,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalResult {
    pub value: Complex64,
    pub abs_error_estimate: f64,
    pub method: Method,
}

impl EvalResult {
    pub(crate) fn new(value: Complex64, abs_error_estimate: f64, method: Method) -> Self {
        let abs_error_estimate = if abs_error_estimate.is_finite() {
            abs_error_estimate.abs()
        } else {
            f64::MAX
        };
        Self {
            value,
            abs_error_estimate,
            method,
        }
    }

    /// Relative error estimate (absolute if the value vanishes).
    pub fn rel_error_estimate(&self) -> f64 {
        let m = self.value.norm();
        if m > 0.0 {
            self.abs_error_estimate / m
        } else {
            self.abs_error_estimate
        }
    }

    /// Set when a compensated series still estimates a relative error above
    /// [`PRECISION_WARNING`].
    pub fn precision_warning(&self) -> bool {
        self.method == Method::CompensatedSeries && self.rel_error_estimate() > PRECISION_WARNING
    }
}

pub(crate) const EPS: f64 = f64::EPSILON;
