//! CFIV index `Q = k/(k+2)` and the integrals
//! `I~_m = int e^{m theta} e^{-A(theta)} dtheta/2pi` of the SU(2)_k solution,
//! by quadrature of the closed form and by Gamma-function formulas.
//!
//! With `n = k/2` and `e^{-A} = (8 cos(pi/(k+2)) / (pi (k+2))) E^{n+1} K_nu(z) K_{1-nu}(z)`
//! every such integral is a Cecotti integral
//! `G_n(p, q, l) = int_0^inf E^{2n+l+1} K_{p/(n+1)}(z) K_{q/(n+1)}(z) dE`, `z = E^{n+1}/(n+1)`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::integrate;
use crate::specfun::{aik_pair_log, gamma_real};

const ABS_TOL: f64 = 1e-12;
const REL_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndexMethod {
    Quadrature,
    GammaFormula,
}

impl FromStr for IndexMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quadrature" => Ok(Self::Quadrature),
            "gamma_formula" | "gamma" => Ok(Self::GammaFormula),
            _ => Err(Error::Invalid(format!("unknown index method '{s}'"))),
        }
    }
}

impl fmt::Display for IndexMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Quadrature => "quadrature",
            Self::GammaFormula => "gamma_formula",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndexResult {
    pub k: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    pub numeric: f64,
    pub exact: f64,
    pub abs_diff: f64,
}

impl IndexResult {
    fn new(k: f64, m: Option<u32>, numeric: f64, exact: f64) -> Self {
        Self {
            k,
            m,
            numeric,
            exact,
            abs_diff: (numeric - exact).abs(),
        }
    }
}

fn gamma_factor(name: &str, x: f64) -> Result<f64> {
    gamma_real(x).map_err(|_| Error::Pole {
        what: name.to_string(),
        at: format!("{x}"),
    })
}

/// `1/Gamma(x)`, zero at the poles.
fn rgamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.round() {
        0.0
    } else {
        gamma_real(x).map_or(0.0, |g| 1.0 / g)
    }
}

/// Cecotti's closed form of `G_n(p, q, l)`.
pub fn gn(n: f64, p: f64, q: f64, l: f64) -> Result<f64> {
    if !(n > -1.0) {
        return Err(Error::Domain(format!("G_n needs n > -1, got {n}")));
    }
    let n1 = n + 1.0;
    let pre = (2.0 * n1).powf(1.0 + l / n1) / 4.0 * rgamma(2.0 + l / n1);
    let two = 2.0 * n1;
    let mut factors = [
        ("Gamma(1+(p+q+l)/(2(n+1)))", 1.0 + (p + q + l) / two),
        ("Gamma(1+(-p+q+l)/(2(n+1)))", 1.0 + (-p + q + l) / two),
        ("Gamma(1+(p-q+l)/(2(n+1)))", 1.0 + (p - q + l) / two),
        ("Gamma(1+(-p-q+l)/(2(n+1)))", 1.0 + (-p - q + l) / two),
    ];
    // a fixed multiplication order keeps p <-> q and p <-> -p exact
    factors.sort_by(|a, b| a.1.total_cmp(&b.1));
    let mut v = pre;
    for (name, x) in factors {
        v *= gamma_factor(name, x)?;
    }
    Ok(v)
}

fn check_k(k: f64) -> Result<()> {
    if k.is_finite() && k >= 0.0 {
        Ok(())
    } else {
        Err(Error::Invalid(format!("index needs finite k >= 0, got {k}")))
    }
}

/// `e^{-A}` as a function of `ln E` (real, `E > 0`).
fn exp_a_log(k: f64, le: f64) -> Result<f64> {
    let (ai, aip) = aik_pair_log(k, Complex64::new(le, 0.0))?;
    Ok(-8.0 * PI * (PI / (k + 2.0)).cos() * (ai.value * aip.value).re)
}

/// `int_0^inf E^{2n+l+1} K_{p/(n+1)}(z) K_{q/(n+1)}(z) dE` by quadrature;
/// the orders must lie in (0, 1).
pub fn gn_quadrature(n: f64, p: f64, q: f64, l: f64) -> Result<f64> {
    use crate::specfun::bessel_k;
    let n1 = n + 1.0;
    let (mu, nu) = (p.abs() / n1, q.abs() / n1);
    let s = 2.0 * n + l + 1.0;
    // past z = 40 the integrand is below e^{-80}
    let e_max = (45.0 * n1).powf(1.0 / n1);
    let f = |e: f64| -> f64 {
        let z = Complex64::new(e.powf(n1) / n1, 0.0);
        match (bessel_k(mu, z), bessel_k(nu, z)) {
            (Ok(a), Ok(b)) => e.powf(s) * (a.value * b.value).re,
            _ => f64::NAN,
        }
    };
    let lo = integrate(f, 0.0, 1.0, ABS_TOL, REL_TOL)?;
    let hi = integrate(f, 1.0, e_max.max(2.0), ABS_TOL, REL_TOL)?;
    Ok(lo.value + hi.value)
}

/// CFIV index. Quadrature: `Q = (2/pi) int_0^inf E^{k/2} e^{-A} dE`.
/// Gamma formula: `Q = -8 cos(pi/(k+2)) / (pi^2 (k+2)) [G_n(1/2, 1/2, -n-1)
/// - G_n(1/2, -(k+1)/2, 0) - G_n(1/2, (k+3)/2, 0)]`, `n = k/2`.
pub fn cfiv(k: f64, method: IndexMethod) -> Result<IndexResult> {
    check_k(k)?;
    let exact = k / (k + 2.0);
    if k == 0.0 {
        // cos(pi/2) = 0: the weight vanishes identically
        return Ok(IndexResult::new(k, None, 0.0, 0.0));
    }
    let kk = k + 2.0;
    let numeric = match method {
        IndexMethod::Quadrature => {
            let e_max = (12.0 * kk).powf(2.0 / kk);
            let f = |e: f64| exp_a_log(k, e.ln()).map_or(f64::NAN, |y| e.powf(k / 2.0) * y);
            let lo = integrate(f, 0.0, 1.0, ABS_TOL, REL_TOL)?;
            let hi = integrate(f, 1.0, e_max.max(2.0), ABS_TOL, REL_TOL)?;
            2.0 / PI * (lo.value + hi.value)
        }
        IndexMethod::GammaFormula => {
            let n = k / 2.0;
            let g = gn(n, 0.5, 0.5, -n - 1.0)? - gn(n, 0.5, -(k + 1.0) / 2.0, 0.0)? - gn(n, 0.5, (k + 3.0) / 2.0, 0.0)?;
            -8.0 * (PI / kk).cos() / (PI * PI * kk) * g
        }
    };
    Ok(IndexResult::new(k, None, numeric, exact))
}

/// `(2^{2(m-1)}/pi) Gamma(m/2)^2/Gamma(m) Gamma(m/2 + 1/(k+2)) Gamma(m/2 + 1 - 1/(k+2))
/// / (Gamma(1/2 + 1/(k+2)) Gamma(1/2 - 1/(k+2)))`.
pub fn itilde_exact(m: u32, k: f64) -> Result<f64> {
    check_k(k)?;
    if m == 0 {
        return Err(Error::Invalid("I~_m needs m >= 1".into()));
    }
    let (mh, nu) = (m as f64 / 2.0, 1.0 / (k + 2.0));
    let g = |name: &str, x: f64| gamma_factor(name, x);
    let num = g("Gamma(m/2)", mh)?.powi(2) * g("Gamma(m/2+1/(k+2))", mh + nu)? * g("Gamma(m/2+1-1/(k+2))", mh + 1.0 - nu)?;
    let den_inv = rgamma(m as f64) * rgamma(0.5 + nu) * rgamma(0.5 - nu);
    Ok(4f64.powi(m as i32 - 1) / PI * num * den_inv)
}

/// `I~_m`. Quadrature over theta, or the single Cecotti integral
/// `I~_m = (2 cos(pi/(k+2))/pi^2) (4/(k+2))^m G_{k/2}(1/2, (k+1)/2, (m-1)(k+2)/2)`.
pub fn itilde(m: u32, k: f64, method: IndexMethod) -> Result<IndexResult> {
    let exact = itilde_exact(m, k)?;
    if k == 0.0 {
        return Ok(IndexResult::new(k, Some(m), 0.0, exact));
    }
    let kk = k + 2.0;
    let mf = m as f64;
    let numeric = match method {
        IndexMethod::Quadrature => {
            let plateau = 2.0 / (PI / kk).tan();
            let lo = -(36.0 + (1.0 + plateau).ln()) / mf;
            let mut hi = 4.0;
            for _ in 0..8 {
                hi = (40.0 + mf * hi).ln();
            }
            hi += 0.5;
            let le0 = (kk / 4.0).ln() * 2.0 / kk;
            let f = |t: f64| exp_a_log(k, le0 + 2.0 * t / kk).map_or(f64::NAN, |y| (mf * t).exp() * y);
            let q = integrate(f, lo, hi, ABS_TOL, REL_TOL)?;
            q.value / (2.0 * PI)
        }
        IndexMethod::GammaFormula => {
            2.0 * (PI / kk).cos() / (PI * PI) * (4.0 / kk).powi(m as i32) * gn(k / 2.0, 0.5, (k + 1.0) / 2.0, (mf - 1.0) * kk / 2.0)?
        }
    };
    Ok(IndexResult::new(k, Some(m), numeric, exact))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gn_symmetries() {
        let (n, l) = (0.7, 0.3);
        let a = gn(n, 0.4, 0.9, l).unwrap();
        assert_eq!(a, gn(n, 0.9, 0.4, l).unwrap());
        assert_eq!(a, gn(n, -0.4, 0.9, l).unwrap());
    }

    #[test]
    fn gn_pole_is_named() {
        // 1 + (-p-q+l)/(2(n+1)) = 0
        match gn(0.0, 1.0, 1.0, 0.0) {
            Err(Error::Pole { what, .. }) => assert!(what.contains("-p-q+l")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn first_moment_is_half_the_index() {
        for k in [1.0, 2.0, 3.0] {
            let i1 = itilde_exact(1, k).unwrap();
            assert!((i1 - k / (2.0 * (k + 2.0))).abs() < 1e-14);
        }
    }

    #[test]
    fn zero_level() {
        assert_eq!(cfiv(0.0, IndexMethod::Quadrature).unwrap().numeric, 0.0);
        assert_eq!(itilde_exact(2, 0.0).unwrap(), 0.0);
        assert!(cfiv(-1.0, IndexMethod::Quadrature).is_err());
    }
}
