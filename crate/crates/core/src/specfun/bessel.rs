//! Modified Bessel function K_nu(z) for real order 0 < nu < 1.
//!
//! Three regimes:
//! * the I-series `K = pi/(2 sin nu pi) (I_{-nu} - I_nu)`, summed in
//!   double-double, near the origin and in the left half plane;
//! * Steed's continued fraction (Temme's CF2) in the right half plane, where
//!   the I-series difference cancels like `e^{2|z|}`;
//! * the large-argument expansion for `|z| >= 18`, truncated at its smallest
//!   term.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{gamma_real, EvalResult, Method, ASYMPTOTIC_CROSSOVER, EPS};
use crate::dd::{ComplexDD, DoubleDouble};
use crate::error::{Error, Result};

/// `sum_m w^m / (m! (mu+1)_m)` in double-double, together with the largest
/// term magnitude seen (for cancellation estimates).
pub(super) fn i_sum(mu: f64, w: Complex64) -> (ComplexDD, f64) {
    let wd = ComplexDD::from_c64(w);
    let mut term = ComplexDD::ONE;
    let mut sum = term;
    let mut peak = 1.0f64;
    let mu = DoubleDouble::from_f64(mu);
    for m in 1..2000 {
        let mf = DoubleDouble::from_f64(m as f64);
        term = (term * wd).div_real(mf * (mf + mu));
        sum += term;
        let t = term.norm_f64();
        peak = peak.max(t);
        if m > 3 && t < 1e-34 * peak.max(sum.norm_f64()) {
            break;
        }
    }
    (sum, peak)
}

/// Whether CF2 is known to converge quickly at `z`.
pub(super) fn cf2_ok(z: Complex64) -> bool {
    let r = z.norm();
    let a = z.arg().abs();
    (r >= 2.0 && a <= PI / 2.0) || (r >= 5.0 && a <= 2.0) || (r >= 10.0 && a <= 2.36)
}

/// Steed's algorithm for `(K_mu(z), K_{mu+1}(z))`, `|mu| <= 1/2`.
pub(super) fn cf2(mu: f64, z: Complex64) -> Option<(Complex64, Complex64)> {
    let one = Complex64::new(1.0, 0.0);
    let mut b = 2.0 * (one + z);
    let mut d = one / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = Complex64::new(0.0, 0.0);
    let mut q2 = one;
    let a1 = 0.25 - mu * mu;
    let mut q = Complex64::new(a1, 0.0);
    let mut c = Complex64::new(a1, 0.0);
    let mut a = -a1;
    let mut s = one + q * delh;
    let mut converged = false;
    for i in 2..5000 {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = one / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).norm() < EPS {
            converged = true;
            break;
        }
    }
    if !converged || !s.is_finite() {
        return None;
    }
    let h = a1 * h;
    let k_mu = (PI / (2.0 * z)).sqrt() * (-z).exp() / s;
    let k_mu1 = k_mu * (mu + z + 0.5 - h) / z;
    Some((k_mu, k_mu1))
}

/// Large-argument expansion of `K_mu(z)` with `z = exp(lz)`; the log form lets
/// callers continue past the negative real axis (valid for `|arg z| < 3pi/2`).
pub(super) fn asymptotic_log(mu: f64, lz: Complex64) -> (Complex64, f64) {
    let z = lz.exp();
    let inv = 1.0 / z;
    let m4 = 4.0 * mu * mu;
    let mut t = Complex64::new(1.0, 0.0);
    let mut s = t;
    let mut last = f64::INFINITY;
    let mut dropped = 0.0;
    for k in 1..400 {
        let kf = k as f64;
        let next = t * (m4 - (2.0 * kf - 1.0).powi(2)) / (8.0 * kf) * inv;
        let m = next.norm();
        if m >= last || m < EPS * 1e-3 * s.norm() {
            dropped = m;
            break;
        }
        last = m;
        t = next;
        s += t;
    }
    let pre = (PI / 2.0).sqrt() * (-0.5 * lz - z).exp();
    let value = pre * s;
    (value, pre.norm() * dropped + 4.0 * EPS * value.norm())
}

fn check(nu: f64, z: Complex64) -> Result<()> {
    if !(nu > 0.0 && nu < 1.0) {
        return Err(Error::Domain(format!("bessel_k order {nu} outside (0, 1)")));
    }
    if z.norm() == 0.0 {
        return Err(Error::Pole {
            what: "bessel_k".into(),
            at: "0".into(),
        });
    }
    if z.im == 0.0 && z.re < 0.0 {
        return Err(Error::Branch {
            function: "bessel_k",
            arg: format!("{z}"),
        });
    }
    if !z.is_finite() {
        return Err(Error::Domain(format!("bessel_k of non-finite argument {z}")));
    }
    Ok(())
}

/// `(K_nu, K_{1-nu})` from the I-series.
fn by_series(nu: f64, z: Complex64) -> Result<(EvalResult, EvalResult)> {
    let w = z * z / 4.0;
    let half = z / 2.0;
    let lh = half.ln();
    let sin = (nu * PI).sin();
    let pre = PI / (2.0 * sin);
    let i_of = |mu: f64| -> Result<(Complex64, f64)> {
        let (s, peak) = i_sum(mu, w);
        let g = gamma_real(mu + 1.0)?;
        let p = (mu * lh).exp() / g;
        Ok((p * s.to_c64(), p.norm() * (s.norm_f64() + peak * 1e-31)))
    };
    let (im_nu, mim_nu) = i_of(-nu)?;
    let (ip_nu, mip_nu) = i_of(nu)?;
    let (im_1, mim_1) = i_of(nu - 1.0)?;
    let (ip_1, mip_1) = i_of(1.0 - nu)?;
    let k0 = pre * (im_nu - ip_nu);
    let k1 = pre * (im_1 - ip_1);
    let e0 = pre * 4.0 * EPS * (mim_nu + mip_nu) + 2.0 * EPS * k0.norm();
    let e1 = pre * 4.0 * EPS * (mim_1 + mip_1) + 2.0 * EPS * k1.norm();
    Ok((
        EvalResult::new(k0, e0, Method::CompensatedSeries),
        EvalResult::new(k1, e1, Method::CompensatedSeries),
    ))
}

/// `(K_nu, K_{1-nu})` from CF2, if it converges.
pub(super) fn by_cf2(nu: f64, z: Complex64) -> Option<(Complex64, Complex64)> {
    if nu <= 0.5 {
        let (k_nu, k_nu1) = cf2(nu, z)?;
        Some((k_nu, k_nu1 - 2.0 * nu / z * k_nu))
    } else {
        let (k_m, k_nu) = cf2(nu - 1.0, z)?;
        Some((k_nu, k_m))
    }
}

/// `(K_nu(z), K_{1-nu}(z))` for `0 < nu < 1`, principal branch.
pub fn bessel_k_pair(nu: f64, z: Complex64) -> Result<(EvalResult, EvalResult)> {
    check(nu, z)?;
    let r = z.norm();
    if r >= ASYMPTOTIC_CROSSOVER {
        let lz = z.ln();
        let (a, ea) = asymptotic_log(nu, lz);
        let (b, eb) = asymptotic_log(1.0 - nu, lz);
        return Ok((
            EvalResult::new(a, ea, Method::Asymptotic),
            EvalResult::new(b, eb, Method::Asymptotic),
        ));
    }
    if r > 2.0 && cf2_ok(z) {
        if let Some((a, b)) = by_cf2(nu, z) {
            let tol = EPS * (16.0 + r);
            return Ok((
                EvalResult::new(a, tol * a.norm(), Method::ContinuedFraction),
                EvalResult::new(b, tol * b.norm(), Method::ContinuedFraction),
            ));
        }
    }
    by_series(nu, z)
}

/// `K_nu(z)` for `0 < nu < 1`, principal branch `|arg z| < pi`.
pub fn bessel_k(nu: f64, z: Complex64) -> Result<EvalResult> {
    bessel_k_pair(nu, z).map(|p| p.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_order_is_elementary() {
        for z in [
            Complex64::new(0.3, 0.1),
            Complex64::new(3.0, -2.0),
            Complex64::new(-4.0, 6.0),
            Complex64::new(25.0, 3.0),
        ] {
            let k = bessel_k(0.5, z).unwrap().value;
            let exact = (PI / (2.0 * z)).sqrt() * (-z).exp();
            assert!((k - exact).norm() < 1e-13 * exact.norm(), "{z}");
        }
    }

    #[test]
    fn quarter_at_one() {
        let k = bessel_k(0.25, Complex64::new(1.0, 0.0)).unwrap();
        assert!((k.value.re - 0.4307397744485855).abs() < 1e-14);
        assert_eq!(k.method, Method::CompensatedSeries);
    }

    #[test]
    fn regimes_agree_where_they_overlap() {
        for nu in [0.2, 1.0 / 3.0, 0.7] {
            for th in [-1.2, -0.4, 0.0, 0.9, 1.5] {
                for r in [3.0, 8.0, 16.0] {
                    let z = Complex64::from_polar(r, th);
                    let (s, s1) = by_series(nu, z).unwrap();
                    let (c, c1) = by_cf2(nu, z).unwrap();
                    assert!((s.value - c).norm() < 1e-9 * c.norm() + 2.0 * s.abs_error_estimate);
                    assert!((s1.value - c1).norm() < 1e-9 * c1.norm() + 2.0 * s1.abs_error_estimate);
                }
                let z = Complex64::from_polar(19.0, th);
                let (c, _) = by_cf2(nu, z).unwrap();
                let (a, _) = asymptotic_log(nu, z.ln());
                assert!((a - c).norm() < 1e-12 * c.norm());
            }
        }
    }

    #[test]
    fn errors() {
        assert!(matches!(bessel_k(0.3, Complex64::new(-1.0, 0.0)), Err(Error::Branch { .. })));
        assert!(bessel_k(1.0, Complex64::new(1.0, 0.0)).is_err());
        assert!(bessel_k(0.3, Complex64::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn leading_asymptotics() {
        let z = Complex64::new(200.0, 0.0);
        let k = bessel_k(0.4, z).unwrap().value;
        let lead = (PI / (2.0 * z)).sqrt() * (-z).exp();
        assert!(((k / lead).re - 1.0).abs() < 1.0 / 200.0);
    }
}
