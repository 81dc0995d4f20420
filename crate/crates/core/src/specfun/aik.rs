//! Generalized Airy function
//! `Ai^(k)(E) = (1/pi) sqrt(E/(k+2)) K_{1/(k+2)}(2/(k+2) E^{(k+2)/2})`.
//!
//! The log-argument entry point lets callers rotate `E` past the point where
//! the Bessel argument reaches the negative real axis: the small-|z| branch
//! is a power series in `E^{k+2}` (no cut), and the large-|z| expansion holds
//! up to `|arg z| < 3pi/2`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::bessel::{asymptotic_log, by_cf2, cf2_ok, i_sum};
use super::{gamma_real, EvalResult, Method, ASYMPTOTIC_CROSSOVER, EPS};
use crate::error::{Error, Result};

/// Largest accepted `|arg z|` of the Bessel argument.
const ARG_LIMIT: f64 = PI + 0.5;

fn series(k: f64, le: Complex64) -> Result<(EvalResult, EvalResult)> {
    let kk = k + 2.0;
    let nu = 1.0 / kk;
    let w = (kk * le).exp() / (kk * kk);
    let e = le.exp();
    let ek1 = ((k + 1.0) * le).exp();
    let c = 1.0 / (2.0 * (nu * PI).sin() * kk.sqrt());
    let term = |mu: f64, g: f64| -> Result<(Complex64, f64)> {
        let (s, peak) = i_sum(mu, w);
        let g = gamma_real(g)?;
        Ok((s.to_c64() / g, (s.norm_f64() + 1e-31 * peak) / g.abs()))
    };
    let (sm, msm) = term(-nu, 1.0 - nu)?;
    let (sp, msp) = term(nu, 1.0 + nu)?;
    let (tm, mtm) = term(nu - 1.0, nu)?;
    let (tp, mtp) = term(1.0 - nu, 2.0 - nu)?;
    let a0 = kk.powf(nu) * sm;
    let a1 = e * kk.powf(-nu) * sp;
    let ai = c * (a0 - a1);
    let ea = c * 4.0 * EPS * (kk.powf(nu) * msm + e.norm() * kk.powf(-nu) * msp) + 2.0 * EPS * ai.norm();
    let d0 = kk.powf(1.0 - nu) * tm;
    let d1 = ek1 * kk.powf(nu - 1.0) * tp;
    let aip = -c * (d0 - d1);
    let ep = c * 4.0 * EPS * (kk.powf(1.0 - nu) * mtm + ek1.norm() * kk.powf(nu - 1.0) * mtp)
        + 2.0 * EPS * aip.norm();
    Ok((
        EvalResult::new(ai, ea, Method::CompensatedSeries),
        EvalResult::new(aip, ep, Method::CompensatedSeries),
    ))
}

/// `(Ai^(k)(E), Ai^(k)'(E))` with `E = exp(le)`; `le` need not be principal.
pub fn aik_pair_log(k: f64, le: Complex64) -> Result<(EvalResult, EvalResult)> {
    if !(k >= 0.0 && k.is_finite()) {
        return Err(Error::Domain(format!("aik requires finite k >= 0, got {k}")));
    }
    if !le.is_finite() {
        return Err(Error::Domain(format!("aik: log E = {le} is not finite")));
    }
    let kk = k + 2.0;
    let nu = 1.0 / kk;
    let lz = Complex64::new((2.0 / kk).ln(), 0.0) + 0.5 * kk * le;
    if lz.im.abs() > ARG_LIMIT {
        return Err(Error::Branch {
            function: "aik",
            arg: format!("arg z = {}", lz.im),
        });
    }
    let r = lz.re.exp();
    let p0 = (0.5 * le).exp() / (PI * kk.sqrt());
    let p1 = -(0.5 * (k + 1.0) * le).exp() / (PI * kk.sqrt());
    if r >= ASYMPTOTIC_CROSSOVER {
        let (a, ea) = asymptotic_log(nu, lz);
        let (b, eb) = asymptotic_log(1.0 - nu, lz);
        return Ok((
            EvalResult::new(p0 * a, p0.norm() * ea, Method::Asymptotic),
            EvalResult::new(p1 * b, p1.norm() * eb, Method::Asymptotic),
        ));
    }
    if r > 2.0 && lz.im.abs() < PI {
        let z = lz.exp();
        if cf2_ok(z) {
            if let Some((a, b)) = by_cf2(nu, z) {
                let tol = EPS * (16.0 + r);
                let (a, b) = (p0 * a, p1 * b);
                return Ok((
                    EvalResult::new(a, tol * a.norm(), Method::ContinuedFraction),
                    EvalResult::new(b, tol * b.norm(), Method::ContinuedFraction),
                ));
            }
        }
    }
    series(k, le)
}

fn pair(k: f64, e: Complex64) -> Result<(EvalResult, EvalResult)> {
    if e.norm() == 0.0 {
        if !(k >= 0.0 && k.is_finite()) {
            return Err(Error::Domain(format!("aik requires finite k >= 0, got {k}")));
        }
        // Only the leading series terms survive at the origin.
        let kk = k + 2.0;
        let nu = 1.0 / kk;
        let c = 1.0 / (2.0 * (nu * PI).sin() * kk.sqrt());
        let a = c * kk.powf(nu) / gamma_real(1.0 - nu)?;
        let d = -c * kk.powf(1.0 - nu) / gamma_real(nu)?;
        return Ok((
            EvalResult::new(Complex64::new(a, 0.0), 2.0 * EPS * a.abs(), Method::Series),
            EvalResult::new(Complex64::new(d, 0.0), 2.0 * EPS * d.abs(), Method::Series),
        ));
    }
    aik_pair_log(k, e.ln())
}

/// `(Ai^(k)(E), Ai^(k)'(E))` for integer `k` and any `E`.
///
/// For integer `k` the function is entire. Arguments outside the sector
/// accepted by [`aik_pair_log`] are rotated back with the connection relation
/// `w^{-1/2} y(w x) + w^{1/2} y(x/w) = 2 cos(pi/(k+2)) y(x)`, `w = e^{2 pi i/(k+2)}`,
/// and its derivative `w^{1/2} y'(w x) + w^{-1/2} y'(x/w) = 2 cos(pi/(k+2)) y'(x)`.
pub fn aik_pair_entire(k: f64, e: Complex64) -> Result<(EvalResult, EvalResult)> {
    if !(k >= 0.0 && k.fract() == 0.0 && k <= 64.0) {
        return Err(Error::Domain(format!("aik_pair_entire needs integer k in 0..=64, got {k}")));
    }
    if e.norm() == 0.0 {
        return pair(k, e);
    }
    let kk = k + 2.0;
    let limit = 2.0 * ARG_LIMIT / kk - 1e-9;
    let step = 2.0 * PI / kk;
    let c = 2.0 * (PI / kk).cos();
    fn go(k: f64, le: Complex64, limit: f64, step: f64, c: f64) -> Result<(Complex64, Complex64, f64, f64)> {
        if le.im.abs() <= limit {
            let (a, b) = aik_pair_log(k, le)?;
            return Ok((a.value, b.value, a.abs_error_estimate, b.abs_error_estimate));
        }
        // rotate towards the positive axis by one or two steps
        let s = le.im.signum();
        let wh = Complex64::from_polar(1.0, s * step / 2.0);
        let rot = Complex64::new(0.0, s * step);
        let (y1, d1, e1, f1) = go(k, le - rot, limit, step, c)?;
        let (y2, d2, e2, f2) = go(k, le - 2.0 * rot, limit, step, c)?;
        let y = wh * (c * y1 - wh * y2);
        let d = (c * d1 - d2 / wh) / wh;
        Ok((y, d, c * e1 + e2, c * f1 + f2))
    }
    let (y, d, ey, ed) = go(k, e.ln(), limit, step, c)?;
    let scale = |v: Complex64, err: f64| err + 4.0 * EPS * v.norm();
    Ok((
        EvalResult::new(y, scale(y, ey), Method::Series),
        EvalResult::new(d, scale(d, ed), Method::Series),
    ))
}

pub fn aik(k: f64, e: Complex64) -> Result<EvalResult> {
    pair(k, e).map(|p| p.0)
}

pub fn aik_prime(k: f64, e: Complex64) -> Result<EvalResult> {
    pair(k, e).map(|p| p.1)
}

#[cfg(test)]
mod tests {
    use super::super::airy_pair;
    use super::*;

    #[test]
    fn reduces_to_airy_at_k1() {
        for x in [0.5, 1.0, 2.0, 5.0] {
            let e = Complex64::new(x, 0.0);
            let (a, d) = airy_pair(e);
            assert!((aik(1.0, e).unwrap().value - a.value).norm() < 1e-10 * a.value.norm());
            assert!((aik_prime(1.0, e).unwrap().value - d.value).norm() < 1e-10 * d.value.norm());
        }
        let z = Complex64::new(0.7, 1.9);
        assert!((aik(1.0, z).unwrap().value - airy_pair(z).0.value).norm() < 1e-13);
    }

    #[test]
    fn origin_matches_limit() {
        let a0 = aik(2.0, Complex64::new(0.0, 0.0)).unwrap().value;
        let a1 = aik(2.0, Complex64::new(1e-9, 0.0)).unwrap().value;
        assert!((a0 - a1).norm() < 1e-8);
    }

    #[test]
    fn regimes_agree() {
        for k in [0.0, 1.0, 2.5, 4.0] {
            for th in [-0.5, 0.0, 0.3] {
                let le = Complex64::new(1.1f64.ln(), th);
                let (s, sp) = series(k, le).unwrap();
                let (a, ap) = aik_pair_log(k, le).unwrap();
                assert!((s.value - a.value).norm() < 1e-11 * a.value.norm());
                assert!((sp.value - ap.value).norm() < 1e-11 * ap.value.norm());
            }
        }
    }

    #[test]
    fn continues_across_the_cut() {
        // arg z crosses pi: values from both sides approach each other.
        let k = 1.0;
        let lo = aik_pair_log(k, Complex64::new(0.4, 2.0 * PI / 3.0 - 1e-9)).unwrap().0.value;
        let hi = aik_pair_log(k, Complex64::new(0.4, 2.0 * PI / 3.0 + 1e-9)).unwrap().0.value;
        assert!((lo - hi).norm() < 1e-7);
    }
}
