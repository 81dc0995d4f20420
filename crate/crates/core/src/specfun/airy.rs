//! Airy function Ai and its derivative for complex argument.
//!
//! `|zeta| < 18` (`zeta = 2/3 z^{3/2}`): Maclaurin series accumulated in
//! double-double, which absorbs the `e^{2|zeta|}` cancellation on the positive
//! axis. Beyond that, the superasymptotic expansion for `|arg z| <= 2pi/3`
//! and the three-term connection formula elsewhere.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{EvalResult, Method, ASYMPTOTIC_CROSSOVER, EPS};
use crate::dd::{ComplexDD, DoubleDouble};

/// Ai(0) = 3^{-2/3}/Gamma(2/3).
const AI0: DoubleDouble = DoubleDouble::new(0.3550280538878172, 2.05233632436212e-17);
/// -Ai'(0) = 3^{-1/3}/Gamma(1/3).
const AIP0: DoubleDouble = DoubleDouble::new(0.2588194037928068, -2.522243111610832e-17);

fn zeta_of(z: Complex64) -> Complex64 {
    2.0 / 3.0 * z.powf(1.5)
}

fn maclaurin(z: Complex64) -> (EvalResult, EvalResult) {
    let zd = ComplexDD::from_c64(z);
    let z3 = zd * zd * zd;
    let mut t = ComplexDD::ONE;
    let mut u = zd;
    let mut s = (zd * zd).unscale(2.0);
    let mut v = ComplexDD::ONE;
    let (mut f, mut g, mut fp, mut gp) = (t, u, s, v);
    let mut peak = 1f64.max(z.norm());
    for k in 0..400 {
        let kf = k as f64;
        t = (t * z3).unscale((3.0 * kf + 2.0) * (3.0 * kf + 3.0));
        u = (u * z3).unscale((3.0 * kf + 3.0) * (3.0 * kf + 4.0));
        v = (v * z3).unscale((3.0 * kf + 1.0) * (3.0 * kf + 3.0));
        let k1 = kf + 1.0;
        s = (s * z3).unscale((3.0 * k1) * (3.0 * k1 + 2.0));
        f += t;
        g += u;
        fp += s;
        gp += v;
        let m = t.norm_f64().max(u.norm_f64()).max(s.norm_f64()).max(v.norm_f64());
        peak = peak.max(m);
        if k > 2 && m < 1e-34 * peak {
            break;
        }
    }
    let ai = f.mul_real(AI0) - g.mul_real(AIP0);
    let aip = fp.mul_real(AI0) - gp.mul_real(AIP0);
    let (ai, aip) = (ai.to_c64(), aip.to_c64());
    let floor = peak * 1e-31;
    (
        EvalResult::new(ai, floor + 2.0 * EPS * ai.norm(), Method::CompensatedSeries),
        EvalResult::new(aip, floor + 2.0 * EPS * aip.norm(), Method::CompensatedSeries),
    )
}

/// Expansion valid for `|arg z| <= 2pi/3`, truncated at its smallest term.
fn asymptotic(z: Complex64) -> (EvalResult, EvalResult) {
    let zeta = zeta_of(z);
    let inv = -1.0 / zeta;
    let mut u = 1.0f64;
    let mut p = Complex64::new(1.0, 0.0);
    let mut su = p;
    let mut sv = p;
    let mut last = f64::INFINITY;
    let mut dropped = 0.0;
    for k in 1..200 {
        let kf = k as f64;
        u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
        let v = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u;
        p *= inv;
        let tu = p * u;
        let tv = p * v;
        let m = tu.norm().max(tv.norm());
        if m >= last || m < EPS * 1e-3 {
            dropped = m;
            break;
        }
        last = m;
        su += tu;
        sv += tv;
    }
    let z4 = z.powf(0.25);
    let e = (-zeta).exp() / (2.0 * PI.sqrt());
    let ai = e / z4 * su;
    let aip = -e * z4 * sv;
    let ea = (e / z4).norm() * dropped + 4.0 * EPS * ai.norm();
    let ep = (e * z4).norm() * dropped + 4.0 * EPS * aip.norm();
    (
        EvalResult::new(ai, ea, Method::Asymptotic),
        EvalResult::new(aip, ep, Method::Asymptotic),
    )
}

fn large(z: Complex64) -> (EvalResult, EvalResult) {
    if z.im < 0.0 {
        let (a, b) = large(z.conj());
        return (
            EvalResult::new(a.value.conj(), a.abs_error_estimate, a.method),
            EvalResult::new(b.value.conj(), b.abs_error_estimate, b.method),
        );
    }
    if z.arg() <= 2.0 * PI / 3.0 {
        return asymptotic(z);
    }
    let w = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
    let w2 = w * w;
    let (a1, d1) = asymptotic(w * z);
    let (a2, d2) = asymptotic(w2 * z);
    let ai = -w * a1.value - w2 * a2.value;
    let aip = -w2 * d1.value - w * d2.value;
    (
        EvalResult::new(ai, a1.abs_error_estimate + a2.abs_error_estimate, Method::Asymptotic),
        EvalResult::new(aip, d1.abs_error_estimate + d2.abs_error_estimate, Method::Asymptotic),
    )
}

/// `(Ai(z), Ai'(z))` evaluated together.
pub fn airy_pair(z: Complex64) -> (EvalResult, EvalResult) {
    if zeta_of(z).norm() < ASYMPTOTIC_CROSSOVER {
        maclaurin(z)
    } else {
        large(z)
    }
}

pub fn airy_ai(z: Complex64) -> EvalResult {
    airy_pair(z).0
}

pub fn airy_ai_prime(z: Complex64) -> EvalResult {
    airy_pair(z).1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn origin_values() {
        let (a, d) = airy_pair(Complex64::new(0.0, 0.0));
        assert!((a.value.re - AI0.to_f64()).abs() < 1e-17);
        assert!((d.value.re + AIP0.to_f64()).abs() < 1e-17);
        let expected = 3f64.powf(-2.0 / 3.0) / super::super::gamma_real(2.0 / 3.0).unwrap();
        assert!((a.value.re - expected).abs() < 1e-15);
    }

    #[test]
    fn ai_of_one() {
        let a = airy_ai(Complex64::new(1.0, 0.0)).value;
        assert!((a.re - 0.13529241631288141).abs() < 1e-16);
        assert!(a.im.abs() < 1e-30);
    }

    #[test]
    fn series_and_asymptotic_agree_near_crossover() {
        let r = (1.5 * ASYMPTOTIC_CROSSOVER).powf(2.0 / 3.0);
        for i in 0..24 {
            let th = -PI + (i as f64 + 0.5) * PI / 12.0;
            for scale in [0.97, 1.03] {
                let z = Complex64::from_polar(r * scale, th);
                let (a, b) = maclaurin(z);
                let (c, d) = large(z);
                assert!((a.value - c.value).norm() <= 1e-7 * a.value.norm().max(1e-300), "{z}");
                assert!((b.value - d.value).norm() <= 1e-7 * b.value.norm().max(1e-300), "{z}");
            }
        }
    }

    #[test]
    fn wronskian_of_rotated_pair() {
        // W[Ai(z), Ai(w z)] = e^{-i pi/6} / (2 pi) with w = e^{2 pi i/3}.
        let w = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
        let target = Complex64::from_polar(1.0 / (2.0 * PI), -PI / 6.0);
        for z in [Complex64::new(0.3, 0.2), Complex64::new(-4.0, 1.0), Complex64::new(6.0, -2.0)] {
            let (a, ap) = airy_pair(z);
            let (b, bp) = airy_pair(w * z);
            let wr = a.value * w * bp.value - ap.value * b.value;
            assert!((wr - target).norm() < 1e-12, "{z}: {wr}");
        }
    }
}
