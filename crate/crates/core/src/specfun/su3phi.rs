//! Decaying solution of `phi''' + u phi = 0` used by the SU(3) closed forms.
//!
//! `phi` is a combination of three `0F2` series in `(rho u)^4/64`,
//! `rho = e^{i pi/4}`, normalized so that
//! `phi(x) ~ (1/i) x^{-1/3} e^{-(3/4) x^{4/3}} / sqrt(3)` on the positive axis.
//! The coefficients are known in closed form; an independent inward ODE
//! integration plus least-squares collocation reproduces them.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{EvalResult, Method, EPS};
use crate::dd::{ComplexDD, DoubleDouble};
use crate::error::{Error, Result};

/// Gamma(1/4) / (2 sqrt(2 pi)).
const A1: DoubleDouble = DoubleDouble::new(0.7232045423160386, -1.869850308625656e-17);
/// Gamma(3/4) / (2 sqrt(2 pi)).
const A3: DoubleDouble = DoubleDouble::new(0.24443526686173095, 6.570090081682073e-19);
const RSQRT2: DoubleDouble = DoubleDouble::new(0.7071067811865476, -4.833646656726457e-17);

/// Beyond this `|u|` the asymptotic expansion is used inside its sector.
pub const PHI_CROSSOVER: f64 = 11.0;
/// Half-opening of the sector where the asymptotic expansion is trusted.
const PHI_SECTOR: f64 = 3.0 * PI / 4.0 - 0.15;
/// Largest `|u|` evaluated by the power series.
pub const PHI_SERIES_BOUND: f64 = 40.0;

const N_TERMS: usize = 220;

/// JSON form: `{alpha: [[re, im]; 3], residual}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Su3PhiCache {
    pub alpha: [[f64; 2]; 3],
    pub residual: f64,
}

#[derive(Clone, Debug)]
pub struct Su3Phi {
    /// Coefficients of `(rho u)^{j} 0F2(...|(rho u)^4/64)`, j = 0, 1, 2.
    pub alpha: [Complex64; 3],
    /// `rho = e^{i pi/4}`.
    pub rotation: Complex64,
    /// Relative residual of the collocation fit that cross-checked `alpha`.
    pub residual: f64,
    /// Coefficient of `u^j R_j(-u^4/64)` (alpha_j rho^j), in double-double.
    kappa: [ComplexDD; 3],
    /// `d[j][m]`: series coefficient of `u^{4m+j}` in `R_j`.
    d: [Vec<DoubleDouble>; 3],
    /// Whether `kappa` is the analytic set (asymptotic branch is then valid).
    analytic: bool,
}

fn rotation() -> Complex64 {
    Complex64::from_polar(1.0, PI / 4.0)
}

fn series_coefficients() -> [Vec<DoubleDouble>; 3] {
    let mut out: [Vec<DoubleDouble>; 3] = Default::default();
    for (j, v) in out.iter_mut().enumerate() {
        let mut c = DoubleDouble::ONE;
        v.push(c);
        for m in 0..N_TERMS {
            let n = (4 * m + j) as f64;
            c = -(c.div_f64((n + 4.0) * (n + 3.0)).div_f64(n + 2.0));
            v.push(c);
        }
    }
    out
}

fn analytic_kappa() -> [ComplexDD; 3] {
    [
        ComplexDD::new(DoubleDouble::ZERO, -A1),
        ComplexDD::new(DoubleDouble::ZERO, RSQRT2),
        ComplexDD::new(DoubleDouble::ZERO, -A3),
    ]
}

fn alpha_of_kappa(kappa: &[Complex64; 3]) -> [Complex64; 3] {
    let r = rotation();
    [kappa[0], kappa[1] / r, kappa[2] / (r * r)]
}

fn kappa_of_alpha(alpha: &[Complex64; 3]) -> [Complex64; 3] {
    let r = rotation();
    [alpha[0], alpha[1] * r, alpha[2] * r * r]
}

/// Asymptotic coefficients `a_n` of `x^{-1/3 - 4n/3}`.
fn asymptotic_coefficients() -> Vec<f64> {
    let p = |n: i64| -1.0 / 3.0 - 4.0 * n as f64 / 3.0;
    let mut a = vec![1.0f64];
    for n in 1..60i64 {
        let q = p(n - 1);
        let r = p(n - 2);
        let am2 = if n >= 2 { a[(n - 2) as usize] } else { 0.0 };
        let v = ((-3.0 * q * q + 2.0 * q + 2.0 / 9.0) * a[(n - 1) as usize]
            + (r * r * r - 3.0 * r * r + 2.0 * r) * am2)
            / (4.0 * n as f64);
        a.push(v);
    }
    a
}

/// `(phi, phi', phi'', phi''')` from the asymptotic expansion with
/// prefactor `norm`, plus an absolute error estimate for each.
fn asymptotic(u: Complex64, norm: Complex64) -> ([Complex64; 4], [f64; 4]) {
    let a = asymptotic_coefficients();
    let lu = u.ln();
    let pw = |p: f64| (p * lu).exp();
    let s = 0.75 * pw(4.0 / 3.0);
    let pre = norm * (-s).exp();
    let mut acc = [Complex64::new(0.0, 0.0); 4];
    // The coefficients are not monotone at first, so locate the smallest term
    // over the whole table rather than stopping at the first increase.
    let sizes: Vec<f64> = a
        .iter()
        .enumerate()
        .map(|(n, an)| an.abs() * u.norm().powf(-1.0 / 3.0 - 4.0 * n as f64 / 3.0))
        .collect();
    let (cut, dropped) = sizes
        .iter()
        .copied()
        .enumerate()
        .skip(1)
        .fold((1, f64::INFINITY), |best, (i, m)| if m < best.1 { (i, m) } else { best });
    for (n, &an) in a.iter().enumerate().take(cut) {
        let p = -1.0 / 3.0 - 4.0 * n as f64 / 3.0;
        let t = an * pw(p);
        let d1 = an * (p * pw(p - 1.0) - pw(p + 1.0 / 3.0));
        let d2 = an * (p * (p - 1.0) * pw(p - 2.0) - (2.0 * p + 1.0 / 3.0) * pw(p - 2.0 / 3.0) + pw(p + 2.0 / 3.0));
        let d3 = an
            * (-pw(p + 1.0)
                + (3.0 * p + 1.0) * pw(p - 1.0 / 3.0)
                + (-3.0 * p * p + 2.0 * p + 2.0 / 9.0) * pw(p - 5.0 / 3.0)
                + (p * p * p - 3.0 * p * p + 2.0 * p) * pw(p - 3.0));
        acc[0] += t;
        acc[1] += d1;
        acc[2] += d2;
        acc[3] += d3;
    }
    let r = u.norm();
    let mut err = [0.0; 4];
    for (i, (v, e)) in acc.iter_mut().zip(err.iter_mut()).enumerate() {
        *v *= pre;
        *e = pre.norm() * dropped * r.powf(i as f64 / 3.0) + 8.0 * EPS * (1.0 + r) * v.norm();
    }
    (acc, err)
}

impl Su3Phi {
    /// The closed-form coefficients, without running the oracle.
    pub fn analytic() -> Self {
        let kappa = analytic_kappa();
        let k64 = [kappa[0].to_c64(), kappa[1].to_c64(), kappa[2].to_c64()];
        Self {
            alpha: alpha_of_kappa(&k64),
            rotation: rotation(),
            residual: 0.0,
            kappa,
            d: series_coefficients(),
            analytic: true,
        }
    }

    /// Rebuilds from cached coefficients. If they agree with the closed form
    /// to 1e-9 the double-double closed form is used.
    pub fn from_cache(cache: &Su3PhiCache) -> Self {
        let alpha = cache.alpha.map(|[re, im]| Complex64::new(re, im));
        let mut phi = Self::analytic();
        let close = alpha
            .iter()
            .zip(phi.alpha.iter())
            .all(|(a, b)| (a - b).norm() <= 1e-9 * b.norm());
        phi.residual = cache.residual;
        if !close {
            let k = kappa_of_alpha(&alpha);
            phi.kappa = k.map(ComplexDD::from_c64);
            phi.alpha = alpha;
            phi.analytic = false;
        }
        phi
    }

    pub fn to_cache(&self) -> Su3PhiCache {
        Su3PhiCache {
            alpha: self.alpha.map(|a| [a.re, a.im]),
            residual: self.residual,
        }
    }

    fn series(&self, u: Complex64) -> ([Complex64; 4], [f64; 4]) {
        let x = ComplexDD::from_c64(u);
        let mut pw = [ComplexDD::ONE; 7];
        for i in 1..7 {
            pw[i] = pw[i - 1] * x;
        }
        let x4 = pw[4];
        let mut out = [ComplexDD::ZERO; 4];
        let mut peak = 0.0f64;
        for j in 0..3 {
            let mut s = [ComplexDD::ZERO; 4];
            // X^{m} and X^{m-1}, X = u^4.
            let mut xm = ComplexDD::ONE;
            let mut xprev = ComplexDD::ZERO;
            let mut jpeak = 0.0f64;
            for (m, &dm) in self.d[j].iter().enumerate() {
                let n = 4 * m + j;
                // u^{n-i} = X^m u^{j-i} when j >= i, else X^{m-1} u^{4+j-i}.
                let pow_less = |i: usize| -> ComplexDD {
                    if j >= i {
                        xm * pw[j - i]
                    } else {
                        xprev * pw[4 + j - i]
                    }
                };
                let t0 = pow_less(0).mul_real(dm);
                s[0] += t0;
                if n >= 1 {
                    s[1] += pow_less(1).mul_real(dm.mul_f64(n as f64));
                }
                if n >= 2 {
                    s[2] += pow_less(2).mul_real(dm.mul_f64((n * (n - 1)) as f64));
                }
                if n >= 3 {
                    s[3] += pow_less(3).mul_real(dm.mul_f64((n * (n - 1) * (n - 2)) as f64));
                }
                let tn = t0.norm_f64() * (1.0 + (n as f64).powi(3) / u.norm().max(1e-300).powi(3));
                jpeak = jpeak.max(tn);
                if m > 2 && t0.norm_f64() < 1e-34 * jpeak && (n as f64) > u.norm().powf(4.0 / 3.0) {
                    break;
                }
                xprev = xm;
                xm = xm * x4;
            }
            for i in 0..4 {
                out[i] += s[i] * self.kappa[j];
            }
            peak = peak.max(jpeak * self.kappa[j].norm_f64());
        }
        let vals = out.map(|v| v.to_c64());
        let mut err = [0.0; 4];
        for i in 0..4 {
            err[i] = 1e-31 * peak * (1.0 + u.norm()).powi(i as i32) + 2.0 * EPS * vals[i].norm();
        }
        (vals, err)
    }

    /// `(phi, phi', phi'', phi''')` at `u` with error estimates and method.
    pub fn eval_all(&self, u: Complex64) -> Result<([Complex64; 4], [f64; 4], Method)> {
        if !u.is_finite() {
            return Err(Error::Domain(format!("su3 phi at non-finite {u}")));
        }
        let r = u.norm();
        if r > PHI_CROSSOVER && self.analytic && u.arg().abs() < PHI_SECTOR {
            let norm = Complex64::new(0.0, -1.0 / 3f64.sqrt());
            let (v, e) = asymptotic(u, norm);
            return Ok((v, e, Method::Asymptotic));
        }
        if r > PHI_SERIES_BOUND {
            return Err(Error::Overflow {
                what: "u",
                magnitude: r,
                bound: PHI_SERIES_BOUND,
            });
        }
        let (v, e) = self.series(u);
        Ok((v, e, Method::CompensatedSeries))
    }

    /// `(phi, phi', phi'')` at `u`.
    pub fn eval3(&self, u: Complex64) -> Result<[Complex64; 3]> {
        let (v, _, _) = self.eval_all(u)?;
        Ok([v[0], v[1], v[2]])
    }

    /// `|phi''' + u phi| / max(|u phi|, |phi|)` at `u`.
    pub fn ode_residual(&self, u: Complex64) -> Result<f64> {
        let (v, _, _) = self.eval_all(u)?;
        let scale = (u * v[0]).norm().max(v[0].norm()).max(1e-300);
        Ok((v[3] + u * v[0]).norm() / scale)
    }
}

/// `phi(u)`, `phi'(u)` or `phi''(u)`.
pub fn su3_phi_eval(phi: &Su3Phi, u: Complex64, deriv: u8) -> Result<EvalResult> {
    if deriv > 2 {
        return Err(Error::Invalid(format!("derivative order {deriv} not in 0..=2")));
    }
    let (v, e, m) = phi.eval_all(u)?;
    let i = deriv as usize;
    Ok(EvalResult::new(v[i], e[i], m))
}

fn rk4_step(x: f64, y: [f64; 3], h: f64) -> [f64; 3] {
    let f = |x: f64, y: [f64; 3]| [y[1], y[2], -x * y[0]];
    let add = |y: [f64; 3], k: [f64; 3], s: f64| [y[0] + s * k[0], y[1] + s * k[1], y[2] + s * k[2]];
    let k1 = f(x, y);
    let k2 = f(x + h / 2.0, add(y, k1, h / 2.0));
    let k3 = f(x + h / 2.0, add(y, k2, h / 2.0));
    let k4 = f(x + h, add(y, k3, h));
    [
        y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        y[2] + h / 6.0 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]),
    ]
}

/// Real basis function `u^j R_j(-u^4/64)` in plain f64 (small |u| only).
fn basis(d: &[Vec<DoubleDouble>; 3], j: usize, x: f64) -> f64 {
    let x4 = x.powi(4);
    let mut s = 0.0;
    let mut p = x.powi(j as i32);
    for c in &d[j] {
        let t = c.to_f64() * p;
        s += t;
        if t.abs() < 1e-20 * s.abs().max(1e-300) {
            break;
        }
        p *= x4;
    }
    s
}

/// Independent determination of `alpha`: integrate the ODE inward from
/// `x0 = 10` (seeded with the asymptotic expansion), then fit the three
/// series basis functions on `[0, 2]` by least squares.
/// Returns `(alpha, relative fit residual)`.
pub fn su3_phi_oracle_alpha() -> ([Complex64; 3], f64) {
    let x0 = 10.0;
    let (seed, _) = asymptotic(Complex64::new(x0, 0.0), Complex64::new(1.0 / 3f64.sqrt(), 0.0));
    let mut y = [seed[0].re, seed[1].re, seed[2].re];
    let steps = 20_000;
    let h = -x0 / steps as f64;
    let sample_every = steps / 100;
    let mut samples = Vec::new();
    let mut x = x0;
    for i in 0..steps {
        y = rk4_step(x, y, h);
        x = x0 + (i + 1) as f64 * h;
        if (i + 1) % sample_every == 0 && x <= 2.0 + 1e-12 {
            samples.push((x.max(0.0), y[0]));
        }
    }
    let d = series_coefficients();
    let mut ata = [[0.0f64; 3]; 3];
    let mut atb = [0.0f64; 3];
    for &(x, v) in &samples {
        let b = [basis(&d, 0, x), basis(&d, 1, x), basis(&d, 2, x)];
        for r in 0..3 {
            atb[r] += b[r] * v;
            for c in 0..3 {
                ata[r][c] += b[r] * b[c];
            }
        }
    }
    let k = solve3(ata, atb);
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for &(x, v) in &samples {
        let fit = k[0] * basis(&d, 0, x) + k[1] * basis(&d, 1, x) + k[2] * basis(&d, 2, x);
        worst = worst.max((fit - v).abs());
        scale = scale.max(v.abs());
    }
    // phi = -i * (real solution)
    let kappa = k.map(|c| Complex64::new(0.0, -c));
    (alpha_of_kappa(&kappa), worst / scale)
}

fn solve3(a: [[f64; 3]; 3], b: [f64; 3]) -> [f64; 3] {
    let det = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(a);
    let mut x = [0.0; 3];
    for (c, xc) in x.iter_mut().enumerate() {
        let mut m = a;
        for r in 0..3 {
            m[r][c] = b[r];
        }
        *xc = det(m) / d;
    }
    x
}

/// Builds `phi`: closed-form coefficients, cross-checked against the
/// inward-integration oracle.
pub fn su3_phi_build() -> Result<Su3Phi> {
    let mut phi = Su3Phi::analytic();
    let (oracle, residual) = su3_phi_oracle_alpha();
    if !(residual < 1e-8) {
        return Err(Error::Collocation(residual));
    }
    let worst = phi
        .alpha
        .iter()
        .zip(oracle.iter())
        .map(|(a, b)| (a - b).norm() / a.norm())
        .fold(0.0f64, f64::max);
    if !(worst < 1e-8) {
        return Err(Error::Collocation(worst));
    }
    phi.residual = residual;
    Ok(phi)
}
