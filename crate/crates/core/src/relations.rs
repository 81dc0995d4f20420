//! Numerical checks of the functional identities satisfied by the closed
//! forms: the Airy three-term relation and trivial Stokes multiplier, quantum
//! Wronskians, first-order Y-systems, the SU(3) cancellation constants and
//! the squared-Airy Wronskian.
//!
//! Every check returns an [`IdentityCheck`] holding the largest residual
//! over its sample points. Sample sets are deterministic: random discs are
//! drawn from a ChaCha stream seeded by the caller.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closedform::ClosedFormSolution;
use crate::error::{Error, Result};
use crate::kernel::pool;
use crate::specfun::{aik_pair_entire, airy_pair, Su3Phi};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Default tolerance of identities without complex rapidity shifts.
pub const TOL_DIRECT: f64 = 1e-9;
/// Default tolerance of identities evaluated at `theta +- i pi/3` or `+- i pi/2`.
pub const TOL_SHIFTED: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    pub sample_points: Vec<Complex64>,
    pub max_abs_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl IdentityCheck {
    /// Builds the check from per-point residuals. A non-finite residual fails.
    pub fn from_residuals(name: impl Into<String>, points: Vec<Complex64>, residuals: &[f64], tolerance: f64) -> Self {
        let max_abs_residual = residuals
            .iter()
            .fold(0.0f64, |m, &r| if r.is_nan() || m.is_nan() { f64::NAN } else { m.max(r) });
        Self {
            name: name.into(),
            sample_points: points,
            max_abs_residual,
            tolerance,
            passed: max_abs_residual < tolerance,
        }
    }

    pub fn report(&self, seed: u64) -> IdentityReport {
        IdentityReport {
            name: self.name.clone(),
            tolerance: self.tolerance,
            max_abs_residual: self.max_abs_residual,
            passed: self.passed,
            n_points: self.sample_points.len(),
            seed,
        }
    }
}

impl fmt::Display for IdentityCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: max residual {:.3e} (tol {:.0e}, {} points)",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.max_abs_residual,
            self.tolerance,
            self.sample_points.len()
        )
    }
}

/// One line of the JSON report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub name: String,
    pub tolerance: f64,
    pub max_abs_residual: f64,
    pub passed: bool,
    pub n_points: usize,
    pub seed: u64,
}

/// `n` points uniformly distributed in the disc `|z| <= radius`.
pub fn disc_samples(seed: u64, n: usize, radius: f64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let r = radius * rng.gen::<f64>().sqrt();
            let t = 2.0 * PI * rng.gen::<f64>();
            Complex64::from_polar(r, t)
        })
        .collect()
}

/// `n` equally spaced real points on `[lo, hi]`.
pub fn line_samples(lo: f64, hi: f64, n: usize) -> Vec<Complex64> {
    let step = if n > 1 { (hi - lo) / (n - 1) as f64 } else { 0.0 };
    (0..n).map(|i| Complex64::new(lo + step * i as f64, 0.0)).collect()
}

/// Evaluates `f` at every point in parallel; the order of the output follows
/// the input, so the aggregated maximum is deterministic.
fn residuals<F>(points: &[Complex64], f: F) -> Result<Vec<f64>>
where
    F: Fn(Complex64) -> Result<f64> + Sync,
{
    pool().install(|| points.par_iter().map(|&p| f(p)).collect())
}

fn check<F>(name: impl Into<String>, points: Vec<Complex64>, tolerance: f64, f: F) -> Result<IdentityCheck>
where
    F: Fn(Complex64) -> Result<f64> + Sync,
{
    let r = residuals(&points, f)?;
    Ok(IdentityCheck::from_residuals(name, points, &r, tolerance))
}

/// `sqrt(2 pi / i)`.
fn airy_norm() -> Complex64 {
    Complex64::from_polar((2.0 * PI).sqrt(), -PI / 4.0)
}

/// `phi(x, E) = sqrt(2 pi/i) Ai(x - E)`.
fn airy_phi(x: Complex64, e: Complex64) -> Complex64 {
    airy_norm() * airy_pair(x - e).0.value
}

/// `phi(x,E) + w phi(w x, w E) + w^-1 phi(x/w, E/w)` at `x = 0`, `w = e^{2 pi i/3}`.
pub fn airy_three_term(e_samples: &[Complex64]) -> Result<IdentityCheck> {
    let w = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
    let x = Complex64::new(0.0, 0.0);
    check("airy_three_term", e_samples.to_vec(), TOL_DIRECT.min(1e-10), |e| {
        let s = airy_phi(x, e) + w * airy_phi(w * x, w * e) + airy_phi(x / w, e / w) / w;
        Ok(s.norm())
    })
}

/// `|T_1(E) - 1|` with `T_1 = [e^{-i pi/3} Ai(-E q) + e^{i pi/3} Ai(-E/q)] / Ai(-E)`,
/// `q = e^{2 pi i/3}`.
pub fn stokes_multiplier_t1(e_samples: &[Complex64]) -> Result<IdentityCheck> {
    let q = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
    let (a, b) = (Complex64::from_polar(1.0, -FRAC_PI_3), Complex64::from_polar(1.0, FRAC_PI_3));
    check("stokes_multiplier_t1", e_samples.to_vec(), TOL_DIRECT.min(1e-10), |e| {
        let ai = |z: Complex64| airy_pair(z).0.value;
        let den = ai(-e);
        if den.norm() == 0.0 {
            return Err(Error::Domain(format!("T_1 at a zero of Ai(-E), E = {e}")));
        }
        Ok(((a * ai(-e * q) + b * ai(-e / q)) / den - 1.0).norm())
    })
}

fn check_integer_k(k: f64) -> Result<()> {
    if k >= 0.0 && k.fract() == 0.0 && k <= 64.0 {
        Ok(())
    } else {
        Err(Error::Invalid(format!(
            "the rotated Wronskian needs a non-negative integer k (entire Ai^(k)), got {k}"
        )))
    }
}

/// Quantum Wronskian at `h = 0`:
/// `xi^-1 Q+(E Omega) Q-(E/Omega) - xi Q-(E Omega) Q+(E/Omega) - 1` with
/// `Omega = 1/xi = e^{-i pi/(k+2)}`, `Q-(E) = c Ai^(k)(-E)`, `Q+(E) = c Ai^(k)'(-E)`
/// and `c^2 = 2 pi/i`. At `k = 1` this is the Airy statement.
pub fn quantum_wronskian_h0(k: f64, e_samples: &[Complex64]) -> Result<IdentityCheck> {
    check_integer_k(k)?;
    let kk = k + 2.0;
    let xi = Complex64::from_polar(1.0, PI / kk);
    let omega = xi.conj();
    let c2 = airy_norm() * airy_norm();
    let name = format!("quantum_wronskian_h0[k={k}]");
    check(name, e_samples.to_vec(), TOL_DIRECT, |e| {
        let q = |x: Complex64| aik_pair_entire(k, -x).map(|(m, p)| (m.value, p.value));
        let ((mu, pu), (mv, pv)) = (q(e * omega)?, q(e / omega)?);
        let w = c2 * (pu * mv / xi - xi * mu * pv);
        Ok((w - 1.0).norm())
    })
}

/// First-order SU(2)_k Y-system with `y_1 = e^{-A}`, `y_t = -B`:
/// `y_1(t + i pi/2) y_1(t - i pi/2) - t_{0,k-1}^2 (y_t^2 + 1)` and
/// `y_t(t + i pi/2) + y_t(t - i pi/2) - y_1(t)`; the residual is the larger.
pub fn ysystem_first_order_su2k(k: f64, theta_samples: &[Complex64]) -> Result<IdentityCheck> {
    let cf = ClosedFormSolution::su2k(k)?;
    let kk = k + 2.0;
    let t0 = (k * PI / kk).sin() / (PI / kk).sin();
    let shift = Complex64::new(0.0, FRAC_PI_2);
    let name = format!("ysystem_first_order_su2k[k={k}]");
    check(name, theta_samples.to_vec(), 1e-7, |t| {
        let (ep, bp) = cf.su2k_pair(t + shift)?;
        let (em, bm) = cf.su2k_pair(t - shift)?;
        let (e0, b0) = cf.su2k_pair(t)?;
        let r1 = ep * em - t0 * t0 * (b0 * b0 + 1.0);
        let r2 = -bp - bm - e0;
        Ok(r1.norm().max(r2.norm()))
    })
}

/// SU(3) values at `theta`: `[y^(1)_{1,1}, y^(2)_{1,1}, y^(1)_{1,2}, y^(2)_{1,2}]`
/// with `y^(1)_{1,2} = B_0 + i` and `y^(2)_{1,2} = B_0bar - i`.
fn su3_y(cf: &ClosedFormSolution, theta: Complex64) -> Result<[Complex64; 4]> {
    let [a1, a2, b0, b0bar] = cf.su3_all(theta)?;
    Ok([a1, a2, b0 + I, b0bar - I])
}

/// First-order SU(3) Y-system for node `a` (1 or 2):
/// `y^(a)_{1,1}(+) y^(a)_{1,1}(-) - y^(abar)_{1,1} y^(a)_{1,2}` and
/// `y^(a)_{1,2}(+) + y^(a)_{1,2}(-) + y^(a)_{1,1} - y^(abar)_{1,2} -+ 3i`,
/// with `(+-)` the shifts `theta +- i pi/3`.
pub fn ysystem_first_order_su3(a: u8, theta_samples: &[Complex64]) -> Result<IdentityCheck> {
    if !(a == 1 || a == 2) {
        return Err(Error::IndexOutOfRange {
            index: a as i64,
            range: "1..=2".into(),
        });
    }
    let cf = ClosedFormSolution::su3()?;
    let (s, sbar) = if a == 1 { (0, 1) } else { (1, 0) };
    let c = if a == 1 { 3.0 * I } else { -3.0 * I };
    let shift = Complex64::new(0.0, FRAC_PI_3);
    let name = format!("ysystem_first_order_su3[a={a}]");
    check(name, theta_samples.to_vec(), TOL_SHIFTED, |t| {
        let p = su3_y(&cf, t + shift)?;
        let m = su3_y(&cf, t - shift)?;
        let z = su3_y(&cf, t)?;
        let r1 = p[s] * m[s] - z[sbar] * z[2 + s];
        let r2 = p[2 + s] + m[2 + s] + z[s] - z[2 + sbar] - c;
        Ok(r1.norm().max(r2.norm()))
    })
}

/// `d^[i]_0` of the SU(3) ODE, `i = 0, 1, 2`, at `E w^m` (`w = e^{i pi/8}`),
/// from `Q^[0](E) = phi(-E)`, `Q^[1](E) = phi'(-E)`, `Q^[2](E) = phi''(-E)`.
/// With this normalization of `Q^[2]` the products below reproduce the
/// closed forms of `B_0 + i` and `B_0bar - i` exactly.
struct DZero<'a> {
    phi: &'a Su3Phi,
    e: Complex64,
}

impl DZero<'_> {
    /// `[d0, d1, d2]` at `s E w^m`, `s = +-1`.
    fn at(&self, sign: f64, m: i32) -> Result<[Complex64; 3]> {
        // d_i(x) needs phi at -x; -E w^m = E w^{m+8}
        let mut p = if sign > 0.0 { m + 8 } else { m };
        p = (p + 8).rem_euclid(16) - 8;
        let u = self.e * Complex64::from_polar(1.0, p as f64 * PI / 8.0);
        let [f, fp, fpp] = self.phi.eval3(u)?;
        Ok([f, fp, fpp])
    }
}

/// `y^(2)_{1,2}` and `y^(1)_{1,2}` from products of `d^[i]_0`:
///
/// ```text
/// y^(2)_{1,2} =  3 (d0(E w^7) d1(E w^3) - i d0(E w^3) d1(E w^7)) d2(-E w^3)
/// y^(1)_{1,2} = -3 (d0(-E w) d1(-E w^5) + i d0(-E w^5) d1(-E w)) d2(E w^5)
/// ```
pub fn su3_y12_from_d(phi: &Su3Phi, e: Complex64) -> Result<(Complex64, Complex64)> {
    let d = DZero { phi, e };
    let (p7, p3, m3) = (d.at(1.0, 7)?, d.at(1.0, 3)?, d.at(-1.0, 3)?);
    let y2 = 3.0 * (p7[0] * p3[1] - I * p3[0] * p7[1]) * m3[2];
    let (m1, m5, p5) = (d.at(-1.0, 1)?, d.at(-1.0, 5)?, d.at(1.0, 5)?);
    let y1 = -3.0 * (m1[0] * m5[1] + I * m5[0] * m1[1]) * p5[2];
    Ok((y2, y1))
}

/// `t^(a)_{1,2}(theta + i pi/3) t^(a)_{1,2}(theta - i pi/3) / t^(abar)_{1,2}(theta)`
/// for `a = 2` and `a = 1`, with `t^(a)_{1,2} = e^{-A_a}`.
fn su3_ratios(cf: &ClosedFormSolution, theta: Complex64) -> Result<(Complex64, Complex64)> {
    let shift = Complex64::new(0.0, FRAC_PI_3);
    let p = cf.su3_all(theta + shift)?;
    let m = cf.su3_all(theta - shift)?;
    let z = cf.su3_all(theta)?;
    Ok((p[1] * m[1] / z[0], p[0] * m[0] / z[1]))
}

fn su3_parts(cf: &ClosedFormSolution) -> Result<&Su3Phi> {
    cf.phi
        .as_ref()
        .ok_or_else(|| Error::Invalid("SU(3) checks need the SU(3) closed form".into()))
}

/// The two cancellation constants
/// `t^(2)_{1,1} + y^(2)_{1,2} = -i` and `t^(1)_{1,1} + y^(1)_{1,2} = i`.
///
/// `y^(a)_{1,2}` comes from the `d^[i]_0` products of [`su3_y12_from_d`]. The
/// first-order transfer functions follow from the companion relations
/// `t^(2)_{1,1} = R_2 - i - 2 y^(2)_{1,2}` and `t^(1)_{1,1} = R_1 + i - 2 y^(1)_{1,2}`,
/// where `R_a` is the shifted ratio of `e^{-A}` closed forms.
pub fn appendix_c_constants(theta_samples: &[Complex64]) -> Result<IdentityCheck> {
    let cf = ClosedFormSolution::su3()?;
    let phi = su3_parts(&cf)?;
    check("appendix_c_constants", theta_samples.to_vec(), TOL_SHIFTED, |t| {
        let (r2, r1) = su3_ratios(&cf, t)?;
        let (y2, y1) = su3_y12_from_d(phi, cf.map.energy_of_theta(t))?;
        let t2 = r2 - I - 2.0 * y2;
        let t1 = r1 + I - 2.0 * y1;
        Ok((t2 + y2 + I).norm().max((t1 + y1 - I).norm()))
    })
}

/// `y^(1)_{1,2} - i = B_0` with `y^(1)_{1,2}` from the `d^[i]_0` products and
/// `B_0` from the closed form.
pub fn appendix_c_b0(theta_samples: &[Complex64]) -> Result<IdentityCheck> {
    let cf = ClosedFormSolution::su3()?;
    let phi = su3_parts(&cf)?;
    check("appendix_c_b0", theta_samples.to_vec(), 1e-8, |t| {
        let (_, y1) = su3_y12_from_d(phi, cf.map.energy_of_theta(t))?;
        let b0 = cf.su3_all(t)?[2];
        Ok((y1 - I - b0).norm())
    })
}

/// `y^(2)_{1,2} = t^(2)_{1,2}(+) t^(2)_{1,2}(-) / t^(1)_{1,2}` (and the `a = 1`
/// mirror) with `y^(a)_{1,2}` from the `d^[i]_0` products.
pub fn appendix_c_ratio(theta_samples: &[Complex64]) -> Result<IdentityCheck> {
    let cf = ClosedFormSolution::su3()?;
    let phi = su3_parts(&cf)?;
    check("appendix_c_ratio", theta_samples.to_vec(), TOL_SHIFTED, |t| {
        let (r2, r1) = su3_ratios(&cf, t)?;
        let (y2, y1) = su3_y12_from_d(phi, cf.map.energy_of_theta(t))?;
        Ok((r2 - y2).norm().max((r1 - y1).norm()))
    })
}

/// `(f, f', f'')` of `phi_j(x) = q^{j/2} c Ai(q^{-j}(x - E))`, `q = e^{2 pi i/3}`.
fn rotated_airy(j: i32, x: Complex64, e: Complex64) -> [Complex64; 3] {
    let q = |p: f64| Complex64::from_polar(1.0, 2.0 * PI / 3.0 * p);
    let s = q(j as f64 / 2.0) * airy_norm();
    let r = q(-(j as f64));
    let z = r * (x - e);
    let (ai, aip) = airy_pair(z);
    [s * ai.value, s * r * aip.value, s * r * r * z * ai.value]
}

fn wronskian2(f: [Complex64; 3], g: [Complex64; 3]) -> Complex64 {
    f[0] * g[1] - f[1] * g[0]
}

/// `W[f^2, g^2, f g]` by cofactor expansion along the first row.
fn wronskian3_squares(f: [Complex64; 3], g: [Complex64; 3]) -> Complex64 {
    let sq = |u: [Complex64; 3]| [u[0] * u[0], 2.0 * u[0] * u[1], 2.0 * (u[1] * u[1] + u[0] * u[2])];
    let prod = [
        f[0] * g[0],
        f[1] * g[0] + f[0] * g[1],
        f[2] * g[0] + 2.0 * f[1] * g[1] + f[0] * g[2],
    ];
    let (a, b, c) = (sq(f), sq(g), prod);
    a[0] * (b[1] * c[2] - b[2] * c[1]) - b[0] * (a[1] * c[2] - a[2] * c[1]) + c[0] * (a[1] * b[2] - a[2] * b[1])
}

/// `W[phi_0^2, phi_1^2, phi_0 phi_1] + 2 W[phi_0, phi_1]^3` at `E = e`.
/// `W[f^2, g^2, f g] = -2 W[f, g]^3` for any pair of solutions of
/// `f'' = (x - E) f` in this column order; with `W[phi_0, phi_1] = 1` its
/// magnitude is the printed `2 W^2`.
pub fn squared_wronskian(e: Complex64, x_samples: &[Complex64]) -> Result<IdentityCheck> {
    check("squared_wronskian", x_samples.to_vec(), TOL_DIRECT, |x| {
        let (f, g) = (rotated_airy(0, x, e), rotated_airy(1, x, e));
        let w = wronskian2(f, g);
        Ok((wronskian3_squares(f, g) + 2.0 * w * w * w).norm())
    })
}

/// `phi_1^2 - phi_0^2 - phi_2^2 - 2 phi_0 phi_2`.
pub fn three_term_squares(e: Complex64, x_samples: &[Complex64]) -> Result<IdentityCheck> {
    check("three_term_squares", x_samples.to_vec(), TOL_DIRECT, |x| {
        let p = |j| rotated_airy(j, x, e)[0];
        let (p0, p1, p2) = (p(0), p(1), p(2));
        Ok((p1 * p1 - p0 * p0 - p2 * p2 - 2.0 * p0 * p2).norm())
    })
}

/// `|W[phi_0, phi_1](x) - 1|`: the Wronskian is constant and normalized.
pub fn wronskian_constancy(e: Complex64, x_samples: &[Complex64]) -> Result<IdentityCheck> {
    check("wronskian_constancy", x_samples.to_vec(), TOL_DIRECT, |x| {
        Ok((wronskian2(rotated_airy(0, x, e), rotated_airy(1, x, e)) - 1.0).norm())
    })
}

/// Radius of the energy disc for the rotated Wronskian at level `k`: the
/// Bessel argument `2 E^{(k+2)/2}/(k+2)` reaches the same size as at `k = 1`,
/// `|E| = 5`. Beyond it the four products grow like `e^{2|z|}` while their
/// combination stays 1, and double precision cannot resolve the difference.
pub fn wronskian_radius(k: f64) -> f64 {
    let kk = k + 2.0;
    (kk / 3.0 * 5f64.powf(1.5)).powf(2.0 / kk)
}

/// Groups of checks selectable from the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    All,
    Airy,
    Wronskian,
    Ysystem,
    AppendixC,
    Squared,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "all" => Self::All,
            "airy" => Self::Airy,
            "wronskian" => Self::Wronskian,
            "ysystem" => Self::Ysystem,
            "appendix_c" | "appendixc" => Self::AppendixC,
            "squared" | "squared_wronskian" => Self::Squared,
            _ => return Err(Error::Invalid(format!("unknown suite '{s}'"))),
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::All => "all",
            Self::Airy => "airy",
            Self::Wronskian => "wronskian",
            Self::Ysystem => "ysystem",
            Self::AppendixC => "appendix_c",
            Self::Squared => "squared",
        })
    }
}

/// Runs a suite on its default sample sets. Random discs use `seed`; each
/// check draws from its own stream so adding checks leaves the others fixed.
pub fn run_suite(suite: Suite, seed: u64) -> Result<Vec<IdentityCheck>> {
    let on = |s: Suite| suite == Suite::All || suite == s;
    let zero = Complex64::new(0.0, 0.0);
    let with_zero = |mut v: Vec<Complex64>| {
        v.insert(0, zero);
        v
    };
    let mut out = Vec::new();
    if on(Suite::Airy) {
        out.push(airy_three_term(&with_zero(disc_samples(seed, 20, 3.0)))?);
        out.push(stokes_multiplier_t1(&disc_samples(seed.wrapping_add(1), 20, 3.0))?);
    }
    if on(Suite::Wronskian) {
        for (i, k) in [1.0, 2.0, 3.0].into_iter().enumerate() {
            let pts = with_zero(disc_samples(seed.wrapping_add(2 + i as u64), 20, wronskian_radius(k)));
            out.push(quantum_wronskian_h0(k, &pts)?);
        }
    }
    if on(Suite::Ysystem) {
        let thetas = line_samples(-4.0, 2.0, 30);
        for k in [1.0, 3.0] {
            out.push(ysystem_first_order_su2k(k, &thetas)?);
        }
        let thetas = line_samples(-4.0, 1.0, 20);
        for a in [1, 2] {
            out.push(ysystem_first_order_su3(a, &thetas)?);
        }
    }
    if on(Suite::AppendixC) {
        let thetas = line_samples(-4.0, 1.0, 20);
        out.push(appendix_c_constants(&thetas)?);
        out.push(appendix_c_b0(&line_samples(-4.0, 1.0, 10))?);
        out.push(appendix_c_ratio(&thetas)?);
    }
    if on(Suite::Squared) {
        let xs = with_zero(disc_samples(seed.wrapping_add(5), 10, 2.0));
        out.push(squared_wronskian(zero, &xs)?);
        out.push(three_term_squares(zero, &xs)?);
        out.push(wronskian_constancy(zero, &xs)?);
    }
    Ok(out)
}
