//! Adaptive Gauss-Kronrod (7/15) quadrature.

use crate::error::{Error, Result};
use crate::Real;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature<T> {
    pub value: T,
    pub abs_error: T,
    pub evaluations: usize,
}

fn rule<T: Real, F: FnMut(T) -> T>(f: &mut F, a: T, b: T) -> (T, T) {
    let half = T::of(0.5);
    let c = half * (a + b);
    let h = half * (b - a);
    let fc = f(c);
    let mut k = fc * T::of(WGK[7]);
    let mut g = fc * T::of(WG[3]);
    for i in 0..7 {
        let x = h * T::of(XGK[i]);
        let s = f(c - x) + f(c + x);
        k = k + s * T::of(WGK[i]);
        if i % 2 == 1 {
            g = g + s * T::of(WG[i / 2]);
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// `int_a^b f` to `max(abs_tol, rel_tol |I|)` by global bisection of the
/// interval with the largest error estimate.
pub fn integrate<T: Real, F: FnMut(T) -> T>(
    mut f: F,
    a: T,
    b: T,
    abs_tol: T,
    rel_tol: T,
) -> Result<Quadrature<T>> {
    const MAX_INTERVALS: usize = 4000;
    let (v, e) = rule(&mut f, a, b);
    let mut parts = vec![(a, b, v, e)];
    let mut evaluations = 15;
    loop {
        let total: T = parts.iter().fold(T::zero(), |s, p| s + p.2);
        let err: T = parts.iter().fold(T::zero(), |s, p| s + p.3);
        if !total.is_finite() {
            return Err(Error::Quadrature("integrand produced a non-finite value".into()));
        }
        if err <= abs_tol.max(rel_tol * total.abs()) {
            return Ok(Quadrature {
                value: total,
                abs_error: err,
                evaluations,
            });
        }
        if parts.len() >= MAX_INTERVALS {
            return Err(Error::Quadrature(format!(
                "error estimate {} above tolerance after {} intervals",
                err.to_f64().unwrap_or(f64::NAN),
                parts.len()
            )));
        }
        let (idx, _) = parts
            .iter()
            .enumerate()
            .fold((0, T::neg_infinity()), |best, (i, p)| if p.3 > best.1 { (i, p.3) } else { best });
        let (lo, hi, _, _) = parts.swap_remove(idx);
        let mid = T::of(0.5) * (lo + hi);
        if !(mid > lo && mid < hi) {
            return Err(Error::Quadrature("interval can no longer be bisected".into()));
        }
        let (v1, e1) = rule(&mut f, lo, mid);
        let (v2, e2) = rule(&mut f, mid, hi);
        evaluations += 30;
        parts.push((lo, mid, v1, e1));
        parts.push((mid, hi, v2, e2));
    }
}
