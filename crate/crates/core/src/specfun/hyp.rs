use num_complex::Complex64;

use super::{EvalResult, Method, EPS};
use crate::dd::{ComplexDD, DoubleDouble};
use crate::error::{Error, Result};

/// Largest `|zeta|` accepted by [`hyp0f2`].
pub const HYP0F2_BOUND: f64 = 1e8;

fn nonpositive_integer(b: f64) -> bool {
    b <= 0.0 && b == b.round()
}

/// `0F2(; b1, b2 | zeta)` by direct summation in double-double.
pub fn hyp0f2(b1: f64, b2: f64, zeta: Complex64) -> Result<EvalResult> {
    for b in [b1, b2] {
        if nonpositive_integer(b) {
            return Err(Error::Pole {
                what: "hyp0f2 lower parameter".into(),
                at: format!("{b}"),
            });
        }
    }
    let r = zeta.norm();
    if !(r <= HYP0F2_BOUND) {
        return Err(Error::Overflow {
            what: "zeta",
            magnitude: r,
            bound: HYP0F2_BOUND,
        });
    }
    let z = ComplexDD::from_c64(zeta);
    let (b1d, b2d) = (DoubleDouble::from_f64(b1), DoubleDouble::from_f64(b2));
    let mut term = ComplexDD::ONE;
    let mut sum = term;
    let mut peak = 1.0f64;
    for m in 0..100_000 {
        let md = DoubleDouble::from_f64(m as f64);
        let den = (md + DoubleDouble::ONE) * (b1d + md) * (b2d + md);
        term = (term * z).div_real(den);
        sum += term;
        let t = term.norm_f64();
        peak = peak.max(t);
        // Terms can grow before they shrink; stop only once past the peak.
        if (m as f64) > r.cbrt() + 2.0 && t < 1e-34 * peak.max(sum.norm_f64()) {
            break;
        }
    }
    let value = sum.to_c64();
    let err = 1e-31 * peak + 2.0 * EPS * value.norm();
    Ok(EvalResult::new(value, err, Method::CompensatedSeries))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_sum_at_origin() {
        let v = hyp0f2(0.75, 0.5, Complex64::new(0.0, 0.0)).unwrap().value;
        assert_eq!(v, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn reference_value() {
        let v = hyp0f2(0.75, 0.5, Complex64::new(0.1, 0.0)).unwrap().value;
        assert!((v.re - 1.2717707059235728).abs() < 1e-15);
    }

    #[test]
    fn derivative_ladder() {
        let (b1, b2) = (0.75, 1.25);
        let z = Complex64::new(-2.0, 1.5);
        let h = 1e-4;
        let fd = (hyp0f2(b1, b2, z + h).unwrap().value - hyp0f2(b1, b2, z - h).unwrap().value) / (2.0 * h);
        let exact = hyp0f2(b1 + 1.0, b2 + 1.0, z).unwrap().value / (b1 * b2);
        assert!((fd - exact).norm() < 1e-6 * exact.norm());
    }

    #[test]
    fn rejects_poles_and_huge_arguments() {
        assert!(hyp0f2(-2.0, 0.5, Complex64::new(1.0, 0.0)).is_err());
        assert!(hyp0f2(0.5, 0.5, Complex64::new(1e9, 0.0)).is_err());
    }
}
