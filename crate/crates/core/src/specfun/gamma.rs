use std::f64::consts::PI;

use num_complex::Complex64;

use super::{EvalResult, Method, EPS};
use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * ((z + 0.5) * t.ln() - t).exp() * x
}

/// `sin(pi z)` with the argument reduced by the nearest integer first.
fn sin_pi(z: Complex64) -> Complex64 {
    let n = z.re.round();
    let s = (PI * (z - n)).sin();
    if (n as i64) % 2 == 0 {
        s
    } else {
        -s
    }
}

/// Complex Gamma function (Lanczos, reflected for `Re z < 1/2`).
pub fn gamma(z: Complex64) -> Result<EvalResult> {
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        return Err(Error::Pole {
            what: "gamma".into(),
            at: format!("{}", z.re),
        });
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("gamma of non-finite argument {z}")));
    }
    let value = if z.re < 0.5 {
        PI / (sin_pi(z) * lanczos(1.0 - z))
    } else {
        lanczos(z)
    };
    let r = z.norm();
    let err = value.norm() * EPS * (16.0 + 4.0 * r * (2.0 + r).ln());
    Ok(EvalResult::new(value, err, Method::Series))
}

/// Real Gamma function; errors at poles.
pub fn gamma_real(x: f64) -> Result<f64> {
    gamma(Complex64::new(x, 0.0)).map(|r| r.value.re)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_integers_and_half() {
        assert!((gamma_real(1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((gamma_real(5.0).unwrap() - 24.0).abs() < 1e-12);
        assert!((gamma_real(0.5).unwrap() - PI.sqrt()).abs() < 1e-15);
        assert!((gamma_real(-0.5).unwrap() + 2.0 * PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn poles_are_errors() {
        for n in [0.0, -1.0, -7.0] {
            assert!(matches!(gamma_real(n), Err(Error::Pole { .. })));
        }
    }

    #[test]
    fn recurrence_off_axis() {
        let z = Complex64::new(-3.3, 4.1);
        let a = gamma(z + 1.0).unwrap().value;
        let b = z * gamma(z).unwrap().value;
        assert!((a - b).norm() / a.norm() < 1e-13);
    }
}
