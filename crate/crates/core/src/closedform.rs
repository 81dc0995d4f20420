//! Exact solutions of the SU(2)_k and SU(3)_1 massless TBA systems.
//!
//! SU(2)_k, with `E = E0 e^{2 theta/(k+2)}` and `Omega = e^{-i pi/(k+2)}`:
//!
//! ```text
//! e^{-A} = -4 pi cos(pi/(k+2)) d/dE [Ai^(k)(E)^2]
//! B      =  2 pi d/dE [Ai^(k)(E Omega) Ai^(k)(E/Omega)]
//! ```
//!
//! SU(3)_1, with `E = E0 e^{3 theta/4}`, `omega = e^{i pi/8}` and
//! `w_E[f, g] = f g' - g f'`:
//!
//! ```text
//! e^{-A_1} =  3 omega^3  w_E[phi(E/omega),   phi(E omega^3)] d2 phi(E/omega)
//! e^{-A_2} =  3 omega^-3 w_E[phi(E/omega^3), phi(E omega)]   d2 phi(E omega)
//! B_0bar   =  3 omega^-1 w_E[phi(E/omega),   phi(E/omega^5)] d2 phi(E omega^3) + i
//! B_0      = -3 omega    w_E[phi(E omega),   phi(E omega^5)] d2 phi(E/omega^3) - i
//! ```
//!
//! where `d2` is the second E-derivative of the rotated function.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{aik_pair_log, su3_phi_build, Su3Phi};

/// Extra room beyond the nominal strip half-width accepted for complex theta.
pub const STRIP_MARGIN: f64 = 0.1;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ModelSpec {
    Su2k { k: f64 },
    Su3,
}

impl ModelSpec {
    pub fn su2k(k: f64) -> Result<Self> {
        if !(k.is_finite() && k >= 0.0) {
            return Err(Error::Invalid(format!("SU(2)_k requires finite k >= 0, got {k}")));
        }
        Ok(Self::Su2k { k })
    }

    pub fn su3() -> Self {
        Self::Su3
    }

    /// Rate `c` in `E = E0 e^{c theta}`.
    pub fn energy_exponent(&self) -> f64 {
        match *self {
            Self::Su2k { k } => 2.0 / (k + 2.0),
            Self::Su3 => 0.75,
        }
    }

    /// Half-width of the strip in `Im theta` on which the closed forms are
    /// evaluated by the functional relations.
    pub fn strip(&self) -> f64 {
        match self {
            Self::Su2k { .. } => FRAC_PI_2,
            Self::Su3 => FRAC_PI_3,
        }
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Su2k { k } => write!(f, "su2k(k={k})"),
            Self::Su3 => write!(f, "su3"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyMap {
    pub model: ModelSpec,
    pub e0: f64,
}

impl EnergyMap {
    pub fn new(model: ModelSpec) -> Self {
        let e0 = match model {
            ModelSpec::Su2k { k } => ((k + 2.0) / 4.0).powf(2.0 / (k + 2.0)),
            ModelSpec::Su3 => (4.0 / (3.0 * 3f64.sqrt())).powf(0.75),
        };
        Self { model, e0 }
    }

    /// `ln E` without reduction to the principal branch.
    pub fn log_energy(&self, theta: Complex64) -> Complex64 {
        self.e0.ln() + self.model.energy_exponent() * theta
    }

    pub fn energy_of_theta(&self, theta: Complex64) -> Complex64 {
        self.log_energy(theta).exp()
    }

    /// Inverse map for real positive `E`.
    pub fn theta_of_energy(&self, e: f64) -> Result<f64> {
        if !(e > 0.0 && e.is_finite()) {
            return Err(Error::Domain(format!("theta_of_energy needs E > 0, got {e}")));
        }
        Ok((e / self.e0).ln() / self.model.energy_exponent())
    }
}

/// Exact plateau (`theta -> -infinity`) values.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Plateau {
    Su2k { exp_a: f64, b: f64 },
    Su3 {
        exp_a1: Complex64,
        exp_a2: Complex64,
        b0: Complex64,
        b0bar: Complex64,
    },
}

impl Plateau {
    pub fn of(model: ModelSpec) -> Self {
        match model {
            ModelSpec::Su2k { k } => {
                let cot = 1.0 / (PI / (k + 2.0)).tan();
                Self::Su2k {
                    exp_a: 2.0 * cot,
                    b: -cot,
                }
            }
            ModelSpec::Su3 => {
                let a1 = Complex64::from_polar(3.0 / (2.0 * 2f64.sqrt()), PI / 4.0);
                Self::Su3 {
                    exp_a1: a1,
                    exp_a2: a1.conj(),
                    b0: Complex64::new(-0.75, -0.25),
                    b0bar: Complex64::new(-0.75, 0.25),
                }
            }
        }
    }
}

/// Which SU(3) B function.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Su3B {
    Zero,
    ZeroBar,
}

/// Named quantities a closed form can be sampled for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantity {
    ExpA,
    A,
    B,
    ExpA1,
    ExpA2,
    A1,
    A2,
    B0,
    B0Bar,
}

impl Quantity {
    pub fn name(&self) -> &'static str {
        match self {
            Self::ExpA => "expA",
            Self::A => "A",
            Self::B => "B",
            Self::ExpA1 => "expA1",
            Self::ExpA2 => "expA2",
            Self::A1 => "A1",
            Self::A2 => "A2",
            Self::B0 => "B0",
            Self::B0Bar => "B0bar",
        }
    }

    pub fn for_model(model: ModelSpec) -> &'static [Quantity] {
        match model {
            ModelSpec::Su2k { .. } => &[Self::ExpA, Self::A, Self::B],
            ModelSpec::Su3 => &[Self::ExpA1, Self::ExpA2, Self::A1, Self::A2, Self::B0, Self::B0Bar],
        }
    }
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let all = [
            Self::ExpA,
            Self::A,
            Self::B,
            Self::ExpA1,
            Self::ExpA2,
            Self::A1,
            Self::A2,
            Self::B0,
            Self::B0Bar,
        ];
        all.into_iter()
            .find(|q| q.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Invalid(format!("unknown function '{s}'")))
    }
}

#[derive(Clone, Debug)]
pub struct ClosedFormSolution {
    pub model: ModelSpec,
    pub map: EnergyMap,
    pub phi: Option<Su3Phi>,
}

impl ClosedFormSolution {
    pub fn new(model: ModelSpec) -> Result<Self> {
        if let ModelSpec::Su2k { k } = model {
            ModelSpec::su2k(k)?;
        }
        let phi = match model {
            ModelSpec::Su3 => Some(su3_phi_build()?),
            ModelSpec::Su2k { .. } => None,
        };
        Ok(Self {
            model,
            map: EnergyMap::new(model),
            phi,
        })
    }

    pub fn su2k(k: f64) -> Result<Self> {
        Self::new(ModelSpec::su2k(k)?)
    }

    pub fn su3() -> Result<Self> {
        Self::new(ModelSpec::Su3)
    }

    fn k(&self) -> Result<f64> {
        match self.model {
            ModelSpec::Su2k { k } => Ok(k),
            ModelSpec::Su3 => Err(Error::Invalid("operation needs an SU(2)_k model".into())),
        }
    }

    fn phi(&self) -> Result<&Su3Phi> {
        self.phi
            .as_ref()
            .ok_or_else(|| Error::Invalid("operation needs the SU(3) model".into()))
    }

    fn check_strip(&self, theta: Complex64) -> Result<()> {
        let limit = self.model.strip() + STRIP_MARGIN;
        if theta.im.abs() > limit || !theta.is_finite() {
            return Err(Error::Strip { im: theta.im, limit });
        }
        Ok(())
    }

    /// `(e^{-A}, B)` for SU(2)_k.
    pub fn su2k_pair(&self, theta: Complex64) -> Result<(Complex64, Complex64)> {
        let k = self.k()?;
        self.check_strip(theta)?;
        let kk = k + 2.0;
        let le = self.map.log_energy(theta);
        let (ai, aip) = aik_pair_log(k, le)?;
        let exp_a = -8.0 * PI * (PI / kk).cos() * ai.value * aip.value;
        let rot = Complex64::new(0.0, PI / kk);
        let (p, pp) = aik_pair_log(k, le - rot)?;
        let (m, mp) = aik_pair_log(k, le + rot)?;
        let omega = Complex64::from_polar(1.0, -PI / kk);
        let b = 2.0 * PI * (omega * pp.value * m.value + p.value * mp.value / omega);
        Ok((exp_a, b))
    }

    /// SU(3) values `[e^{-A_1}, e^{-A_2}, B_0, B_0bar]`.
    pub fn su3_all(&self, theta: Complex64) -> Result<[Complex64; 4]> {
        let phi = self.phi()?;
        self.check_strip(theta)?;
        let e = self.map.energy_of_theta(theta);
        let w = |m: i32| Complex64::from_polar(1.0, m as f64 * PI / 8.0);
        // phi, phi', phi'' at E w^m for m = -5, -3, -1, 1, 3, 5
        let mut v = [[Complex64::new(0.0, 0.0); 3]; 6];
        for (i, m) in [-5, -3, -1, 1, 3, 5].into_iter().enumerate() {
            v[i] = phi.eval3(e * w(m))?;
        }
        let at = |m: i32| v[((m + 5) / 2) as usize];
        let we = |p: i32, q: i32| at(p)[0] * w(q) * at(q)[1] - at(q)[0] * w(p) * at(p)[1];
        let d2 = |m: i32| w(2 * m) * at(m)[2];
        let a1 = 3.0 * w(3) * we(-1, 3) * d2(-1);
        let a2 = 3.0 * w(-3) * we(-3, 1) * d2(1);
        let b0bar = 3.0 * w(-1) * we(-1, -5) * d2(3) + I;
        let b0 = -3.0 * w(1) * we(1, 5) * d2(-3) - I;
        Ok([a1, a2, b0, b0bar])
    }

    /// Value of a named quantity.
    pub fn quantity(&self, q: Quantity, theta: Complex64) -> Result<Complex64> {
        match (self.model, q) {
            (ModelSpec::Su2k { .. }, Quantity::ExpA) => Ok(self.su2k_pair(theta)?.0),
            (ModelSpec::Su2k { .. }, Quantity::A) => Ok(-self.su2k_pair(theta)?.0.ln()),
            (ModelSpec::Su2k { .. }, Quantity::B) => Ok(self.su2k_pair(theta)?.1),
            (ModelSpec::Su3, Quantity::ExpA1) => Ok(self.su3_all(theta)?[0]),
            (ModelSpec::Su3, Quantity::ExpA2) => Ok(self.su3_all(theta)?[1]),
            (ModelSpec::Su3, Quantity::A1) => Ok(-self.su3_all(theta)?[0].ln()),
            (ModelSpec::Su3, Quantity::A2) => Ok(-self.su3_all(theta)?[1].ln()),
            (ModelSpec::Su3, Quantity::B0) => Ok(self.su3_all(theta)?[2]),
            (ModelSpec::Su3, Quantity::B0Bar) => Ok(self.su3_all(theta)?[3]),
            (m, q) => Err(Error::Invalid(format!("{} is not defined for {m}", q.name()))),
        }
    }

    /// Plateau of a quantity estimated from the closed form itself:
    /// three-point extrapolation to `E = 0` from theta = -20, -25, -30.
    /// All quantities are analytic in `E` near 0 up to `O(E^{k+1})`.
    pub fn plateau_estimate(&self, q: Quantity) -> Result<Complex64> {
        let thetas = [-20.0, -25.0, -30.0];
        let mut es = [0.0; 3];
        let mut fs = [Complex64::new(0.0, 0.0); 3];
        for (i, &t) in thetas.iter().enumerate() {
            es[i] = self.map.energy_of_theta(Complex64::new(t, 0.0)).re;
            fs[i] = self.quantity(q, Complex64::new(t, 0.0))?;
        }
        // Lagrange interpolation evaluated at E = 0.
        let mut p = Complex64::new(0.0, 0.0);
        for i in 0..3 {
            let mut l = 1.0;
            for j in 0..3 {
                if i != j {
                    l *= es[j] / (es[j] - es[i]);
                }
            }
            p += l * fs[i];
        }
        Ok(p)
    }

    /// Slope of `-ln|e^{-A}|` against `e^theta` between `t1` and `t2`; equals
    /// the mass `m_A` (= 1 by the choice of `E0`) up to `O(e^{-2 theta})`.
    pub fn tail_mass_fit(&self, t1: f64, t2: f64) -> Result<f64> {
        let q = match self.model {
            ModelSpec::Su2k { .. } => Quantity::ExpA,
            ModelSpec::Su3 => Quantity::ExpA1,
        };
        let a = |t: f64| -> Result<f64> { Ok(-self.quantity(q, Complex64::new(t, 0.0))?.norm().ln()) };
        Ok((a(t2)? - a(t1)?) / (t2.exp() - t1.exp()))
    }
}

/// `B(theta)` for SU(2)_k.
pub fn su2k_b(cf: &ClosedFormSolution, theta: Complex64) -> Result<Complex64> {
    Ok(cf.su2k_pair(theta)?.1)
}

/// `e^{-A(theta)}` for SU(2)_k.
pub fn su2k_exp_a(cf: &ClosedFormSolution, theta: Complex64) -> Result<Complex64> {
    Ok(cf.su2k_pair(theta)?.0)
}

/// Leading large-E behaviour `(A, B)`:
/// `A ~ (4/(k+2)) E^{(k+2)/2} - ln(2 cos(pi/(k+2)))`, `B ~ -(k/4) E^{-(k+2)/2}`.
pub fn su2k_large_e_asymptotics(cf: &ClosedFormSolution, theta: f64) -> Result<(f64, f64)> {
    let k = cf.k()?;
    let e = cf.map.energy_of_theta(Complex64::new(theta, 0.0)).re;
    if e < 5.0 {
        return Err(Error::Domain(format!("large-E asymptotics need E >= 5, got {e}")));
    }
    let kk = k + 2.0;
    let a = 4.0 / kk * e.powf(kk / 2.0) - (2.0 * (PI / kk).cos()).ln();
    let b = -k / 4.0 * e.powf(-kk / 2.0);
    Ok((a, b))
}

/// `e^{-A_r(theta)}`, `r` in {1, 2}.
pub fn su3_exp_a(cf: &ClosedFormSolution, r: u8, theta: Complex64) -> Result<Complex64> {
    let v = cf.su3_all(theta)?;
    match r {
        1 => Ok(v[0]),
        2 => Ok(v[1]),
        _ => Err(Error::IndexOutOfRange {
            index: r as i64,
            range: "1..=2".into(),
        }),
    }
}

pub fn su3_b(cf: &ClosedFormSolution, which: Su3B, theta: Complex64) -> Result<Complex64> {
    let v = cf.su3_all(theta)?;
    Ok(match which {
        Su3B::Zero => v[2],
        Su3B::ZeroBar => v[3],
    })
}

/// Constant T-system solution `t_{0,j} = sin((j+1) pi/(k+2)) / sin(pi/(k+2))`.
pub fn t0_constant(k: f64, j: i64) -> Result<f64> {
    if !(k.is_finite() && k >= 0.0) {
        return Err(Error::Invalid(format!("t0_constant needs k >= 0, got {k}")));
    }
    let top = k.floor() as i64 + 1;
    if j < 0 || j > top {
        return Err(Error::IndexOutOfRange {
            index: j,
            range: format!("0..={top}"),
        });
    }
    let kk = k + 2.0;
    let v = ((j + 1) as f64 * PI / kk).sin() / (PI / kk).sin();
    // sin(m pi) is not exactly zero in floating point
    Ok(if (j as f64 + 1.0 - kk).abs() < 1e-15 { 0.0 } else { v })
}
