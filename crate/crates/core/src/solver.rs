//! Damped Picard iteration for the SU(2)_k and SU(3) TBA systems, and the
//! residual of arbitrary candidate functions.
//!
//! SU(2)_k:
//! ```text
//! A = e^theta - ln(2 cos(pi/(k+2))) - sech * ln(1 + B^2)
//! B = -sech * e^{-A}
//! ```
//! SU(3), with `L_0 = ln(i + B_0)` and `L_0bar = ln(-i + B_0bar)` continued
//! along the grid from their plateau values:
//! ```text
//! A_1    = e^theta - Phi_- * L_0 - Phi_+ * L_0bar
//! A_2    = e^theta - Phi_+ * L_0 - Phi_- * L_0bar
//! B_0    = -Phi_- * e^{-A_1} - Phi_+ * e^{-A_2}
//! B_0bar = -Phi_+ * e^{-A_1} - Phi_- * e^{-A_2}
//! ```

use std::f64::consts::{FRAC_PI_2, PI};
use std::ops::Range;

use num_complex::{Complex, Complex64};
use serde::{Deserialize, Serialize};

use crate::closedform::{ClosedFormSolution, ModelSpec, Plateau};
use crate::error::{Error, Result};
use crate::grid::{DecayModel, GridFunction, ThetaGrid};
use crate::kernel::{KernelKind, KernelSet, Tails};
use crate::Real;

/// Largest accepted change of `arg(i a + B)` between neighbouring grid
/// points; a larger step makes the continuous logarithm ambiguous.
pub const BRANCH_JUMP_LIMIT: f64 = FRAC_PI_2;

/// Window on which closed-form residuals are reported.
pub const RESIDUAL_WINDOW: (f64, f64) = (-10.0, 3.0);

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveOptions<T> {
    pub damping: T,
    pub tol: T,
    pub max_iterations: usize,
}

impl<T: Real> Default for SolveOptions<T> {
    fn default() -> Self {
        Self {
            damping: T::of(0.5),
            tol: T::of(1e-10),
            max_iterations: 5000,
        }
    }
}

impl<T: Real> SolveOptions<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.damping > T::zero() && self.damping <= T::one()) {
            return Err(Error::Invalid(format!("damping must lie in (0, 1], got {}", self.damping)));
        }
        if !(self.tol >= T::of(1e-12) && self.tol.is_finite()) {
            return Err(Error::Invalid(format!("tolerance must be >= 1e-12, got {}", self.tol)));
        }
        if self.max_iterations == 0 {
            return Err(Error::Invalid("max_iterations must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquationSup {
    pub equation: String,
    pub sup: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub iterations: usize,
    pub damping: f64,
    pub residual: f64,
    pub converged: bool,
    #[serde(default)]
    pub per_equation: Vec<EquationSup>,
}

/// Left side minus right side of one equation on the grid.
#[derive(Clone, Debug)]
pub struct EquationResidual<T> {
    pub equation: &'static str,
    pub values: GridFunction<T>,
    pub rhs: GridFunction<T>,
}

impl<T: Real> EquationResidual<T> {
    pub fn sup_on(&self, range: Range<usize>) -> T {
        self.values.values[range].iter().fold(T::zero(), |m, v| m.max(v.norm()))
    }

    pub fn sup(&self) -> T {
        self.sup_on(0..self.values.len())
    }
}

/// Candidate solution sampled on a grid.
#[derive(Clone, Debug)]
pub enum Candidate<T> {
    Su2k {
        k: f64,
        a: GridFunction<T>,
        b: GridFunction<T>,
    },
    Su3 {
        a1: GridFunction<T>,
        a2: GridFunction<T>,
        b0: GridFunction<T>,
        b0bar: GridFunction<T>,
    },
}

#[derive(Clone, Debug)]
pub struct Su2kSolution<T> {
    pub a: GridFunction<T>,
    pub b: GridFunction<T>,
    pub report: SolveReport,
}

#[derive(Clone, Debug)]
pub struct Su3Solution<T> {
    pub a1: GridFunction<T>,
    pub a2: GridFunction<T>,
    pub b0: GridFunction<T>,
    pub b0bar: GridFunction<T>,
    pub report: SolveReport,
}

fn c<T: Real>(z: Complex64) -> Complex<T> {
    Complex::new(T::of(z.re), T::of(z.im))
}

fn cr<T: Real>(x: f64) -> Complex<T> {
    Complex::new(T::of(x), T::zero())
}

fn su2k_k(model: ModelSpec) -> Result<f64> {
    match model {
        ModelSpec::Su2k { k } if k > 0.0 => Ok(k),
        ModelSpec::Su2k { k } => Err(Error::Invalid(format!("the SU(2)_k solver needs k > 0, got {k}"))),
        ModelSpec::Su3 => Err(Error::Invalid("expected an SU(2)_k kernel set".into())),
    }
}

fn su2k_constants(k: f64) -> (f64, f64, f64) {
    let Plateau::Su2k { exp_a, b } = Plateau::of(ModelSpec::Su2k { k }) else { unreachable!() };
    ((2.0 * (PI / (k + 2.0)).cos()).ln(), exp_a, b)
}

/// One application of the SU(2)_k map: `(A, B) -> (F_A(B), F_B(A))`.
pub fn su2k_update<T: Real>(
    kernels: &KernelSet<T>,
    a: &[Complex<T>],
    b: &[Complex<T>],
) -> Result<(Vec<Complex<T>>, Vec<Complex<T>>)> {
    let k = su2k_k(kernels.model)?;
    let (log2cos, exp_a_p, b_p) = su2k_constants(k);
    let lambda = T::of(2.0 / (k + 2.0));
    let two = T::of(2.0);
    let one = Complex::new(T::one(), T::zero());
    let lb: Vec<Complex<T>> = b.iter().map(|&v| (one + v * v).ln()).collect();
    let ea: Vec<Complex<T>> = a.iter().map(|&v| (-v).exp()).collect();
    let n = lb.len();
    let lb_tails = Tails {
        left: cr((1.0 + b_p * b_p).ln()),
        left_amp: lb[0] - cr((1.0 + b_p * b_p).ln()),
        left_rate: lambda,
        right: cr(0.0),
        right_amp: lb[n - 1],
        right_rate_re: two,
        right_rate_im: two,
    };
    let ea_tails = Tails {
        left: cr(exp_a_p),
        left_amp: ea[0] - cr(exp_a_p),
        left_rate: lambda,
        right: cr(0.0),
        right_amp: ea[n - 1],
        right_rate_re: two,
        right_rate_im: two,
    };
    let conv_lb = kernels.convolve_values(KernelKind::Sech, &lb, &lb_tails)?;
    let conv_ea = kernels.convolve_values(KernelKind::Sech, &ea, &ea_tails)?;
    let grid = kernels.grid();
    let shift = T::of(log2cos);
    let fa = (0..n)
        .map(|i| Complex::new(grid.theta(i).exp() - shift, T::zero()) - conv_lb[i])
        .collect();
    let fb = conv_ea.into_iter().map(|v| -v).collect();
    Ok((fa, fb))
}

/// `ln(shift + B)` continued along the grid, starting on the branch closest
/// to `start` (the plateau value).
fn continuous_log<T: Real>(b: &[Complex<T>], shift: Complex<T>, start: Complex<T>, grid: &ThetaGrid<T>) -> Result<Vec<Complex<T>>> {
    let two_pi = T::of(2.0) * T::PI();
    let limit = T::of(BRANCH_JUMP_LIMIT);
    let mut out = Vec::with_capacity(b.len());
    let mut prev_im = start.im;
    for (i, &v) in b.iter().enumerate() {
        let w = shift + v;
        if w.norm() == T::zero() || !(w.re.is_finite() && w.im.is_finite()) {
            return Err(Error::NotFinite {
                iteration: 0,
                theta: grid.theta(i).to_f64().unwrap_or(f64::NAN),
            });
        }
        let l = w.ln();
        let turns = ((prev_im - l.im) / two_pi).round();
        let im = l.im + turns * two_pi;
        if (im - prev_im).abs() > limit {
            let t1 = grid.theta(i).to_f64().unwrap_or(f64::NAN);
            return Err(Error::BranchJump {
                jump: (im - prev_im).to_f64().unwrap_or(f64::NAN),
                theta0: if i == 0 { f64::NEG_INFINITY } else { grid.theta(i - 1).to_f64().unwrap_or(f64::NAN) },
                theta1: t1,
            });
        }
        prev_im = im;
        out.push(Complex::new(l.re, im));
    }
    Ok(out)
}

fn su3_plateaus() -> [Complex64; 4] {
    let Plateau::Su3 { exp_a1, exp_a2, b0, b0bar } = Plateau::of(ModelSpec::Su3) else { unreachable!() };
    [exp_a1, exp_a2, b0, b0bar]
}

/// One application of the SU(3) map to `(A_1, A_2, B_0, B_0bar)`.
pub fn su3_update<T: Real>(kernels: &KernelSet<T>, x: &[Vec<Complex<T>>; 4]) -> Result<[Vec<Complex<T>>; 4]> {
    if kernels.model != ModelSpec::Su3 {
        return Err(Error::Invalid("expected the SU(3) kernel set".into()));
    }
    let grid = *kernels.grid();
    let n = grid.count();
    let [pa1, pa2, pb0, pb0b] = su3_plateaus();
    let i = Complex64::new(0.0, 1.0);
    let (l0_p, l0b_p) = ((i + pb0).ln(), (-i + pb0b).ln());
    let l0 = continuous_log(&x[2], c(i), c(l0_p), &grid)?;
    let l0b = continuous_log(&x[3], c(-i), c(l0b_p), &grid)?;
    let e1: Vec<Complex<T>> = x[0].iter().map(|&v| (-v).exp()).collect();
    let e2: Vec<Complex<T>> = x[1].iter().map(|&v| (-v).exp()).collect();
    let lambda = T::of(0.75);
    let (one, two) = (T::one(), T::of(2.0));
    let log_tails = |f: &[Complex<T>], p: Complex64, lim: Complex64| Tails {
        left: c(p),
        left_amp: f[0] - c(p),
        left_rate: lambda,
        right: c(lim),
        right_amp: f[n - 1] - c(lim),
        right_rate_re: two,
        right_rate_im: one,
    };
    let exp_tails = |f: &[Complex<T>], p: Complex64| Tails {
        left: c(p),
        left_amp: f[0] - c(p),
        left_rate: lambda,
        right: cr(0.0),
        right_amp: f[n - 1],
        right_rate_re: two,
        right_rate_im: two,
    };
    let (t0, t0b) = (log_tails(&l0, l0_p, i * FRAC_PI_2), log_tails(&l0b, l0b_p, -i * FRAC_PI_2));
    let (t1, t2) = (exp_tails(&e1, pa1), exp_tails(&e2, pa2));
    let (m, p) = (KernelKind::PhiMinus, KernelKind::PhiPlus);
    let m_l0 = kernels.convolve_values(m, &l0, &t0)?;
    let p_l0 = kernels.convolve_values(p, &l0, &t0)?;
    let m_l0b = kernels.convolve_values(m, &l0b, &t0b)?;
    let p_l0b = kernels.convolve_values(p, &l0b, &t0b)?;
    let m_e1 = kernels.convolve_values(m, &e1, &t1)?;
    let p_e1 = kernels.convolve_values(p, &e1, &t1)?;
    let m_e2 = kernels.convolve_values(m, &e2, &t2)?;
    let p_e2 = kernels.convolve_values(p, &e2, &t2)?;
    let drive = |j: usize| Complex::new(grid.theta(j).exp(), T::zero());
    let a1 = (0..n).map(|j| drive(j) - m_l0[j] - p_l0b[j]).collect();
    let a2 = (0..n).map(|j| drive(j) - p_l0[j] - m_l0b[j]).collect();
    let b0 = (0..n).map(|j| -m_e1[j] - p_e2[j]).collect();
    let b0b = (0..n).map(|j| -p_e1[j] - m_e2[j]).collect();
    Ok([a1, a2, b0, b0b])
}

fn sup_diff<T: Real>(x: &[Complex<T>], y: &[Complex<T>]) -> T {
    x.iter().zip(y).fold(T::zero(), |m, (a, b)| m.max((a - b).norm()))
}

fn first_non_finite<T: Real>(x: &[Vec<Complex<T>>]) -> Option<usize> {
    x.iter().find_map(|v| v.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())))
}

/// Damped Picard loop; `names` label the unknowns in the report.
fn picard<T: Real, F>(
    grid: &ThetaGrid<T>,
    mut x: Vec<Vec<Complex<T>>>,
    names: &[&str],
    opts: &SolveOptions<T>,
    mut update: F,
) -> Result<(Vec<Vec<Complex<T>>>, SolveReport)>
where
    F: FnMut(&[Vec<Complex<T>>]) -> Result<Vec<Vec<Complex<T>>>>,
{
    opts.validate()?;
    let lam = opts.damping;
    let mut last = T::infinity();
    for it in 1..=opts.max_iterations {
        let fx = update(&x).map_err(|e| match e {
            Error::NotFinite { theta, .. } => Error::NotFinite { iteration: it, theta },
            e => e,
        })?;
        if let Some(j) = first_non_finite(&fx) {
            return Err(Error::NotFinite {
                iteration: it,
                theta: grid.theta(j).to_f64().unwrap_or(f64::NAN),
            });
        }
        let per: Vec<T> = x.iter().zip(&fx).map(|(a, b)| sup_diff(a, b)).collect();
        let res = per.iter().fold(T::zero(), |m, &v| m.max(v));
        last = res;
        if res < opts.tol {
            let report = SolveReport {
                iterations: it,
                damping: lam.to_f64().unwrap(),
                residual: res.to_f64().unwrap(),
                converged: true,
                per_equation: names
                    .iter()
                    .zip(&per)
                    .map(|(n, v)| EquationSup {
                        equation: n.to_string(),
                        sup: v.to_f64().unwrap(),
                    })
                    .collect(),
            };
            return Ok((x, report));
        }
        for (xi, fi) in x.iter_mut().zip(&fx) {
            for (a, b) in xi.iter_mut().zip(fi) {
                *a = *a * (T::one() - lam) + *b * lam;
            }
        }
    }
    Err(Error::NonConvergence {
        iterations: opts.max_iterations,
        residual: last.to_f64().unwrap_or(f64::NAN),
    })
}

fn su2k_functions<T: Real>(k: f64, grid: ThetaGrid<T>, a: Vec<Complex<T>>, b: Vec<Complex<T>>) -> (GridFunction<T>, GridFunction<T>) {
    let (_, exp_a_p, b_p) = su2k_constants(k);
    let lambda = T::of(2.0 / (k + 2.0));
    let a = GridFunction::new(grid, a)
        .expect("grid sized")
        .with_plateau(cr(-exp_a_p.ln()), Some(lambda));
    let b = GridFunction::new(grid, b)
        .expect("grid sized")
        .with_plateau(cr(b_p), Some(lambda))
        .with_decay(DecayModel::to_zero(T::one()));
    (a, b)
}

/// Solve the SU(2)_k system from `A = e^theta + A_plateau`, `B = B_plateau`.
pub fn solve_su2k<T: Real>(k: f64, grid: ThetaGrid<T>, opts: &SolveOptions<T>) -> Result<Su2kSolution<T>> {
    let model = ModelSpec::su2k(k)?;
    su2k_k(model)?;
    let kernels = KernelSet::new(model, grid)?;
    let (_, exp_a_p, b_p) = su2k_constants(k);
    let a0 = grid
        .thetas()
        .into_iter()
        .map(|t| Complex::new(t.exp() - T::of(exp_a_p.ln()), T::zero()))
        .collect();
    let b0 = vec![cr(b_p); grid.count()];
    let (x, report) = picard(&grid, vec![a0, b0], &["A", "B"], opts, |x| {
        let (a, b) = su2k_update(&kernels, &x[0], &x[1])?;
        Ok(vec![a, b])
    })?;
    let mut it = x.into_iter();
    let (a, b) = su2k_functions(k, grid, it.next().unwrap(), it.next().unwrap());
    Ok(Su2kSolution { a, b, report })
}

/// Solve the SU(3) system from `A_r = e^theta + A_r plateau`, `B = B plateau`.
pub fn solve_su3<T: Real>(grid: ThetaGrid<T>, opts: &SolveOptions<T>) -> Result<Su3Solution<T>> {
    let kernels = KernelSet::new(ModelSpec::Su3, grid)?;
    let p = su3_plateaus();
    let thetas = grid.thetas();
    let a_init = |e: Complex64| -> Vec<Complex<T>> {
        let a = -e.ln();
        thetas.iter().map(|&t| Complex::new(t.exp(), T::zero()) + c(a)).collect()
    };
    let x0 = vec![a_init(p[0]), a_init(p[1]), vec![c(p[2]); grid.count()], vec![c(p[3]); grid.count()]];
    let (x, report) = picard(&grid, x0, &["A1", "A2", "B0", "B0bar"], opts, |x| {
        let arr = [x[0].clone(), x[1].clone(), x[2].clone(), x[3].clone()];
        Ok(su3_update(&kernels, &arr)?.to_vec())
    })?;
    let [a1, a2, b0, b0bar] = su3_functions(grid, x.try_into().expect("four unknowns"));
    Ok(Su3Solution { a1, a2, b0, b0bar, report })
}

fn su3_functions<T: Real>(grid: ThetaGrid<T>, x: [Vec<Complex<T>>; 4]) -> [GridFunction<T>; 4] {
    let p = su3_plateaus();
    let lambda = Some(T::of(0.75));
    let [a1, a2, b0, b0b] = x;
    [
        GridFunction::new(grid, a1).expect("grid sized").with_plateau(c(-p[0].ln()), lambda),
        GridFunction::new(grid, a2).expect("grid sized").with_plateau(c(-p[1].ln()), lambda),
        GridFunction::new(grid, b0)
            .expect("grid sized")
            .with_plateau(c(p[2]), lambda)
            .with_decay(DecayModel::to_zero(T::one())),
        GridFunction::new(grid, b0b)
            .expect("grid sized")
            .with_plateau(c(p[3]), lambda)
            .with_decay(DecayModel::to_zero(T::one())),
    ]
}

fn profile<T: Real>(name: &'static str, grid: ThetaGrid<T>, lhs: &[Complex<T>], rhs: Vec<Complex<T>>) -> EquationResidual<T> {
    let values = lhs.iter().zip(&rhs).map(|(l, r)| l - r).collect();
    EquationResidual {
        equation: name,
        values: GridFunction::new(grid, values).expect("grid sized"),
        rhs: GridFunction::new(grid, rhs).expect("grid sized"),
    }
}

fn check_grid<T: Real>(kernels: &KernelSet<T>, fs: &[&GridFunction<T>]) -> Result<()> {
    for f in fs {
        if f.grid != *kernels.grid() {
            return Err(Error::GridMismatch("candidate and kernels live on different grids".into()));
        }
    }
    Ok(())
}

/// Left minus right side of every equation of the model, evaluated with the
/// solver's quadrature and tail closures.
pub fn residual<T: Real>(kernels: &KernelSet<T>, candidate: &Candidate<T>) -> Result<Vec<EquationResidual<T>>> {
    let grid = *kernels.grid();
    match candidate {
        Candidate::Su2k { k, a, b } => {
            if kernels.model != (ModelSpec::Su2k { k: *k }) {
                return Err(Error::Invalid("kernel set built for a different model".into()));
            }
            check_grid(kernels, &[a, b])?;
            let (fa, fb) = su2k_update(kernels, &a.values, &b.values)?;
            Ok(vec![profile("A", grid, &a.values, fa), profile("B", grid, &b.values, fb)])
        }
        Candidate::Su3 { a1, a2, b0, b0bar } => {
            check_grid(kernels, &[a1, a2, b0, b0bar])?;
            let x = [a1.values.clone(), a2.values.clone(), b0.values.clone(), b0bar.values.clone()];
            let [f1, f2, f3, f4] = su3_update(kernels, &x)?;
            Ok(vec![
                profile("A1", grid, &a1.values, f1),
                profile("A2", grid, &a2.values, f2),
                profile("B0", grid, &b0.values, f3),
                profile("B0bar", grid, &b0bar.values, f4),
            ])
        }
    }
}

/// Closed-form solution sampled on a grid. `A = -ln e^{-A}` uses the
/// imaginary part continued from the left end.
pub fn closed_form_candidate(cf: &ClosedFormSolution, grid: ThetaGrid<f64>) -> Result<Candidate<f64>> {
    let thetas = grid.thetas();
    let unwrap_neg_log = |ys: &[Complex64]| -> Vec<Complex64> {
        let mut prev: Option<f64> = None;
        ys.iter()
            .map(|y| {
                let mut a = -y.ln();
                if let Some(p) = prev {
                    a.im += ((p - a.im) / (2.0 * PI)).round() * 2.0 * PI;
                }
                prev = Some(a.im);
                a
            })
            .collect()
    };
    match cf.model {
        ModelSpec::Su2k { k } => {
            let pairs = crate::kernel::pool().install(|| {
                use rayon::prelude::*;
                thetas
                    .par_iter()
                    .map(|&t| cf.su2k_pair(Complex64::new(t, 0.0)))
                    .collect::<Result<Vec<_>>>()
            })?;
            let ea: Vec<Complex64> = pairs.iter().map(|p| p.0).collect();
            let b: Vec<Complex64> = pairs.iter().map(|p| p.1).collect();
            let (a, b) = su2k_functions(k, grid, unwrap_neg_log(&ea), b);
            Ok(Candidate::Su2k { k, a, b })
        }
        ModelSpec::Su3 => {
            let vals = crate::kernel::pool().install(|| {
                use rayon::prelude::*;
                thetas
                    .par_iter()
                    .map(|&t| cf.su3_all(Complex64::new(t, 0.0)))
                    .collect::<Result<Vec<_>>>()
            })?;
            let col = |j: usize| -> Vec<Complex64> { vals.iter().map(|v| v[j]).collect() };
            let x = [unwrap_neg_log(&col(0)), unwrap_neg_log(&col(1)), col(2), col(3)];
            let [a1, a2, b0, b0bar] = su3_functions(grid, x);
            Ok(Candidate::Su3 { a1, a2, b0, b0bar })
        }
    }
}

/// Per-equation sup of the closed-form residual on `window`.
pub fn closed_form_residual(cf: &ClosedFormSolution, grid: ThetaGrid<f64>, window: (f64, f64)) -> Result<Vec<(String, f64)>> {
    let kernels = KernelSet::new(cf.model, grid)?;
    let cand = closed_form_candidate(cf, grid)?;
    let range = grid.window(window.0, window.1);
    Ok(residual(&kernels, &cand)?
        .into_iter()
        .map(|r| (r.equation.to_string(), r.sup_on(range.clone())))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn options_are_validated() {
        let mut o = SolveOptions::<f64>::default();
        assert!(o.validate().is_ok());
        o.damping = 0.0;
        assert!(o.validate().is_err());
        o.damping = 0.5;
        o.tol = 1e-13;
        assert!(o.validate().is_err());
    }

    #[test]
    fn continuous_log_follows_winding() {
        let g = ThetaGrid::new(0.0, 63.0, 0.1).unwrap();
        // B circles around -i once: arg(i + B) winds by 2 pi
        let b: Vec<Complex64> = g.thetas().iter().map(|t| -Complex64::i() + Complex64::from_polar(1.0, t / 10.0)).collect();
        let l = continuous_log(&b, Complex64::i(), Complex64::new(0.0, 0.0), &g).unwrap();
        assert!((l.last().unwrap().im - 6.3).abs() < 1e-9);
        let mut jump = b.clone();
        jump[300] = -jump[300] + 2.0 * Complex64::i();
        assert!(matches!(continuous_log(&jump, Complex64::i(), Complex64::new(0.0, 0.0), &g), Err(Error::BranchJump { .. })));
    }

    #[test]
    fn report_serializes_with_required_keys() {
        let r = SolveReport {
            iterations: 3,
            damping: 0.5,
            residual: 1e-11,
            converged: true,
            per_equation: vec![],
        };
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        for key in ["iterations", "damping", "residual", "converged"] {
            assert!(v.get(key).is_some());
        }
    }

    #[test]
    fn zero_candidate_shape() {
        let k = 2.0;
        let g = ThetaGrid::new(-40.0, 4.0, 0.1).unwrap();
        let ks = KernelSet::new(ModelSpec::Su2k { k }, g).unwrap();
        let inf = Complex64::new(f64::INFINITY, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let cand = Candidate::Su2k {
            k,
            a: GridFunction::from_fn(g, |_| inf),
            b: GridFunction::from_fn(g, |_| zero),
        };
        let res = residual(&ks, &cand).unwrap();
        let shift = (2.0 * (PI / 4.0).cos()).ln();
        // the left tail closure still carries the model plateau; far from it
        // only the driving term remains
        for i in g.window(-10.0, 4.0) {
            let t = g.theta(i);
            assert!((res[0].rhs.values[i].re - (t.exp() - shift)).abs() < 1e-12);
            assert!(res[1].values.values[i].norm() < 1e-12);
        }
    }
}
