//! TBA kernels and the trapezoid convolution `(K * f)(theta) = int dtheta'/2pi K(theta - theta') f(theta')`.
//!
//! Every kernel here has the form `K_a(x) = sin a / (cosh x + cos a)`, with
//! primitive `2 atan(tan(a/2) tanh(x/2))` and total mass `2a`. Beyond the
//! grid the integrand is continued with the tail model of [`Tails`]; those
//! pieces are integrated exactly (constants) or by Gauss-Kronrod on tables
//! built once per grid (exponentials). The finite part is the trapezoid rule
//! with Euler-Maclaurin end corrections through `h^4`.

use std::borrow::Cow;
use std::sync::OnceLock;

use num_complex::Complex;
use rayon::prelude::*;
use rayon::ThreadPool;

use crate::closedform::ModelSpec;
use crate::error::{Error, Result};
use crate::grid::{GridFunction, ThetaGrid};
use crate::quad::integrate;
use crate::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KernelKind {
    /// `1/cosh x`
    Sech,
    /// `sin(pi/3)/(cosh x - cos(pi/3))`
    PhiMinus,
    /// `sin(pi/3)/(cosh x + cos(pi/3))`
    PhiPlus,
}

impl KernelKind {
    /// `(sin a, cos a, tan(a/2), a)`.
    fn params(self) -> (f64, f64, f64, f64) {
        use std::f64::consts::PI;
        let s3 = 3f64.sqrt();
        match self {
            Self::Sech => (1.0, 0.0, 1.0, PI / 2.0),
            Self::PhiMinus => (s3 / 2.0, -0.5, s3, 2.0 * PI / 3.0),
            Self::PhiPlus => (s3 / 2.0, 0.5, 1.0 / s3, PI / 3.0),
        }
    }

    pub fn eval<T: Real>(self, x: T) -> T {
        let (s, c, _, _) = self.params();
        let x = x.abs();
        if x > T::of(700.0) {
            return T::zero();
        }
        T::of(s) / (x.cosh() + T::of(c))
    }

    /// `(K, K', K'', K''')` at `x`.
    pub fn derivatives<T: Real>(self, x: T) -> [T; 4] {
        let (s, c, _, _) = self.params();
        if x.abs() > T::of(700.0) {
            return [T::zero(); 4];
        }
        let s = T::of(s);
        let r = T::one() / (x.cosh() + T::of(c));
        let (u, v) = (x.sinh() * r, x.cosh() * r);
        let six = T::of(6.0);
        [
            s * r,
            -s * r * u,
            -s * r * (v - T::of(2.0) * u * u),
            -s * r * (u - six * v * u + six * u * u * u),
        ]
    }

    /// `int K dtheta / 2pi` over the real line.
    pub fn integral_over_2pi(self) -> f64 {
        self.params().3 / std::f64::consts::PI
    }

    /// `int_0^x K`.
    pub fn primitive<T: Real>(self, x: T) -> T {
        let (_, _, t, _) = self.params();
        T::of(2.0) * (T::of(t) * (x / T::of(2.0)).tanh()).atan()
    }

    /// `int_x^inf K dtheta/2pi` for `x >= 0`, without cancellation at large `x`.
    pub fn upper_tail<T: Real>(self, x: T) -> T {
        let (_, _, t, _) = self.params();
        let t = T::of(t);
        let two = T::of(2.0);
        let tau = (x / two).tanh();
        let one_minus = two / (x.exp() + T::one());
        two * (t * one_minus / (T::one() + t * t * tau)).atan() / T::PI() / two
    }

    /// `int_0^inf K(x + t) e^{-rate t} dt / 2pi`.
    pub fn exp_tail<T: Real>(self, x: T, rate: T) -> Result<T> {
        let end = T::of(38.0) / (T::one() + rate);
        let tol = T::of(1e-13).max(T::epsilon() * T::of(64.0));
        let q = integrate(|t: T| self.eval(x + t) * (-rate * t).exp(), T::zero(), end, T::zero(), tol)?;
        Ok(q.value / (T::of(2.0) * T::PI()))
    }
}

/// Continuation of a sampled function beyond its grid:
/// `f = left + left_amp e^{left_rate (theta - theta_min)}` on the left and
/// `f = right + Re(right_amp) e^{-rate_re (theta - theta_max)} + i Im(right_amp) e^{-rate_im (theta - theta_max)}`
/// on the right. Zero amplitudes mean constant extension.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tails<T> {
    pub left: Complex<T>,
    pub left_amp: Complex<T>,
    pub left_rate: T,
    pub right: Complex<T>,
    pub right_amp: Complex<T>,
    pub right_rate_re: T,
    pub right_rate_im: T,
}

impl<T: Real> Tails<T> {
    /// Constant continuation by the end values.
    pub fn flat(values: &[Complex<T>]) -> Self {
        let z = Complex::new(T::zero(), T::zero());
        Self {
            left: values[0],
            left_amp: z,
            left_rate: T::one(),
            right: values[values.len() - 1],
            right_amp: z,
            right_rate_re: T::one(),
            right_rate_im: T::one(),
        }
    }

    /// Tail model from a function's plateau/decay metadata; amplitudes are
    /// fixed by the end samples.
    pub fn of(f: &GridFunction<T>) -> Self {
        let mut t = Self::flat(&f.values);
        let first = f.values[0];
        let last = f.values[f.values.len() - 1];
        if let Some(p) = f.plateau {
            t.left = p;
            if let Some(rate) = f.plateau_rate {
                t.left_amp = first - p;
                t.left_rate = rate;
            }
        }
        if let Some(d) = f.decay {
            t.right = d.limit;
            t.right_amp = last - d.limit;
            t.right_rate_re = d.rate_re;
            t.right_rate_im = d.rate_im;
        }
        t
    }

    /// First three derivatives of the left and right continuations at the grid ends.
    fn end_derivatives(&self) -> ([Complex<T>; 3], [Complex<T>; 3]) {
        let mut l = [self.left_amp; 3];
        let mut r = [self.right_amp; 3];
        let (mut pl, mut pre, mut pim) = (T::one(), T::one(), T::one());
        for n in 0..3 {
            pl = pl * self.left_rate;
            pre = pre * -self.right_rate_re;
            pim = pim * -self.right_rate_im;
            l[n] = self.left_amp * pl;
            r[n] = Complex::new(self.right_amp.re * pre, self.right_amp.im * pim);
        }
        (l, r)
    }
}

struct TailTable<T> {
    kind: KernelKind,
    rate: T,
    /// `exp_tail(m h, rate)` for `m < count`.
    values: Vec<T>,
}

/// Kernel samples for one model on one grid.
pub struct KernelSet<T> {
    pub model: ModelSpec,
    grid: ThetaGrid<T>,
    kinds: Vec<KernelKind>,
    /// `samples[k][m] = K_k(m h)`, `m < count`; kernels are even.
    samples: Vec<Vec<T>>,
    tables: Vec<TailTable<T>>,
}

/// Thread pool for row-parallel convolutions, sized by `TBA_THREADS` if set.
pub fn pool() -> &'static ThreadPool {
    static POOL: OnceLock<ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(n) = std::env::var("TBA_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
            b = b.num_threads(n.max(1));
        }
        b.build().expect("thread pool")
    })
}

impl<T: Real> KernelSet<T> {
    pub fn new(model: ModelSpec, grid: ThetaGrid<T>) -> Result<Self> {
        let (kinds, rates) = match model {
            ModelSpec::Su2k { k } => (vec![KernelKind::Sech], vec![2.0 / (k + 2.0), 2.0]),
            ModelSpec::Su3 => (vec![KernelKind::PhiMinus, KernelKind::PhiPlus], vec![0.75, 1.0, 2.0]),
        };
        let rates: Vec<T> = rates.into_iter().map(T::of).collect();
        Self::with_kinds(model, grid, &kinds, &rates)
    }

    /// Kernel set with explicit kernels and precomputed exponential-tail rates.
    pub fn with_kinds(model: ModelSpec, grid: ThetaGrid<T>, kinds: &[KernelKind], rates: &[T]) -> Result<Self> {
        let h = grid.step();
        let n = grid.count();
        let samples = kinds
            .iter()
            .map(|&k| (0..n).map(|m| k.eval(h * T::from_usize(m).unwrap())).collect())
            .collect();
        let mut tables = Vec::new();
        for &kind in kinds {
            for &rate in rates {
                if !(rate > T::zero()) {
                    return Err(Error::Invalid(format!("tail rate must be positive, got {rate}")));
                }
                let values = pool().install(|| {
                    (0..n)
                        .into_par_iter()
                        .map(|m| kind.exp_tail(h * T::from_usize(m).unwrap(), rate))
                        .collect::<Result<Vec<T>>>()
                })?;
                tables.push(TailTable { kind, rate, values });
            }
        }
        Ok(Self {
            model,
            grid,
            kinds: kinds.to_vec(),
            samples,
            tables,
        })
    }

    pub fn grid(&self) -> &ThetaGrid<T> {
        &self.grid
    }

    pub fn kinds(&self) -> &[KernelKind] {
        &self.kinds
    }

    /// `K(m h)` for `m = 0..count`.
    pub fn samples(&self, kind: KernelKind) -> Result<&[T]> {
        Ok(&self.samples[self.index(kind)?])
    }

    fn index(&self, kind: KernelKind) -> Result<usize> {
        self.kinds
            .iter()
            .position(|&k| k == kind)
            .ok_or_else(|| Error::Invalid(format!("kernel {kind:?} not in this set")))
    }

    fn exp_weights(&self, kind: KernelKind, rate: T) -> Result<Cow<'_, [T]>> {
        let tol = T::of(1e-12) * rate.abs().max(T::one());
        if let Some(t) = self.tables.iter().find(|t| t.kind == kind && (t.rate - rate).abs() <= tol) {
            return Ok(Cow::Borrowed(&t.values));
        }
        let h = self.grid.step();
        (0..self.grid.count())
            .map(|m| kind.exp_tail(h * T::from_usize(m).unwrap(), rate))
            .collect::<Result<Vec<T>>>()
            .map(Cow::Owned)
    }

    /// Convolution of a grid function, closing the tails with its metadata.
    pub fn convolve(&self, kind: KernelKind, f: &GridFunction<T>) -> Result<GridFunction<T>> {
        let g = &self.grid;
        let fg = &f.grid;
        let same = g.count() == fg.count()
            && g.same_spacing(fg)
            && (g.theta_min() - fg.theta_min()).abs() <= g.step() * T::of(1e-9);
        if !same {
            return Err(Error::GridMismatch(format!(
                "kernel grid [{}, {}; {}] vs function grid [{}, {}; {}]",
                g.theta_min(),
                g.theta_max(),
                g.step(),
                fg.theta_min(),
                fg.theta_max(),
                fg.step()
            )));
        }
        let values = self.convolve_values(kind, &f.values, &Tails::of(f))?;
        GridFunction::new(f.grid, values)
    }

    /// Convolution of raw samples with an explicit tail model.
    pub fn convolve_values(&self, kind: KernelKind, f: &[Complex<T>], tails: &Tails<T>) -> Result<Vec<Complex<T>>> {
        let n = self.grid.count();
        if f.len() != n {
            return Err(Error::GridMismatch(format!("{} samples for {} grid points", f.len(), n)));
        }
        let k = &self.samples[self.index(kind)?];
        let zero = Complex::new(T::zero(), T::zero());
        let w_left = if tails.left_amp == zero { None } else { Some(self.exp_weights(kind, tails.left_rate)?) };
        let w_re = if tails.right_amp.re == T::zero() {
            None
        } else {
            Some(self.exp_weights(kind, tails.right_rate_re)?)
        };
        let w_im = if tails.right_amp.im == T::zero() {
            None
        } else {
            Some(self.exp_weights(kind, tails.right_rate_im)?)
        };
        let h = self.grid.step();
        let two_pi = T::of(2.0) * T::PI();
        let half = T::of(0.5);
        let em2 = h * h / T::of(12.0);
        let em4 = h * h * h * h / T::of(720.0);
        let (fl, fr) = (f[0], f[n - 1]);
        let (dl, dr) = tails.end_derivatives();
        let three = T::of(3.0);
        // g(t) = K(theta_i - t) f(t): first and third derivatives at an end where theta_i - t = x
        let ends = |x: T, f0: Complex<T>, d: &[Complex<T>; 3]| {
            let kd = kind.derivatives(x);
            let g1 = f0 * (-kd[1]) + d[0] * kd[0];
            let g3 = f0 * (-kd[3]) + d[0] * (three * kd[2]) - d[1] * (three * kd[1]) + d[2] * kd[0];
            (g1, g3)
        };
        let row = |i: usize| -> Complex<T> {
            let mut acc = zero;
            for j in 0..i {
                acc = acc + f[j] * k[i - j];
            }
            for j in i..n {
                acc = acc + f[j] * k[j - i];
            }
            acc = acc - (fl * k[i] + fr * k[n - 1 - i]) * half;
            let x = h * T::from_usize(i).unwrap();
            let y = h * T::from_usize(n - 1 - i).unwrap();
            let (a1, a3) = ends(x, fl, &dl);
            let (b1, b3) = ends(-y, fr, &dr);
            let mut v = (acc * h - (b1 - a1) * em2 + (b3 - a3) * em4) / two_pi;
            v = v + tails.left * kind.upper_tail(x) + tails.right * kind.upper_tail(y);
            if let Some(w) = &w_left {
                v = v + tails.left_amp * w[i];
            }
            if let Some(w) = &w_re {
                v.re = v.re + tails.right_amp.re * w[n - 1 - i];
            }
            if let Some(w) = &w_im {
                v.im = v.im + tails.right_amp.im * w[n - 1 - i];
            }
            v
        };
        Ok(pool().install(|| (0..n).into_par_iter().map(row).collect()))
    }
}
