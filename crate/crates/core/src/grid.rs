use std::ops::Range;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::Real;

/// Uniform rapidity grid `theta_i = theta_min + i step`, `i < count`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThetaGrid<T> {
    theta_min: T,
    theta_max: T,
    step: T,
    count: usize,
}

impl<T: Real> ThetaGrid<T> {
    pub const MIN_COUNT: usize = 64;

    /// `count = round((max - min)/step) + 1`; `theta_max` is snapped to the
    /// last grid point.
    pub fn new(theta_min: T, theta_max: T, step: T) -> Result<Self> {
        if !(step > T::zero() && step.is_finite()) {
            return Err(Error::Invalid(format!("grid step must be positive, got {step}")));
        }
        if !(theta_max > theta_min && theta_min.is_finite() && theta_max.is_finite()) {
            return Err(Error::Invalid(format!("empty grid [{theta_min}, {theta_max}]")));
        }
        let n = ((theta_max - theta_min) / step).round().to_usize().unwrap_or(0) + 1;
        if n < Self::MIN_COUNT {
            return Err(Error::Invalid(format!(
                "grid has {n} points, at least {} required",
                Self::MIN_COUNT
            )));
        }
        Ok(Self {
            theta_min,
            theta_max: theta_min + step * T::from_usize(n - 1).unwrap(),
            step,
            count: n,
        })
    }

    pub fn theta_min(&self) -> T {
        self.theta_min
    }

    pub fn theta_max(&self) -> T {
        self.theta_max
    }

    pub fn step(&self) -> T {
        self.step
    }

    pub fn count(&self) -> usize {
        self.count
    }

    #[inline]
    pub fn theta(&self, i: usize) -> T {
        self.theta_min + self.step * T::from_usize(i).unwrap()
    }

    pub fn thetas(&self) -> Vec<T> {
        (0..self.count).map(|i| self.theta(i)).collect()
    }

    /// Indices of grid points with `lo <= theta <= hi`.
    pub fn window(&self, lo: T, hi: T) -> Range<usize> {
        let tol = self.step * T::of(1e-9);
        let start = (0..self.count).find(|&i| self.theta(i) >= lo - tol).unwrap_or(self.count);
        let end = (0..self.count)
            .rev()
            .find(|&i| self.theta(i) <= hi + tol)
            .map_or(0, |i| i + 1);
        start..end.max(start)
    }

    /// Same spacing (to rounding) as `other`.
    pub fn same_spacing(&self, other: &Self) -> bool {
        (self.step - other.step).abs() <= T::epsilon() * T::of(16.0) * self.step
    }

    /// The same grid in another scalar type.
    pub fn cast<U: Real>(&self) -> ThetaGrid<U> {
        ThetaGrid {
            theta_min: U::of(self.theta_min.to_f64().unwrap()),
            theta_max: U::of(self.theta_max.to_f64().unwrap()),
            step: U::of(self.step.to_f64().unwrap()),
            count: self.count,
        }
    }
}

/// Behaviour of a sampled function beyond the right end of its grid:
/// `f(theta) ~ limit + a e^{-rate_re (theta - theta_max)}` for the real
/// part, and likewise for the imaginary part with its own rate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecayModel<T> {
    pub limit: Complex<T>,
    pub rate_re: T,
    pub rate_im: T,
}

impl<T: Real> DecayModel<T> {
    pub fn to_zero(rate: T) -> Self {
        Self {
            limit: Complex::new(T::zero(), T::zero()),
            rate_re: rate,
            rate_im: rate,
        }
    }
}

/// Complex samples on a grid plus the tail metadata used by convolutions.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction<T> {
    pub grid: ThetaGrid<T>,
    pub values: Vec<Complex<T>>,
    /// `theta -> -infinity` limit; the left tail is `plateau + c e^{rate (theta - theta_min)}`.
    pub plateau: Option<Complex<T>>,
    pub plateau_rate: Option<T>,
    pub decay: Option<DecayModel<T>>,
}

impl<T: Real> GridFunction<T> {
    pub fn new(grid: ThetaGrid<T>, values: Vec<Complex<T>>) -> Result<Self> {
        if values.len() != grid.count() {
            return Err(Error::GridMismatch(format!(
                "{} samples for a grid of {} points",
                values.len(),
                grid.count()
            )));
        }
        Ok(Self {
            grid,
            values,
            plateau: None,
            plateau_rate: None,
            decay: None,
        })
    }

    pub fn from_fn<F: FnMut(T) -> Complex<T>>(grid: ThetaGrid<T>, mut f: F) -> Self {
        let values = grid.thetas().into_iter().map(&mut f).collect();
        Self {
            grid,
            values,
            plateau: None,
            plateau_rate: None,
            decay: None,
        }
    }

    pub fn constant(grid: ThetaGrid<T>, c: Complex<T>) -> Self {
        let mut f = Self::from_fn(grid, |_| c);
        f.plateau = Some(c);
        f.decay = Some(DecayModel {
            limit: c,
            rate_re: T::one(),
            rate_im: T::one(),
        });
        f
    }

    pub fn with_plateau(mut self, plateau: Complex<T>, rate: Option<T>) -> Self {
        self.plateau = Some(plateau);
        self.plateau_rate = rate;
        self
    }

    pub fn with_decay(mut self, decay: DecayModel<T>) -> Self {
        self.decay = Some(decay);
        self
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sup_norm(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.norm()))
    }

    /// `max |self - other|` over the index range.
    pub fn sup_diff(&self, other: &Self, range: Range<usize>) -> Result<T> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch("functions live on different grids".into()));
        }
        Ok(self.values[range.clone()]
            .iter()
            .zip(&other.values[range])
            .fold(T::zero(), |m, (a, b)| m.max((a - b).norm())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn count_and_snap() {
        let g = ThetaGrid::<f64>::new(-10.0, 3.0, 0.025).unwrap();
        assert_eq!(g.count(), 521);
        assert!((g.theta(520) - 3.0).abs() < 1e-12);
        assert!(ThetaGrid::new(0.0, 1.0, 0.1).is_err());
        assert!(ThetaGrid::new(0.0, 10.0, -0.1).is_err());
    }

    #[test]
    fn window_bounds() {
        let g = ThetaGrid::<f64>::new(-40.0, 6.0, 0.5).unwrap();
        let w = g.window(-10.0, 3.0);
        assert!((g.theta(w.start) + 10.0).abs() < 1e-12);
        assert!((g.theta(w.end - 1) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn mismatch_detected() {
        let g = ThetaGrid::new(0.0, 10.0, 0.1).unwrap();
        assert!(GridFunction::new(g, vec![Complex::new(0.0, 0.0); 3]).is_err());
    }
}
