//! Exact solutions of the massless N=2 TBA equations for SU(2)_k and SU(3)_1,
//! an independent fixed-point solver for the same equations, and numerical
//! checks of the functional relations and index formulas built on them.
//!
//! Special functions and closed forms are evaluated in `f64` (with
//! double-double accumulation where cancellation demands it). The grid,
//! kernels, quadrature and solver are generic over [`Real`]; the aliases at
//! the bottom of this file fix the scalar to `f64`.

pub mod closedform;
pub mod dd;
pub mod error;
pub mod grid;
pub mod indices;
pub mod kernel;
pub mod output;
pub mod quad;
pub mod relations;
pub mod solver;
pub mod specfun;

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

pub use closedform::{ClosedFormSolution, EnergyMap, ModelSpec};
pub use error::{Error, Result};
pub use grid::{DecayModel, GridFunction, ThetaGrid};
pub use kernel::KernelSet;
pub use solver::{SolveOptions, SolveReport};
pub use specfun::{EvalResult, Method, Su3Phi};

/// Floating-point scalar accepted by the generic numerical core.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 is representable")
    }
}

impl<T> Real for T where
    T: Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
}

pub type Grid = ThetaGrid<f64>;
pub type Samples = GridFunction<f64>;
pub type Kernels = KernelSet<f64>;
pub type Options = SolveOptions<f64>;
pub type Complex = num_complex::Complex64;
