//! Fractal calculus on middle-ε Cantor sets.

mod calculus;
mod cantor;
mod measure;
mod staircase;

pub use calculus::{fractal_derivative, fractal_integral, FractalIntegral};
pub use cantor::{build_cantor, indicator, CantorSpec, FractalApprox, Interval, MAX_BUILD_DEPTH};
pub use measure::{
    coarse_measure, estimate_dimension, gamma_factor, measure_table, MeasureRow,
    DEFAULT_DIMENSION_TOL,
};
pub use staircase::{Staircase, DEFAULT_STAIRCASE_DEPTH, MAX_STAIRCASE_DEPTH};
