//! Estimation of the memory parameter `d` of (possibly non-stationary)
//! Gaussian time series by regression of log wavelet-coefficient scale
//! estimates on the scale index.
//!
//! The scale spectrum can be estimated with the classical empirical
//! variance (`CL`), the squared median absolute deviation (`MAD`) or the
//! squared Croux-Rousseeuw Qn estimator (`CR`); the robust variants keep
//! working under additive outlier contamination. The crate also provides
//! an exact Gaussian ARFIMA(0,d,0) simulator, the asymptotic covariance
//! machinery behind the estimators' central limit theorems, and a
//! reproducible Monte-Carlo experiment harness.
//!
//! All numeric kernels are generic over the scalar type through the
//! [`Scalar`] trait; `f64` aliases for the main data types are exported at
//! the crate root.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, RemAssign, SubAssign};

use num_traits::{Float, FloatConst, FromPrimitive, Signed};

pub mod arfima;
pub mod asympvar;
pub mod error;
pub mod estimator;
pub mod harness;
pub mod numeric;
pub mod scale;
pub mod series;
pub mod wavelet;

pub use error::{Error, Result};
pub use scale::EstimatorKind;

/// Floating-point scalar usable by every numeric kernel in this crate.
///
/// Blanket-implemented for `f32` and `f64`. The bounds are the union of
/// what the kernels need: `num_traits` arithmetic, FFT compatibility and
/// thread safety.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + Signed
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + RemAssign
    + Sum<Self>
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Conversion from an `f64` constant (used for tabulated coefficients).
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 constant")
    }

    /// Conversion from a count.
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).unwrap_or_else(|| Self::of(n as f64))
    }

    /// The constant 2.
    fn two() -> Self {
        Self::one() + Self::one()
    }
}

impl<T> Scalar for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + Signed
        + AddAssign
        + SubAssign
        + MulAssign
        + DivAssign
        + RemAssign
        + Sum<T>
        + Debug
        + Display
        + LowerExp
        + Send
        + Sync
        + 'static
{
}

/// `f64` instantiations of the main data types.
pub type TimeSeries64 = series::TimeSeries<f64>;
pub type WaveletSpec64 = wavelet::WaveletSpec<f64>;
pub type ScalePyramid64 = wavelet::ScalePyramid<f64>;
pub type ScaleSpectrum64 = scale::ScaleSpectrum<f64>;
pub type RegressionWeights64 = estimator::RegressionWeights<f64>;
pub type MemoryEstimate64 = estimator::MemoryEstimate<f64>;
pub type CovMatrix64 = asympvar::CovMatrix<f64>;
pub type SpectralTable64 = asympvar::SpectralTable<f64>;
