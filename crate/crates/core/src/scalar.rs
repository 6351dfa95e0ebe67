//! Scalar abstraction.
//!
//! Everything in the crate is generic over a real field `T` and works with
//! `Complex<T>` entries. `f64` is the workhorse; `f32` is supported with
//! looser default tolerances.

use std::fmt::{Debug, Display};

use nalgebra::RealField;
use num_complex::Complex;
use num_traits::ToPrimitive;

/// Real scalar usable as the base field of every operator in the crate.
pub trait Real: RealField + Copy + ToPrimitive + Debug + Display {
    /// Default relative tolerance for hermiticity / positivity gates.
    fn default_rtol() -> Self;
    /// Default absolute tolerance for "is zero" checks.
    fn default_atol() -> Self;

    /// Converts an `f64` constant into the scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        nalgebra::convert(x)
    }

    #[inline]
    fn of_usize(n: usize) -> Self {
        nalgebra::convert(n as f64)
    }

    /// Lossy conversion used for reporting.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    fn default_rtol() -> Self {
        1e-9
    }
    fn default_atol() -> Self {
        1e-12
    }
}

impl Real for f32 {
    fn default_rtol() -> Self {
        1e-4
    }
    fn default_atol() -> Self {
        1e-5
    }
}

/// Complex number with components in `T`.
pub type C<T> = Complex<T>;

#[inline]
pub(crate) fn cplx<T: Real>(re: f64, im: f64) -> C<T> {
    Complex::new(T::lit(re), T::lit(im))
}

#[inline]
pub(crate) fn real<T: Real>(re: T) -> C<T> {
    Complex::new(re, T::zero())
}

/// Modulus of a complex scalar.
#[inline]
pub(crate) fn cabs<T: Real>(z: C<T>) -> T {
    nalgebra::ComplexField::modulus(z)
}
