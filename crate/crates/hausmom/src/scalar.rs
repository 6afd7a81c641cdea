//! Scalar abstraction underneath the whole crate.

use num_complex::Complex;

/// Real scalar types the library computes over.
///
/// Combines nalgebra's [`RealField`](nalgebra::RealField) (the SVD and
/// eigendecomposition machinery) with num-traits' [`Float`](num_traits::Float)
/// and [`FromPrimitive`](num_traits::FromPrimitive) (finiteness checks and
/// literal conversions). Blanket-implemented, which in practice means `f32`
/// and `f64`.
pub trait Scalar:
    nalgebra::RealField + num_traits::Float + num_traits::FromPrimitive + Copy
{
}

impl<T> Scalar for T where
    T: nalgebra::RealField + num_traits::Float + num_traits::FromPrimitive + Copy
{
}

// `RealField` and `Float` overlap on several method names (`abs`, `sqrt`,
// `max`, ...), which makes direct method calls ambiguous in generic code. The
// helpers below pick one path once so call sites stay readable.

/// Convert an `f64` literal into `T`.
pub(crate) fn lit<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("float literal must convert")
}

/// `x` as a complex number with zero imaginary part.
pub(crate) fn cre<T: Scalar>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

pub(crate) fn fabs<T: Scalar>(x: T) -> T {
    num_traits::Float::abs(x)
}

pub(crate) fn fsqrt<T: Scalar>(x: T) -> T {
    num_traits::Float::sqrt(x)
}

pub(crate) fn fmax<T: Scalar>(a: T, b: T) -> T {
    if a > b { a } else { b }
}

pub(crate) fn fpowi<T: Scalar>(x: T, n: i32) -> T {
    num_traits::Float::powi(x, n)
}

/// Fused `a·b + c` with a single rounding.
pub(crate) fn ffma<T: Scalar>(a: T, b: T, c: T) -> T {
    num_traits::Float::mul_add(a, b, c)
}
