//! Affine changes of variable on the moment side.
//!
//! If a measure is pushed forward through `x ↦ θx + η`, its moments transform
//! through the binomial law implemented here; the interval `[α, β]` moves to
//! the interval with endpoints `θα + η` and `θβ + η` (swapped when `θ < 0`).
//! The derived quantities transform predictably: section widths pick up the
//! factor `|θ|^{j+1}`, canonical moments are invariant for `θ > 0`, and for
//! `θ < 0` the odd ones flip to their complements `P_{2k} - e_{2k+1}`. The
//! reflection `θ = -1, η = α + β` fixes the interval, which yields the
//! symmetry test.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::fparam::IntervalContext;
use crate::hankel::HermSequence;
use crate::linalg::{CMat, frobenius};
use crate::scalar::{Scalar, fmax, lit};
use crate::tol::Tol;

/// Row `j` of Pascal's triangle: `C(j, 0), …, C(j, j)`.
///
/// Exact 128-bit integer arithmetic is used as far as the values are exactly
/// representable there (`j ≤ 62` keeps every entry far below 2¹²⁷); beyond
/// that the row is accumulated multiplicatively in floating point.
fn binomial_row<T: Scalar>(j: usize) -> Vec<T> {
    let mut row = Vec::with_capacity(j + 1);
    if j <= 62 {
        let mut c: u128 = 1;
        row.push(T::one());
        for l in 1..=j {
            c = c * (j - l + 1) as u128 / l as u128;
            row.push(lit::<T>(c as f64));
        }
    } else {
        let mut c = 1.0f64;
        row.push(T::one());
        for l in 1..=j {
            c = c * (j - l + 1) as f64 / l as f64;
            row.push(lit::<T>(c));
        }
    }
    row
}

/// The binomial transform `w_j = Σ_{ℓ=0}^{j} C(j,ℓ) ψ^ℓ φ^{j-ℓ} s_ℓ` of a
/// sequence — the moment law of the affine substitution `x ↦ ψx + φ`.
///
/// With `φ = 0` this is the pure scaling `w_j = ψ^j s_j`; moments of a point
/// mass at `x` map to powers of `ψx + φ`.
///
/// # Errors
/// [`Error::InvalidInput`] when `φ` or `ψ` is non-finite.
pub fn binomial_transform<T: Scalar>(
    s: &HermSequence<T>,
    phi: Complex<T>,
    psi: Complex<T>,
) -> Result<HermSequence<T>> {
    for (name, z) in [("φ", phi), ("ψ", psi)] {
        if !num_traits::Float::is_finite(z.re) || !num_traits::Float::is_finite(z.im) {
            return Err(Error::InvalidInput(format!(
                "transform parameter {name} must be finite"
            )));
        }
    }
    let q = s.dim();
    let mut out = Vec::with_capacity(s.len());
    for j in 0..=s.kappa() {
        let row = binomial_row::<T>(j);
        let mut w = CMat::<T>::zeros(q, q);
        for (l, c) in row.iter().enumerate() {
            // ψ^ℓ φ^{j-ℓ}, with the empty product equal to one.
            let coeff = psi.powu(l as u32) * phi.powu((j - l) as u32);
            w += &s[l] * (coeff * Complex::new(*c, T::zero()));
        }
        out.push(w);
    }
    HermSequence::new(out)
}

/// Convenience for real transform parameters: the moment law of
/// `x ↦ theta·x + eta`.
///
/// # Errors
/// As [`binomial_transform`].
pub fn binomial_transform_real<T: Scalar>(
    s: &HermSequence<T>,
    eta: T,
    theta: T,
) -> Result<HermSequence<T>> {
    binomial_transform(
        s,
        Complex::new(eta, T::zero()),
        Complex::new(theta, T::zero()),
    )
}

/// The interval the substitution `x ↦ θx + η` maps `[α, β]` onto:
/// `[θα + η, θβ + η]` for `θ > 0`, endpoints swapped for `θ < 0`.
///
/// # Errors
/// [`Error::InvalidInput`] for `θ = 0` or non-finite parameters.
pub fn transformed_context<T: Scalar>(
    ctx: &IntervalContext<T>,
    eta: T,
    theta: T,
) -> Result<IntervalContext<T>> {
    if theta == T::zero() {
        return Err(Error::InvalidInput("interval transform needs θ ≠ 0".into()));
    }
    let (lo, hi) = if theta > T::zero() {
        (theta * ctx.alpha() + eta, theta * ctx.beta() + eta)
    } else {
        (theta * ctx.beta() + eta, theta * ctx.alpha() + eta)
    };
    IntervalContext::new(lo, hi, ctx.tol().clone())
}

/// Is `s` symmetric with respect to the reflection `x ↦ eta - x`?
///
/// True iff `s` equals its `(eta, -1)`-binomial transform, each entry
/// compared as `‖s_j - w_j‖_F ≤ eq_abs · max(1, ‖s_j‖_F)`. For Hausdorff
/// sequences on `[α, β]` with `eta = α + β` this is equivalent to all odd
/// canonical moments sitting at the center, `e_{2k+1} = ½P_{2k}`.
pub fn is_symmetric_sequence<T: Scalar>(s: &HermSequence<T>, eta: T, tol: &Tol<T>) -> bool {
    let Ok(w) = binomial_transform_real(s, eta, -T::one()) else {
        return false;
    };
    (0..=s.kappa()).all(|j| {
        frobenius(&(&s[j] - &w[j])) <= tol.eq_abs() * fmax(T::one(), frobenius(&s[j]))
    })
}
