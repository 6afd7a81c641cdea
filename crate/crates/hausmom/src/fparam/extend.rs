//! One-step extension: the matricial interval of admissible next moments and
//! the parametrized extension map.

use crate::error::{Error, Result};
use crate::hankel::HermSequence;
use crate::linalg::{self, CMat, hermitian_part, is_hermitian};
use crate::scalar::{Scalar, cre, lit};

use super::IntervalContext;
use super::envelope::envelope;
use super::params::require_in_class;

/// A matricial interval `[lower, upper]` in the Löwner order, with its width
/// and midpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct MatInterval<T: Scalar> {
    /// Lower endpoint.
    pub lower: CMat<T>,
    /// Upper endpoint.
    pub upper: CMat<T>,
    /// `upper - lower`.
    pub width: CMat<T>,
    /// `(lower + upper) / 2`.
    pub midpoint: CMat<T>,
}

/// The interval of admissible next moments: a matrix `X` extends
/// `s_0, …, s_κ` to a Hausdorff sequence `s_0, …, s_κ, X` on `[α, β]` exactly
/// when `u_κ ≼ X ≼ o_κ`.
///
/// # Errors
/// [`Error::NotInClass`] when `s` itself is not Hausdorff non-negative.
pub fn extension_interval<T: Scalar>(
    s: &HermSequence<T>,
    ctx: &IntervalContext<T>,
) -> Result<MatInterval<T>> {
    require_in_class(s, ctx)?;
    let env = envelope(s, ctx)?;
    let m = s.kappa();
    Ok(MatInterval {
        lower: env.lower[m].clone(),
        upper: env.upper[m].clone(),
        width: env.width[m].clone(),
        midpoint: env.midpoint[m].clone(),
    })
}

/// Appends the next moment `s_{κ+1} = u_κ + d_κ^{1/2} K d_κ^{1/2}`.
///
/// As `K` runs over `0 ≼ K ≼ I` this sweeps out exactly the admissible
/// extensions; `K = 0` lands on the lower endpoint, `K = I` on the upper,
/// `K = ½I` on the midpoint (the *central* extension).
///
/// # Errors
/// [`Error::NotInClass`] when `s` is not Hausdorff non-negative;
/// [`Error::InvalidInput`] when `K` has the wrong shape or is not Hermitian
/// with `0 ≼ K ≼ I` within tolerance.
pub fn extend<T: Scalar>(
    s: &HermSequence<T>,
    ctx: &IntervalContext<T>,
    k: &CMat<T>,
) -> Result<HermSequence<T>> {
    let tol = ctx.tol();
    require_in_class(s, ctx)?;
    let q = s.dim();
    if k.shape() != (q, q) {
        return Err(Error::InvalidInput(format!(
            "extension parameter has shape {:?}, expected ({q}, {q})",
            k.shape()
        )));
    }
    if !is_hermitian(k, tol)
        || !linalg::is_psd(k, tol)?
        || !linalg::loewner_leq(k, &CMat::identity(q, q), tol)?
    {
        return Err(Error::InvalidInput(
            "extension parameter must be Hermitian with 0 ≼ K ≼ I".into(),
        ));
    }
    let env = envelope(s, ctx)?;
    let m = s.kappa();
    let root = linalg::psd_sqrt(&env.width[m], tol).map_err(|_| {
        Error::Inconsistency(format!(
            "section width d_{m} lost positive semidefiniteness beyond slack"
        ))
    })?;
    let next = hermitian_part(&(&env.lower[m] + &root * k * &root));
    let mut mats = s.mats().to_vec();
    mats.push(next);
    Ok(HermSequence::from_mats_unchecked(mats))
}

/// [`extend`] with the scalar parameter `K = λI`, `λ ∈ [0, 1]`.
///
/// For this choice the next section width obeys the exact law
/// `d_{κ+1} = (β-α) λ (1-λ) d_κ`; in particular `λ ∈ {0, 1}` produces a
/// completely degenerate continuation and `λ = ½` the central one.
///
/// # Errors
/// As [`extend`], plus [`Error::InvalidInput`] for `λ` outside `[0, 1]`.
pub fn extend_scalar<T: Scalar>(
    s: &HermSequence<T>,
    ctx: &IntervalContext<T>,
    lambda: T,
) -> Result<HermSequence<T>> {
    if !(T::zero()..=T::one()).contains(&lambda) {
        return Err(Error::InvalidInput(format!(
            "extension parameter λ = {lambda} outside [0, 1]"
        )));
    }
    let q = s.dim();
    extend(s, ctx, &(CMat::identity(q, q) * cre(lambda)))
}

/// Central extension applied `steps` times: always appends the midpoint.
///
/// # Errors
/// As [`extend`].
pub fn extend_central<T: Scalar>(
    s: &HermSequence<T>,
    ctx: &IntervalContext<T>,
    steps: usize,
) -> Result<HermSequence<T>> {
    let mut out = s.clone();
    let half = lit::<T>(0.5);
    for _ in 0..steps {
        out = extend_scalar(&out, ctx, half)?;
    }
    Ok(out)
}
