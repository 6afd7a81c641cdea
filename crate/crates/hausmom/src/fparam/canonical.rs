//! Matricial canonical moments: the interval-free encoding `e_0, …, e_κ` of
//! a Hausdorff moment sequence, and both directions of the bijection.

use crate::error::{Error, Result};
use crate::hankel::{self, HermSequence};
use crate::linalg::{
    self, CMat, eig_map, frobenius, herm_eigen, hermitian_part, is_hermitian,
};
use crate::scalar::{Scalar, cre, fmax};
use crate::tol::Tol;

use super::IntervalContext;
use super::envelope::envelope;
use super::params::{first_violation_in, interleave_floors, interleave_gaps};

/// Canonical moments of a sequence, with their companion section widths and
/// range projections.
///
/// `e_0 = s_0` carries the total mass; each later `e_j` measures — relative
/// to the section width `d_{j-1}` — where `s_j` sits inside its admissible
/// matricial interval: `0` at the lower endpoint, the projection `P_{j-1}`
/// at the upper one. The constraint is `0 ≼ e_j ≼ P_{j-1}`, where
/// `P_{j-1}` projects onto the range of `d_{j-1}`; all `e_j` are kept inside
/// that range, so the encoding is insensitive to the interval's position and
/// scale.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalMoments<T: Scalar> {
    /// Canonical moments `e_0, …, e_κ`.
    pub e: Vec<CMat<T>>,
    /// Companion section widths `d_0, …, d_κ`.
    pub width: Vec<CMat<T>>,
    /// Companion range projections `P_j` of each `d_j`.
    pub proj: Vec<CMat<T>>,
}

/// Collapse rule for the running width chain: a computed section width
/// counts as zero when its size falls below the rank resolution *relative to
/// the width it was produced from* (or when that parent has already
/// collapsed). The parent scale matters: after a collapse the arithmetic
/// leaves rounding junk whose own largest singular value is itself junk, so
/// a purely matrix-local relative rank cutoff would fabricate a
/// positive-dimensional section out of noise — and its direction is
/// arbitrary, breaking every later containment check.
pub(crate) fn snap_chain_width<T: Scalar>(
    raw: CMat<T>,
    parent_norm: T,
    eta: T,
    tol: &Tol<T>,
) -> CMat<T> {
    if parent_norm == T::zero() || frobenius(&raw) <= tol.rank_rel() * eta * parent_norm {
        CMat::zeros(raw.nrows(), raw.ncols())
    } else {
        raw
    }
}

/// Spectral clamp of a Hermitian matrix into `[lo, hi]` (entry-wise on
/// eigenvalues; `hi = None` leaves the top unconstrained).
fn spectral_clamp<T: Scalar>(a: &CMat<T>, lo: T, hi: Option<T>) -> CMat<T> {
    let (vals, vecs) = herm_eigen(a);
    eig_map(&vals, &vecs, |x| {
        let x = fmax(x, lo);
        match hi {
            Some(h) if x > h => h,
            _ => x,
        }
    })
}

/// Computes the canonical moments of `s` on the interval of `ctx`.
///
/// `e_0 = f_0 = s_0` and, for `j ≥ 1`,
/// `e_j = (d_{j-1}^{1/2})⁺ f_{2j} (d_{j-1}^{1/2})⁺`, compressed back onto the
/// range of `d_{j-1}` to keep `0 ≼ e_j ≼ P_{j-1}` machine-checkable. The
/// inverse relations `f_{2j} = d_{j-1}^{1/2} e_j d_{j-1}^{1/2}` and
/// `f_{2j-1} = d_{j-1}^{1/2} (I - e_j) d_{j-1}^{1/2}` then hold within
/// tolerance.
///
/// # Errors
/// * [`Error::NotHermitian`] when some `s_j` is not Hermitian.
/// * [`Error::NotInClass`] naming the first parameter `f_j` that is not PSD,
///   when `s` is outside the Hausdorff class of `[α, β]`.
/// * [`Error::Inconsistency`] when the two independent formulas for the
///   section widths disagree beyond rounding (debug builds).
pub fn canonical_moments<T: Scalar>(
    s: &HermSequence<T>,
    ctx: &IntervalContext<T>,
) -> Result<CanonicalMoments<T>> {
    let tol = ctx.tol();
    if let Some(i) = s.first_non_hermitian(tol) {
        return Err(Error::NotHermitian { context: format!("s[{i}]") });
    }
    let env = envelope(s, ctx)?;
    let f = interleave_gaps(&env.lower_gap, &env.upper_gap);
    let floors = interleave_floors(&env.lower_gap_floor, &env.upper_gap_floor);
    if let Some(j) = first_violation_in(&f, &floors, tol, false)? {
        return Err(Error::NotInClass { class: "Hausdorff non-negative", param: "f", index: j });
    }

    // Snap the width chain: beyond a collapse the envelope formulas only
    // produce rounding junk, which must not masquerade as live directions.
    let eta = ctx.width();
    let mut d = Vec::with_capacity(env.width.len());
    for (j, raw) in env.width.into_iter().enumerate() {
        let dj = if j == 0 {
            raw
        } else {
            snap_chain_width(raw, frobenius(&d[j - 1]), eta, tol)
        };
        d.push(dj);
    }
    if cfg!(debug_assertions) {
        cross_check_widths(&d, &f, ctx)?;
    }

    let mut proj = Vec::with_capacity(d.len());
    for dj in &d {
        proj.push(linalg::range_projection(dj, tol)?);
    }

    let mut e = Vec::with_capacity(d.len());
    e.push(f[0].clone());
    for j in 1..=s.kappa() {
        let root = linalg::psd_sqrt(&d[j - 1], tol).map_err(|_| {
            Error::Inconsistency(format!(
                "section width d_{} lost positive semidefiniteness beyond slack",
                j - 1
            ))
        })?;
        let root_pinv = linalg::pinv(&root, tol)?;
        let raw = &root_pinv * &f[2 * j] * &root_pinv;
        let p = &proj[j - 1];
        e.push(hermitian_part(&(p * raw * p)));
    }

    Ok(CanonicalMoments { e, width: d, proj })
}

/// Debug-build consistency check: the envelope widths must match the
/// harmonic-mean formula `d_0 = (β-α) f_0`, `d_k = (β-α)(f_{2k-1} ∥ f_{2k})`.
fn cross_check_widths<T: Scalar>(
    d: &[CMat<T>],
    f: &[CMat<T>],
    ctx: &IntervalContext<T>,
) -> Result<()> {
    let tol = ctx.tol();
    let ten = crate::scalar::lit::<T>(10.0);
    for (k, dk) in d.iter().enumerate() {
        let alt = if k == 0 {
            &f[0] * cre(ctx.width())
        } else {
            linalg::parallel_sum(&f[2 * k - 1], &f[2 * k], tol)? * cre(ctx.width())
        };
        let gap = frobenius(&(dk - &alt));
        if gap > ten * tol.eq_threshold(frobenius(dk)) {
            return Err(Error::Inconsistency(format!(
                "width d_{k}: envelope and harmonic-mean formulas disagree by {gap}"
            )));
        }
    }
    Ok(())
}

/// Everything the inverse walk produces before moments are rebuilt.
pub(crate) struct CanonicalWalk<T: Scalar> {
    /// The accepted (projected, clamped) canonical moments.
    pub e: Vec<CMat<T>>,
    /// Section widths from the recursion `d_k = η·d^{1/2} e_k (P - e_k) d^{1/2}`.
    pub width: Vec<CMat<T>>,
    /// Range projections of the widths.
    pub proj: Vec<CMat<T>>,
    /// The interleaved parameters rebuilt from `e`.
    pub f: Vec<CMat<T>>,
}

/// Validates the input list against the canonical-moment class with interval
/// length `eta` and, on success, rebuilds widths, projections and parameters.
pub(crate) fn walk_canonical<T: Scalar>(
    e_in: &[CMat<T>],
    eta: T,
    tol: &Tol<T>,
) -> Result<CanonicalWalk<T>> {
    if eta < T::zero() || !num_traits::Float::is_finite(eta) {
        return Err(Error::InvalidInput(
            "interval length for a canonical-moment family must be finite and ≥ 0".into(),
        ));
    }
    let Some(first) = e_in.first() else {
        return Err(Error::InvalidInput("canonical-moment list must be non-empty".into()));
    };
    let q = first.nrows();
    for (k, m) in e_in.iter().enumerate() {
        if m.shape() != (q, q) {
            return Err(Error::InvalidInput(format!(
                "canonical moment {k} has shape {:?}, expected ({q}, {q})",
                m.shape()
            )));
        }
        if !linalg::all_finite(m) {
            return Err(Error::InvalidInput(format!("canonical moment {k} has non-finite entries")));
        }
        if !is_hermitian(m, tol) {
            return Err(Error::CanonicalOutOfRange {
                index: k,
                detail: "not Hermitian within tolerance".into(),
            });
        }
    }

    if !linalg::is_psd(&e_in[0], tol)? {
        return Err(Error::CanonicalOutOfRange {
            index: 0,
            detail: "e_0 is not positive semidefinite within tolerance".into(),
        });
    }
    // e_0 is a mass, not a ratio: clamp only from below.
    let e0 = spectral_clamp(&hermitian_part(&e_in[0]), T::zero(), None);
    let d0 = &e0 * cre(eta);

    let mut e = vec![e0];
    let mut width = vec![d0];
    let mut proj = vec![linalg::range_projection(&width[0], tol)?];
    let mut f = vec![e[0].clone()];

    for k in 1..e_in.len() {
        let cand = hermitian_part(&e_in[k]);
        if !linalg::is_psd(&cand, tol)? {
            return Err(Error::CanonicalOutOfRange {
                index: k,
                detail: "not positive semidefinite within tolerance".into(),
            });
        }
        let p = proj[k - 1].clone();
        if !linalg::loewner_leq(&cand, &p, tol)? {
            return Err(Error::CanonicalOutOfRange {
                index: k,
                detail: "exceeds the range projection of the previous width".into(),
            });
        }
        // Compress onto range(P_{k-1}); then clamp the spectrum into [0, 1].
        // Both steps only move eigenvalues by at most the admitted slack.
        let ek = spectral_clamp(&hermitian_part(&(&p * &cand * &p)), T::zero(), Some(T::one()));
        let root = linalg::psd_sqrt(&width[k - 1], tol).map_err(|_| {
            Error::Inconsistency(format!(
                "section width d_{} lost positive semidefiniteness beyond slack",
                k - 1
            ))
        })?;
        let f_even = hermitian_part(&(&root * &ek * &root));
        let f_odd = hermitian_part(&(&width[k - 1] - &f_even));
        // e_k ≼ P_{k-1} and range(e_k) ⊆ range(d_{k-1}) give
        // d_k = η·d^{1/2} e_k^{1/2} (P - e_k) e_k^{1/2} d^{1/2}
        //     = η·d^{1/2} (e_k - e_k²) d^{1/2}.
        let dk = hermitian_part(&(&root * (&ek - &ek * &ek) * &root)) * cre(eta);
        let dk = snap_chain_width(dk, frobenius(&width[k - 1]), eta, tol);
        proj.push(linalg::range_projection(&dk, tol)?);
        e.push(ek);
        width.push(dk);
        f.push(f_odd);
        f.push(f_even);
    }

    Ok(CanonicalWalk { e, width, proj, f })
}

/// Does the list satisfy the defining conditions of the canonical-moment
/// class with interval length `eta` (each `e_k` Hermitian PSD and
/// `e_k ≼ P_{k-1}` along the width recursion)?
pub fn validate_canonical<T: Scalar>(e: &[CMat<T>], eta: T, tol: &Tol<T>) -> bool {
    walk_canonical(e, eta, tol).is_ok()
}

/// Rebuilds the moment sequence from canonical moments, plus the companion
/// data the walk produced. Shared by [`from_canonical`] and the sampler.
pub(crate) fn build_from_canonical<T: Scalar>(
    e_in: &[CMat<T>],
    ctx: &IntervalContext<T>,
) -> Result<(HermSequence<T>, CanonicalMoments<T>)> {
    let tol = ctx.tol();
    let alpha = ctx.alpha();
    let walk = walk_canonical(e_in, ctx.width(), tol)?;
    let kap = e_in.len() - 1;

    let mut mats: Vec<CMat<T>> = vec![walk.f[0].clone()];
    for j in 1..=kap {
        let prefix = HermSequence::from_mats_unchecked(mats.clone());
        let k = j / 2;
        let next = if j % 2 == 0 {
            // s_{2k} = Θ_k + f_{4k}
            hankel::theta(&prefix, k, tol)? + &walk.f[2 * j]
        } else {
            // s_{2k+1} = α s_{2k} + Θ^⟨a⟩_k + f_{4k+1}
            let shift_theta = if k == 0 {
                CMat::zeros(prefix.dim(), prefix.dim())
            } else {
                hankel::theta(&prefix.shift_a(alpha)?, k, tol)?
            };
            &mats[j - 1] * cre(alpha) + shift_theta + &walk.f[2 * j - 1]
        };
        mats.push(hermitian_part(&next));
    }

    let cm = CanonicalMoments { e: walk.e, width: walk.width, proj: walk.proj };
    Ok((HermSequence::from_mats_unchecked(mats), cm))
}

/// Rebuilds the unique moment sequence on `[α, β]` whose canonical moments
/// are `e` — the inverse of [`canonical_moments`].
///
/// Near-boundary inputs (eigenvalues of some `e_k` within the PSD slack of
/// `0` or of the range projection) are accepted and clamped, so round-trips
/// through sampled boundary points do not fail spuriously.
///
/// # Errors
/// [`Error::CanonicalOutOfRange`] with the offending index when the list
/// violates the class conditions; [`Error::InvalidInput`] on malformed
/// shapes.
pub fn from_canonical<T: Scalar>(
    e: &[CMat<T>],
    ctx: &IntervalContext<T>,
) -> Result<HermSequence<T>> {
    Ok(build_from_canonical(e, ctx)?.0)
}

/// Convenience used in tests: do two matrix lists agree element-wise?
#[cfg(test)]
pub(crate) fn lists_close<T: Scalar>(a: &[CMat<T>], b: &[CMat<T>], tol: &Tol<T>) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| linalg::approx_eq(x, y, tol))
}
