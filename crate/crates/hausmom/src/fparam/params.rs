//! The interleaved gap parametrization `f_0, …, f_{2κ}` and the Hausdorff
//! class tests.

use crate::error::Result;
use crate::hankel::HermSequence;
use crate::linalg::{self, CMat};
use crate::scalar::{Scalar, cre};
use crate::tol::Tol;

use super::{IntervalContext, envelope::envelope};

/// The parameter sequence `f_0, …, f_{2κ}` of a moment sequence on `[α, β]`.
///
/// `f_0 = s_0`; beyond that, the lower and upper gaps [`super::Envelope`] are
/// interleaved two at a time with alternating orientation:
///
/// ```text
/// f_{4k+1} = A_{2k+1}    f_{4k+2} = B_{2k+1}
/// f_{4k+3} = B_{2k+2}    f_{4k+4} = A_{2k+2}
/// ```
///
/// so that `f_{2j-1} + f_{2j} = d_{j-1}` always pairs a gap with its
/// complement. Each `f_j` is also a nested Schur complement in one of the
/// four block Hankel matrices of the sequence (base, α-shifted, β-shifted,
/// doubly shifted — family `j mod 4`), which is what makes the simultaneous
/// positivity test below equivalent to the Hankel characterisation of the
/// Hausdorff class.
#[derive(Debug, Clone, PartialEq)]
pub struct FParams<T: Scalar> {
    /// `f[j]` is `f_j`, `j = 0, …, 2κ`.
    pub f: Vec<CMat<T>>,
    /// Per-parameter noise allowance inherited from the envelope; class
    /// verdicts must not read eigenvalues below this magnitude as violations.
    pub(crate) floor: Vec<T>,
}

/// Computes the parameter sequence `f_0, …, f_{2κ}` of `s` on the interval
/// of `ctx`.
///
/// Defined for arbitrary input; membership of `s` in the Hausdorff class is
/// exactly simultaneous positive semidefiniteness of the result
/// ([`is_hausdorff_nonneg`]).
///
/// # Errors
/// Only kernel failures on malformed data.
pub fn f_parametrization<T: Scalar>(
    s: &HermSequence<T>,
    ctx: &IntervalContext<T>,
) -> Result<FParams<T>> {
    let env = envelope(s, ctx)?;
    Ok(FParams {
        f: interleave_gaps(&env.lower_gap, &env.upper_gap),
        floor: interleave_floors(&env.lower_gap_floor, &env.upper_gap_floor),
    })
}

/// Builds `f` from the gap lists (`A_j` at `j`, `B_j` at `j - 1`).
pub(crate) fn interleave_gaps<T: Scalar>(
    lower_gap: &[CMat<T>],
    upper_gap: &[CMat<T>],
) -> Vec<CMat<T>> {
    let kap = lower_gap.len() - 1;
    let mut f = Vec::with_capacity(2 * kap + 1);
    f.push(lower_gap[0].clone());
    for j in 1..=kap {
        let a = &lower_gap[j];
        let b = &upper_gap[j - 1];
        if j % 2 == 1 {
            f.push(a.clone());
            f.push(b.clone());
        } else {
            f.push(b.clone());
            f.push(a.clone());
        }
    }
    f
}

/// The companion interleaving for the gap noise allowances.
pub(crate) fn interleave_floors<T: Scalar>(lower: &[T], upper: &[T]) -> Vec<T> {
    let kap = lower.len() - 1;
    let mut out = Vec::with_capacity(2 * kap + 1);
    out.push(T::zero());
    for j in 1..=kap {
        let (a, b) = (lower[j], upper[j - 1]);
        if j % 2 == 1 {
            out.push(a);
            out.push(b);
        } else {
            out.push(b);
            out.push(a);
        }
    }
    out
}

/// Is `s` a truncated Hausdorff moment sequence on `[α, β]`?
///
/// True iff every `f_j` is positive semidefinite within tolerance — exactly
/// the sequences extendable to moments of some non-negative matrix measure
/// on the interval. Non-Hermitian input is simply not in the class.
pub fn is_hausdorff_nonneg<T: Scalar>(s: &HermSequence<T>, ctx: &IntervalContext<T>) -> bool {
    first_f_violation(s, ctx, false).is_ok_and(|v| v.is_none())
}

/// Is `s` in the open Hausdorff class on `[α, β]` (every `f_j` positive
/// definite)? These are the sequences admitting representing measures with
/// "full" mass distribution; equivalently all four block Hankel families are
/// positive definite.
pub fn is_hausdorff_pos<T: Scalar>(s: &HermSequence<T>, ctx: &IntervalContext<T>) -> bool {
    first_f_violation(s, ctx, true).is_ok_and(|v| v.is_none())
}

/// Index of the first `f_j` that is not PSD (or, with `strict`, not PD);
/// `None` when the sequence is in the class. Shared by the class tests and
/// the operations that must *name* the violation in an error.
pub(crate) fn first_f_violation<T: Scalar>(
    s: &HermSequence<T>,
    ctx: &IntervalContext<T>,
    strict: bool,
) -> Result<Option<usize>> {
    if s.first_non_hermitian(ctx.tol()).is_some() {
        // Report the defect against f_0 = s_0: a non-Hermitian sequence is
        // outside the class before any parameter is even formed.
        return Ok(Some(0));
    }
    let f = f_parametrization(s, ctx)?;
    first_violation_in(&f.f, &f.floor, ctx.tol(), strict)
}

/// Errors with [`crate::error::Error::NotInClass`] naming the first violating
/// parameter unless `s` is Hausdorff non-negative on the interval of `ctx`.
pub(crate) fn require_in_class<T: Scalar>(
    s: &HermSequence<T>,
    ctx: &IntervalContext<T>,
) -> Result<()> {
    match first_f_violation(s, ctx, false)? {
        None => Ok(()),
        Some(j) => Err(crate::error::Error::NotInClass {
            class: "Hausdorff non-negative",
            param: "f",
            index: j,
        }),
    }
}

/// First index failing the PSD (or PD) test, with per-index noise
/// allowances widening the slack; an empty `floors` means no widening.
pub(crate) fn first_violation_in<T: Scalar>(
    f: &[CMat<T>],
    floors: &[T],
    tol: &Tol<T>,
    strict: bool,
) -> Result<Option<usize>> {
    for (j, m) in f.iter().enumerate() {
        let extra = floors.get(j).copied().unwrap_or_else(T::zero);
        let ok = if strict {
            linalg::is_pd_within(m, tol, extra)?
        } else {
            linalg::is_psd_within(m, tol, extra)?
        };
        if !ok {
            return Ok(Some(j));
        }
    }
    Ok(None)
}

/// Does the list `f_0, …, f_{2κ}` satisfy the defining conditions of the
/// parameter class with interval length `eta`?
///
/// The conditions are: odd length; every `f_j` Hermitian PSD;
/// `eta·f_0 = f_1 + f_2`; and the harmonic-mean recursion
/// `eta·(f_{2k-1} ∥ f_{2k}) = f_{2k+1} + f_{2k+2}` for `1 ≤ k ≤ κ-1`,
/// where `∥` is the parallel sum. Exactly the image of
/// [`f_parametrization`] over Hausdorff sequences on intervals of length
/// `eta`. Returns `false` for `eta < 0`.
pub fn validate_f_params<T: Scalar>(f: &[CMat<T>], eta: T, tol: &Tol<T>) -> bool {
    if eta < T::zero() || f.is_empty() || f.len() % 2 == 0 {
        return false;
    }
    let q = f[0].nrows();
    if f.iter().any(|m| m.shape() != (q, q) || !linalg::all_finite(m)) {
        return false;
    }
    if f.iter().any(|m| !linalg::is_psd(m, tol).unwrap_or(false)) {
        return false;
    }
    let kap = (f.len() - 1) / 2;
    let close = |lhs: &CMat<T>, rhs: &CMat<T>| {
        let scale = linalg::frobenius(lhs) + linalg::frobenius(rhs);
        linalg::frobenius(&(lhs - rhs)) <= tol.eq_threshold(scale)
    };
    for k in 0..kap {
        let lhs = if k == 0 {
            &f[0] * cre(eta)
        } else {
            match linalg::parallel_sum(&f[2 * k - 1], &f[2 * k], tol) {
                Ok(p) => p * cre(eta),
                Err(_) => return false,
            }
        };
        let rhs = &f[2 * k + 1] + &f[2 * k + 2];
        if !close(&lhs, &rhs) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tol::Tol;
    use num_complex::Complex;

    fn ctx01() -> IntervalContext<f64> {
        IntervalContext::new(0.0, 1.0, Tol::default()).unwrap()
    }

    fn sc(m: &CMat<f64>) -> f64 {
        m[(0, 0)].re
    }

    fn useq(kappa: usize) -> HermSequence<f64> {
        HermSequence::from_real_scalars((0..=kappa).map(|j| 1.0 / (j as f64 + 1.0))).unwrap()
    }

    #[test]
    fn low_order_formulas() {
        // f_1 = s_1 - α s_0, f_2 = β s_0 - s_1,
        // f_3 = -αβ s_0 + (α+β) s_1 - s_2, f_4 = s_2 - s_1 s_0⁺ s_1
        let s = HermSequence::from_real_scalars([2.0, 0.5, 0.4]).unwrap();
        let ctx = IntervalContext::new(-0.5, 1.5, Tol::default()).unwrap();
        let f = f_parametrization(&s, &ctx).unwrap().f;
        assert_eq!(f.len(), 5);
        assert!((sc(&f[0]) - 2.0).abs() < 1e-14);
        assert!((sc(&f[1]) - (0.5 + 0.5 * 2.0)).abs() < 1e-14);
        assert!((sc(&f[2]) - (1.5 * 2.0 - 0.5)).abs() < 1e-14);
        assert!((sc(&f[3]) - (0.75 * 2.0 + 0.5 - 0.4)).abs() < 1e-14);
        assert!((sc(&f[4]) - (0.4 - 0.125)).abs() < 1e-14);
    }

    #[test]
    fn uniform_frozen_values() {
        // uniform [0,1] moments (1, 1/2, 1/3, 1/4, 1/5):
        // f = (1, 1/2, 1/2, 1/6, 1/12, 1/36, 1/36, 1/120, 1/180)
        let f = f_parametrization(&useq(4), &ctx01()).unwrap().f;
        let want = [
            1.0,
            0.5,
            0.5,
            1.0 / 6.0,
            1.0 / 12.0,
            1.0 / 36.0,
            1.0 / 36.0,
            1.0 / 120.0,
            1.0 / 180.0,
        ];
        assert_eq!(f.len(), want.len());
        for (j, w) in want.iter().enumerate() {
            assert!((sc(&f[j]) - w).abs() < 1e-12, "f_{j}");
        }
        // cross-check: f_3 + f_4 = d_1 = 1/4
        assert!((sc(&f[3]) + sc(&f[4]) - 0.25).abs() < 1e-13);
    }

    #[test]
    fn class_tests_desk_cases() {
        let ctx = ctx01();
        assert!(is_hausdorff_nonneg(&useq(2), &ctx));
        assert!(is_hausdorff_pos(&useq(2), &ctx));
        // Dirac at 0: on the boundary of the class
        let dirac0 = HermSequence::from_real_scalars([1.0, 0.0]).unwrap();
        assert!(is_hausdorff_nonneg(&dirac0, &ctx));
        assert!(!is_hausdorff_pos(&dirac0, &ctx));
        // mean 2 is impossible on [0,1]: f_2 = -1
        let too_big = HermSequence::from_real_scalars([1.0, 2.0]).unwrap();
        assert!(!is_hausdorff_nonneg(&too_big, &ctx));
        // non-Hermitian input is not in the class
        let nh = HermSequence::new(vec![CMat::from_row_slice(2, 2, &[
            Complex::new(1.0, 0.0), Complex::new(0.0, 1.0),
            Complex::new(0.0, 1.0), Complex::new(1.0, 0.0),
        ])])
        .unwrap();
        assert!(!is_hausdorff_nonneg(&nh, &ctx));
    }

    #[test]
    fn f_family_validation() {
        let ctx = ctx01();
        let f = f_parametrization(&useq(4), &ctx).unwrap().f;
        assert!(validate_f_params(&f, 1.0, ctx.tol()));
        // wrong interval length breaks the sum rule
        assert!(!validate_f_params(&f, 2.0, ctx.tol()));
        // a negative block breaks positivity
        let mut bad = f.clone();
        bad[3] = CMat::from_element(1, 1, Complex::new(-0.1, 0.0));
        assert!(!validate_f_params(&bad, 1.0, ctx.tol()));
        // even length is malformed
        assert!(!validate_f_params(&f[..4], 1.0, ctx.tol()));
        // η < 0 is not a class parameter
        assert!(!validate_f_params(&f, -1.0, ctx.tol()));
    }
}
