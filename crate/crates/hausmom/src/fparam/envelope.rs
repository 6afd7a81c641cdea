//! Extremal endpoints of the matricial intervals confining each moment.

use num_complex::Complex;

use crate::error::Result;
use crate::hankel::{self, HermSequence};
use crate::linalg::{CMat, frobenius, hermitian_part};
use crate::scalar::{Scalar, cre, fabs, lit};

use super::IntervalContext;

/// The moment envelope of a sequence on `[α, β]`: for each index `j` the
/// extremal endpoints `u_j ≼ o_j` between which a continuation `s_{j+1}` must
/// lie, together with derived quantities.
///
/// All lists are indexed by `j = 0, …, κ` except `upper_gap`, which starts at
/// `j = 1` (stored at position `j - 1`): there is no upper endpoint "before"
/// `s_0`, while the lower gap at zero is conventionally `A_0 = s_0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Envelope<T: Scalar> {
    /// Lower endpoints `u_j`; `u_j ≼ s_{j+1}` for a sequence in the
    /// Hausdorff class.
    pub lower: Vec<CMat<T>>,
    /// Upper endpoints `o_j`.
    pub upper: Vec<CMat<T>>,
    /// Lower gaps `A_j = s_j - u_{j-1}` for `j ≥ 1`, with `A_0 = s_0`.
    pub lower_gap: Vec<CMat<T>>,
    /// Upper gaps `B_j = o_{j-1} - s_j` for `j = 1, …, κ`, stored at `j - 1`.
    pub upper_gap: Vec<CMat<T>>,
    /// Section widths `d_j = o_j - u_j`.
    pub width: Vec<CMat<T>>,
    /// Section midpoints `m_j = (u_j + o_j) / 2`.
    pub midpoint: Vec<CMat<T>>,
    /// Noise allowance per lower gap (indexed like `lower_gap`, `[0]` is 0):
    /// anything of smaller norm — or any eigenvalue of smaller magnitude —
    /// is indistinguishable from zero at working precision.
    pub(crate) lower_gap_floor: Vec<T>,
    /// Noise allowance per upper gap (indexed like `upper_gap`).
    pub(crate) upper_gap_floor: Vec<T>,
}

/// Computes the full moment envelope of `s` on the interval of `ctx`.
///
/// The endpoints are (with `Θ` the Hankel correction term of [`hankel::theta`]
/// and `Θ^⟨x⟩` the same term for the shifted sequence `x ∈ {a, b, c}`):
///
/// ```text
/// u_{2k}   = α s_{2k} + Θ^⟨a⟩_k          o_{2k}   = β s_{2k} - Θ^⟨b⟩_k
/// u_{2k+1} = Θ_{k+1}                     o_{2k+1} = -αβ s_{2k} + (α+β) s_{2k+1} - Θ^⟨c⟩_k
/// ```
///
/// In particular `u_0 = α s_0`, `o_0 = β s_0`, `u_1 = s_1 s_0⁺ s_1` and
/// `o_1 = -αβ s_0 + (α+β) s_1`. The input need not lie in the Hausdorff
/// class; the envelope is defined for any sequence.
///
/// # Errors
/// Only kernel failures on malformed data; well-formed [`HermSequence`] input
/// cannot fail.
pub fn envelope<T: Scalar>(s: &HermSequence<T>, ctx: &IntervalContext<T>) -> Result<Envelope<T>> {
    let (alpha, beta) = (ctx.alpha(), ctx.beta());
    let tol = ctx.tol();
    let kap = s.kappa();
    let q = s.dim();

    let eps = T::default_epsilon();

    let a = if kap >= 1 { Some(s.shift_a(alpha)?) } else { None };
    let b = if kap >= 1 { Some(s.shift_b(beta)?) } else { None };
    let c = if kap >= 2 { Some(s.shift_c(alpha, beta)?) } else { None };

    // Θ^⟨x⟩_k with its noise floor; the k = 0 value is an exact 0_q and needs
    // no shifted sequence, which is what makes the κ-edge indices work out.
    let th = |seq: &Option<HermSequence<T>>, k: usize| -> Result<(CMat<T>, T)> {
        if k == 0 {
            Ok((CMat::zeros(q, q), T::zero()))
        } else {
            hankel::theta_with_floor(
                seq.as_ref().expect("k ≥ 1 implies the shift exists"),
                k,
                tol,
            )
        }
    };

    let mut lower = Vec::with_capacity(kap + 1);
    let mut upper = Vec::with_capacity(kap + 1);
    // Noise floors of the endpoints: the Θ floor plus the rounding of the
    // linear moment terms entering the same expression.
    let mut lower_floor = Vec::with_capacity(kap + 1);
    let mut upper_floor = Vec::with_capacity(kap + 1);
    for j in 0..=kap {
        let k = j / 2;
        if j % 2 == 0 {
            let (ta, fa) = th(&a, k)?;
            lower.push(hermitian_part(&(&s[j] * cre(alpha) + ta)));
            lower_floor.push(fa + eps * fabs(alpha) * frobenius(&s[j]));
            let (tb, fb) = th(&b, k)?;
            upper.push(hermitian_part(&(&s[j] * cre(beta) - tb)));
            upper_floor.push(fb + eps * fabs(beta) * frobenius(&s[j]));
        } else {
            let (t, f) = hankel::theta_with_floor(s, k + 1, tol)?;
            lower.push(hermitian_part(&t));
            lower_floor.push(f);
            let (tc, fc) = th(&c, k)?;
            upper.push(hermitian_part(
                &(&s[j - 1] * cre(-alpha * beta) + &s[j] * cre(alpha + beta) - tc),
            ));
            upper_floor.push(
                fc + eps
                    * (fabs(alpha * beta) * frobenius(&s[j - 1])
                        + fabs(alpha + beta) * frobenius(&s[j])),
            );
        }
    }

    // A gap whose magnitude is dwarfed by the floor of its own computation is
    // an exact zero wearing rounding noise: near the boundary of the moment
    // space the pseudoinverses inside Θ amplify working-precision error well
    // past machine epsilon. Snap such gaps so positivity and degeneracy
    // decisions see the boundary case they are actually in.
    let allowance = |floor: T, j: usize| lit::<T>(64.0) * (floor + eps * frobenius(&s[j]));
    let snap = |g: CMat<T>, allow: T| -> CMat<T> {
        if frobenius(&g) <= allow { CMat::zeros(q, q) } else { g }
    };

    let mut lower_gap = Vec::with_capacity(kap + 1);
    let mut upper_gap = Vec::with_capacity(kap);
    let mut lower_gap_floor = Vec::with_capacity(kap + 1);
    let mut upper_gap_floor = Vec::with_capacity(kap);
    lower_gap.push(s[0].clone());
    lower_gap_floor.push(T::zero());
    for j in 1..=kap {
        let la = allowance(lower_floor[j - 1], j);
        let ua = allowance(upper_floor[j - 1], j);
        lower_gap.push(snap(&s[j] - &lower[j - 1], la));
        upper_gap.push(snap(&upper[j - 1] - &s[j], ua));
        lower_gap_floor.push(la);
        upper_gap_floor.push(ua);
    }

    let half = Complex::new(lit::<T>(0.5), T::zero());
    let width = (0..=kap).map(|j| &upper[j] - &lower[j]).collect();
    let midpoint = (0..=kap).map(|j| (&upper[j] + &lower[j]) * half).collect();

    Ok(Envelope {
        lower,
        upper,
        lower_gap,
        upper_gap,
        width,
        midpoint,
        lower_gap_floor,
        upper_gap_floor,
    })
}
