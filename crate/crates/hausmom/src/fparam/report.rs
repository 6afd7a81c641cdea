//! Reporting operations: classification of a sequence, the coupled
//! determinant/rank identities, and the classical chain quantities.

use crate::error::{Error, Result};
use crate::hankel::HermSequence;
use crate::linalg::{self, CMat, frobenius};
use crate::scalar::Scalar;
use crate::tol::Tol;

use super::IntervalContext;
use super::canonical::{CanonicalMoments, canonical_moments};
use super::envelope::envelope;
use super::params::{f_parametrization, is_hausdorff_pos, require_in_class};

/// Is the Hermitian matrix idempotent within tolerance
/// (`‖e² - e‖_F ≤ eq_abs · max(1, ‖e‖_F)`)?
pub(crate) fn is_idempotent<T: Scalar>(e: &CMat<T>, tol: &Tol<T>) -> bool {
    frobenius(&(e * e - e)) <= tol.eq_threshold(frobenius(e))
}

fn is_half_projection<T: Scalar>(e: &CMat<T>, p: &CMat<T>, tol: &Tol<T>) -> bool {
    let half = crate::scalar::lit::<T>(0.5);
    let target = p * crate::scalar::cre(half);
    frobenius(&(e - &target)) <= tol.eq_threshold(frobenius(&target))
}

/// Structural summary of a Hausdorff sequence in terms of its canonical
/// moments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    /// Smallest `k ≥ 1` with `e_k` idempotent — there the section width
    /// `d_k` vanishes, the continuation is forced, and every representing
    /// measure is molecular. `None` when no width collapses up to `κ`.
    pub degenerate_at: Option<usize>,
    /// Smallest `k ≥ 1` such that `e_j = ½P_{j-1}` for every `j ≥ k`: from
    /// there on the sequence sits at the midpoint of each section. `None`
    /// when the last canonical moment is not central (and for `κ = 0`, where
    /// no section is constrained yet).
    pub central_from: Option<usize>,
    /// Do all odd-index canonical moments satisfy `e_{2k+1} = ½P_{2k}`?
    /// Equivalent to invariance of the sequence under the reflection of the
    /// interval. Vacuously true for `κ = 0`.
    pub symmetric: bool,
    /// Is the sequence in the open class (all parameters positive definite)?
    pub interior: bool,
}

/// Classifies `s` on the interval of `ctx` via its canonical moments.
///
/// # Errors
/// [`Error::NotHermitian`] / [`Error::NotInClass`] as in
/// [`canonical_moments`].
pub fn classify<T: Scalar>(
    s: &HermSequence<T>,
    ctx: &IntervalContext<T>,
) -> Result<Classification> {
    let cm = canonical_moments(s, ctx)?;
    Ok(classify_canonical(&cm, s, ctx))
}

pub(crate) fn classify_canonical<T: Scalar>(
    cm: &CanonicalMoments<T>,
    s: &HermSequence<T>,
    ctx: &IntervalContext<T>,
) -> Classification {
    let tol = ctx.tol();
    let kap = cm.e.len() - 1;

    let degenerate_at = (1..=kap).find(|&k| is_idempotent(&cm.e[k], tol));

    let mut central_from = None;
    for j in (1..=kap).rev() {
        if is_half_projection(&cm.e[j], &cm.proj[j - 1], tol) {
            central_from = Some(j);
        } else {
            break;
        }
    }

    let symmetric = (0usize..)
        .map(|k| 2 * k + 1)
        .take_while(|&j| j <= kap)
        .all(|j| is_half_projection(&cm.e[j], &cm.proj[j - 1], tol));

    Classification {
        degenerate_at,
        central_from,
        symmetric,
        interior: is_hausdorff_pos(s, ctx),
    }
}

/// Determinants and thresholded ranks of one block Hankel family, paired
/// with the same quantities accumulated from the parameters `f_{4k+r}`.
///
/// Entry `n` refers to the Hankel matrix of order `n` of that family; the
/// coupled identities say `det` equals `param_det_product` and `rank` equals
/// `param_rank_sum` entry by entry.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyDetRank<T: Scalar> {
    /// `det` of the family's Hankel matrix at each admissible order.
    pub det: Vec<T>,
    /// Thresholded rank of the same matrices.
    pub rank: Vec<usize>,
    /// `∏_{k ≤ n} det f_{4k+r}`.
    pub param_det_product: Vec<T>,
    /// `Σ_{k ≤ n} rank f_{4k+r}`.
    pub param_rank_sum: Vec<usize>,
}

/// The four coupled families: the base Hankel matrices and the three
/// endpoint-shifted ones.
#[derive(Debug, Clone, PartialEq)]
pub struct DetRankReport<T: Scalar> {
    /// `H_n`, orders `2n ≤ κ`, coupled with `f_{4k}`.
    pub base: FamilyDetRank<T>,
    /// `H^⟨a⟩_n` of the α-shifted sequence, orders `2n+1 ≤ κ`, coupled with
    /// `f_{4k+1}`.
    pub alpha_shifted: FamilyDetRank<T>,
    /// `H^⟨b⟩_n` of the β-shifted sequence, same orders, coupled with
    /// `f_{4k+2}`.
    pub beta_shifted: FamilyDetRank<T>,
    /// `H^⟨c⟩_n` of the doubly shifted sequence, orders `2n+2 ≤ κ`, coupled
    /// with `f_{4k+3}`.
    pub doubly_shifted: FamilyDetRank<T>,
}

fn family_report<T: Scalar>(
    seq: &HermSequence<T>,
    orders: usize,
    params: &FParams<T>,
    r: usize,
    entry_floor: T,
    tol: &Tol<T>,
) -> Result<FamilyDetRank<T>> {
    let mut out = FamilyDetRank {
        det: Vec::with_capacity(orders),
        rank: Vec::with_capacity(orders),
        param_det_product: Vec::with_capacity(orders),
        param_rank_sum: Vec::with_capacity(orders),
    };
    let q = seq.dim();
    let mut det_prod = T::one();
    let mut rank_sum = 0usize;
    for n in 0..orders {
        let h = seq.hankel_h(n)?;
        out.det.push(h.determinant().re);
        // A collapsed family leaves the Hankel matrix, whose entries are
        // arithmetic combinations of the data, as pure rounding junk; its
        // rank must be thresholded against the assembly noise, not only
        // against its own (then meaningless) largest singular value.
        let hankel_floor = crate::scalar::lit::<T>((64 * (n + 1) * q) as f64) * entry_floor;
        out.rank.push(linalg::rank_with_floor(&h, tol, hankel_floor)?);
        let fk = &params.f[4 * n + r];
        det_prod = det_prod * fk.determinant().re;
        rank_sum += linalg::rank_with_floor(fk, tol, params.floor[4 * n + r])?;
        out.param_det_product.push(det_prod);
        out.param_rank_sum.push(rank_sum);
    }
    Ok(out)
}

/// Computes determinants and ranks of all four block Hankel families
/// alongside the accumulated determinants and ranks of the interleaved
/// parameters — the two columns of each family must agree.
///
/// # Errors
/// [`Error::NotInClass`] when `s` is not Hausdorff non-negative.
pub fn det_rank_report<T: Scalar>(
    s: &HermSequence<T>,
    ctx: &IntervalContext<T>,
) -> Result<DetRankReport<T>> {
    require_in_class(s, ctx)?;
    let tol = ctx.tol();
    let kap = s.kappa();
    let params = f_parametrization(s, ctx)?;

    // Worst-case rounding of a single shifted entry, per family: the shift
    // combinations cancel when a family collapses, so the bound must come
    // from the operand magnitudes, not from the (then tiny) results.
    let eps = crate::scalar::feps::<T>();
    let (abs_a, abs_b) = (crate::scalar::fabs(ctx.alpha()), crate::scalar::fabs(ctx.beta()));
    let ns: Vec<T> = s.mats().iter().map(frobenius).collect();
    let shift_floor = |w0: T, w1: T| {
        (0..kap).fold(T::zero(), |m, j| crate::scalar::fmax(m, w0 * ns[j] + w1 * ns[j + 1])) * eps
    };

    let base = family_report(s, kap / 2 + 1, &params, 0, T::zero(), tol)?;
    let (alpha_shifted, beta_shifted) = if kap >= 1 {
        let orders = (kap - 1) / 2 + 1;
        (
            family_report(
                &s.shift_a(ctx.alpha())?,
                orders,
                &params,
                1,
                shift_floor(abs_a, T::one()),
                tol,
            )?,
            family_report(
                &s.shift_b(ctx.beta())?,
                orders,
                &params,
                2,
                shift_floor(abs_b, T::one()),
                tol,
            )?,
        )
    } else {
        (empty_family(), empty_family())
    };
    let doubly_shifted = if kap >= 2 {
        let floor_c = (0..=kap - 2).fold(T::zero(), |m, j| {
            crate::scalar::fmax(
                m,
                abs_a * abs_b * ns[j] + (abs_a + abs_b) * ns[j + 1] + ns[j + 2],
            )
        }) * eps;
        family_report(&s.shift_c(ctx.alpha(), ctx.beta())?, (kap - 2) / 2 + 1, &params, 3, floor_c, tol)?
    } else {
        empty_family()
    };

    Ok(DetRankReport { base, alpha_shifted, beta_shifted, doubly_shifted })
}

fn empty_family<T: Scalar>() -> FamilyDetRank<T> {
    FamilyDetRank {
        det: Vec::new(),
        rank: Vec::new(),
        param_det_product: Vec::new(),
        param_rank_sum: Vec::new(),
    }
}

/// The classical chain quantities of a Hausdorff sequence, all indexed
/// `k = 1, …, κ` (stored at `k - 1`).
///
/// `U_k = d_{k-1}⁺ A_k` and `V_k = d_{k-1}⁺ B_k` are the width-relative
/// gaps; `ζ_k` and `γ_k` are their chain products
/// `ζ_1 = U_1, ζ_k = V_{k-1} U_k` and `γ_1 = V_1, γ_k = U_{k-1} V_k`,
/// matrix analogues of the chain-sequence decomposition of canonical
/// moments.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainQuantities<T: Scalar> {
    /// `U_k`.
    pub u: Vec<CMat<T>>,
    /// `V_k`.
    pub v: Vec<CMat<T>>,
    /// `ζ_k`.
    pub zeta: Vec<CMat<T>>,
    /// `γ_k`.
    pub gamma: Vec<CMat<T>>,
}

/// Computes the chain quantities of `s` on the interval of `ctx`.
///
/// For sequences in the class these satisfy `U_k V_k = V_k U_k`,
/// `d_j = (β-α)^{j+1} s_0 ∏_{ℓ≤j} U_ℓ V_ℓ`, and the gap recursions
/// `(β-α) A_{k-1} ζ_k = A_k`, `(β-α) B_{k-1} γ_k = B_k`.
///
/// # Errors
/// [`Error::NotInClass`] when `s` is not Hausdorff non-negative;
/// [`Error::InvalidInput`] for `κ = 0` (no gap exists yet).
pub fn dette_studden<T: Scalar>(
    s: &HermSequence<T>,
    ctx: &IntervalContext<T>,
) -> Result<ChainQuantities<T>> {
    if s.kappa() == 0 {
        return Err(Error::InvalidInput("chain quantities need κ ≥ 1".into()));
    }
    require_in_class(s, ctx)?;
    let tol = ctx.tol();
    let env = envelope(s, ctx)?;
    let kap = s.kappa();

    let mut u = Vec::with_capacity(kap);
    let mut v = Vec::with_capacity(kap);
    let mut zeta = Vec::with_capacity(kap);
    let mut gamma = Vec::with_capacity(kap);
    for k in 1..=kap {
        let d_pinv = linalg::pinv(&env.width[k - 1], tol)?;
        let uk = &d_pinv * &env.lower_gap[k];
        let vk = d_pinv * &env.upper_gap[k - 1];
        if k == 1 {
            zeta.push(uk.clone());
            gamma.push(vk.clone());
        } else {
            zeta.push(&v[k - 2] * &uk);
            gamma.push(&u[k - 2] * &vk);
        }
        u.push(uk);
        v.push(vk);
    }
    Ok(ChainQuantities { u, v, zeta, gamma })
}
