//! Block Hankel matrices and the real-line / half-line side of the theory.
//!
//! A moment sequence `s_0, …, s_κ` of `q×q` matrices generates three coupled
//! block Hankel families — `H_n = [s_{j+k}]`, `K_n = [s_{j+k+1}]`,
//! `G_n = [s_{j+k+2}]` — plus, once interval endpoints enter, the shifted
//! sequences
//!
//! ```text
//! a_j = -α s_j + s_{j+1}          (endpoint α)
//! b_j =  β s_j - s_{j+1}          (endpoint β)
//! c_j = -αβ s_j + (α+β) s_{j+1} - s_{j+2}   (both)
//! ```
//!
//! This module owns those constructions, the correction terms `Θ, Σ, M, N, Λ`
//! built from pseudoinverses of Hankel blocks, the canonical Hankel and
//! Stieltjes parametrizations, and the membership tests for the classes of
//! sequences with moment representations on all of `ℝ` (Hankel non-negative),
//! on `[α, ∞)` (right Stieltjes), and on `(-∞, β]` (left Stieltjes).

use crate::error::{Error, Result};
use crate::linalg::{self, CMat};
use crate::scalar::{Scalar, cre};
use crate::tol::Tol;

/// A finite sequence of square complex matrices of common size — the moment
/// data everything else consumes.
///
/// Construction enforces the hard invariants (non-empty, all `q×q`, finite
/// entries). Hermitian-ness is a *soft* invariant: the class tests and the
/// interval machinery check it where the mathematics needs it and treat
/// violations as "not in the class" rather than as malformed input.
#[derive(Debug, Clone, PartialEq)]
pub struct HermSequence<T: Scalar> {
    dim: usize,
    mats: Vec<CMat<T>>,
}

impl<T: Scalar> HermSequence<T> {
    /// Wraps a list of matrices as a moment sequence.
    ///
    /// # Errors
    /// [`Error::InvalidInput`] when the list is empty, the matrices are not
    /// all square of one common size, or any entry is non-finite.
    pub fn new(mats: Vec<CMat<T>>) -> Result<Self> {
        let Some(first) = mats.first() else {
            return Err(Error::InvalidInput("moment sequence must be non-empty".into()));
        };
        let dim = first.nrows();
        if dim == 0 {
            return Err(Error::InvalidInput("moment matrices must have size at least 1".into()));
        }
        for (j, m) in mats.iter().enumerate() {
            if m.shape() != (dim, dim) {
                return Err(Error::InvalidInput(format!(
                    "moment {j} has shape {:?}, expected ({dim}, {dim})",
                    m.shape()
                )));
            }
            if !linalg::all_finite(m) {
                return Err(Error::InvalidInput(format!("moment {j} has non-finite entries")));
            }
        }
        Ok(Self { dim, mats })
    }

    /// Internal constructor for matrices that are valid by construction.
    pub(crate) fn from_mats_unchecked(mats: Vec<CMat<T>>) -> Self {
        debug_assert!(!mats.is_empty());
        let dim = mats[0].nrows();
        Self { dim, mats }
    }

    /// Builds a scalar (`q = 1`) sequence from real numbers.
    pub fn from_real_scalars(values: impl IntoIterator<Item = T>) -> Result<Self> {
        Self::new(
            values
                .into_iter()
                .map(|v| CMat::from_element(1, 1, cre(v)))
                .collect(),
        )
    }

    /// Matrix size `q`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Largest moment index `κ` (the sequence is `s_0, …, s_κ`).
    pub fn kappa(&self) -> usize {
        self.mats.len() - 1
    }

    /// Number of moments, `κ + 1`.
    pub fn len(&self) -> usize {
        self.mats.len()
    }

    /// Always false; present for API completeness.
    pub fn is_empty(&self) -> bool {
        self.mats.is_empty()
    }

    /// The underlying matrices.
    pub fn mats(&self) -> &[CMat<T>] {
        &self.mats
    }

    /// Index of the first moment that is not Hermitian within tolerance, if
    /// any.
    pub(crate) fn first_non_hermitian(&self, tol: &Tol<T>) -> Option<usize> {
        self.mats.iter().position(|m| !linalg::is_hermitian(m, tol))
    }

    /// Are all moments Hermitian within `eq_abs`?
    pub fn is_hermitian_within(&self, tol: &Tol<T>) -> bool {
        self.first_non_hermitian(tol).is_none()
    }

    /// The prefix `s_0, …, s_κ'`.
    ///
    /// # Errors
    /// [`Error::InvalidInput`] when `κ' > κ`.
    pub fn truncated(&self, kappa: usize) -> Result<Self> {
        if kappa > self.kappa() {
            return Err(Error::InvalidInput(format!(
                "cannot truncate to κ = {kappa}: sequence only reaches {}",
                self.kappa()
            )));
        }
        Ok(Self::from_mats_unchecked(self.mats[..=kappa].to_vec()))
    }

    /// The α-shifted sequence `a_j = -α s_j + s_{j+1}`, one entry shorter.
    ///
    /// Its Hankel blocks are `H^⟨a⟩_n = -α H_n + K_n`.
    ///
    /// # Errors
    /// [`Error::InvalidInput`] when `κ = 0`.
    pub fn shift_a(&self, alpha: T) -> Result<Self> {
        if self.kappa() < 1 {
            return Err(Error::InvalidInput("shift_a needs κ ≥ 1".into()));
        }
        Ok(Self::from_mats_unchecked(
            (0..self.kappa())
                .map(|j| &self.mats[j] * cre(-alpha) + &self.mats[j + 1])
                .collect(),
        ))
    }

    /// The β-shifted sequence `b_j = β s_j - s_{j+1}`, one entry shorter.
    ///
    /// # Errors
    /// [`Error::InvalidInput`] when `κ = 0`.
    pub fn shift_b(&self, beta: T) -> Result<Self> {
        if self.kappa() < 1 {
            return Err(Error::InvalidInput("shift_b needs κ ≥ 1".into()));
        }
        Ok(Self::from_mats_unchecked(
            (0..self.kappa())
                .map(|j| &self.mats[j] * cre(beta) - &self.mats[j + 1])
                .collect(),
        ))
    }

    /// The doubly shifted sequence
    /// `c_j = -αβ s_j + (α+β) s_{j+1} - s_{j+2}`, two entries shorter.
    ///
    /// Satisfies `c_j = -α b_j + b_{j+1} = β a_j - a_{j+1}`.
    ///
    /// # Errors
    /// [`Error::InvalidInput`] when `κ < 2`.
    pub fn shift_c(&self, alpha: T, beta: T) -> Result<Self> {
        if self.kappa() < 2 {
            return Err(Error::InvalidInput("shift_c needs κ ≥ 2".into()));
        }
        Ok(Self::from_mats_unchecked(
            (0..self.kappa() - 1)
                .map(|j| {
                    &self.mats[j] * cre(-alpha * beta)
                        + &self.mats[j + 1] * cre(alpha + beta)
                        - &self.mats[j + 2]
                })
                .collect(),
        ))
    }

    /// Block Hankel matrix `H_n = [s_{j+k}]_{j,k=0..n}`, size `(n+1)q`.
    ///
    /// # Errors
    /// [`Error::InvalidInput`] unless `2n ≤ κ`.
    pub fn hankel_h(&self, n: usize) -> Result<CMat<T>> {
        self.block_hankel(n, 0, "H")
    }

    /// Shifted block Hankel matrix `K_n = [s_{j+k+1}]_{j,k=0..n}`.
    ///
    /// # Errors
    /// [`Error::InvalidInput`] unless `2n + 1 ≤ κ`.
    pub fn hankel_k(&self, n: usize) -> Result<CMat<T>> {
        self.block_hankel(n, 1, "K")
    }

    /// Doubly shifted block Hankel matrix `G_n = [s_{j+k+2}]_{j,k=0..n}`.
    ///
    /// # Errors
    /// [`Error::InvalidInput`] unless `2n + 2 ≤ κ`.
    pub fn hankel_g(&self, n: usize) -> Result<CMat<T>> {
        self.block_hankel(n, 2, "G")
    }

    fn block_hankel(&self, n: usize, offset: usize, name: &str) -> Result<CMat<T>> {
        let top = 2 * n + offset;
        if top > self.kappa() {
            return Err(Error::InvalidInput(format!(
                "{name}_{n} needs moments up to index {top}, sequence ends at {}",
                self.kappa()
            )));
        }
        let q = self.dim;
        let mut out = CMat::<T>::zeros((n + 1) * q, (n + 1) * q);
        for j in 0..=n {
            for k in 0..=n {
                out.view_mut((j * q, k * q), (q, q))
                    .copy_from(&self.mats[j + k + offset]);
            }
        }
        Ok(out)
    }

    /// Block column `col(s_ℓ, …, s_m)`, size `(m-ℓ+1)q × q`.
    ///
    /// # Errors
    /// [`Error::InvalidInput`] unless `ℓ ≤ m ≤ κ`.
    pub fn y_block(&self, l: usize, m: usize) -> Result<CMat<T>> {
        self.check_block_range(l, m)?;
        let q = self.dim;
        let mut out = CMat::<T>::zeros((m - l + 1) * q, q);
        for (i, j) in (l..=m).enumerate() {
            out.view_mut((i * q, 0), (q, q)).copy_from(&self.mats[j]);
        }
        Ok(out)
    }

    /// Block row `row(s_ℓ, …, s_m)`, size `q × (m-ℓ+1)q`.
    ///
    /// # Errors
    /// [`Error::InvalidInput`] unless `ℓ ≤ m ≤ κ`.
    pub fn z_block(&self, l: usize, m: usize) -> Result<CMat<T>> {
        self.check_block_range(l, m)?;
        let q = self.dim;
        let mut out = CMat::<T>::zeros(q, (m - l + 1) * q);
        for (i, j) in (l..=m).enumerate() {
            out.view_mut((0, i * q), (q, q)).copy_from(&self.mats[j]);
        }
        Ok(out)
    }

    fn check_block_range(&self, l: usize, m: usize) -> Result<()> {
        if l > m || m > self.kappa() {
            return Err(Error::InvalidInput(format!(
                "block range {l}..={m} invalid for a sequence ending at {}",
                self.kappa()
            )));
        }
        Ok(())
    }
}

impl<T: Scalar> std::ops::Index<usize> for HermSequence<T> {
    type Output = CMat<T>;

    fn index(&self, j: usize) -> &CMat<T> {
        &self.mats[j]
    }
}

/// The five correction terms of order `n` built from pseudoinverses of
/// Hankel blocks; all are `0_q` at `n = 0`.
///
/// With `y = col(s_n, …, s_{2n-1})`, `z = row(s_n, …, s_{2n-1})` and
/// `H = H_{n-1}`:
///
/// ```text
/// Θ_n = z H⁺ y
/// Σ_n = z H⁺ K_{n-1} H⁺ y
/// M_n = z H⁺ col(s_{n+1}, …, s_{2n})
/// N_n = row(s_{n+1}, …, s_{2n}) H⁺ y
/// Λ_n = M_n + N_n - Σ_n
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaFamily<T: Scalar> {
    /// `Θ_n`, the Schur-type correction in `s_{2n}`.
    pub theta: CMat<T>,
    /// `Σ_n`.
    pub sigma: CMat<T>,
    /// `M_n`.
    pub m: CMat<T>,
    /// `N_n`.
    pub n: CMat<T>,
    /// `Λ_n = M_n + N_n - Σ_n`, the correction in `s_{2n+1}`.
    pub lambda: CMat<T>,
}

/// The correction term `Θ_n = z_{n..2n-1} H_{n-1}⁺ y_{n..2n-1}` alone.
///
/// Unlike [`lambda_family`], this only needs moments up to `2n - 1`, which
/// matters at the very end of odd-length sequences.
///
/// # Errors
/// [`Error::InvalidInput`] unless `n = 0` or `2n - 1 ≤ κ`.
pub fn theta<T: Scalar>(s: &HermSequence<T>, n: usize, tol: &Tol<T>) -> Result<CMat<T>> {
    Ok(theta_with_floor(s, n, tol)?.0)
}

/// [`theta`] together with a noise floor for quantities assembled from it.
///
/// The floor is `ε · ‖z‖_F · ‖H⁺‖₂ · ‖y‖_F`, the first-order rounding error
/// of the triple product `z H⁺ y`. Differences like `s_{2n} − Θ_n` that land
/// within a small multiple of this floor carry no information — near the
/// boundary of the moment space the pseudoinverse amplifies working-precision
/// noise far beyond machine epsilon, and downstream positivity decisions must
/// not mistake that noise for signal.
pub(crate) fn theta_with_floor<T: Scalar>(
    s: &HermSequence<T>,
    n: usize,
    tol: &Tol<T>,
) -> Result<(CMat<T>, T)> {
    let q = s.dim();
    if n == 0 {
        return Ok((CMat::zeros(q, q), T::zero()));
    }
    if 2 * n - 1 > s.kappa() {
        return Err(Error::InvalidInput(format!(
            "Θ_{n} needs moments up to {}, sequence ends at {}",
            2 * n - 1,
            s.kappa()
        )));
    }
    let y = s.y_block(n, 2 * n - 1)?;
    let z = s.z_block(n, 2 * n - 1)?;
    let h = s.hankel_h(n - 1)?;
    let (hp, hp_norm) = linalg::pinv_and_norm(&h, tol)?;
    let floor =
        T::default_epsilon() * linalg::frobenius(&z) * hp_norm * linalg::frobenius(&y);
    let x = linalg::solve_refined(&h, &hp, &y);
    Ok((z * x, floor))
}

/// All five correction terms `(Θ_n, Σ_n, M_n, N_n, Λ_n)`.
///
/// # Errors
/// [`Error::InvalidInput`] unless `2n ≤ κ`.
pub fn lambda_family<T: Scalar>(
    s: &HermSequence<T>,
    n: usize,
    tol: &Tol<T>,
) -> Result<LambdaFamily<T>> {
    let q = s.dim();
    if n == 0 {
        let z = CMat::<T>::zeros(q, q);
        return Ok(LambdaFamily {
            theta: z.clone(),
            sigma: z.clone(),
            m: z.clone(),
            n: z.clone(),
            lambda: z,
        });
    }
    if 2 * n > s.kappa() {
        return Err(Error::InvalidInput(format!(
            "Λ-family of order {n} needs moments up to {}, sequence ends at {}",
            2 * n,
            s.kappa()
        )));
    }
    let y = s.y_block(n, 2 * n - 1)?;
    let z = s.z_block(n, 2 * n - 1)?;
    let y_up = s.y_block(n + 1, 2 * n)?;
    let z_up = s.z_block(n + 1, 2 * n)?;
    let hp = linalg::pinv(&s.hankel_h(n - 1)?, tol)?;
    let k = s.hankel_k(n - 1)?;
    let theta = &z * &hp * &y;
    let sigma = &z * &hp * k * &hp * &y;
    let m = &z * &hp * y_up;
    let n_mat = z_up * &hp * &y;
    let lambda = &m + &n_mat - &sigma;
    Ok(LambdaFamily { theta, sigma, m, n: n_mat, lambda })
}

/// The canonical Hankel parametrization `𝔥_0, …, 𝔥_κ`.
#[derive(Debug, Clone, PartialEq)]
pub struct HankelParams<T: Scalar> {
    /// `h[j]` is `𝔥_j`.
    pub h: Vec<CMat<T>>,
}

/// Canonical Hankel parametrization of a sequence:
/// `𝔥_{2k} = s_{2k} - Θ_k` and `𝔥_{2k+1} = s_{2k+1} - Λ_k`.
///
/// For `n ≥ 1` the even entry `𝔥_{2n}` equals the Schur complement of
/// `H_{n-1}` in `H_n`.
///
/// # Errors
/// Propagates kernel failures ([`Error::InvalidInput`] for non-finite data).
pub fn hankel_parametrization<T: Scalar>(
    s: &HermSequence<T>,
    tol: &Tol<T>,
) -> Result<HankelParams<T>> {
    let mut h = Vec::with_capacity(s.len());
    for j in 0..=s.kappa() {
        let k = j / 2;
        if j % 2 == 0 {
            h.push(&s[j] - theta(s, k, tol)?);
        } else {
            h.push(&s[j] - lambda_family(s, k, tol)?.lambda);
        }
    }
    Ok(HankelParams { h })
}

/// The right-sided Stieltjes parametrization `κ_0, …, κ_κ` at endpoint `α`.
#[derive(Debug, Clone, PartialEq)]
pub struct StieltjesParams<T: Scalar> {
    /// `kappa[j]` is the parameter at index `j`.
    pub kappa: Vec<CMat<T>>,
    /// The endpoint the parametrization is taken at.
    pub alpha: T,
}

/// Right-sided Stieltjes parametrization at `α`:
/// `κ_{2k} = s_{2k} - Θ_k` and `κ_{2k+1} = a_{2k} - Θ^⟨a⟩_k`, where `a` is
/// the α-shifted sequence and `Θ^⟨a⟩` its correction term.
///
/// The sequence is recoverable: `s_{2k} = Θ_k + κ_{2k}` and
/// `s_{2k+1} = α s_{2k} + Θ^⟨a⟩_k + κ_{2k+1}`.
///
/// # Errors
/// Propagates kernel failures ([`Error::InvalidInput`] for non-finite data).
pub fn stieltjes_parametrization<T: Scalar>(
    s: &HermSequence<T>,
    alpha: T,
    tol: &Tol<T>,
) -> Result<StieltjesParams<T>> {
    let a = if s.kappa() >= 1 { Some(s.shift_a(alpha)?) } else { None };
    let mut kappa = Vec::with_capacity(s.len());
    for j in 0..=s.kappa() {
        let k = j / 2;
        if j % 2 == 0 {
            kappa.push(&s[j] - theta(s, k, tol)?);
        } else {
            let a = a.as_ref().expect("κ ≥ 1 whenever an odd index exists");
            kappa.push(&a[2 * k] - theta(a, k, tol)?);
        }
    }
    Ok(StieltjesParams { kappa, alpha })
}

fn psd_assured<T: Scalar>(m: &CMat<T>, tol: &Tol<T>) -> bool {
    linalg::is_psd(m, tol).expect("finite square by construction")
}

/// Is every block Hankel matrix `H_n` (for `2n ≤ κ`) positive semidefinite?
///
/// This is the class of prefixes of moment sequences of measures on all of
/// `ℝ`. Only the even-order Hankel blocks enter; for odd `κ` the trailing
/// moment is unconstrained here (on the interval it is constrained — see
/// [`crate::fparam`]). Returns `false` for non-Hermitian input.
pub fn is_hankel_nonneg<T: Scalar>(s: &HermSequence<T>, tol: &Tol<T>) -> bool {
    if !s.is_hermitian_within(tol) {
        return false;
    }
    // PSD of the top block implies PSD of all nested principal blocks, but
    // the top block alone decides nothing about lower ones under tolerance;
    // checking all orders is cheap at desk scale and keeps the slack honest.
    (0..=s.kappa() / 2).all(|n| {
        psd_assured(&s.hankel_h(n).expect("2n ≤ κ"), tol)
    })
}

/// Right Stieltjes class at `α`: is `s` Hankel non-negative and is the
/// α-shifted sequence too? These are the prefixes of moment sequences of
/// measures on `[α, ∞)`.
pub fn is_stieltjes_right_nonneg<T: Scalar>(s: &HermSequence<T>, alpha: T, tol: &Tol<T>) -> bool {
    if !is_hankel_nonneg(s, tol) {
        return false;
    }
    s.kappa() == 0 || is_hankel_nonneg(&s.shift_a(alpha).expect("κ ≥ 1"), tol)
}

/// Left Stieltjes class at `β`: is `s` Hankel non-negative and is the
/// β-shifted sequence too? These are the prefixes of moment sequences of
/// measures on `(-∞, β]`.
pub fn is_stieltjes_left_nonneg<T: Scalar>(s: &HermSequence<T>, beta: T, tol: &Tol<T>) -> bool {
    if !is_hankel_nonneg(s, tol) {
        return false;
    }
    s.kappa() == 0 || is_hankel_nonneg(&s.shift_b(beta).expect("κ ≥ 1"), tol)
}
