//! Dense complex linear-algebra kernel.
//!
//! Everything downstream (Hankel blocks, parametrizations, canonical moments)
//! reduces to a handful of primitives over dense complex matrices: the
//! Moore–Penrose inverse, the PSD square root, range projections, the
//! parallel sum, Schur complements, and rank / Löwner-order decisions. All of
//! them are tolerance-driven — see [`Tol`] — because the interesting inputs
//! sit on the boundary of the moment space where matrices are exactly
//! singular in theory and almost singular in floating point.
//!
//! Matrices expected to be Hermitian are symmetrized as `(A + A*)/2` before
//! any eigendecomposition, so downstream code never has to worry about
//! eigenvalues picking up rounding-sized imaginary parts.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{Scalar, cre, fabs, ffma, fmax, fsqrt};
use crate::tol::Tol;

/// Dense complex matrix over the real scalar `T`.
pub type CMat<T> = DMatrix<Complex<T>>;

// ---------------------------------------------------------------------------
// internal helpers shared across the crate
// ---------------------------------------------------------------------------

/// Frobenius norm.
pub(crate) fn frobenius<T: Scalar>(a: &CMat<T>) -> T {
    fsqrt(a.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()))
}

/// True when every entry is finite.
pub(crate) fn all_finite<T: Scalar>(a: &CMat<T>) -> bool {
    a.iter().all(|z| {
        num_traits::Float::is_finite(z.re) && num_traits::Float::is_finite(z.im)
    })
}

fn ensure_finite<T: Scalar>(a: &CMat<T>, what: &str) -> Result<()> {
    if all_finite(a) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{what}: non-finite entries")))
    }
}

/// Hermitian part `(A + A*)/2`.
pub(crate) fn hermitian_part<T: Scalar>(a: &CMat<T>) -> CMat<T> {
    (a + a.adjoint()) * cre(crate::scalar::lit::<T>(0.5))
}

/// `‖A − A*‖_F`, the distance from being Hermitian.
pub(crate) fn herm_deviation<T: Scalar>(a: &CMat<T>) -> T {
    frobenius(&(a - a.adjoint()))
}

/// Hermitian within `eq_abs` relative to the matrix scale.
pub(crate) fn is_hermitian<T: Scalar>(a: &CMat<T>, tol: &Tol<T>) -> bool {
    a.is_square() && herm_deviation(a) <= tol.eq_threshold(frobenius(a))
}

/// `‖A − B‖_F ≤ eq_abs · max(1, ‖A‖_F, ‖B‖_F)`.
#[cfg_attr(not(test), allow(dead_code))]
pub(crate) fn approx_eq<T: Scalar>(a: &CMat<T>, b: &CMat<T>, tol: &Tol<T>) -> bool {
    a.shape() == b.shape()
        && frobenius(&(a - b)) <= tol.eq_threshold(fmax(frobenius(a), frobenius(b)))
}

/// Eigendecomposition of the Hermitian part of `a`: real eigenvalues plus a
/// unitary eigenvector matrix.
pub(crate) fn herm_eigen<T: Scalar>(a: &CMat<T>) -> (DVector<T>, CMat<T>) {
    let se = hermitian_part(a).symmetric_eigen();
    (se.eigenvalues, se.eigenvectors)
}

/// Rebuilds `Q f(Λ) Q*` from an eigendecomposition, mapping each eigenvalue
/// through `f`.
pub(crate) fn eig_map<T: Scalar>(
    evals: &DVector<T>,
    evecs: &CMat<T>,
    f: impl Fn(T) -> T,
) -> CMat<T> {
    let n = evals.len();
    let lam = CMat::<T>::from_fn(n, n, |i, j| {
        if i == j { cre(f(evals[i])) } else { Complex::new(T::zero(), T::zero()) }
    });
    evecs * lam * evecs.adjoint()
}

/// Hermitian to machine precision — a far tighter test than [`is_hermitian`],
/// which uses the user-facing equality tolerance.
///
/// Matrices built as `(A + A*)/2` (which is every Hermitian intermediate this
/// crate produces) satisfy this bit-exactly. They are sent to the Hermitian
/// eigensolver, which resolves nearly-singular spectra reliably; the general
/// bidiagonalization SVD can lose many digits on such inputs, enough to turn
/// boundary rank decisions into garbage.
fn machine_hermitian<T: Scalar>(a: &CMat<T>) -> bool {
    a.is_square()
        && herm_deviation(a)
            <= crate::scalar::lit::<T>(64.0)
                * T::default_epsilon()
                * fmax(T::one(), frobenius(a))
}

/// Eigendecomposition of a Hermitian matrix together with the rank cutoff
/// that matches the SVD convention (`σ_i = |λ_i|`, threshold
/// `rank_rel · max σ`).
fn herm_spectrum<T: Scalar>(a: &CMat<T>, tol: &Tol<T>) -> (DVector<T>, CMat<T>, T) {
    let (evals, evecs) = herm_eigen(a);
    let lam_max = evals.iter().fold(T::zero(), |m, &l| fmax(m, fabs(l)));
    let cutoff = tol.rank_cutoff(lam_max);
    (evals, evecs, cutoff)
}

/// Hermitian embedding `[[0, A], [A*, 0]]` of a general `m×n` matrix.
///
/// Its spectrum is `{±σ_i}` plus zeros, and the lower-left block of any odd
/// spectral function of it equals that function applied to the singular
/// values of `A`. This routes rank and pseudoinverse decisions for arbitrary
/// matrices through the Hermitian eigensolver without squaring the spectrum
/// (unlike the normal-equations trick, which would halve the resolvable
/// range of singular values).
fn hermitian_embedding<T: Scalar>(a: &CMat<T>) -> CMat<T> {
    let (m, n) = a.shape();
    let mut big = CMat::<T>::zeros(m + n, m + n);
    big.view_mut((0, m), (m, n)).copy_from(a);
    big.view_mut((m, 0), (n, m)).copy_from(&a.adjoint());
    big
}

/// Neumaier-compensated accumulator whose products enter exactly (fused
/// multiply-add splits each product into its rounded value and the rounding
/// error). Sums built this way are accurate to a couple of ulps of the true
/// result even under heavy cancellation.
struct CompSum<T> {
    sum: T,
    comp: T,
}

impl<T: Scalar> CompSum<T> {
    fn new() -> Self {
        Self { sum: T::zero(), comp: T::zero() }
    }

    fn add(&mut self, x: T) {
        let t = self.sum + x;
        self.comp = self.comp
            + if fabs(self.sum) >= fabs(x) { (self.sum - t) + x } else { (x - t) + self.sum };
        self.sum = t;
    }

    fn add_prod(&mut self, a: T, b: T) {
        let p = a * b;
        self.add(p);
        self.add(ffma(a, b, -p));
    }

    fn value(&self) -> T {
        self.sum + self.comp
    }
}

/// `y − h·x` with compensated dot products.
///
/// A plain product would bury the residual under `ε·‖h‖·‖x‖` rounding noise —
/// exactly the size of the quantity itself once `x` nearly solves the system.
/// The compensated version resolves it to a few ulps, which is what makes the
/// refinement step in [`solve_refined`] actually converge.
fn residual_compensated<T: Scalar>(y: &CMat<T>, h: &CMat<T>, x: &CMat<T>) -> CMat<T> {
    CMat::from_fn(y.nrows(), y.ncols(), |i, j| {
        let mut re = CompSum::new();
        let mut im = CompSum::new();
        re.add(y[(i, j)].re);
        im.add(y[(i, j)].im);
        for k in 0..h.ncols() {
            let a = h[(i, k)];
            let b = x[(k, j)];
            re.add_prod(-a.re, b.re);
            re.add_prod(a.im, b.im);
            im.add_prod(-a.re, b.im);
            im.add_prod(-a.im, b.re);
        }
        Complex::new(re.value(), im.value())
    })
}

/// `h⁺·y` with two steps of iterative refinement on compensated residuals.
///
/// `hp` must be the Moore–Penrose inverse of `h` (as produced by
/// [`pinv_and_norm`]). A factorization-based solve leaves a forward error of
/// order `κ(h)·ε`; refinement against near-exact residuals contracts it
/// towards a few ulps of the solution. The envelope quantities need this:
/// they feed differences whose scale shrinks geometrically along the
/// sequence while plain solve errors stay absolute, so without refinement
/// the relative accuracy of the late section widths collapses.
///
/// For singular `h` the correction passes through `hp`, which projects onto
/// the numerical range, so the iteration stays on the minimal-norm solution
/// instead of chasing the out-of-range residual component.
pub(crate) fn solve_refined<T: Scalar>(h: &CMat<T>, hp: &CMat<T>, y: &CMat<T>) -> CMat<T> {
    let mut x = hp * y;
    for _ in 0..2 {
        let r = residual_compensated(y, h, &x);
        x += hp * r;
    }
    x
}

// ---------------------------------------------------------------------------
// public operations
// ---------------------------------------------------------------------------

/// Moore–Penrose inverse of `a`.
///
/// Singular values at or below `rank_rel · σ_max` are treated as exact
/// zeros. Hermitian input is inverted on its eigendecomposition; general
/// input goes through the Hermitian embedding `[[0, A], [A*, 0]]`, so both
/// paths use the same (well-conditioned) eigensolver. The result `X`
/// satisfies the four defining equations `AXA = A`, `XAX = X`,
/// `(AX)* = AX`, `(XA)* = XA` up to rounding.
///
/// # Errors
/// [`Error::InvalidInput`] on non-finite entries.
pub fn pinv<T: Scalar>(a: &CMat<T>, tol: &Tol<T>) -> Result<CMat<T>> {
    Ok(pinv_and_norm(a, tol)?.0)
}

/// [`pinv`] together with `‖A⁺‖₂`, the reciprocal of the smallest retained
/// singular value (zero for the zero matrix). Callers forming products with
/// the pseudoinverse use the norm to budget their rounding noise.
pub(crate) fn pinv_and_norm<T: Scalar>(a: &CMat<T>, tol: &Tol<T>) -> Result<(CMat<T>, T)> {
    ensure_finite(a, "pinv")?;
    let kept_inv_norm = |evals: &DVector<T>, cutoff: T| {
        evals.iter().fold(T::zero(), |m, &l| {
            if fabs(l) > cutoff { fmax(m, T::one() / fabs(l)) } else { m }
        })
    };
    if machine_hermitian(a) {
        let (evals, evecs, cutoff) = herm_spectrum(a, tol);
        let p = eig_map(&evals, &evecs, |l| {
            if fabs(l) > cutoff { T::one() / l } else { T::zero() }
        });
        return Ok((p, kept_inv_norm(&evals, cutoff)));
    }
    let (evals, evecs, cutoff) = herm_spectrum(&hermitian_embedding(a), tol);
    let big_pinv = eig_map(&evals, &evecs, |l| {
        if fabs(l) > cutoff { T::one() / l } else { T::zero() }
    });
    let (m, n) = a.shape();
    Ok((big_pinv.view((m, 0), (n, m)).into_owned(), kept_inv_norm(&evals, cutoff)))
}

/// Number of singular values above `rank_rel · σ_max`.
///
/// # Errors
/// [`Error::InvalidInput`] on non-finite entries.
pub fn rank_tol<T: Scalar>(a: &CMat<T>, tol: &Tol<T>) -> Result<usize> {
    ensure_finite(a, "rank_tol")?;
    if machine_hermitian(a) {
        let (evals, _, cutoff) = herm_spectrum(a, tol);
        return Ok(evals.iter().filter(|&&l| fabs(l) > cutoff).count());
    }
    // Each singular value of `a` shows up twice in the embedding, as ±σ_i.
    let (evals, _, cutoff) = herm_spectrum(&hermitian_embedding(a), tol);
    let doubled = evals.iter().filter(|&&l| fabs(l) > cutoff).count();
    Ok(doubled.div_ceil(2))
}

/// [`rank_tol`] with an additional absolute cutoff.
///
/// Singular values at or below `floor` count as zero even when the relative
/// cutoff `rank_rel · σ_max` is smaller. Callers pass a bound on the
/// rounding junk inherent in how the matrix was assembled: a matrix whose
/// true value is singular to working precision consists entirely of such
/// junk, and a purely relative cutoff would then read the noise as full
/// rank — the noise itself providing the reference `σ_max`.
pub(crate) fn rank_with_floor<T: Scalar>(a: &CMat<T>, tol: &Tol<T>, floor: T) -> Result<usize> {
    ensure_finite(a, "rank_with_floor")?;
    if machine_hermitian(a) {
        let (evals, _, cutoff) = herm_spectrum(a, tol);
        let cutoff = fmax(cutoff, floor);
        return Ok(evals.iter().filter(|&&l| fabs(l) > cutoff).count());
    }
    let (evals, _, cutoff) = herm_spectrum(&hermitian_embedding(a), tol);
    let cutoff = fmax(cutoff, floor);
    let doubled = evals.iter().filter(|&&l| fabs(l) > cutoff).count();
    Ok(doubled.div_ceil(2))
}

/// The unique positive semidefinite square root `Q` with `Q² = A`.
///
/// Computed by Hermitian eigendecomposition. Eigenvalues at or below the
/// rank cutoff `rank_rel · |λ|_max` — including ones pushed below zero by
/// rounding — are treated as exact zeros, the same decision [`pinv`] makes.
/// Without that agreement, a rounding-sized positive eigenvalue would
/// survive the square root as `√ε` and then be inverted by a later
/// pseudoinverse.
///
/// # Errors
/// [`Error::InvalidInput`] for non-square or non-finite input,
/// [`Error::NotHermitian`] / [`Error::NotPsd`] if `a` leaves the tolerance
/// band around the Hermitian PSD cone.
pub fn psd_sqrt<T: Scalar>(a: &CMat<T>, tol: &Tol<T>) -> Result<CMat<T>> {
    ensure_finite(a, "psd_sqrt")?;
    if !a.is_square() {
        return Err(Error::InvalidInput("psd_sqrt: matrix must be square".into()));
    }
    if !is_hermitian(a, tol) {
        return Err(Error::NotHermitian { context: "psd_sqrt".into() });
    }
    let (evals, evecs) = herm_eigen(a);
    let norm2 = evals.iter().fold(T::zero(), |m, &l| fmax(m, fabs(l)));
    let slack = tol.psd_slack(norm2);
    if evals.iter().any(|&l| l < -slack) {
        return Err(Error::NotPsd { context: "psd_sqrt".into() });
    }
    let cutoff = tol.rank_cutoff(norm2);
    Ok(eig_map(&evals, &evecs, |l| if l > cutoff { fsqrt(l) } else { T::zero() }))
}

/// Orthogonal projection onto the range of `a`, i.e. `A·A⁺`.
///
/// The result is Hermitian and idempotent up to rounding.
///
/// # Errors
/// [`Error::InvalidInput`] on non-finite entries.
pub fn range_projection<T: Scalar>(a: &CMat<T>, tol: &Tol<T>) -> Result<CMat<T>> {
    ensure_finite(a, "range_projection")?;
    if machine_hermitian(a) {
        // Build the spectral projector directly instead of multiplying
        // A·A⁺, so eigenvalues land on {0, 1} up to a single rounding step.
        let (evals, evecs, cutoff) = herm_spectrum(a, tol);
        let p = eig_map(&evals, &evecs, |l| {
            if fabs(l) > cutoff { T::one() } else { T::zero() }
        });
        return Ok(hermitian_part(&p));
    }
    let p = a * pinv(a, tol)?;
    // A·A⁺ is Hermitian in exact arithmetic; symmetrize away the rounding.
    Ok(hermitian_part(&p))
}

/// Parallel sum `A (A + B)⁺ B`.
///
/// For positive semidefinite `A`, `B` this is the matrix analogue of the
/// harmonic-mean construction `ab/(a+b)`; it is again PSD and symmetric in
/// its arguments.
///
/// # Errors
/// [`Error::InvalidInput`] on shape mismatch or non-finite entries.
pub fn parallel_sum<T: Scalar>(a: &CMat<T>, b: &CMat<T>, tol: &Tol<T>) -> Result<CMat<T>> {
    if a.shape() != b.shape() {
        return Err(Error::InvalidInput(format!(
            "parallel_sum: shape mismatch {:?} vs {:?}",
            a.shape(),
            b.shape()
        )));
    }
    let sum = a + b;
    Ok(a * pinv(&sum, tol)? * b)
}

/// Schur complement of the leading `p×p` block `A` in `M = [[A, B], [C, D]]`,
/// i.e. `D − C A⁺ B`.
///
/// # Errors
/// [`Error::InvalidInput`] when `M` is not square, `p` is out of range
/// (`1 ≤ p ≤ n−1`), or entries are non-finite.
pub fn schur_complement<T: Scalar>(m: &CMat<T>, p: usize, tol: &Tol<T>) -> Result<CMat<T>> {
    if !m.is_square() {
        return Err(Error::InvalidInput("schur_complement: matrix must be square".into()));
    }
    let n = m.nrows();
    if p == 0 || p >= n {
        return Err(Error::InvalidInput(format!(
            "schur_complement: block size {p} out of range for a {n}×{n} matrix"
        )));
    }
    let q = n - p;
    let a = m.view((0, 0), (p, p)).into_owned();
    let b = m.view((0, p), (p, q)).into_owned();
    let c = m.view((p, 0), (q, p)).into_owned();
    let d = m.view((p, p), (q, q)).into_owned();
    Ok(d - c * pinv(&a, tol)? * b)
}

fn psd_eigen_bounds<T: Scalar>(a: &CMat<T>, what: &str) -> Result<(T, T, T)> {
    ensure_finite(a, what)?;
    if !a.is_square() {
        return Err(Error::InvalidInput(format!("{what}: matrix must be square")));
    }
    let (evals, _) = herm_eigen(a);
    let norm2 = evals.iter().fold(T::zero(), |m, &l| fmax(m, fabs(l)));
    let min = evals.iter().fold(T::infinity(), |m, &l| if l < m { l } else { m });
    let max = evals.iter().fold(T::neg_infinity(), |m, &l| if l > m { l } else { m });
    Ok((min, max, norm2))
}

/// Is `(A + A*)/2` positive semidefinite, with `psd_abs` slack?
///
/// # Errors
/// [`Error::InvalidInput`] for non-square or non-finite input.
pub fn is_psd<T: Scalar>(a: &CMat<T>, tol: &Tol<T>) -> Result<bool> {
    is_psd_within(a, tol, T::zero())
}

/// [`is_psd`] with an additional absolute slack, for callers that know the
/// computational noise floor of `a` exceeds the generic tolerance (boundary
/// parameters assembled through ill-conditioned pseudoinverses).
pub(crate) fn is_psd_within<T: Scalar>(a: &CMat<T>, tol: &Tol<T>, extra: T) -> Result<bool> {
    let (min, _, norm2) = psd_eigen_bounds(a, "is_psd")?;
    Ok(min >= -fmax(tol.psd_slack(norm2), extra))
}

/// Is `(A + A*)/2` positive definite, i.e. is its smallest eigenvalue above
/// the `psd_abs` slack?
///
/// # Errors
/// [`Error::InvalidInput`] for non-square or non-finite input.
pub fn is_pd<T: Scalar>(a: &CMat<T>, tol: &Tol<T>) -> Result<bool> {
    is_pd_within(a, tol, T::zero())
}

/// [`is_pd`] with an additional absolute slack; see [`is_psd_within`].
pub(crate) fn is_pd_within<T: Scalar>(a: &CMat<T>, tol: &Tol<T>, extra: T) -> Result<bool> {
    let (min, _, norm2) = psd_eigen_bounds(a, "is_pd")?;
    Ok(min > fmax(tol.psd_slack(norm2), extra))
}

/// Löwner order: `A ≼ B`, decided as `B − A` positive semidefinite.
///
/// # Errors
/// [`Error::InvalidInput`] on shape mismatch, non-square, or non-finite
/// input.
pub fn loewner_leq<T: Scalar>(a: &CMat<T>, b: &CMat<T>, tol: &Tol<T>) -> Result<bool> {
    if a.shape() != b.shape() {
        return Err(Error::InvalidInput(format!(
            "loewner_leq: shape mismatch {:?} vs {:?}",
            a.shape(),
            b.shape()
        )));
    }
    is_psd(&(b - a), tol)
}
