//! Concrete matrix measures at desk scale: molecular (finitely supported)
//! measures with exact moments, their images under affine maps, sampling of
//! the moment space through random canonical moments, and detection of
//! forced molecularity.

use num_complex::Complex;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::fparam::{self, CanonicalMoments, IntervalContext};
use crate::hankel::HermSequence;
use crate::linalg::{self, CMat, frobenius, hermitian_part, is_hermitian};
use crate::scalar::{Scalar, cre, fpowi, lit};
use crate::tol::Tol;

/// A non-negative matrix measure concentrated on finitely many points:
/// `σ = Σ_ℓ δ_{ξ_ℓ} · A_ℓ` with strictly increasing real nodes `ξ_ℓ` and
/// PSD matrix weights `A_ℓ`.
#[derive(Debug, Clone, PartialEq)]
pub struct MolecularMeasure<T: Scalar> {
    nodes: Vec<T>,
    weights: Vec<CMat<T>>,
    dim: usize,
}

impl<T: Scalar> MolecularMeasure<T> {
    /// Builds a molecular measure from nodes and matching weights.
    ///
    /// # Errors
    /// [`Error::InvalidInput`] when the lists are empty or of different
    /// length, nodes are not finite and strictly increasing, or weights are
    /// not square of one common size with finite entries;
    /// [`Error::NotHermitian`] / [`Error::NotPsd`] when a weight fails those
    /// checks within tolerance.
    pub fn new(nodes: Vec<T>, weights: Vec<CMat<T>>, tol: &Tol<T>) -> Result<Self> {
        if nodes.is_empty() || nodes.len() != weights.len() {
            return Err(Error::InvalidInput(format!(
                "need matching non-empty node/weight lists (got {} nodes, {} weights)",
                nodes.len(),
                weights.len()
            )));
        }
        if nodes.iter().any(|x| !num_traits::Float::is_finite(*x)) {
            return Err(Error::InvalidInput("nodes must be finite".into()));
        }
        if nodes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput("nodes must be strictly increasing".into()));
        }
        let dim = weights[0].nrows();
        for (l, w) in weights.iter().enumerate() {
            if w.shape() != (dim, dim) || dim == 0 {
                return Err(Error::InvalidInput(format!(
                    "weight {l} has shape {:?}, expected square of size {dim} ≥ 1",
                    w.shape()
                )));
            }
            if !linalg::all_finite(w) {
                return Err(Error::InvalidInput(format!("weight {l} has non-finite entries")));
            }
            if !is_hermitian(w, tol) {
                return Err(Error::NotHermitian { context: format!("weight {l}") });
            }
            if !linalg::is_psd(w, tol)? {
                return Err(Error::NotPsd { context: format!("weight {l}") });
            }
        }
        Ok(Self { nodes, weights, dim })
    }

    /// The support points, strictly increasing.
    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    /// The matrix weights, aligned with [`Self::nodes`].
    pub fn weights(&self) -> &[CMat<T>] {
        &self.weights
    }

    /// Matrix size `q`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of support points.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    /// Always false; present for API completeness.
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Are all nodes inside the closed interval of `ctx`?
    pub fn supported_in(&self, ctx: &IntervalContext<T>) -> bool {
        self.nodes.iter().all(|&x| ctx.alpha() <= x && x <= ctx.beta())
    }
}

/// Power moments `s_j = Σ_ℓ ξ_ℓ^j A_ℓ` of a molecular measure, up to index
/// `kappa`. (`ξ⁰ = 1` also at `ξ = 0`.)
pub fn moments<T: Scalar>(mu: &MolecularMeasure<T>, kappa: usize) -> HermSequence<T> {
    let q = mu.dim();
    let mats = (0..=kappa)
        .map(|j| {
            let mut s = CMat::<T>::zeros(q, q);
            for (x, w) in mu.nodes.iter().zip(&mu.weights) {
                s += w * cre(fpowi(*x, j as i32));
            }
            s
        })
        .collect();
    HermSequence::from_mats_unchecked(mats)
}

/// The image of `mu` under `x ↦ theta·x + eta`: nodes move, weights stay.
///
/// Its moments are exactly the `(eta, theta)`-binomial transform of the
/// moments of `mu`.
///
/// # Errors
/// [`Error::InvalidInput`] for `theta = 0` or non-finite parameters.
pub fn image_measure<T: Scalar>(
    mu: &MolecularMeasure<T>,
    theta: T,
    eta: T,
) -> Result<MolecularMeasure<T>> {
    if theta == T::zero()
        || !num_traits::Float::is_finite(theta)
        || !num_traits::Float::is_finite(eta)
    {
        return Err(Error::InvalidInput(
            "image measure needs finite parameters with θ ≠ 0".into(),
        ));
    }
    let mut pairs: Vec<(T, CMat<T>)> = mu
        .nodes
        .iter()
        .zip(&mu.weights)
        .map(|(&x, w)| (theta * x + eta, w.clone()))
        .collect();
    if theta < T::zero() {
        pairs.reverse();
    }
    let (nodes, weights) = pairs.into_iter().unzip();
    Ok(MolecularMeasure { nodes, weights, dim: mu.dim })
}

/// Configuration of the moment-space sampler.
///
/// Fields are plain data; [`sample_moment_space`] validates them.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplerConfig<T: Scalar> {
    /// Matrix size `q ≥ 1`.
    pub q: usize,
    /// Largest moment index of the sampled sequence.
    pub kappa: usize,
    /// PRNG seed; equal seeds reproduce the draw exactly.
    pub seed: u64,
    /// Probability, per spectral coordinate of each `e_k`, of pinning it to
    /// an endpoint (`0` or `1`, fair coin) instead of drawing it uniformly.
    /// `0` samples interior sequences, `1` forces immediate degeneracy.
    pub boundary_bias: T,
    /// Scale of the total mass `e_0 = s0_scale · WW*`.
    pub s0_scale: T,
}

impl<T: Scalar> Default for SamplerConfig<T> {
    fn default() -> Self {
        Self { q: 1, kappa: 4, seed: 0, boundary_bias: T::zero(), s0_scale: T::one() }
    }
}

fn gaussian_pair(rng: &mut ChaCha12Rng) -> (f64, f64) {
    // Box–Muller; 1 - u keeps the logarithm away from zero.
    let u1 = 1.0 - rng.random::<f64>();
    let u2 = rng.random::<f64>();
    let r = (-2.0 * u1.ln()).sqrt();
    let t = std::f64::consts::TAU * u2;
    (r * t.cos(), r * t.sin())
}

/// A `q×q` matrix of i.i.d. standard complex Gaussians.
fn complex_gaussian<T: Scalar>(rng: &mut ChaCha12Rng, q: usize) -> CMat<T> {
    CMat::from_fn(q, q, |_, _| {
        let (re, im) = gaussian_pair(rng);
        Complex::new(lit::<T>(re / std::f64::consts::SQRT_2), lit::<T>(im / std::f64::consts::SQRT_2))
    })
}

/// Haar-distributed unitary via QR of a complex Gaussian matrix, with the
/// phases of the R diagonal absorbed so the distribution is exactly uniform.
fn haar_unitary<T: Scalar>(rng: &mut ChaCha12Rng, q: usize) -> CMat<T> {
    let g = complex_gaussian::<T>(rng, q);
    let (qmat, r) = g.qr().unpack();
    let phases = CMat::<T>::from_fn(q, q, |i, j| {
        if i != j {
            Complex::new(T::zero(), T::zero())
        } else {
            let d = r[(i, i)];
            let n = d.norm();
            if n > T::zero() { d / n } else { Complex::new(T::one(), T::zero()) }
        }
    });
    qmat * phases
}

/// Draws a random point of the moment space on the interval of `ctx`.
///
/// The draw happens in canonical-moment coordinates, where the space is a
/// product: `e_0 = s0_scale·WW*` with `W` complex Gaussian, and each later
/// `e_k = P_{k-1} Q_k P_{k-1}` with `Q_k = U diag(u) U*`, `U` Haar unitary
/// and each `u_i` uniform on `[0, 1]` — or pinned to an endpoint with
/// probability `boundary_bias`. Stream `k` of the seeded PRNG feeds draw
/// `k`, so prefixes of a sampled sequence are themselves reproducible.
///
/// Returns the moment sequence together with its canonical data; the result
/// always lies in the Hausdorff class of `ctx`.
///
/// # Errors
/// [`Error::InvalidInput`] on out-of-range configuration.
pub fn sample_moment_space<T: Scalar>(
    cfg: &SamplerConfig<T>,
    ctx: &IntervalContext<T>,
) -> Result<(HermSequence<T>, CanonicalMoments<T>)> {
    if cfg.q == 0 {
        return Err(Error::InvalidInput("sampler needs q ≥ 1".into()));
    }
    if !(T::zero()..=T::one()).contains(&cfg.boundary_bias) {
        return Err(Error::InvalidInput("boundary_bias must lie in [0, 1]".into()));
    }
    if !(cfg.s0_scale > T::zero()) || !num_traits::Float::is_finite(cfg.s0_scale) {
        return Err(Error::InvalidInput("s0_scale must be positive and finite".into()));
    }
    let tol = ctx.tol();
    let q = cfg.q;

    let stream = |k: u64| {
        let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
        rng.set_stream(k);
        rng
    };

    let mut rng = stream(0);
    let w = complex_gaussian::<T>(&mut rng, q);
    let e0 = hermitian_part(&(&w * w.adjoint() * cre(cfg.s0_scale)));
    let mut e = vec![e0];
    let mut width = &e[0] * cre(ctx.width());
    let mut proj = linalg::range_projection(&width, tol)?;

    for k in 1..=cfg.kappa {
        let mut rng = stream(k as u64);
        let u_mat = haar_unitary::<T>(&mut rng, q);
        let spectrum: Vec<T> = (0..q)
            .map(|_| {
                if lit::<T>(rng.random::<f64>()) < cfg.boundary_bias {
                    if rng.random::<f64>() < 0.5 { T::zero() } else { T::one() }
                } else {
                    lit::<T>(rng.random::<f64>())
                }
            })
            .collect();
        let diag = CMat::<T>::from_fn(q, q, |i, j| {
            if i == j { cre(spectrum[i]) } else { Complex::new(T::zero(), T::zero()) }
        });
        let q_mat = &u_mat * diag * u_mat.adjoint();
        let ek = hermitian_part(&(&proj * q_mat * &proj));

        let root = linalg::psd_sqrt(&width, tol).map_err(|_| {
            Error::Inconsistency(format!("sampled width d_{} lost positivity", k - 1))
        })?;
        let parent = linalg::frobenius(&width);
        width = fparam::snap_chain_width(
            hermitian_part(&(&root * (&ek - &ek * &ek) * &root)) * cre(ctx.width()),
            parent,
            ctx.width(),
            tol,
        );
        proj = linalg::range_projection(&width, tol)?;
        e.push(ek);
    }

    fparam::build_from_canonical(&e, ctx)
}

/// The first index `k` at which the section width `d_k` vanishes
/// (equivalently, `e_k` is idempotent for `k ≥ 1`, or the total mass is zero
/// for `k = 0`) — from that order on the continuation is forced and every
/// representing measure is molecular with at most `rank H` support points.
/// `None` when no width collapses up to `κ`.
///
/// This is a statement about the truncation at hand: a `None` does *not*
/// rule out molecular representing measures, it only reports that none is
/// forced yet.
///
/// # Errors
/// [`Error::NotHermitian`] / [`Error::NotInClass`] when `s` is outside the
/// Hausdorff class of `ctx`.
pub fn molecular_equivalent_order<T: Scalar>(
    s: &HermSequence<T>,
    ctx: &IntervalContext<T>,
) -> Result<Option<usize>> {
    let cm = fparam::canonical_moments(s, ctx)?;
    let tol = ctx.tol();
    if frobenius(&cm.width[0]) <= tol.eq_abs() {
        return Ok(Some(0));
    }
    Ok((1..cm.e.len()).find(|&k| fparam::is_idempotent(&cm.e[k], tol)))
}
