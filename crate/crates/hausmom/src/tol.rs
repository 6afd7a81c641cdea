//! Tolerance bundle for rank, positivity, and equality decisions.

use crate::error::{Error, Result};
use crate::scalar::{Scalar, fmax, lit};

/// Numerical tolerances used by every decision in the crate.
///
/// Moment sequences on the boundary of the moment space produce exactly
/// singular matrices whose zero singular values and eigenvalues float into
/// tiny nonzero numbers; these three knobs say how much of that float to
/// forgive.
///
/// * `rank_rel` — singular values at or below `rank_rel · σ_max` count as
///   zero (rank and pseudoinverse thresholding).
/// * `psd_abs` — eigenvalues above `-psd_abs · max(1, ‖A‖₂)` count as
///   non-negative.
/// * `eq_abs` — matrices are equal when the Frobenius norm of the difference
///   is at most `eq_abs · max(1, scale)` with `scale` the larger operand
///   norm.
///
/// `Default` is provided per concrete scalar: for `f64` the defaults are
/// `1e-10 / 1e-10 / 1e-8`; `f32` gets `1e-4 / 1e-4 / 1e-3` since the `f64`
/// values would drown under single-precision epsilon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tol<T> {
    rank_rel: T,
    psd_abs: T,
    eq_abs: T,
}

impl<T: Scalar> Tol<T> {
    /// Builds a tolerance bundle; all three values must be strictly positive
    /// and finite.
    pub fn new(rank_rel: T, psd_abs: T, eq_abs: T) -> Result<Self> {
        for (name, v) in [("rank_rel", rank_rel), ("psd_abs", psd_abs), ("eq_abs", eq_abs)] {
            if !(v > T::zero()) || !num_traits::Float::is_finite(v) {
                return Err(Error::InvalidInput(format!(
                    "tolerance {name} must be strictly positive and finite"
                )));
            }
        }
        Ok(Self { rank_rel, psd_abs, eq_abs })
    }

    /// Relative singular-value threshold.
    pub fn rank_rel(&self) -> T {
        self.rank_rel
    }

    /// Absolute eigenvalue slack factor for positivity decisions.
    pub fn psd_abs(&self) -> T {
        self.psd_abs
    }

    /// Frobenius threshold factor for equality decisions.
    pub fn eq_abs(&self) -> T {
        self.eq_abs
    }

    /// Absolute singular-value cutoff for a matrix with largest singular
    /// value `sigma_max`.
    pub(crate) fn rank_cutoff(&self, sigma_max: T) -> T {
        self.rank_rel * sigma_max
    }

    /// Eigenvalue slack for a matrix with spectral norm `norm2`.
    pub(crate) fn psd_slack(&self, norm2: T) -> T {
        self.psd_abs * fmax(T::one(), norm2)
    }

    /// Frobenius threshold for equality tests at the given scale.
    pub(crate) fn eq_threshold(&self, scale: T) -> T {
        self.eq_abs * fmax(T::one(), scale)
    }
}

impl Default for Tol<f64> {
    fn default() -> Self {
        Self { rank_rel: 1e-10, psd_abs: 1e-10, eq_abs: 1e-8 }
    }
}

impl Default for Tol<f32> {
    fn default() -> Self {
        Self { rank_rel: 1e-4, psd_abs: 1e-4, eq_abs: 1e-3 }
    }
}

impl<T: Scalar> Tol<T> {
    /// The `f64` defaults converted into `T`; handy in generic code. For
    /// `f32` prefer [`Default`], which picks defaults that respect single
    /// precision.
    pub fn strict() -> Self {
        Self { rank_rel: lit(1e-10), psd_abs: lit(1e-10), eq_abs: lit(1e-8) }
    }
}
