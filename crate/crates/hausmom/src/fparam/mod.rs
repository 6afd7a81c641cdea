//! The interval-specific core of the crate.
//!
//! Everything here is relative to a fixed compact interval `[α, β]` carried by
//! an [`IntervalContext`]. Given a moment sequence `s_0, …, s_κ`, each next
//! moment is confined to a *matricial interval* `[u_j, o_j]` in the Löwner
//! order; from its endpoints flow
//!
//! * the [`Envelope`]: extremal endpoints, gaps `A_j`/`B_j` to the data,
//!   section widths `d_j = o_j - u_j` and midpoints,
//! * the [`FParams`] sequence `f_0, …, f_{2κ}` interleaving those gaps, whose
//!   simultaneous positive semidefiniteness characterises truncated Hausdorff
//!   moment sequences ([`is_hausdorff_nonneg`]),
//! * the matricial canonical moments [`CanonicalMoments`], a bijective,
//!   interval-free encoding of the sequence ([`canonical_moments`] /
//!   [`from_canonical`]),
//! * one-step extension theory ([`extension_interval`], [`extend`]),
//! * classification and reporting ([`classify`], [`det_rank_report`],
//!   [`dette_studden`]).

mod canonical;
mod envelope;
mod extend;
mod params;
mod report;

pub use canonical::{CanonicalMoments, canonical_moments, from_canonical, validate_canonical};
pub(crate) use canonical::{build_from_canonical, snap_chain_width};
pub use envelope::{Envelope, envelope};
pub use extend::{MatInterval, extend, extend_central, extend_scalar, extension_interval};
pub use params::{
    FParams, f_parametrization, is_hausdorff_nonneg, is_hausdorff_pos, validate_f_params,
};
pub use report::{
    ChainQuantities, Classification, DetRankReport, FamilyDetRank, classify, det_rank_report,
    dette_studden,
};
pub(crate) use report::is_idempotent;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tol::Tol;

/// The compact interval `[α, β]` together with the numerical tolerances in
/// force — the ambient data of every Hausdorff-side operation.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalContext<T: Scalar> {
    alpha: T,
    beta: T,
    tol: Tol<T>,
}

impl<T: Scalar> IntervalContext<T> {
    /// Creates a context for the interval `[alpha, beta]`.
    ///
    /// # Errors
    /// [`Error::InvalidInput`] unless both endpoints are finite and
    /// `alpha < beta` strictly.
    pub fn new(alpha: T, beta: T, tol: Tol<T>) -> Result<Self> {
        if !num_traits::Float::is_finite(alpha) || !num_traits::Float::is_finite(beta) {
            return Err(Error::InvalidInput("interval endpoints must be finite".into()));
        }
        if alpha >= beta {
            return Err(Error::InvalidInput(format!(
                "interval endpoints must satisfy alpha < beta (got [{alpha}, {beta}])"
            )));
        }
        Ok(Self { alpha, beta, tol })
    }

    /// Left endpoint `α`.
    pub fn alpha(&self) -> T {
        self.alpha
    }

    /// Right endpoint `β`.
    pub fn beta(&self) -> T {
        self.beta
    }

    /// Interval length `β - α`.
    pub fn width(&self) -> T {
        self.beta - self.alpha
    }

    /// Interval midpoint `(α + β) / 2`.
    pub fn midpoint(&self) -> T {
        (self.alpha + self.beta) / (T::one() + T::one())
    }

    /// The tolerances in force.
    pub fn tol(&self) -> &Tol<T> {
        &self.tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn context_guards() {
        assert!(IntervalContext::new(0.0, 1.0, Tol::default()).is_ok());
        assert!(IntervalContext::new(1.0, 1.0, Tol::default()).is_err());
        assert!(IntervalContext::new(2.0, 1.0, Tol::default()).is_err());
        assert!(IntervalContext::new(f64::NEG_INFINITY, 1.0, Tol::default()).is_err());
        assert!(IntervalContext::new(0.0, f64::NAN, Tol::default()).is_err());
        let c = IntervalContext::new(-1.5, 2.5, Tol::default()).unwrap();
        assert_eq!(c.width(), 4.0);
        assert_eq!(c.midpoint(), 0.5);
    }
}
