//! Matrix-valued Hausdorff moment sequences on a compact interval.
//!
//! A sequence `s_0, …, s_κ` of Hermitian `q×q` matrices is a *Hausdorff moment
//! sequence* on `[α, β]` when some non-negative matrix measure on the interval
//! has exactly these power moments. This crate implements the computational
//! machinery around such sequences:
//!
//! * [`linalg`] — dense complex kernel: Moore–Penrose inverse, PSD square
//!   root, range projections, parallel sum, Schur complements, and
//!   Löwner-order decisions under explicit tolerances ([`Tol`]).
//! * [`hankel`] — block Hankel matrices, the endpoint-shifted sequences, and
//!   the real-line/half-line moment classes and parametrizations.
//! * [`fparam`] — the interval-specific core: moment envelopes, the
//!   F-parametrization, matricial canonical moments with forward and inverse
//!   bijections, one-step extension, classification, and chain quantities.
//! * [`transforms`] — affine (binomial) transformation laws and symmetry.
//! * [`measures`] — molecular (finitely supported) matrix measures and
//!   moment-space sampling.
//!
//! Everything is generic over the real scalar underneath ([`Scalar`], i.e.
//! `f32` or `f64`); `*64`/`*32` aliases for the concrete types live at the
//! crate root.
//!
//! ```
//! use hausmom::fparam::{self, IntervalContext};
//! use hausmom::hankel::HermSequence;
//! # fn main() -> Result<(), hausmom::Error> {
//! // Moments of the uniform distribution on [0,1]: s_j = 1/(j+1).
//! let s = HermSequence::from_real_scalars((0..=4).map(|j| 1.0 / (j as f64 + 1.0)))?;
//! let ctx = IntervalContext::new(0.0, 1.0, Default::default())?;
//! let cm = fparam::canonical_moments(&s, &ctx)?;
//! // Its canonical moments are 1, 1/2, 1/3, 1/2, 2/5.
//! assert!((cm.e[2][(0, 0)].re - 1.0 / 3.0).abs() < 1e-12);
//! # Ok(()) }
//! ```

#![warn(missing_docs)]

pub mod error;
pub mod fparam;
pub mod hankel;
pub mod linalg;
pub mod measures;
pub mod scalar;
pub mod tol;
pub mod transforms;

pub use error::Error;
pub use linalg::CMat;
pub use scalar::Scalar;
pub use tol::Tol;

// Re-export the matrix substrate so downstream crates don't need their own
// version pins to name our types.
pub use nalgebra;
pub use num_complex;

/// Dense complex matrix at the default `f64` precision.
pub type CMat64 = CMat<f64>;
/// Dense complex matrix over `f32`.
pub type CMat32 = CMat<f32>;
/// Tolerances at `f64` precision.
pub type Tol64 = Tol<f64>;
/// Tolerances over `f32`.
pub type Tol32 = Tol<f32>;
/// Moment sequence at `f64` precision.
pub type HermSequence64 = hankel::HermSequence<f64>;
/// Moment sequence over `f32`.
pub type HermSequence32 = hankel::HermSequence<f32>;
/// Problem instance (interval plus tolerances) at `f64` precision.
pub type IntervalContext64 = fparam::IntervalContext<f64>;
/// Problem instance over `f32`.
pub type IntervalContext32 = fparam::IntervalContext<f32>;
