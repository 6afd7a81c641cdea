//! Error type shared by the whole crate.

/// Everything that can go wrong in this crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// Malformed input: shape mismatch, index out of range, or non-finite
    /// entries.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A matrix that must be Hermitian deviates from its adjoint beyond the
    /// equality tolerance.
    #[error("{context}: matrix is not Hermitian within tolerance")]
    NotHermitian {
        /// Which input failed, e.g. `"psd_sqrt"` or `"s[3]"`.
        context: String,
    },

    /// A matrix that must be positive semidefinite has an eigenvalue below
    /// the admissible slack.
    #[error("{context}: matrix is not positive semidefinite within tolerance")]
    NotPsd {
        /// Which input failed.
        context: String,
    },

    /// A sequence fails membership in the moment class an operation requires.
    /// `param` and `index` point at the first violating parameter matrix.
    #[error("sequence is not in the {class} class: {param}[{index}] is not positive semidefinite")]
    NotInClass {
        /// Human name of the class, e.g. `"Hausdorff non-negative"`.
        class: &'static str,
        /// Parameter family in which the violation shows, e.g. `"f"`.
        param: &'static str,
        /// Index of the first violating matrix.
        index: usize,
    },

    /// A would-be canonical-moment sequence leaves the admissible range
    /// `0 ≼ e_k ≼ P_{k-1}` by more than the tolerance.
    #[error("canonical moment e[{index}] out of range: {detail}")]
    CanonicalOutOfRange {
        /// Index of the offending matrix.
        index: usize,
        /// What failed (not PSD, exceeds the range projection, ...).
        detail: String,
    },

    /// Two internal computations of the same quantity disagree beyond any
    /// plausible rounding. Indicates a tolerance misconfiguration or a bug,
    /// not bad user input.
    #[error("numerical consistency check failed: {0}")]
    Inconsistency(String),
}

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
