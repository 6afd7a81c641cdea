//! On-disk JSON formats and their conversions to library types.
//!
//! All files are single JSON objects. Complex matrices appear as nested
//! arrays of `[re, im]` pairs, row by row. Floating-point numbers are
//! written with 17 significant digits, so every `f64` survives a
//! write/read round trip bit for bit.
//!
//! * **Sequence file** — an interval plus a list of `q×q` matrices, either
//!   power moments (`"kind": "moments"`) or canonical moments
//!   (`"kind": "canonical"`).
//! * **Measure file** — a molecular measure: real nodes and one PSD weight
//!   matrix per node, plus the interval the measure lives on.
//! * **Matrix file** — a single matrix, used for the extension parameter.

use std::fmt;
use std::path::Path;

use hausmom::num_complex::Complex;
use hausmom::{CMat64, HermSequence64, IntervalContext64, Tol64};
use serde::{Deserialize, Serialize};

use crate::Failure;

/// A complex matrix as rows of `[re, im]` pairs.
pub type MatrixData = Vec<Vec<[f64; 2]>>;

/// What the `data` list of a [`SequenceFile`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SequenceKind {
    /// Power moments `s_0, …, s_κ`.
    Moments,
    /// Canonical moments `e_0, …, e_κ`.
    Canonical,
}

impl fmt::Display for SequenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SequenceKind::Moments => "moments",
            SequenceKind::Canonical => "canonical",
        })
    }
}

/// A (power or canonical) moment sequence on an interval.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SequenceFile {
    /// Lower endpoint of the interval.
    pub alpha: f64,
    /// Upper endpoint; must exceed `alpha`.
    pub beta: f64,
    /// Interpretation of `data`.
    pub kind: SequenceKind,
    /// Matrix size `q`.
    pub dim: usize,
    /// The matrices `s_0, …, s_κ` (or `e_0, …, e_κ`).
    pub data: Vec<MatrixData>,
    /// Rank of each section width `d_k` (written by `canonical`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width_rank: Option<Vec<usize>>,
    /// Rank of each range projection `P_k` (written by `canonical`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub proj_rank: Option<Vec<usize>>,
}

/// A molecular matrix measure: point masses `weights[i]` at `nodes[i]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeasureFile {
    /// Lower endpoint of the interval carrying the measure.
    pub alpha: f64,
    /// Upper endpoint; must exceed `alpha`.
    pub beta: f64,
    /// Matrix size `q`.
    pub dim: usize,
    /// Distinct real support points.
    pub nodes: Vec<f64>,
    /// One PSD `q×q` weight per node.
    pub weights: Vec<MatrixData>,
}

/// A single matrix, e.g. the extension parameter `K`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixFile {
    /// Matrix size `q`.
    pub dim: usize,
    /// The matrix itself.
    pub matrix: MatrixData,
}

/// Reads and parses a JSON file; parse errors carry line/column positions.
pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|err| Failure::Invalid(format!("cannot read {}: {err}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|err| Failure::Invalid(format!("{}: {err}", path.display())))
}

/// Converts nested `[re, im]` rows into a matrix, validating shape and
/// finiteness; `what` names the offending object in diagnostics.
pub fn mat_from_data(data: &MatrixData, dim: usize, what: &str) -> Result<CMat64, Failure> {
    if data.len() != dim {
        return Err(Failure::Invalid(format!(
            "{what}: expected {dim} rows, found {}",
            data.len()
        )));
    }
    for (i, row) in data.iter().enumerate() {
        if row.len() != dim {
            return Err(Failure::Invalid(format!(
                "{what}, row {i}: expected {dim} entries, found {}",
                row.len()
            )));
        }
        for (j, &[re, im]) in row.iter().enumerate() {
            if !re.is_finite() || !im.is_finite() {
                return Err(Failure::Invalid(format!(
                    "{what}, entry ({i}, {j}): non-finite value"
                )));
            }
        }
    }
    Ok(CMat64::from_fn(dim, dim, |i, j| {
        let [re, im] = data[i][j];
        Complex::new(re, im)
    }))
}

/// The inverse of [`mat_from_data`].
pub fn mat_to_data(m: &CMat64) -> MatrixData {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

impl SequenceFile {
    /// Interval and dimension invariants shared by both kinds.
    pub fn validate(&self) -> Result<(), Failure> {
        if !self.alpha.is_finite() || !self.beta.is_finite() {
            return Err(Failure::Invalid("interval endpoints must be finite".into()));
        }
        if self.alpha >= self.beta {
            return Err(Failure::Invalid(format!(
                "invalid interval: alpha = {} is not below beta = {}",
                self.alpha, self.beta
            )));
        }
        if self.dim == 0 {
            return Err(Failure::Invalid("dim must be at least 1".into()));
        }
        if self.data.is_empty() {
            return Err(Failure::Invalid("data must hold at least one matrix".into()));
        }
        Ok(())
    }

    /// Fails unless the file is of the `kind` a command expects.
    pub fn require_kind(&self, kind: SequenceKind) -> Result<(), Failure> {
        if self.kind == kind {
            Ok(())
        } else {
            Err(Failure::Invalid(format!(
                "expected a \"{kind}\" file, found kind \"{}\"",
                self.kind
            )))
        }
    }

    /// The `data` list as matrices, after [`Self::validate`].
    pub fn matrices(&self) -> Result<Vec<CMat64>, Failure> {
        self.validate()?;
        self.data
            .iter()
            .enumerate()
            .map(|(k, m)| mat_from_data(m, self.dim, &format!("data[{k}]")))
            .collect()
    }

    /// The `data` list as a moment sequence.
    pub fn sequence(&self) -> Result<HermSequence64, Failure> {
        HermSequence64::new(self.matrices()?).map_err(|err| Failure::Invalid(err.to_string()))
    }

    /// The interval of the file together with the chosen tolerances.
    pub fn context(&self, tol: Tol64) -> Result<IntervalContext64, Failure> {
        self.validate()?;
        IntervalContext64::new(self.alpha, self.beta, tol)
            .map_err(|err| Failure::Invalid(err.to_string()))
    }

    /// Assembles a file from matrices on a given interval.
    pub fn from_matrices(alpha: f64, beta: f64, kind: SequenceKind, mats: &[CMat64]) -> Self {
        Self {
            alpha,
            beta,
            kind,
            dim: mats.first().map_or(0, CMat64::nrows),
            data: mats.iter().map(mat_to_data).collect(),
            width_rank: None,
            proj_rank: None,
        }
    }
}

/// JSON formatter that writes every float with 17 significant digits.
struct SigDigits17;

impl serde_json::ser::Formatter for SigDigits17 {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        write!(writer, "{value:.16e}")
    }
}

/// Serializes to a JSON string with round-trip-exact floats.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigDigits17);
    value
        .serialize(&mut ser)
        .expect("serialization of plain data structures cannot fail");
    String::from_utf8(buf).expect("serializer emits UTF-8")
}

/// Prints a value as one JSON line on stdout.
pub fn emit<T: Serialize>(value: &T) {
    println!("{}", to_json(value));
}
