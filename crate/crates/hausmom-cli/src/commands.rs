//! Implementations of the CLI subcommands.
//!
//! Every command parses its input files, delegates the mathematics to the
//! `hausmom` library, and prints one JSON value on stdout. Library errors
//! split into two exit-code classes (see [`lib_fail`]).

use std::path::Path;

use hausmom::fparam::{self, FamilyDetRank};
use hausmom::{CMat64, Error, HermSequence64, IntervalContext64, Tol64, linalg, measures, transforms};
use serde::Serialize;

use crate::io::{self, MatrixFile, MeasureFile, SequenceFile, SequenceKind};
use crate::{CmdResult, Failure};

/// Maps library errors onto the exit-code contract. Violations of a
/// mathematical requirement — not in the moment class, canonical data out
/// of range, a matrix that must be PSD or Hermitian and is not — are
/// negative verdicts (exit 2). Malformed input and internal inconsistencies
/// are plain errors (exit 1).
fn lib_fail(err: Error) -> Failure {
    match &err {
        Error::NotInClass { .. }
        | Error::CanonicalOutOfRange { .. }
        | Error::NotPsd { .. }
        | Error::NotHermitian { .. } => Failure::Reject(err.to_string()),
        Error::InvalidInput(_) | Error::Inconsistency(_) => Failure::Invalid(err.to_string()),
    }
}

/// Loads a `"moments"` sequence file together with its interval context.
fn load_moments(
    path: &Path,
    tol: Tol64,
) -> Result<(HermSequence64, IntervalContext64, SequenceFile), Failure> {
    let file: SequenceFile = io::read_json(path)?;
    file.require_kind(SequenceKind::Moments)?;
    let seq = file.sequence()?;
    let ctx = file.context(tol)?;
    Ok((seq, ctx, file))
}

/// Determinants and thresholded ranks of one Hankel family, next to the
/// products/sums of the coupled parameter blocks.
#[derive(Serialize)]
struct FamilyOut {
    det: Vec<f64>,
    rank: Vec<usize>,
    param_det_product: Vec<f64>,
    param_rank_sum: Vec<usize>,
}

impl From<&FamilyDetRank<f64>> for FamilyOut {
    fn from(f: &FamilyDetRank<f64>) -> Self {
        Self {
            det: f.det.clone(),
            rank: f.rank.clone(),
            param_det_product: f.param_det_product.clone(),
            param_rank_sum: f.param_rank_sum.clone(),
        }
    }
}

#[derive(Serialize)]
struct DetRankOut {
    base: FamilyOut,
    alpha_shifted: FamilyOut,
    beta_shifted: FamilyOut,
    doubly_shifted: FamilyOut,
}

#[derive(Serialize)]
struct CheckReport {
    /// Is the sequence a Hausdorff moment sequence on the interval?
    in_class: bool,
    /// Does it lie in the open class (all parameters positive definite)?
    interior: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    det_rank: Option<DetRankOut>,
}

/// `check FILE` — class membership plus determinant/rank report.
pub fn check(path: &Path, tol: Tol64) -> CmdResult {
    let (seq, ctx, _) = load_moments(path, tol)?;
    if fparam::is_hausdorff_nonneg(&seq, &ctx) {
        let report = fparam::det_rank_report(&seq, &ctx).map_err(lib_fail)?;
        io::emit(&CheckReport {
            in_class: true,
            interior: fparam::is_hausdorff_pos(&seq, &ctx),
            reason: None,
            det_rank: Some(DetRankOut {
                base: (&report.base).into(),
                alpha_shifted: (&report.alpha_shifted).into(),
                beta_shifted: (&report.beta_shifted).into(),
                doubly_shifted: (&report.doubly_shifted).into(),
            }),
        });
        Ok(())
    } else {
        // Rerun the classifying path to name the first violation.
        let reason = fparam::classify(&seq, &ctx)
            .err()
            .map_or_else(|| "sequence is not in the Hausdorff class".into(), |e| e.to_string());
        io::emit(&CheckReport {
            in_class: false,
            interior: false,
            reason: Some(reason.clone()),
            det_rank: None,
        });
        Err(Failure::Reject(reason))
    }
}

fn ranks(mats: &[CMat64], tol: &Tol64) -> Result<Vec<usize>, Failure> {
    mats.iter().map(|m| linalg::rank_tol(m, tol).map_err(lib_fail)).collect()
}

/// `canonical FILE` — power moments to canonical moments.
pub fn canonical(path: &Path, tol: Tol64) -> CmdResult {
    let (seq, ctx, file) = load_moments(path, tol)?;
    let cm = fparam::canonical_moments(&seq, &ctx).map_err(lib_fail)?;
    let mut out =
        SequenceFile::from_matrices(file.alpha, file.beta, SequenceKind::Canonical, &cm.e);
    out.width_rank = Some(ranks(&cm.width, &tol)?);
    out.proj_rank = Some(ranks(&cm.proj, &tol)?);
    io::emit(&out);
    Ok(())
}

/// `reconstruct FILE` — canonical moments back to power moments.
pub fn reconstruct(path: &Path, tol: Tol64) -> CmdResult {
    let file: SequenceFile = io::read_json(path)?;
    file.require_kind(SequenceKind::Canonical)?;
    let e = file.matrices()?;
    let ctx = file.context(tol)?;
    let seq = fparam::from_canonical(&e, &ctx).map_err(lib_fail)?;
    io::emit(&SequenceFile::from_matrices(
        file.alpha,
        file.beta,
        SequenceKind::Moments,
        seq.mats(),
    ));
    Ok(())
}

/// `extend FILE` — append moments by choosing a point of each successive
/// extension interval. `lambda` and `matrix` are mutually exclusive; with
/// neither, the central choice λ = ½ is used.
pub fn extend(
    path: &Path,
    lambda: Option<f64>,
    matrix: Option<&Path>,
    steps: usize,
    tol: Tol64,
) -> CmdResult {
    let (seq, ctx, file) = load_moments(path, tol)?;
    let extended = if let Some(kpath) = matrix {
        let kfile: MatrixFile = io::read_json(kpath)?;
        if kfile.dim != file.dim {
            return Err(Failure::Invalid(format!(
                "extension parameter is {0}×{0} but the sequence is {1}×{1}",
                kfile.dim, file.dim
            )));
        }
        let k = io::mat_from_data(&kfile.matrix, kfile.dim, "matrix")?;
        let mut cur = seq;
        for _ in 0..steps {
            cur = fparam::extend(&cur, &ctx, &k).map_err(lib_fail)?;
        }
        cur
    } else {
        let lambda = lambda.unwrap_or(0.5);
        let mut cur = seq;
        for _ in 0..steps {
            cur = fparam::extend_scalar(&cur, &ctx, lambda).map_err(lib_fail)?;
        }
        cur
    };
    io::emit(&SequenceFile::from_matrices(
        file.alpha,
        file.beta,
        SequenceKind::Moments,
        extended.mats(),
    ));
    Ok(())
}

/// `transform FILE --theta θ --eta η` — moment law of `x ↦ θ·x + η`, on the
/// image interval.
pub fn transform(path: &Path, theta: f64, eta: f64, tol: Tol64) -> CmdResult {
    let (seq, ctx, _) = load_moments(path, tol)?;
    let image_ctx = transforms::transformed_context(&ctx, eta, theta).map_err(lib_fail)?;
    let image = transforms::binomial_transform_real(&seq, eta, theta).map_err(lib_fail)?;
    io::emit(&SequenceFile::from_matrices(
        image_ctx.alpha(),
        image_ctx.beta(),
        SequenceKind::Moments,
        image.mats(),
    ));
    Ok(())
}

#[derive(Serialize)]
struct ClassifyReport {
    degenerate_at: Option<usize>,
    central_from: Option<usize>,
    symmetric: bool,
    interior: bool,
}

/// `classify FILE` — structural summary in canonical-moment terms.
pub fn classify(path: &Path, tol: Tol64) -> CmdResult {
    let (seq, ctx, _) = load_moments(path, tol)?;
    let c = fparam::classify(&seq, &ctx).map_err(lib_fail)?;
    io::emit(&ClassifyReport {
        degenerate_at: c.degenerate_at,
        central_from: c.central_from,
        symmetric: c.symmetric,
        interior: c.interior,
    });
    Ok(())
}

/// Flags of the `sample` subcommand.
pub struct SampleArgs {
    pub q: usize,
    pub kappa: usize,
    pub seed: u64,
    pub boundary_bias: f64,
    pub alpha: f64,
    pub beta: f64,
    pub s0_scale: f64,
}

/// `sample` — draw a random in-class sequence from the moment space.
pub fn sample(args: SampleArgs, tol: Tol64) -> CmdResult {
    let ctx = IntervalContext64::new(args.alpha, args.beta, tol).map_err(lib_fail)?;
    let cfg = measures::SamplerConfig {
        q: args.q,
        kappa: args.kappa,
        seed: args.seed,
        boundary_bias: args.boundary_bias,
        s0_scale: args.s0_scale,
    };
    let (seq, _) = measures::sample_moment_space(&cfg, &ctx).map_err(lib_fail)?;
    io::emit(&SequenceFile::from_matrices(
        args.alpha,
        args.beta,
        SequenceKind::Moments,
        seq.mats(),
    ));
    Ok(())
}

/// `moments FILE --kappa κ` — power moments of a molecular measure.
pub fn moments(path: &Path, kappa: usize, tol: Tol64) -> CmdResult {
    let file: MeasureFile = io::read_json(path)?;
    if file.dim == 0 {
        return Err(Failure::Invalid("dim must be at least 1".into()));
    }
    if file.nodes.len() != file.weights.len() {
        return Err(Failure::Invalid(format!(
            "{} nodes but {} weights",
            file.nodes.len(),
            file.weights.len()
        )));
    }
    let weights = file
        .weights
        .iter()
        .enumerate()
        .map(|(i, w)| io::mat_from_data(w, file.dim, &format!("weights[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let mu = measures::MolecularMeasure::new(file.nodes.clone(), weights, &tol).map_err(lib_fail)?;
    let ctx = IntervalContext64::new(file.alpha, file.beta, tol).map_err(lib_fail)?;
    if !mu.supported_in(&ctx) {
        return Err(Failure::Invalid(format!(
            "measure has nodes outside its stated interval [{}, {}]",
            file.alpha, file.beta
        )));
    }
    let seq = measures::moments(&mu, kappa);
    io::emit(&SequenceFile::from_matrices(
        file.alpha,
        file.beta,
        SequenceKind::Moments,
        seq.mats(),
    ));
    Ok(())
}
