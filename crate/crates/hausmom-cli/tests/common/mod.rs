//! Shared helpers for the acceptance suite: seeded random generators, norm
//! utilities, and an exact rational oracle for scalar moment sequences.
//!
//! The oracle works entirely in arbitrary-precision rationals, so its output
//! is free of rounding: the interleaved parameters come out of determinant
//! ratios of the four shifted Hankel families (each parameter is the Schur
//! complement of the leading principal block, and for scalars that Schur
//! complement is exactly the ratio of consecutive leading minors), the
//! section widths out of the harmonic-mean pairing of a gap with its
//! complement, and the canonical moments as the width-relative gaps.
#![allow(dead_code)]

use hausmom::Tol;
use hausmom::hankel::HermSequence;
use hausmom::measures::MolecularMeasure;
use hausmom::num_complex::Complex;
use num::{BigRational, ToPrimitive, Zero};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha12Rng;

pub type M = hausmom::CMat64;
pub type C = Complex<f64>;
pub type Q = BigRational;

pub fn rng(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

/// Relative closeness in Frobenius norm, with an absolute guard at small
/// scales: `‖a - b‖ ≤ tol · max(1, ‖a‖ + ‖b‖)`.
pub fn close(a: &M, b: &M, tol: f64) -> bool {
    (a - b).norm() <= tol * (a.norm() + b.norm()).max(1.0)
}

/// The `(0, 0)` real part of a `1×1` matrix (or the corner of a bigger one).
pub fn scalar(m: &M) -> f64 {
    m[(0, 0)].re
}

/// Frobenius norm of a whole matrix list, read as one long vector.
pub fn list_norm(a: &[M]) -> f64 {
    a.iter().map(|m| m.norm_squared()).sum::<f64>().sqrt()
}

/// Frobenius distance between two matrix lists of equal length.
pub fn list_dist(a: &[M], b: &[M]) -> f64 {
    assert_eq!(a.len(), b.len(), "list length mismatch");
    a.iter().zip(b).map(|(x, y)| (x - y).norm_squared()).sum::<f64>().sqrt()
}

/// Hermitian part `(m + m*) / 2`.
pub fn herm(m: &M) -> M {
    (m + m.adjoint()) * Complex::new(0.5, 0.0)
}

pub fn gauss(rng: &mut ChaCha12Rng) -> f64 {
    let u1 = 1.0 - rng.random::<f64>();
    let u2 = rng.random::<f64>();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Dense complex Gaussian matrix.
pub fn rand_cmat(rng: &mut ChaCha12Rng, rows: usize, cols: usize) -> M {
    M::from_fn(rows, cols, |_, _| Complex::new(gauss(rng), gauss(rng)))
}

/// Random PSD matrix of rank at most `rank`.
pub fn rand_psd(rng: &mut ChaCha12Rng, q: usize, rank: usize) -> M {
    let g = rand_cmat(rng, q, rank.max(1).min(q));
    if rank == 0 { M::zeros(q, q) } else { &g * g.adjoint() }
}

/// Unitary via QR of a Gaussian matrix with the phases of the R diagonal
/// absorbed; unitarity (not distribution quality) is what the tests need.
pub fn rand_unitary(rng: &mut ChaCha12Rng, q: usize) -> M {
    let g = rand_cmat(rng, q, q);
    let (qm, r) = g.qr().unpack();
    let ph = M::from_fn(q, q, |i, j| {
        if i != j {
            Complex::new(0.0, 0.0)
        } else {
            let d = r[(i, i)];
            let n = d.norm();
            if n > 0.0 { d / n } else { Complex::new(1.0, 0.0) }
        }
    });
    qm * ph
}

/// Random molecular measure: `points` strictly increasing nodes inside
/// `(lo, hi)` with a guaranteed minimum separation, PSD weights of the
/// given ranks (cycled).
pub fn rand_molecular(
    rng: &mut ChaCha12Rng,
    q: usize,
    points: usize,
    lo: f64,
    hi: f64,
    ranks: &[usize],
) -> MolecularMeasure<f64> {
    let width = hi - lo;
    let mut nodes: Vec<f64> = (0..points)
        .map(|_| lo + width * (0.05 + 0.9 * rng.random::<f64>()))
        .collect();
    nodes.sort_by(f64::total_cmp);
    for i in 1..nodes.len() {
        if nodes[i] <= nodes[i - 1] + 0.01 * width {
            nodes[i] = nodes[i - 1] + 0.01 * width;
        }
    }
    let weights = (0..points)
        .map(|l| rand_psd(rng, q, ranks[l % ranks.len()]))
        .collect();
    MolecularMeasure::new(nodes, weights, &Tol::default()).expect("valid random measure")
}

// ---------------------------------------------------------------------------
// Exact rational oracle for scalar sequences
// ---------------------------------------------------------------------------

/// The rational `n / d`.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

/// Rational to nearest double.
pub fn qf(x: &Q) -> f64 {
    x.to_f64().expect("rational fits in f64")
}

/// Determinant over the rationals by Gaussian elimination with exact
/// division (row swaps flip the sign; a column with no pivot means zero).
fn det_q(mut m: Vec<Vec<Q>>) -> Q {
    let n = m.len();
    let mut det = Q::from_integer(1.into());
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Q::zero();
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        let pivot = m[col][col].clone();
        det = det * pivot.clone();
        for r in col + 1..n {
            let factor = m[r][col].clone() / pivot.clone();
            for c in col..n {
                let sub = factor.clone() * m[col][c].clone();
                m[r][c] = m[r][c].clone() - sub;
            }
        }
    }
    det
}

/// Determinant of the `(n+1)×(n+1)` Hankel matrix with entries
/// `fam[i + j]`.
fn hankel_det_q(fam: &[Q], n: usize) -> Q {
    assert!(fam.len() >= 2 * n + 1, "family too short for order {n}");
    let m = (0..=n)
        .map(|i| (0..=n).map(|j| fam[i + j].clone()).collect())
        .collect();
    det_q(m)
}

/// Exact interleaved parameters `f_0, …, f_{2κ}` of the scalar rational
/// sequence `s_0, …, s_κ` on `[alpha, beta]`.
///
/// Parameter `f_{4k+r}` is the ratio `det Hᵣ_k / det Hᵣ_{k-1}` of leading
/// minors of family `r`: the base sequence, the two one-endpoint shifts
/// `a_j = s_{j+1} - α s_j` and `b_j = β s_j - s_{j+1}`, and their
/// composition `c_j = -αβ s_j + (α+β) s_{j+1} - s_{j+2}`.
pub fn rational_f(s: &[Q], alpha: &Q, beta: &Q) -> Vec<Q> {
    assert!(!s.is_empty());
    let kappa = s.len() - 1;
    let a: Vec<Q> = (0..kappa).map(|j| s[j + 1].clone() - alpha.clone() * s[j].clone()).collect();
    let b: Vec<Q> = (0..kappa).map(|j| beta.clone() * s[j].clone() - s[j + 1].clone()).collect();
    let c: Vec<Q> = (0..kappa.saturating_sub(1))
        .map(|j| {
            (alpha.clone() + beta.clone()) * s[j + 1].clone()
                - alpha.clone() * beta.clone() * s[j].clone()
                - s[j + 2].clone()
        })
        .collect();
    let fam = [s.to_vec(), a, b, c];
    (0..=2 * kappa)
        .map(|idx| {
            let (k, r) = (idx / 4, idx % 4);
            let den = if k == 0 { Q::from_integer(1.into()) } else { hankel_det_q(&fam[r], k - 1) };
            if den.is_zero() { Q::zero() } else { hankel_det_q(&fam[r], k) / den }
        })
        .collect()
}

/// Exact canonical moments `e_0, …, e_κ` and section widths `d_0, …, d_κ`
/// of the scalar rational sequence `s` on `[alpha, beta]`.
///
/// Widths follow `d_0 = (β-α) s_0` and the harmonic-mean law
/// `d_k = (β-α) f_{2k-1} f_{2k} / (f_{2k-1} + f_{2k})`; canonical moments
/// are the width-relative gaps `e_j = f_{2j} / d_{j-1}` (zero once the
/// chain has collapsed), with `e_0 = s_0`.
pub fn rational_canonical(s: &[Q], alpha: &Q, beta: &Q) -> (Vec<Q>, Vec<Q>) {
    let kappa = s.len() - 1;
    let eta = beta.clone() - alpha.clone();
    let f = rational_f(s, alpha, beta);
    let mut d = vec![eta.clone() * s[0].clone()];
    for k in 1..=kappa {
        let (lo, hi) = (&f[2 * k - 1], &f[2 * k]);
        let sum = lo.clone() + hi.clone();
        d.push(if sum.is_zero() {
            Q::zero()
        } else {
            eta.clone() * lo.clone() * hi.clone() / sum
        });
    }
    let mut e = vec![s[0].clone()];
    for j in 1..=kappa {
        e.push(if d[j - 1].is_zero() { Q::zero() } else { f[2 * j].clone() / d[j - 1].clone() });
    }
    (e, d)
}

/// A real scalar sequence as a `1×1` Hermitian matrix sequence.
pub fn seq_from_rationals(s: &[Q]) -> HermSequence<f64> {
    HermSequence::from_real_scalars(s.iter().map(qf)).expect("finite scalars")
}
