//! Shared helpers for the integration test suites: seeded random generators
//! for matrices, unitaries, molecular measures, and small norm utilities.
#![allow(dead_code)]

use hausmom::Tol;
use hausmom::hankel::HermSequence;
use hausmom::measures::MolecularMeasure;
use hausmom::num_complex::Complex;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha12Rng;

pub type M = hausmom::CMat64;
pub type C = Complex<f64>;

pub fn rng(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

pub fn norm(m: &M) -> f64 {
    m.norm()
}

pub fn close(a: &M, b: &M, tol: f64) -> bool {
    (a - b).norm() <= tol * (a.norm() + b.norm()).max(1.0)
}

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

/// Random Hermitian matrix (indefinite in general).
pub fn rand_herm(rng: &mut ChaCha12Rng, q: usize) -> M {
    herm(&rand_cmat(rng, q, q))
}

/// Random PSD matrix of rank at most `rank`.
pub fn rand_psd(rng: &mut ChaCha12Rng, q: usize, rank: usize) -> M {
    let g = rand_cmat(rng, q, rank.max(1).min(q));
    if rank == 0 { M::zeros(q, q) } else { &g * g.adjoint() }
}

/// Haar-ish unitary via QR with phase fix (distribution quality is
/// irrelevant for the laws tested here; unitarity is what matters).
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
/// `(lo, hi)`, PSD weights of the given ranks (cycled).
pub fn rand_molecular(
    rng: &mut ChaCha12Rng,
    q: usize,
    points: usize,
    lo: f64,
    hi: f64,
    ranks: &[usize],
) -> MolecularMeasure<f64> {
    let mut nodes: Vec<f64> = (0..points)
        .map(|_| lo + (hi - lo) * (0.05 + 0.9 * rng.random::<f64>()))
        .collect();
    nodes.sort_by(f64::total_cmp);
    // enforce strict increase with a deterministic nudge
    for i in 1..nodes.len() {
        if nodes[i] <= nodes[i - 1] {
            nodes[i] = nodes[i - 1] + 1e-6 * (hi - lo);
        }
    }
    let weights = (0..points)
        .map(|l| rand_psd(rng, q, ranks[l % ranks.len()]))
        .collect();
    MolecularMeasure::new(nodes, weights, &Tol::default()).expect("valid random measure")
}

/// Moment sequence of a random molecular measure supported inside `(lo, hi)`
/// with full-rank weights — a generic interior point of the moment space.
pub fn rand_moment_seq(
    rng: &mut ChaCha12Rng,
    q: usize,
    kappa: usize,
    lo: f64,
    hi: f64,
) -> HermSequence<f64> {
    // enough points to keep every block Hankel matrix positive definite
    let points = kappa + 2;
    let mu = rand_molecular(rng, q, points, lo, hi, &[q]);
    hausmom::measures::moments(&mu, kappa)
}

/// Random Hermitian sequence with no structure at all (generically outside
/// every moment class).
pub fn rand_herm_seq(rng: &mut ChaCha12Rng, q: usize, kappa: usize) -> HermSequence<f64> {
    HermSequence::new((0..=kappa).map(|_| rand_herm(rng, q)).collect()).unwrap()
}
