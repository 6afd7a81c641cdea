//! Property tests for the interval layer: the gap parametrization, canonical
//! moments, extension theory, and the continued-fraction chain quantities.
//!
//! Generic in-class inputs come from random molecular measures (an
//! independent route into the moment space), degenerate ones from explicit
//! canonical lists, and mixed ones from the built-in sampler.

mod common;

use common::{C, M, close, rand_molecular, rand_unitary, rng};
use hausmom::Tol;
use hausmom::fparam::{
    IntervalContext, canonical_moments, classify, dette_studden, envelope, extend_central,
    f_parametrization, from_canonical, is_hausdorff_nonneg, is_hausdorff_pos,
    validate_canonical, validate_f_params,
};
use hausmom::hankel::{HermSequence, hankel_parametrization};
use hausmom::linalg::{is_psd, loewner_leq, parallel_sum, pinv, psd_sqrt, range_projection};
use hausmom::measures::{SamplerConfig, moments, sample_moment_space};
use rand_chacha::ChaCha12Rng;

fn ctx(alpha: f64, beta: f64) -> IntervalContext<f64> {
    IntervalContext::new(alpha, beta, Tol::default()).unwrap()
}

const INTERVALS: [(f64, f64); 3] = [(0.0, 1.0), (-2.0, 1.0), (-0.5, 1.5)];

/// An interior moment sequence: molecular with full-rank weights and more
/// than enough points, supported strictly inside `(α, β)`.
fn interior_seq(
    r: &mut ChaCha12Rng,
    q: usize,
    kappa: usize,
    cx: &IntervalContext<f64>,
) -> HermSequence<f64> {
    let mu = rand_molecular(r, q, kappa + 2, cx.alpha(), cx.beta(), &[q]);
    moments(&mu, kappa)
}

#[test]
fn canonical_encoding_round_trips() {
    let mut r = rng(2201);
    for (a, b) in INTERVALS {
        let cx = ctx(a, b);
        for q in [1usize, 2, 3] {
            for kappa in [1usize, 3, 4, 6] {
                let s = interior_seq(&mut r, q, kappa, &cx);
                let cm = canonical_moments(&s, &cx).unwrap();
                assert_eq!(cm.e.len(), kappa + 1);
                let back = from_canonical(&cm.e, &cx).unwrap();
                for (x, y) in s.mats().iter().zip(back.mats()) {
                    assert!(close(x, y, 1e-8), "round trip [{a},{b}] q={q} κ={kappa}");
                }
                // and the reverse composition on the canonical side
                let cm2 = canonical_moments(&back, &cx).unwrap();
                for (x, y) in cm.e.iter().zip(&cm2.e) {
                    assert!(close(x, y, 1e-7), "canonical re-extraction");
                }
                assert!(validate_canonical(&cm.e, cx.width(), cx.tol()));
            }
        }
    }
}

#[test]
fn gap_parameters_satisfy_the_pairing_identities() {
    let mut r = rng(2202);
    for (a, b) in INTERVALS {
        let cx = ctx(a, b);
        let eta = cx.width();
        for q in [1usize, 2] {
            let kappa = 5;
            let s = interior_seq(&mut r, q, kappa, &cx);
            let env = envelope(&s, &cx).unwrap();
            let f = f_parametrization(&s, &cx).unwrap().f;
            assert_eq!(f.len(), 2 * kappa + 1);
            assert!(validate_f_params(&f, eta, cx.tol()));
            assert!(is_hausdorff_nonneg(&s, &cx));

            // consecutive gaps tile the previous width: f_{2j-1} + f_{2j} = d_{j-1}
            for j in 1..=kappa {
                let sum = &f[2 * j - 1] + &f[2 * j];
                assert!(close(&sum, &env.width[j - 1], 1e-8), "tiling at j={j}");
            }
            // widths are parallel sums of the two gaps on either side
            for k in 1..=kappa {
                let ps = parallel_sum(&f[2 * k - 1], &f[2 * k], cx.tol()).unwrap();
                assert!(close(&(ps * C::new(eta, 0.0)), &env.width[k], 1e-7), "∥-sum at k={k}");
            }
            // d_0 = (β-α)·s_0
            assert!(close(&(&f[0] * C::new(eta, 0.0)), &env.width[0], 1e-9));
        }
    }
}

/// The four gap families are exactly the even canonical parameters of the
/// base sequence and its three shifted companions.
#[test]
fn gaps_match_shifted_hankel_parameters() {
    let mut r = rng(2203);
    let (a, b) = (-0.5, 2.0);
    let cx = ctx(a, b);
    let t = cx.tol();
    for q in [1usize, 2] {
        let kappa = 6;
        let s = interior_seq(&mut r, q, kappa, &cx);
        let f = f_parametrization(&s, &cx).unwrap().f;
        let base = hankel_parametrization(&s, t).unwrap().h;
        let ha = hankel_parametrization(&s.shift_a(a).unwrap(), t).unwrap().h;
        let hb = hankel_parametrization(&s.shift_b(b).unwrap(), t).unwrap().h;
        let hc = hankel_parametrization(&s.shift_c(a, b).unwrap(), t).unwrap().h;
        for k in 0..=1usize {
            assert!(close(&f[4 * k], &base[2 * k], 1e-8), "base family k={k}");
            assert!(close(&f[4 * k + 1], &ha[2 * k], 1e-8), "α-shift family k={k}");
            assert!(close(&f[4 * k + 2], &hb[2 * k], 1e-8), "β-shift family k={k}");
            assert!(close(&f[4 * k + 3], &hc[2 * k], 1e-8), "double-shift family k={k}");
        }
        assert!(close(&f[8], &base[4], 1e-7));
    }
}

#[test]
fn widths_obey_the_recursion_and_cross_products() {
    let mut r = rng(2204);
    for (a, b) in INTERVALS {
        let cx = ctx(a, b);
        let t = cx.tol();
        let eta = C::new(cx.width(), 0.0);
        for q in [1usize, 2, 3] {
            let kappa = 4;
            let s = interior_seq(&mut r, q, kappa, &cx);
            let cm = canonical_moments(&s, &cx).unwrap();
            let env = envelope(&s, &cx).unwrap();

            for k in 1..=kappa {
                // d_k = (β-α)·d_{k-1}^{1/2} (e_k - e_k²) d_{k-1}^{1/2}
                let root = psd_sqrt(&env.width[k - 1], t).unwrap();
                let ek = &cm.e[k];
                let rec = &root * (ek - ek * ek) * &root * eta;
                assert!(close(&rec, &env.width[k], 1e-7), "width recursion k={k}");

                // d_k = (β-α)·A_k d_{k-1}⁺ B_k, in either order
                let dp = pinv(&env.width[k - 1], t).unwrap();
                let ak = &env.lower_gap[k];
                let bk = &env.upper_gap[k - 1];
                let left = ak * &dp * bk * eta;
                let right = bk * &dp * ak * eta;
                assert!(close(&left, &env.width[k], 1e-7), "cross product k={k}");
                assert!(close(&right, &env.width[k], 1e-7), "cross product flip k={k}");
            }

            // determinant recursion for interior sequences
            for k in 1..=kappa {
                let prev = env.width[k - 1].determinant().re;
                let cur = env.width[k].determinant().re;
                let ek = &cm.e[k];
                let comp = M::identity(q, q) - ek;
                let expect = cx.width().powi(q as i32)
                    * prev
                    * ek.determinant().re
                    * comp.determinant().re;
                assert!(
                    (cur - expect).abs() <= 1e-7 * prev.abs().max(1e-30),
                    "det recursion k={k}: {cur} vs {expect}"
                );
            }
        }
    }
}

#[test]
fn widths_shrink_and_projections_nest() {
    let mut r = rng(2205);
    let cx = ctx(-1.0, 2.0);
    let t = cx.tol();
    let quarter = C::new(cx.width() / 4.0, 0.0);
    for q in [1usize, 2, 3] {
        let s = interior_seq(&mut r, q, 5, &cx);
        let cm = canonical_moments(&s, &cx).unwrap();
        let env = envelope(&s, &cx).unwrap();
        for j in 1..=5usize {
            // d_j ≼ ((β-α)/4)·d_{j-1}
            let bound = &env.width[j - 1] * quarter;
            assert!(loewner_leq(&env.width[j], &bound, t).unwrap(), "width bound j={j}");
            // P_j ≼ P_{j-1} and P_{j-1} absorbs P_j
            assert!(loewner_leq(&cm.proj[j], &cm.proj[j - 1], t).unwrap());
            let prod = &cm.proj[j - 1] * &cm.proj[j];
            assert!(close(&prod, &cm.proj[j], 1e-8), "projection nesting j={j}");
        }

        // the bound is attained exactly by the central extension
        let extended = extend_central(&s, &cx, 2).unwrap();
        let env2 = envelope(&extended, &cx).unwrap();
        for j in 6..=7usize {
            let expect = &env2.width[j - 1] * quarter;
            assert!(close(&env2.width[j], &expect, 1e-8), "central equality j={j}");
        }
    }
}

#[test]
fn canonical_data_transforms_under_conjugation_and_scaling() {
    let mut r = rng(2206);
    let cx = ctx(0.0, 1.0);
    for q in [2usize, 3] {
        let kappa = 4;
        let s = interior_seq(&mut r, q, kappa, &cx);
        let cm = canonical_moments(&s, &cx).unwrap();

        // unitary conjugation passes straight through the encoding
        let v = rand_unitary(&mut r, q);
        let mapped = HermSequence::new(
            s.mats().iter().map(|m| v.adjoint() * m * &v).collect(),
        )
        .unwrap();
        let cmm = canonical_moments(&mapped, &cx).unwrap();
        for (x, y) in cm.e.iter().zip(&cmm.e) {
            assert!(close(&(v.adjoint() * x * &v), y, 1e-8), "conjugation q={q}");
        }

        // positive scaling only rescales the mass term e_0
        let lam = 2.75;
        let scaled = HermSequence::new(
            s.mats().iter().map(|m| m * C::new(lam, 0.0)).collect(),
        )
        .unwrap();
        let cms = canonical_moments(&scaled, &cx).unwrap();
        assert!(close(&cms.e[0], &(&cm.e[0] * C::new(lam, 0.0)), 1e-8));
        for j in 1..=kappa {
            assert!(close(&cms.e[j], &cm.e[j], 1e-8), "scaling invariance j={j}");
        }
        // while every gap parameter scales
        let f = f_parametrization(&s, &cx).unwrap().f;
        let fs = f_parametrization(&scaled, &cx).unwrap().f;
        for (x, y) in f.iter().zip(&fs) {
            assert!(close(&(x * C::new(lam, 0.0)), y, 1e-8), "gap scaling q={q}");
        }
    }
}

#[test]
fn direct_sums_decouple() {
    let mut r = rng(2207);
    let cx = ctx(-1.5, 0.5);
    let (q1, q2) = (1usize, 2usize);
    let kappa = 4;
    let s1 = interior_seq(&mut r, q1, kappa, &cx);
    let s2 = interior_seq(&mut r, q2, kappa, &cx);
    let embed = |a: &M, b: &M| {
        let mut out = M::zeros(q1 + q2, q1 + q2);
        out.view_mut((0, 0), (q1, q1)).copy_from(a);
        out.view_mut((q1, q1), (q2, q2)).copy_from(b);
        out
    };
    let joint = HermSequence::new(
        (0..=kappa).map(|j| embed(&s1[j], &s2[j])).collect(),
    )
    .unwrap();
    let cm1 = canonical_moments(&s1, &cx).unwrap();
    let cm2 = canonical_moments(&s2, &cx).unwrap();
    let cmj = canonical_moments(&joint, &cx).unwrap();
    for j in 0..=kappa {
        let expect = embed(&cm1.e[j], &cm2.e[j]);
        assert!(close(&cmj.e[j], &expect, 1e-8), "block canonical j={j}");
        let expect_d = embed(&cm1.width[j], &cm2.width[j]);
        assert!(close(&cmj.width[j], &expect_d, 1e-8), "block width j={j}");
    }
}

#[test]
fn degenerate_tails_collapse_the_envelope() {
    let cx = ctx(0.0, 1.0);
    let t = cx.tol();
    // scalar: mass 1, one free step, then a hard boundary hit at k = 2
    let e: Vec<M> = [1.0, 0.3, 1.0, 0.0, 0.0]
        .iter()
        .map(|x| M::from_element(1, 1, C::new(*x, 0.0)))
        .collect();
    let s = from_canonical(&e, &cx).unwrap();
    let cls = classify(&s, &cx).unwrap();
    assert_eq!(cls.degenerate_at, Some(2));
    assert!(!cls.interior);
    let env = envelope(&s, &cx).unwrap();
    for j in 2..=4 {
        assert!(env.width[j].norm() <= 1e-10, "width collapse j={j}");
    }
    // the trailing moments are pinned to both envelope endpoints
    for j in 2..=3 {
        assert!(close(&s[j + 1], &env.lower[j], 1e-9));
        assert!(close(&s[j + 1], &env.upper[j], 1e-9));
    }

    // matricial: a proper projection also collapses the width — after it the
    // continuation is unique and every later entry must vanish
    let p = M::from_fn(2, 2, |i, j| {
        if i == 0 && j == 0 { C::new(1.0, 0.0) } else { C::new(0.0, 0.0) }
    });
    let e2 = vec![
        M::identity(2, 2),
        M::from_fn(2, 2, |i, j| if i == j { C::new(0.4, 0.0) } else { C::new(0.0, 0.0) }),
        p.clone(),
        M::zeros(2, 2),
    ];
    let s2 = from_canonical(&e2, &cx).unwrap();
    let cm = canonical_moments(&s2, &cx).unwrap();
    assert_eq!(classify(&s2, &cx).unwrap().degenerate_at, Some(2));
    assert!(is_psd(&cm.width[1], t).unwrap());
    assert!(cm.width[2].norm() <= 1e-9, "width dies at the idempotent entry");
    assert!(cm.proj[2].norm() <= 1e-9, "projection chain dies with it");
    // a non-zero entry past the collapse is rejected
    let mut bad = e2.clone();
    bad[3] = p * C::new(0.5, 0.0);
    assert!(from_canonical(&bad, &cx).is_err());
}

#[test]
fn interior_classification_matches_strict_positivity() {
    let mut r = rng(2208);
    let cx = ctx(0.0, 1.0);
    for q in [1usize, 2] {
        let s = interior_seq(&mut r, q, 4, &cx);
        assert!(is_hausdorff_pos(&s, &cx));
        assert!(classify(&s, &cx).unwrap().interior);

        // too few atoms for the truncation order: in the class, but on its
        // boundary (the continuation is forced from the degeneracy onwards)
        let one = hausmom::measures::MolecularMeasure::new(
            vec![0.37],
            vec![M::identity(q, q)],
            cx.tol(),
        )
        .unwrap();
        let sb = moments(&one, 4);
        assert!(is_hausdorff_nonneg(&sb, &cx));
        assert!(!is_hausdorff_pos(&sb, &cx));
        let cls = classify(&sb, &cx).unwrap();
        assert!(!cls.interior);
        assert_eq!(cls.degenerate_at, Some(2));
    }
}

#[test]
fn chain_quantities_satisfy_their_identities() {
    let mut r = rng(2209);
    for (a, b) in [(0.0, 1.0), (-1.0, 2.0)] {
        let cx = ctx(a, b);
        let t = cx.tol();
        let eta = cx.width();
        for q in [1usize, 2, 3] {
            let kappa = 5;
            let s = interior_seq(&mut r, q, kappa, &cx);
            let ch = dette_studden(&s, &cx).unwrap();
            let env = envelope(&s, &cx).unwrap();
            assert_eq!(ch.u.len(), kappa);
            assert_eq!(ch.zeta.len(), kappa);

            // U_k and V_k commute, and tile the unit: U_k + V_k = d⁺d
            for k in 1..=kappa {
                let (u, v) = (&ch.u[k - 1], &ch.v[k - 1]);
                assert!(close(&(u * v), &(v * u), 1e-7), "commutation k={k}");
                let p = range_projection(&env.width[k - 1], t).unwrap();
                assert!(close(&(u + v), &p, 1e-7), "partition of unity k={k}");
            }

            // widths factor through the chain: d_j = (β-α)^{j+1} s_0 ∏ U_ℓ V_ℓ
            let mut prod = s[0].clone();
            for j in 1..=kappa {
                prod = prod * &ch.u[j - 1] * &ch.v[j - 1];
                let expect = &prod * C::new(eta.powi(j as i32 + 1), 0.0);
                assert!(close(&expect, &env.width[j], 1e-6), "width factorization j={j}");
            }

            // gap recursions: (β-α)·A_{k-1}·ζ_k = A_k and the closed products
            let mut zprod = s[0].clone();
            let mut gprod = s[0].clone();
            for k in 1..=kappa {
                let ak1 = &env.lower_gap[k - 1];
                let step = ak1 * &ch.zeta[k - 1] * C::new(eta, 0.0);
                assert!(close(&step, &env.lower_gap[k], 1e-6), "gap recursion k={k}");
                zprod = zprod * &ch.zeta[k - 1];
                gprod = gprod * &ch.gamma[k - 1];
                let scale = C::new(eta.powi(k as i32), 0.0);
                assert!(
                    close(&(&zprod * scale), &env.lower_gap[k], 1e-6),
                    "lower-gap product k={k}"
                );
                let bk = &env.upper_gap[k - 1];
                assert!(close(&(&gprod * scale), bk, 1e-6), "upper-gap product k={k}");
            }
        }
    }
}

#[test]
fn sampled_sequences_always_validate() {
    let cx = ctx(-0.5, 1.5);
    for (seed, q, kappa, bias) in [
        (7u64, 1usize, 6usize, 0.0),
        (8, 2, 5, 0.0),
        (9, 3, 4, 0.3),
        (10, 2, 6, 0.7),
        (11, 2, 3, 1.0),
    ] {
        let cfg = SamplerConfig { q, kappa, seed, boundary_bias: bias, ..Default::default() };
        let (s, cm) = sample_moment_space(&cfg, &cx).unwrap();
        assert!(is_hausdorff_nonneg(&s, &cx), "sampled in class seed={seed}");
        assert!(validate_canonical(&cm.e, cx.width(), cx.tol()), "canonical valid seed={seed}");
        let f = f_parametrization(&s, &cx).unwrap().f;
        assert!(validate_f_params(&f, cx.width(), cx.tol()), "gap list valid seed={seed}");
        // the sequence the encoder recovers is the one the sampler reported
        let cm2 = canonical_moments(&s, &cx).unwrap();
        for (x, y) in cm.e.iter().zip(&cm2.e) {
            assert!(close(x, y, 1e-7), "sampler/encoder agreement seed={seed}");
        }
    }
}
