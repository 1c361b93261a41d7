use std::time::Instant;

use awcore::awalgebra::*;
use awcore::lattice::*;
use awcore::linalg::{c, cr, eye, fro};
use awcore::qspecial::QParams;
use awcore::quantumrep::*;
use awcore::{CMat, Error, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn log_grid(n: usize) -> Vec<C64> {
    (0..n).map(|i| cr(10f64.powf(-1.0 + 2.0 * i as f64 / (n - 1) as f64))).collect()
}

fn random_z(rng: &mut ChaCha8Rng) -> C64 {
    C64::from_polar(rng.random_range(0.5..2.0), rng.random_range(-1.0..1.0))
}

fn coideal_pair(j_twice: usize, q: QParams, seed: u64) -> (TridiagonalPair, AWStructure) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut z = || c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    let cp = CoidealParams::new(z(), z(), z(), z(), z(), z());
    let base = build_spin_rep(j_twice, q);
    let pair = build_coideal_ops(&build_evaluation_rep(cr(1.0), &base), &cp);
    let l = casimir_value(&base).unwrap() * (q.s() * q.s());
    (pair, coideal_structure_constants(&cp, l, q))
}

#[test]
fn yang_baxter_on_log_grid() {
    let start = Instant::now();
    let grid = log_grid(10);
    let mut worst: f64 = 0.0;
    for qv in [0.3, 0.5, 0.7] {
        let q = QParams::new(qv).unwrap();
        for &z1 in &grid {
            for &z2 in &grid {
                worst = worst.max(ybe_residual(z1, z2, q).unwrap());
            }
        }
    }
    assert!(worst < 1e-11, "{worst:e}");
    assert!(start.elapsed().as_secs_f64() < 1.0);
}

#[test]
fn perturbed_r_matrix_breaks_yang_baxter() {
    let q = QParams::new(0.5).unwrap();
    let bad = |z: C64| -> awcore::Result<CMat> {
        let mut m = r_matrix(z, q)?.entries;
        m[(1, 2)] *= 1.01;
        m[(2, 1)] *= 1.01;
        Ok(m)
    };
    assert!(ybe_residual_for(c(1.3, 0.1), c(0.6, -0.2), bad).unwrap() > 1e-4);
}

#[test]
fn r_matrix_structure() {
    let q = QParams::new(0.4).unwrap();
    let z = c(1.7, 0.3);
    let r = r_matrix(z, q).unwrap().entries;
    assert_eq!(r[(1, 2)], r[(2, 1)]);
    // Unitarity: R(z) R(1/z) = (q + 1/q - z^2 - z^{-2}) I.
    let prod = &r * r_matrix(cr(1.0) / z, q).unwrap().entries;
    let f = cr(q.q + 1.0 / q.q) - z * z - cr(1.0) / (z * z);
    assert!(fro(&(prod - eye(4) * f)) < 1e-13 * f.norm());
    // At z = 1 it is c times the permutation.
    let r1 = r_matrix(cr(1.0), q).unwrap().entries;
    let mut perm = CMat::zeros(4, 4);
    for (i, j) in [(0, 0), (1, 2), (2, 1), (3, 3)] {
        perm[(i, j)] = cr(q.s());
    }
    assert!(fro(&(r1 - perm)) < 1e-15);
    assert!(matches!(r_matrix(cr(0.0), q), Err(Error::InvalidParameter(_))));
}

#[test]
fn rll_for_several_spins() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for qv in [0.35, 0.8] {
        let q = QParams::new(qv).unwrap();
        for jt in 1..=3 {
            let rep = build_spin_rep(jt, q);
            for _ in 0..20 {
                let (z1, z2) = (random_z(&mut rng), random_z(&mut rng));
                let r = rll_residual(z1, z2, &rep).unwrap();
                assert!(r < 1e-11, "2j={jt} residual {r:e}");
            }
        }
    }
}

#[test]
fn scalar_solution_validates_the_harness() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for qv in [0.3, 0.6] {
        let q = QParams::new(qv).unwrap();
        for _ in 0..10 {
            let (z1, z2) = (random_z(&mut rng), random_z(&mut rng));
            let (x, k, kp) = (random_z(&mut rng), random_z(&mut rng), random_z(&mut rng));
            let k1 = scalar_k_solution(z1, x, k, kp);
            let k2 = scalar_k_solution(z2, x, k, kp);
            assert!(reflection_residual_blocks(z1, z2, q, &k1, &k2, 0).unwrap() < 1e-13);
            // A different X at the second point breaks it.
            let k2b = scalar_k_solution(z2, x * 1.1, k, kp);
            assert!(reflection_residual_blocks(z1, z2, q, &k1, &k2b, 0).unwrap() > 1e-6);
        }
    }
}

#[test]
fn k_matrix_needs_both_rho() {
    let q = QParams::new(0.5).unwrap();
    let (pair, mut s) = coideal_pair(1, q, 1);
    s.rho = cr(0.0);
    assert!(matches!(build_k_matrix(cr(1.2), &pair, &s), Err(Error::Unsupported(_))));
    let (pair, s) = coideal_pair(1, q, 1);
    assert!(matches!(build_k_matrix(cr(0.0), &pair, &s), Err(Error::InvalidParameter(_))));
}

#[test]
fn k_matrix_shape() {
    let q = QParams::new(0.5).unwrap();
    let (pair, s) = coideal_pair(2, q, 6);
    let k = build_k_matrix(c(1.1, 0.2), &pair, &s).unwrap();
    assert_eq!(k.bandwidth, pair.bandwidth_a + pair.bandwidth_a_star);
    assert!((k.sqrt_ratio * k.sqrt_ratio - s.rho / s.rho_star).norm() < 1e-13 * (s.rho / s.rho_star).norm());
    let kk = k.assembled();
    assert_eq!(kk[0][1].nrows(), 3);
    let other = build_k_matrix_variant(c(1.1, 0.2), &pair, &s, KSolution::RhoStar, KVariant::Nominal).unwrap();
    assert_eq!(other.rho_used, s.rho_star);
    let names: std::collections::HashSet<_> = KVariant::ALL.iter().map(|v| v.name()).collect();
    assert_eq!(names.len(), KVariant::ALL.len());
}

#[test]
fn reflection_residuals_are_reported_for_every_variant() {
    // The closed-form K-matrix does not close the reflection equation on
    // exact coideal pairs; the residuals stay finite and well away from zero.
    let q = QParams::new(0.5).unwrap();
    let (pair, s) = coideal_pair(1, q, 12);
    let (z1, z2) = (c(1.3, 0.2), c(0.7, -0.4));
    for v in KVariant::ALL {
        let r = reflection_residual_variant(z1, z2, &pair, &s, v).unwrap();
        let d = dual_reflection_residual_variant(z1, z2, &pair, &s, v).unwrap();
        assert!(r.is_finite() && d.is_finite());
        assert!(r > 1e-6 && r <= 1.0 + 1e-12, "{} {r:e}", v.name());
    }
    let r = reflection_residual(z1, z2, &pair, &s).unwrap();
    assert_eq!(r, reflection_residual_variant(z1, z2, &pair, &s, KVariant::Nominal).unwrap());
}

#[test]
fn reflection_residual_is_homogeneous() {
    let q = QParams::new(0.45).unwrap();
    let (pair, s) = coideal_pair(2, q, 21);
    let t = cr(1.7);
    let scaled = affine_transform(&pair, t, t, cr(0.0), cr(0.0));
    let t2 = t * t;
    let t3 = t2 * t;
    let ss = AWStructure {
        rho: s.rho * t2,
        rho_star: s.rho_star * t2,
        omega: s.omega * t2,
        eta: s.eta * t3,
        eta_star: s.eta_star * t3,
        ..s
    };
    let (z1, z2) = (c(1.2, 0.1), c(0.8, 0.3));
    let r0 = reflection_residual(z1, z2, &pair, &s).unwrap();
    let r1 = reflection_residual(z1, z2, &scaled, &ss).unwrap();
    assert!((r0 - r1).abs() < 1e-10 * r0.max(1e-300), "{r0:e} {r1:e}");
}

#[test]
fn perturbed_omega_moves_the_residual() {
    let q = QParams::new(0.5).unwrap();
    let (pair, s) = coideal_pair(1, q, 3);
    let (z1, z2) = (c(1.3, 0.2), c(0.7, -0.4));
    let bad = AWStructure { omega: s.omega * 1.05, ..s };
    let r_bad = reflection_residual(z1, z2, &pair, &bad).unwrap();
    assert!(r_bad > 1e-6);
    let d_bad = dual_reflection_residual(z1, z2, &pair, &bad).unwrap();
    assert!(d_bad > 1e-6);
}

#[test]
fn truncated_pairs_need_room_for_the_margin() {
    let p = awcore::qspecial::AWParams::real(0.3, -0.4, 0.5, 0.2, 0.37).unwrap();
    let pair = build_basic_representation(4, &p).unwrap();
    let s = AWStructure::reduced(p.q, cr(-1.0), cr(0.5), cr(0.1), cr(0.0), cr(0.0));
    assert!(matches!(reflection_residual(cr(1.2), cr(0.9), &pair, &s), Err(Error::InvalidParameter(_))));
}
