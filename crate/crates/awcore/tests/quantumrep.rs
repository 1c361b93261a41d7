use awcore::linalg::{c, cr, eye, fro, kron, rel_diff};
use awcore::qspecial::QParams;
use awcore::quantumrep::*;
use awcore::{CMat, Error, C64};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_cp(rng: &mut ChaCha8Rng) -> CoidealParams {
    let mut z = || c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    CoidealParams::new(z(), z(), z(), z(), z(), z())
}

/// Spin-j ladder matrices written out from the q-number formula.
fn ladder(j_twice: usize, q: f64) -> CMat {
    let j = j_twice as f64 / 2.0;
    let qn = |x: f64| (q.powf(x / 2.0) - q.powf(-x / 2.0)) / (q.sqrt() - 1.0 / q.sqrt());
    CMat::from_fn(j_twice + 1, j_twice + 1, |r, col| {
        if col == r + 1 {
            let m = j - col as f64;
            cr((qn(j - m) * qn(j + m + 1.0)).sqrt())
        } else {
            cr(0.0)
        }
    })
}

#[test]
fn spin_reps_satisfy_relations() {
    for qv in [0.2, 0.5, 0.9] {
        let q = QParams::new(qv).unwrap();
        for jt in 1..=6 {
            let rep = build_spin_rep(jt, q);
            let (a, b, cc) = rep.relation_residuals();
            assert!(a.max(b).max(cc) < 1e-13, "2j={jt} q={qv}");
            assert!(rel_diff(&rep.a_plus, &ladder(jt, qv)) < 1e-15);
            assert_eq!(rep.n_diag[0], jt as f64 / 2.0);
        }
    }
}

#[test]
fn classical_limit() {
    let q = QParams::new(1.0 - 1e-7).unwrap();
    let rep = build_spin_rep(3, q);
    let j = 1.5;
    for i in 1..4 {
        let m = j - i as f64;
        let classical = ((j - m) * (j + m + 1.0)).sqrt();
        assert!((rep.a_plus[(i - 1, i)].re - classical).abs() < 1e-6);
    }
}

#[test]
fn casimir_is_central_with_known_value() {
    for qv in [0.25, 0.5, 0.8] {
        let q = QParams::new(qv).unwrap();
        let s = q.s();
        for jt in 0..=5 {
            let rep = build_spin_rep(jt, q);
            let cas = casimir_matrix(&rep);
            assert!(centrality_residual(&rep, &cas) < 1e-13);
            let j = jt as f64 / 2.0;
            let want = (qv.powf(j + 0.5) + qv.powf(-j - 0.5)) / (s * s);
            let v = casimir_value(&rep).unwrap();
            assert!((v - want).norm() < 1e-12 * want);
        }
    }
    let v = casimir_value(&build_spin_rep(1, QParams::new(0.25).unwrap())).unwrap();
    assert!((v - 17.0 / 9.0).norm() < 1e-14);
}

#[test]
fn casimir_brute_force_spin_one() {
    let qv: f64 = 0.4;
    let q = QParams::new(qv).unwrap();
    let rep = build_spin_rep(2, q);
    let ap = ladder(2, qv);
    let am = ap.transpose();
    let s = qv.sqrt() - 1.0 / qv.sqrt();
    let shift = CMat::from_diagonal(&nalgebra::DVector::from_fn(3, |i, _| {
        let m = 1.0 - i as f64;
        cr((qv.powf(m - 0.5) + qv.powf(-m + 0.5)) / (s * s))
    }));
    let brute = &ap * &am + shift;
    assert!(rel_diff(&casimir_matrix(&rep), &brute) < 1e-15);
    for i in 0..3 {
        assert!((brute[(i, i)] - brute[(0, 0)]).norm() < 1e-13);
    }
}

#[test]
fn opposite_sign_casimir_is_not_central() {
    let rep = build_spin_rep(1, QParams::new(0.3).unwrap());
    let bad = casimir_nominal_matrix(&rep);
    assert!(centrality_residual(&rep, &bad) > 1e-3);
}

#[test]
fn evaluation_rep_relations_and_serre() {
    let q = QParams::new(0.45).unwrap();
    for jt in 1..=4 {
        let rep = build_evaluation_rep(c(0.7, 0.4), &build_spin_rep(jt, q));
        assert!(rep.relation_residual() < 1e-13);
        assert!(qserre_residual(&rep) < 1e-13, "2j={jt}");
        assert!(qserre_residual_with(&rep, SerreSign::Minus) < 1e-13);
        let plus = qserre_residual_with(&rep, SerreSign::Plus);
        if jt >= 3 {
            assert!(plus > 1e-2, "2j={jt} plus={plus}");
        } else {
            assert!(plus < 1e-13);
        }
    }
}

#[test]
fn tensor_product_is_a_representation() {
    let q = QParams::new(0.6).unwrap();
    let r1 = build_evaluation_rep(c(1.2, 0.0), &build_spin_rep(2, q));
    let r2 = build_evaluation_rep(c(0.3, 0.5), &build_spin_rep(1, q));
    let t = tensor_rep(&r1, &r2);
    assert_eq!(t.dim(), 6);
    assert!(t.relation_residual() < 1e-13);
    assert!(qserre_residual(&t) < 1e-12);
}

#[test]
fn coproduct_of_coideal_generators() {
    let q = QParams::new(0.55).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (j1, j2) in [(1, 1), (2, 1)] {
        for _ in 0..5 {
            let cp = random_cp(&mut rng);
            let r1 = build_evaluation_rep(c(0.9, 0.2), &build_spin_rep(j1, q));
            let r2 = build_evaluation_rep(c(1.1, -0.3), &build_spin_rep(j2, q));
            assert!(coproduct_coideal_residual(&r1, &r2, &cp).unwrap() < 1e-12);

            // Direct expansion: Δ(A) = A ⊗ q^{-H0} + 1 ⊗ A - k 1 ⊗ q^{-H0}.
            let big = awcore::awalgebra::build_coideal_ops(&tensor_rep(&r1, &r2), &cp);
            let p1 = awcore::awalgebra::build_coideal_ops(&r1, &cp);
            let p2 = awcore::awalgebra::build_coideal_ops(&r2, &cp);
            let k0 = r2.q_pow_h(0, -1.0);
            let i1 = eye(r1.dim());
            let want = kron(&p1.a, &k0) + kron(&i1, &p2.a) - kron(&i1, &k0) * cp.k;
            assert!(rel_diff(&big.a, &want) < 1e-12);
        }
    }
}

#[test]
fn coproduct_rejects_mismatched_q() {
    let r1 = build_evaluation_rep(cr(1.0), &build_spin_rep(1, QParams::new(0.5).unwrap()));
    let r2 = build_evaluation_rep(cr(1.0), &build_spin_rep(1, QParams::new(0.6).unwrap()));
    let cp = CoidealParams::new(cr(1.0), cr(1.0), cr(1.0), cr(1.0), cr(0.0), cr(0.0));
    assert!(matches!(coproduct_coideal_residual(&r1, &r2, &cp), Err(Error::InvalidParameter(_))));
}

#[test]
fn coideal_parameter_maps() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let cp = random_cp(&mut rng);
    assert_eq!(cp.swapped().swapped(), cp);
    let nu: C64 = c(0.8, -0.6);
    let back = cp.absorb_nu(nu).absorb_nu(cr(1.0) / nu);
    assert!((back.u - cp.u).norm() < 1e-15 && (back.v - cp.v).norm() < 1e-15);
    assert_eq!(cp.absorb_nu(nu).k, cp.k);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn q_power_of_n_is_multiplicative(qv in 0.05f64..0.95, jt in 0usize..6, s1 in -2.0f64..2.0, s2 in -2.0f64..2.0) {
        let rep = build_spin_rep(jt, QParams::new(qv).unwrap());
        let lhs = rep.q_pow_n(s1) * rep.q_pow_n(s2);
        let rhs = rep.q_pow_n(s1 + s2);
        prop_assert!(fro(&(lhs - &rhs)) <= 1e-12 * fro(&rhs));
    }
}
