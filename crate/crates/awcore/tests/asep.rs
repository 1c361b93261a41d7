use awcore::asep::*;
use awcore::awalgebra::{aw_residual, fit_structure_constants};
use awcore::linalg::cr;
use awcore::oracle::{build_generator, oracle_observables, stationary_distribution, total_variation};
use awcore::quantumrep::build_spin_rep;
use awcore::Error;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Rates drawn so that both `a < 1` and `a > 1` (and likewise `b`) occur.
fn rate_sets(seed: u64, n: usize) -> Vec<ASEPRates> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| {
            let q = rng.random_range(0.2..0.8);
            let (lo, hi) = if i % 2 == 0 { (0.05, 0.3) } else { (0.6, 1.8) };
            let alpha = rng.random_range(lo..hi);
            let beta = rng.random_range(0.05..1.8);
            let gamma = rng.random_range(0.0..0.5);
            let delta = rng.random_range(0.0..0.5);
            ASEPRates::new(alpha, beta, gamma, delta, q).unwrap()
        })
        .collect()
}

/// Stationary vector of a hand-written generator through its SVD null space.
fn null_vector(m: &DMatrix<f64>) -> Vec<f64> {
    let svd = m.clone().svd(false, true);
    let vt = svd.v_t.unwrap();
    let k = (0..svd.singular_values.len())
        .min_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]))
        .unwrap();
    let v: Vec<f64> = vt.row(k).iter().copied().collect();
    let s: f64 = v.iter().sum();
    v.iter().map(|x| x / s).collect()
}

#[test]
fn parameter_map_identities() {
    for r in rate_sets(1, 12) {
        let p = kappa_map(&r).unwrap();
        let q = r.q.q;
        assert!((p.b * p.d - cr(-r.delta_r / r.beta_r)).norm() < 1e-12);
        assert!((p.a * p.c - cr(-r.gamma_r / r.alpha)).norm() < 1e-12);
        assert!(((p.b + 1.0) * (p.d + 1.0) * r.beta_r - cr(1.0 - q)).norm() < 1e-12);
        assert!(((p.a + 1.0) * (p.c + 1.0) * r.alpha - cr(1.0 - q)).norm() < 1e-12);
        assert_eq!(r.x0, q.sqrt());
    }
}

#[test]
fn parameter_map_special_cases() {
    let q = 0.4;
    let (al, be) = (0.2, 0.35);
    let p = kappa_map(&ASEPRates::new(al, be, 0.0, 0.0, q).unwrap()).unwrap();
    assert!(p.c.norm() < 1e-15 && p.d.norm() < 1e-15);
    assert!((p.a - cr((1.0 - q - al) / al)).norm() < 1e-13);
    assert!((p.b - cr((1.0 - q - be) / be)).norm() < 1e-13);
    let p = kappa_map(&ASEPRates::new(1.0 - q, 0.5, 0.0, 0.1, q).unwrap()).unwrap();
    assert!(p.a.norm() < 1e-15);
    assert!(matches!(kappa_map(&ASEPRates::new(0.0, 0.5, 0.2, 0.1, q).unwrap()), Err(Error::InvalidParameter(_))));
}

#[test]
fn rates_are_validated() {
    assert!(ASEPRates::new(-0.1, 0.5, 0.0, 0.0, 0.5).is_err());
    assert!(ASEPRates::new(0.0, 0.5, 0.0, 0.0, 0.5).is_err());
    assert!(ASEPRates::new(0.3, 0.0, 0.0, 0.0, 0.5).is_err());
    assert!(ASEPRates::new(0.3, 0.5, f64::NAN, 0.0, 0.5).is_err());
    assert!(ASEPRates::new(0.3, 0.5, 0.0, 0.0, 1.0).is_err());
}

#[test]
fn mpa_satisfies_its_relations() {
    for r in rate_sets(2, 5) {
        let mpa = build_mpa(&r, 6).unwrap();
        let inv = mpa_invariants(&mpa.d0, &mpa.d1, &mpa.w_vec, &mpa.v_vec, &r, mpa.x0);
        assert!(inv.max() < 1e-10, "{inv:?}");
        assert!((mpa.x0 - r.q.sqrt_q).abs() < 1e-14);
    }
}

#[test]
fn single_site_density() {
    for r in rate_sets(3, 5) {
        let mpa = build_mpa(&r, 1).unwrap();
        let obs = observables(&mpa, 1).unwrap();
        let want = (r.alpha + r.delta_r) / (r.alpha + r.beta_r + r.gamma_r + r.delta_r);
        assert!((obs.observables.density[0] - want).abs() < 1e-12);
    }
}

#[test]
fn two_sites_against_hand_written_generator() {
    for r in rate_sets(4, 5) {
        let (al, be, ga, de, q) = (r.alpha, r.beta_r, r.gamma_r, r.delta_r, r.q.q);
        // Words 00, 01, 10, 11 with site 1 the high bit; column = source.
        let mut m = DMatrix::<f64>::zeros(4, 4);
        let mut t = |from: usize, to: usize, rate: f64| {
            m[(to, from)] += rate;
            m[(from, from)] -= rate;
        };
        t(0b00, 0b10, al);
        t(0b00, 0b01, de);
        t(0b01, 0b11, al);
        t(0b01, 0b00, be);
        t(0b01, 0b10, q);
        t(0b10, 0b00, ga);
        t(0b10, 0b11, de);
        t(0b10, 0b01, 1.0);
        t(0b11, 0b01, ga);
        t(0b11, 0b10, be);
        let want = null_vector(&m);
        let got = mpa_distribution(&build_mpa(&r, 2).unwrap(), 2).unwrap();
        assert!(total_variation(&got, &want) < 1e-12);
    }
}

#[test]
fn mpa_matches_master_equation() {
    for r in rate_sets(5, 5) {
        for l in 2..=8 {
            let mpa = build_mpa(&r, l).unwrap();
            let p = mpa_distribution(&mpa, l).unwrap();
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-13);
            let sd = stationary_distribution(&build_generator(&r, l).unwrap()).unwrap();
            let tv = total_variation(&p, &sd.probs);
            assert!(tv < 1e-8, "L={l} tv={tv:e}");
            let mo = observables(&mpa, l).unwrap();
            let oo = oracle_observables(&sd, &r);
            assert!((mo.observables.current - oo.observables.current).abs() < 1e-8);
            for (x, y) in mo.observables.density.iter().zip(&oo.observables.density) {
                assert!((x - y).abs() < 1e-8);
            }
            for (k, v) in &mo.observables.two_point {
                assert!((v - oo.observables.two_point[k]).abs() < 1e-8);
            }
            for jb in &mo.bond_currents {
                assert!((jb - mo.current_ratio).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn truncation_is_exact() {
    for r in rate_sets(6, 3) {
        for l in [3, 6] {
            let small = observables(&build_mpa(&r, l).unwrap(), l).unwrap().observables.z_l;
            let large = observables(&build_mpa_dim(&r, l + 10).unwrap(), l).unwrap().observables.z_l;
            assert!(((small - large) / large).abs() < 1e-13, "L={l}");
        }
    }
}

#[test]
fn observables_need_room() {
    let r = ASEPRates::new(0.3, 0.4, 0.1, 0.1, 0.5).unwrap();
    let mpa = build_mpa(&r, 3).unwrap();
    assert!(matches!(observables(&mpa, 4), Err(Error::InvalidParameter(_))));
    assert!(matches!(mpa_distribution(&mpa, 0), Err(Error::InvalidParameter(_))));
    assert!(matches!(build_mpa_dim(&r, 1), Err(Error::InvalidParameter(_))));
}

#[test]
fn nominal_boundary_representations_are_audited() {
    let r = ASEPRates::new(0.3, 0.7, 0.1, 0.2, 0.5).unwrap();
    let audit = mpa_candidate_audit(&r, 8).unwrap();
    assert_eq!(audit.len(), 8);
    for cand in &audit {
        let inv = cand.invariants.expect("audit builds every candidate");
        assert!(inv.max() > 1e-6, "{} {inv:?}", cand.name);
    }
}

#[test]
fn boundary_constants_vanish_with_rates() {
    let no_delta = ASEPRates::new(0.3, 0.7, 0.1, 0.0, 0.5).unwrap();
    let no_gamma = ASEPRates::new(0.3, 0.7, 0.0, 0.2, 0.5).unwrap();
    let qv = cr(1.7);
    assert_eq!(boundary_aw_constants(&no_delta, qv).rho, cr(0.0));
    assert_eq!(boundary_aw_constants(&no_gamma, qv).rho_star, cr(0.0));
    assert!(boundary_aw_constants_derived(&no_delta, qv).rho.norm() < 1e-15);
    assert!(boundary_aw_constants_derived(&no_gamma, qv).rho_star.norm() < 1e-15);
}

#[test]
fn boundary_pair_is_an_aw_pair() {
    for r in rate_sets(7, 5) {
        for jt in [1, 2] {
            let rep = build_spin_rep(jt, r.q);
            let pair = boundary_pair_finite(&r, &rep).unwrap();
            let qv = boundary_casimir(&rep).unwrap();
            let derived = boundary_aw_constants_derived(&r, qv);
            let (r1, r2) = aw_residual(&pair, &derived).unwrap();
            assert!(r1.max(r2) < 1e-10, "2j={jt} {r1:e} {r2:e}");
            let nominal = boundary_aw_constants(&r, qv);
            let (p1, p2) = aw_residual(&pair, &nominal).unwrap();
            assert!(p1.max(p2) > 1e-6, "nominal constants unexpectedly close");
        }
    }
}

#[test]
fn boundary_pair_fit() {
    for r in rate_sets(8, 5) {
        let rep = build_spin_rep(2, r.q);
        let pair = boundary_pair_finite(&r, &rep).unwrap();
        let (fit, res) = fit_structure_constants(&pair).unwrap();
        assert!(res < 1e-10);
        let derived = boundary_aw_constants_derived(&r, boundary_casimir(&rep).unwrap());
        assert!((fit.rho - derived.rho).norm() < 1e-9 * derived.rho.norm().max(1.0));
        assert!((fit.rho_star - derived.rho_star).norm() < 1e-9 * derived.rho_star.norm().max(1.0));
    }
    let r = ASEPRates::new(0.3, 0.7, 0.0, 0.0, 0.5).unwrap();
    let pair = boundary_pair_finite(&r, &build_spin_rep(2, r.q)).unwrap();
    let (fit, _) = fit_structure_constants(&pair).unwrap();
    assert!(fit.rho.norm() < 1e-12 && fit.rho_star.norm() < 1e-12);
}

#[test]
fn boundary_pair_rejects_mismatched_q() {
    let r = ASEPRates::new(0.3, 0.7, 0.1, 0.2, 0.5).unwrap();
    let rep = build_spin_rep(1, awcore::qspecial::QParams::new(0.6).unwrap());
    assert!(matches!(boundary_pair_finite(&r, &rep), Err(Error::InvalidParameter(_))));
}

#[test]
fn right_charge_is_conserved() {
    for r in rate_sets(9, 3) {
        for l in 2..=6 {
            let res = conserved_charge_residual(&r, l, Boundary::Right).unwrap();
            assert!(res < 1e-11, "L={l} {res:e}");
        }
    }
}

#[test]
fn left_charge_is_reported() {
    // The left charge does not commute with H(q); it does commute with the
    // Hamiltonian that conserves the right charge.
    let r = ASEPRates::new(0.3, 0.7, 0.1, 0.2, 0.5).unwrap();
    for l in 2..=5 {
        let res = conserved_charge_residual(&r, l, Boundary::Left).unwrap();
        assert!(res.is_finite() && res > 1e-6, "L={l} {res:e}");
        assert!(left_charge_dual_residual(&r, l) < 1e-11);
    }
    assert!(matches!(conserved_charge_residual(&r, 1, Boundary::Right), Err(Error::InvalidParameter(_))));
    assert!(matches!(conserved_charge_residual(&r, 9, Boundary::Left), Err(Error::InvalidParameter(_))));
}

#[test]
fn chain_generators_form_a_representation() {
    let q = awcore::qspecial::QParams::new(0.45).unwrap();
    let g = chain_generators(4, q);
    // [A+, A-] = [2N] with [x] = (q^{x/2} - q^{-x/2}) / (q^{1/2} - q^{-1/2}).
    let lhs = &g.a_plus * &g.a_minus - &g.a_minus * &g.a_plus;
    let rhs = (g.q_pow_n(1.0) - g.q_pow_n(-1.0)) / cr(q.s());
    assert!(awcore::linalg::rel_diff(&lhs, &rhs) < 1e-13);
    let comm = g.q_pow_n(1.0) * &g.a_plus - &g.a_plus * g.q_pow_n(1.0) * cr(q.q);
    assert!(awcore::linalg::fro(&comm) < 1e-13);
}
