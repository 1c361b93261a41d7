use awcore::asep::ASEPRates;
use awcore::linalg::{cr, fro, kron};
use awcore::oracle::*;
use awcore::{CMat, Error, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_rates(rng: &mut ChaCha8Rng) -> ASEPRates {
    ASEPRates::new(
        rng.random_range(0.05..1.5),
        rng.random_range(0.05..1.5),
        rng.random_range(0.0..0.6),
        rng.random_range(0.0..0.6),
        rng.random_range(0.2..0.8),
    )
    .unwrap()
}

#[test]
fn generator_is_stochastic() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for l in 1..=6 {
        let r = random_rates(&mut rng);
        let g = build_generator(&r, l).unwrap();
        assert!(g.column_sum_defect() < 1e-14);
        let m = g.to_dense();
        for i in 0..g.size() {
            for j in 0..g.size() {
                if i != j {
                    assert!(m[(i, j)] >= 0.0);
                }
            }
        }
        let x: Vec<f64> = (0..g.size()).map(|i| (i as f64).sin()).collect();
        let dense: Vec<f64> = (&m * nalgebra::DVector::from_vec(x.clone())).iter().copied().collect();
        for (a, b) in g.matvec(&x).iter().zip(&dense) {
            assert!((a - b).abs() < 1e-14);
        }
    }
}

#[test]
fn generator_rejects_bad_lengths() {
    let r = ASEPRates::new(0.3, 0.4, 0.1, 0.1, 0.5).unwrap();
    assert!(matches!(build_generator(&r, 0), Err(Error::InvalidParameter(_))));
    assert!(matches!(build_generator(&r, MAX_SITES + 1), Err(Error::InvalidParameter(_))));
}

#[test]
fn occupation_words_put_site_one_first() {
    assert!(occupied(0b100, 0, 3));
    assert!(!occupied(0b100, 2, 3));
    assert!(occupied(0b001, 2, 3));
}

#[test]
fn single_site_stationary_state() {
    let r = ASEPRates::new(0.3, 0.9, 0.2, 0.15, 0.4).unwrap();
    let sd = stationary_distribution(&build_generator(&r, 1).unwrap()).unwrap();
    let rho = (r.alpha + r.delta_r) / (r.alpha + r.beta_r + r.gamma_r + r.delta_r);
    assert!((sd.probs[1] - rho).abs() < 1e-14);
}

#[test]
fn stationary_residual_and_positivity() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..3 {
        let r = random_rates(&mut rng);
        let sd = stationary_distribution(&build_generator(&r, 6).unwrap()).unwrap();
        assert!(sd.residual < 1e-12);
        assert!(sd.probs.iter().all(|&p| p >= 0.0));
        assert!((sd.probs.iter().sum::<f64>() - 1.0).abs() < 1e-13);
    }
}

#[test]
fn iterative_solver_at_eleven_sites() {
    let r = ASEPRates::new(0.6, 0.45, 0.1, 0.2, 0.55).unwrap();
    let sd = stationary_distribution(&build_generator(&r, 11).unwrap()).unwrap();
    assert!(sd.residual < 1e-12);
    // Stationarity forces a uniform current.
    let oo = oracle_observables(&sd, &r);
    for jb in &oo.bond_currents {
        assert!((jb - oo.left_current).abs() < 1e-10);
    }
    assert!((oo.right_current - oo.left_current).abs() < 1e-10);
}

#[test]
fn currents_agree_three_ways() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for l in 2..=8 {
        let r = random_rates(&mut rng);
        let sd = stationary_distribution(&build_generator(&r, l).unwrap()).unwrap();
        let oo = oracle_observables(&sd, &r);
        for jb in &oo.bond_currents {
            assert!((jb - oo.left_current).abs() < 1e-12, "L={l}");
        }
        assert!((oo.right_current - oo.left_current).abs() < 1e-12);
        assert_eq!(oo.observables.two_point.len(), l * (l - 1) / 2);
    }
}

#[test]
fn total_variation_basics() {
    assert_eq!(total_variation(&[0.5, 0.5], &[0.5, 0.5]), 0.0);
    assert!((total_variation(&[1.0, 0.0], &[0.0, 1.0]) - 1.0).abs() < 1e-16);
}

#[test]
fn pauli_matrices_and_site_operators() {
    let (x, y, z) = (sigma_x(), sigma_y(), sigma_z());
    let i = C64::i();
    assert!(fro(&(&x * &y - &z * i)) < 1e-15);
    assert!(fro(&(sigma_plus() + sigma_minus() - &x)) < 1e-15);
    // site_op places operators on the given Kronecker factors.
    let got = site_op(3, &[(0, &x), (2, &z)]);
    let want = kron(&kron(&x, &CMat::identity(2, 2)), &z);
    assert!(fro(&(got - want)) < 1e-15);
}

#[test]
fn invariant_hamiltonian_is_hermitian() {
    for l in 2..=5 {
        let h = h_qgr(l, 0.6);
        assert!(fro(&(&h - h.adjoint())) < 1e-14);
    }
}

#[test]
fn gauge_identity_is_reported() {
    // H(-1/x) = -U H(x) U^{-1} does not hold for the nominal Hamiltonian;
    // the residual is reported, not hidden.
    for l in 2..=6 {
        let g = gauge_residual(l, 0.6);
        assert!(g.is_finite() && g > 1e-6, "L={l} {g:e}");
    }
    let u = gauge_u(3);
    assert!(fro(&(&u * u.adjoint() - CMat::identity(8, 8))) < 1e-14);
}

#[test]
fn xxz_spectrum_matches_generator() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for l in 2..=6 {
        let r = random_rates(&mut rng);
        let g = build_generator(&r, l).unwrap();
        for mu in [0.5, 1.0, 2.0] {
            let m = build_xxz(&r, l, mu, XxzVariant::Ratio).unwrap();
            let d = spectrum_compare(&g, &m).unwrap();
            assert!(d < 1e-8, "L={l} mu={mu} {d:e}");
        }
    }
}

#[test]
fn xxz_spectrum_is_independent_of_mu() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for l in 2..=6 {
        let r = random_rates(&mut rng);
        let base = build_xxz(&r, l, 1.0, XxzVariant::Ratio).unwrap();
        for mu in [0.5, 2.0] {
            let other = build_xxz(&r, l, mu, XxzVariant::Ratio).unwrap();
            assert!(spectrum_distance(&base, &other).unwrap() < 1e-10);
        }
    }
}

#[test]
fn nominal_xxz_couplings_do_not_match() {
    let r = ASEPRates::new(0.6, 0.45, 0.1, 0.2, 0.55).unwrap();
    for l in 2..=4 {
        let g = build_generator(&r, l).unwrap();
        let m = build_xxz(&r, l, 1.0, XxzVariant::Nominal).unwrap();
        assert!(spectrum_compare(&g, &m).unwrap() > 1e-4);
    }
}

#[test]
fn zero_is_in_both_spectra() {
    let r = ASEPRates::new(0.6, 0.45, 0.1, 0.2, 0.55).unwrap();
    let m = build_xxz(&r, 4, 1.0, XxzVariant::Ratio).unwrap();
    let ev = m.h.map(|z| z.re).complex_eigenvalues();
    assert!(ev.iter().any(|e| e.norm() < 1e-10));
    let g = build_generator(&r, 4).unwrap().to_dense();
    assert!(g.complex_eigenvalues().iter().any(|e| e.norm() < 1e-10));
}

#[test]
fn xxz_rejects_bad_input() {
    let r = ASEPRates::new(0.6, 0.45, 0.1, 0.2, 0.55).unwrap();
    assert!(matches!(build_xxz(&r, 1, 1.0, XxzVariant::Ratio), Err(Error::InvalidParameter(_))));
    assert!(matches!(build_xxz(&r, 13, 1.0, XxzVariant::Ratio), Err(Error::InvalidParameter(_))));
    assert!(matches!(build_xxz(&r, 3, 0.0, XxzVariant::Ratio), Err(Error::InvalidParameter(_))));
    let g = build_generator(&r, 3).unwrap();
    let m = build_xxz(&r, 4, 1.0, XxzVariant::Ratio).unwrap();
    assert!(matches!(spectrum_compare(&g, &m), Err(Error::InvalidParameter(_))));
}

#[test]
fn spectra_matching_is_optimal() {
    let a = [cr(1.0), cr(2.0), cr(3.0)];
    let b = [cr(3.0 + 1e-3), cr(1.0), cr(2.0)];
    assert!((match_spectra(&a, &b).unwrap() - 1e-3).abs() < 1e-12);
    assert!(matches!(match_spectra(&a, &b[..2]), Err(Error::InvalidParameter(_))));
}
