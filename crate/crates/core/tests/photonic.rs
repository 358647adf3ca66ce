use std::collections::BTreeMap;

use approx::assert_abs_diff_eq;
use dfs_core::dfs::{dfs_basis, xi, xi_perp, Trine};
use dfs_core::photonic::{
    balanced_beam_splitter, beam_splitter_with, classify, count_distribution, detection_table,
    encode_photons, interfere, lose_photon_fock, measure_trine_basis, DetectionEvent, FockMixture,
    FockState, ModeOccupation, Outcome, PhotonLoss,
};
use dfs_core::qcore::{haar_random_su, PureState};
use dfs_core::qkd::{abstract_measurement, uu_random_check, uu_random_check_state};
use dfs_core::Complex64;
use nalgebra::Matrix2;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn occ(pairs: &[(usize, u8)]) -> ModeOccupation {
    let mut c = [0u8; 8];
    for &(m, n) in pairs {
        c[m] = n;
    }
    ModeOccupation::new(c)
}

fn event(a: [u8; 2], b: [u8; 2]) -> DetectionEvent {
    DetectionEvent::new(a, b)
}

#[test]
fn hong_ou_mandel_bunching() {
    // One H photon in each of ports 1 and 2.
    let input = FockState::single(occ(&[(0, 1), (2, 1)]));
    let out = balanced_beam_splitter(&input, 1, 2).unwrap();
    let dist = count_distribution(&out);
    assert_abs_diff_eq!(dist[&event([2, 0], [0, 0])], 1.0, epsilon = 1e-12);
    // |2,0⟩ and |0,2⟩ each with probability 1/2.
    for (o, c) in out.terms() {
        assert_abs_diff_eq!(c.norm_sqr(), 0.5, epsilon = 1e-12);
        assert_eq!(o.total(), 2);
    }
}

#[test]
fn orthogonal_polarizations_do_not_interfere() {
    let input = FockState::single(occ(&[(0, 1), (3, 1)]));
    let dist = count_distribution(&balanced_beam_splitter(&input, 1, 2).unwrap());
    assert_abs_diff_eq!(dist[&event([1, 1], [0, 0])], 0.5, epsilon = 1e-12);
    assert_abs_diff_eq!(dist[&event([2, 0], [0, 0])], 0.5, epsilon = 1e-12);
}

#[test]
fn singlet_antibunches_triplet_bunches() {
    let singlet = encode_photons(&xi(Trine::Xi1), [1, 2, 3, 4]).unwrap();
    let dist = interfere(&FockMixture::pure(singlet))
        .unwrap()
        .count_distribution();
    assert_eq!(dist.len(), 1);
    assert_abs_diff_eq!(dist[&event([1, 1], [1, 1])], 1.0, epsilon = 1e-12);
}

#[test]
fn single_photon_splits_evenly() {
    let input = FockState::single(occ(&[(1, 1)]));
    let out = balanced_beam_splitter(&input, 1, 2).unwrap();
    let dist = count_distribution(&out);
    assert_abs_diff_eq!(dist[&event([1, 0], [0, 0])], 1.0, epsilon = 1e-12);
    for c in out.terms().values() {
        assert_abs_diff_eq!(c.norm_sqr(), 0.5, epsilon = 1e-12);
    }
}

#[test]
fn event_normal_form() {
    assert_eq!(event([1, 0], [1, 1]), event([1, 1], [0, 1]));
    assert_eq!(event([0, 2], [0, 1]).to_string(), "{{2,0},{1,0}}");
    assert_eq!(
        DetectionEvent::from_port_counts([0, 1, 1, 1]).to_string(),
        "{{1,1},{1,0}}"
    );
}

#[test]
fn classification_examples() {
    assert_eq!(classify(&event([1, 1], [1, 0])), Outcome::Xi);
    assert_eq!(classify(&event([2, 0], [1, 0])), Outcome::XiPerp);
    assert_eq!(classify(&event([2, 1], [1, 0])), Outcome::Invalid);
    assert_eq!(classify(&event([1, 1], [2, 0])), Outcome::Invalid);
}

#[test]
fn detection_table_reproduces_expected_events() {
    let rows = detection_table().unwrap();
    assert_eq!(rows.len(), 3 * 2 * 5);
    for row in rows {
        let expected = match (row.perp_input, row.lost_photon.is_some()) {
            (false, false) => event([1, 1], [1, 1]),
            (true, false) => event([2, 0], [2, 0]),
            (false, true) => event([1, 1], [1, 0]),
            (true, true) => event([2, 0], [1, 0]),
        };
        assert_abs_diff_eq!(row.distribution[&expected], 1.0, epsilon = 1e-12);
        let correct = if row.perp_input {
            row.outcomes.xi_perp
        } else {
            row.outcomes.xi
        };
        assert_abs_diff_eq!(correct, 1.0, epsilon = 1e-12);
        assert!(row.outcomes.invalid.abs() < 1e-12);
    }
}

#[test]
fn uniform_loss_is_average_of_port_losses() {
    let state = encode_photons(&xi_perp(Trine::Xi2), Trine::Xi2.routing()).unwrap();
    let uniform = lose_photon_fock(&state, PhotonLoss::Uniform).unwrap();
    assert_abs_diff_eq!(uniform.total_weight(), 1.0, epsilon = 1e-12);
    let dist = interfere(&uniform).unwrap().count_distribution();
    assert_abs_diff_eq!(dist[&event([2, 0], [1, 0])], 1.0, epsilon = 1e-12);
}

fn random_dfs_state(rng: &mut ChaCha8Rng) -> PureState {
    let basis = dfs_basis(4, 2).unwrap();
    let mut re = || Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
    let coeffs = [re(), re()];
    let norm = (coeffs[0].norm_sqr() + coeffs[1].norm_sqr()).sqrt();
    basis
        .combine(&[coeffs[0] / norm, coeffs[1] / norm])
        .unwrap()
}

#[test]
fn fock_and_abstract_backends_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let psi = random_dfs_state(&mut rng);
        for basis in Trine::ALL {
            for lost in [None, Some(1), Some(2), Some(3), Some(4)] {
                let fock = measure_trine_basis(&psi, basis, lost).unwrap();
                let abs = abstract_measurement(&psi, basis, lost).unwrap();
                assert!(fock.max_abs_diff(&abs) < 1e-10, "{basis} {lost:?}");
            }
        }
    }
}

#[test]
fn dfs_measurement_matches_projection_weights() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let psi = random_dfs_state(&mut rng);
        for basis in Trine::ALL {
            let p = measure_trine_basis(&psi, basis, None).unwrap();
            let a = xi(basis).inner(&psi).unwrap().norm_sqr();
            let b = xi_perp(basis).inner(&psi).unwrap().norm_sqr();
            assert_abs_diff_eq!(p.xi, a, epsilon = 1e-10);
            assert_abs_diff_eq!(p.xi_perp, b, epsilon = 1e-10);
            assert_abs_diff_eq!(a + b, 1.0, epsilon = 1e-10);
        }
    }
}

#[test]
fn beam_splitter_convention_does_not_change_counts() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let c = |x: f64| Complex64::new(x, 0.0);
    let i = Complex64::new(0.0, h);
    let conventions = [
        Matrix2::new(c(h), c(h), c(h), c(-h)),
        Matrix2::new(c(h), i, i, c(h)),
        Matrix2::new(c(h), c(-h), c(h), c(h)),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let psi = random_dfs_state(&mut rng);
    let encoded = encode_photons(&psi, [1, 2, 3, 4]).unwrap();
    let counts = |m: &Matrix2<Complex64>| -> BTreeMap<DetectionEvent, f64> {
        let s = beam_splitter_with(&encoded, 1, 2, m).unwrap();
        count_distribution(&beam_splitter_with(&s, 3, 4, m).unwrap())
    };
    let reference = counts(&conventions[0]);
    for m in &conventions[1..] {
        let other = counts(m);
        for key in reference.keys().chain(other.keys()) {
            let a = reference.get(key).copied().unwrap_or(0.0);
            let b = other.get(key).copied().unwrap_or(0.0);
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
    }
}

#[test]
fn collective_rotation_before_encoding_is_invisible() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let psi = random_dfs_state(&mut rng);
    for seed in 0..10 {
        let u = haar_random_su(2, seed).unwrap();
        let rotated = psi.apply_collective(&u).unwrap();
        for basis in Trine::ALL {
            for lost in [None, Some(2)] {
                let a = measure_trine_basis(&psi, basis, lost).unwrap();
                let b = measure_trine_basis(&rotated, basis, lost).unwrap();
                assert!(a.max_abs_diff(&b) < 1e-10);
            }
        }
    }
}

#[test]
fn pairwise_noise_keeps_matched_outcome() {
    let report = uu_random_check(200, 17).unwrap();
    assert!(report.pass);
    assert!(report.min_correct > 1.0 - 1e-10);
    assert!(report.max_invalid < 1e-10);
}

#[test]
fn pairwise_noise_with_identity_is_noiseless_readout() {
    let psi = xi_perp(Trine::Xi3);
    let p = measure_trine_basis(&psi, Trine::Xi3, None).unwrap();
    assert_abs_diff_eq!(p.xi_perp, 1.0, epsilon = 1e-12);
}

#[test]
fn pairwise_noise_on_product_inputs() {
    // Counting only resolves singlet vs triplet per beam splitter, which
    // U⊗U preserves, so |0000⟩ always bunches and never reads XI.
    let zeros = PureState::basis(2, &[0, 0, 0, 0]).unwrap();
    let report = uu_random_check_state(&zeros, Trine::Xi1, 50, 1).unwrap();
    assert!(!report.pass);
    assert!(report.max_invalid < 1e-10);
    assert!(report.mean_correct < 1e-10);

    // One singlet and one triplet pair: the mixed count pattern is INVALID.
    let mixed = PureState::basis(2, &[0, 1, 0, 0]).unwrap();
    let report = uu_random_check_state(&mixed, Trine::Xi1, 50, 1).unwrap();
    assert!(!report.pass);
    assert_abs_diff_eq!(report.mean_invalid, 0.5, epsilon = 1e-10);
}

proptest! {
    #[test]
    fn beam_splitters_conserve_photons(seed in any::<u64>(), basis in 0usize..3, lost in 0usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psi = random_dfs_state(&mut rng);
        let basis = Trine::ALL[basis];
        let encoded = encode_photons(&psi, basis.routing()).unwrap();
        let mixture = if lost == 0 {
            FockMixture::pure(encoded)
        } else {
            lose_photon_fock(&encoded, PhotonLoss::Port(lost)).unwrap()
        };
        let expected = if lost == 0 { 4 } else { 3 };
        let out = interfere(&mixture).unwrap();
        let mut total = 0.0;
        for (w, s) in out.components() {
            prop_assert_eq!(s.photon_number(), Some(expected));
            total += w * s.norm_sqr();
        }
        prop_assert!((total - 1.0).abs() < 1e-12);
    }
}
