use approx::assert_abs_diff_eq;
use dfs_core::linalg::{self, CMatrix, CVector};
use dfs_core::qcore::{
    collective, fidelity, haar_random_su, partial_trace, tensor, DensityOperator, PureState,
    UnitaryMatrix,
};
use dfs_core::{Complex64, Error};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_state(d: usize, n: usize, seed: u64) -> PureState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = d.pow(n as u32);
    let v = CVector::from_fn(dim, |_, _| {
        Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
    });
    PureState::normalized(d, n, v).unwrap()
}

#[test]
fn index_convention_site_one_most_significant() {
    let s = PureState::basis(3, &[2, 0, 1]).unwrap();
    assert_eq!(s.amplitudes()[2 * 9 + 1], Complex64::new(1.0, 0.0));
    assert_eq!(linalg::digits(19, 3, 3), vec![2, 0, 1]);
}

#[test]
fn rejects_bad_inputs() {
    assert!(matches!(
        PureState::new(1, 2, CVector::zeros(1)),
        Err(Error::InvalidLocalDim { .. })
    ));
    assert!(matches!(
        PureState::new(2, 2, CVector::from_element(4, Complex64::new(1.0, 0.0))),
        Err(Error::NotNormalized(_))
    ));
    assert!(matches!(
        linalg::hilbert_dim(2, 21),
        Err(Error::TooLarge { .. })
    ));
    let psi = random_state(2, 3, 0);
    assert!(psi.reduced(&[1, 1]).is_err());
    assert!(psi.reduced(&[4]).is_err());
    let not_unitary = CMatrix::from_element(2, 2, Complex64::new(1.0, 0.0));
    assert!(UnitaryMatrix::new(not_unitary).is_err());
}

#[test]
fn inner_product_matches_brute_force() {
    let a = random_state(3, 2, 1);
    let b = random_state(3, 2, 2);
    let brute: Complex64 = a
        .amplitudes()
        .iter()
        .zip(b.amplitudes().iter())
        .map(|(x, y)| x.conj() * y)
        .sum();
    let got = a.inner(&b).unwrap();
    assert_abs_diff_eq!(got.re, brute.re, epsilon = 1e-14);
    assert_abs_diff_eq!(got.im, brute.im, epsilon = 1e-14);
}

#[test]
fn partial_trace_matches_hand_sum() {
    let psi = random_state(2, 3, 3);
    let rho = psi.reduced(&[1, 3]).unwrap();
    // keep sites 1,3; trace site 2
    for r in 0..4 {
        for c in 0..4 {
            let (r1, r3, c1, c3) = (r / 2, r % 2, c / 2, c % 2);
            let mut sum = Complex64::new(0.0, 0.0);
            for s2 in 0..2 {
                let a = psi.amplitude(&[r1, s2, r3]);
                let b = psi.amplitude(&[c1, s2, c3]);
                sum += a * b.conj();
            }
            assert!((rho.matrix()[(r, c)] - sum).norm() < 1e-14);
        }
    }
}

#[test]
fn haar_unitaries_are_special() {
    for d in 1..=5 {
        for seed in 0..20 {
            let u = haar_random_su(d, seed).unwrap();
            assert!(u.unitarity_deviation() < 1e-12);
            assert!((u.determinant() - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }
    }
    assert!(haar_random_su(0, 0).is_err());
}

#[test]
fn haar_first_moment() {
    // E|U₀₀|² = 1/d, Var = (d−1)/(d²(d+1)).
    let draws = 10_000;
    let d = 2.0;
    let mut rng = ChaCha8Rng::seed_from_u64(123);
    let mean: f64 = (0..draws)
        .map(|_| dfs_core::qcore::haar_random_su_with(2, &mut rng).matrix()[(0, 0)].norm_sqr())
        .sum::<f64>()
        / draws as f64;
    let sigma = ((d - 1.0) / (d * d * (d + 1.0)) / draws as f64).sqrt();
    assert!((mean - 0.5).abs() < 5.0 * sigma, "{mean}");
}

#[test]
fn density_constructors_validate() {
    let psi = random_state(2, 2, 4);
    let rho = DensityOperator::from_pure(&psi);
    assert_abs_diff_eq!(rho.trace().re, 1.0, epsilon = 1e-12);
    assert_abs_diff_eq!(fidelity(&psi, &rho).unwrap(), 1.0, epsilon = 1e-12);
    let mixed = DensityOperator::maximally_mixed(2, 2).unwrap();
    assert_abs_diff_eq!(fidelity(&psi, &mixed).unwrap(), 0.25, epsilon = 1e-12);
    let bad = CMatrix::from_fn(2, 2, |r, c| {
        Complex64::new(if r == c { 1.5 } else { 0.0 }, 0.0)
    });
    assert!(DensityOperator::new(2, 1, bad).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn tensor_is_associative(s in any::<u64>()) {
        let (a, b, c) = (random_state(2, 1, s), random_state(2, 2, s ^ 1), random_state(2, 1, s ^ 2));
        let left = tensor(&tensor(&a, &b).unwrap(), &c).unwrap();
        let right = tensor(&a, &tensor(&b, &c).unwrap()).unwrap();
        prop_assert!(left.distance(&right).unwrap() < 1e-12);
    }

    #[test]
    fn collective_is_homomorphism(s in any::<u64>()) {
        let u = haar_random_su(3, s).unwrap();
        let v = haar_random_su(3, s.wrapping_add(1)).unwrap();
        let uv = collective(&u.compose(&v).unwrap(), 2).unwrap();
        let prod = collective(&u, 2).unwrap().compose(&collective(&v, 2).unwrap()).unwrap();
        prop_assert!(linalg::max_abs(&(uv.matrix() - prod.matrix())) < 1e-12);
        let psi = random_state(3, 2, s);
        let a = psi.apply_collective(&u).unwrap();
        let b = psi.apply(&collective(&u, 2).unwrap()).unwrap();
        prop_assert!(a.distance(&b).unwrap() < 1e-12);
    }

    #[test]
    fn partial_traces_compose(s in any::<u64>()) {
        let psi = random_state(2, 4, s);
        let rho = DensityOperator::from_pure(&psi);
        let direct = partial_trace(&rho, &[2]).unwrap();
        let staged = partial_trace(&partial_trace(&rho, &[1, 2]).unwrap(), &[2]).unwrap();
        prop_assert!(direct.max_abs_diff(&staged).unwrap() < 1e-12);
        let via_state = psi.reduced(&[2]).unwrap();
        prop_assert!(direct.max_abs_diff(&via_state).unwrap() < 1e-12);
        prop_assert!((direct.trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unitaries_preserve_norm(s in any::<u64>(), site in 1usize..=3) {
        let psi = random_state(3, 3, s);
        let u = haar_random_su(3, s).unwrap();
        let out = psi.apply_local(&u, site).unwrap();
        prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
    }
}
