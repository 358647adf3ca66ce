use approx::assert_abs_diff_eq;
use dfs_core::dfs::{
    antisymmetric_product, balanced_support_check, dfs_basis, multiplicity, psi_minus, psi_plus,
    singlet_product, trine_gram, verify_invariance, xi, xi_perp, MultiplicityTable, SpinLabel,
    Trine,
};
use dfs_core::linalg::{self, CMatrix};
use dfs_core::qcore::{haar_random_su, tensor, PureState};
use dfs_core::{Complex64, Error};
use proptest::prelude::*;

const CASES: [(usize, usize); 5] = [(2, 2), (4, 2), (6, 2), (3, 3), (6, 3)];

/// Number of paths in the Bratteli diagram of spin coupling ending at 2j.
fn bratteli(n: u32, twice_j: u32) -> u64 {
    let mut row = vec![1u64]; // index = 2j after zero spins
    for _ in 0..n {
        let mut next = vec![0u64; row.len() + 1];
        for (tj, &count) in row.iter().enumerate() {
            next[tj + 1] += count;
            if tj > 0 {
                next[tj - 1] += count;
            }
        }
        row = next;
    }
    row.get(twice_j as usize).copied().unwrap_or(0)
}

#[test]
fn multiplicity_matches_path_counting() {
    for n in 0..=10u32 {
        for tj in 0..=12u32 {
            let got = multiplicity(n, SpinLabel::from_twice(tj)).unwrap();
            assert_eq!(got, bratteli(n, tj), "n={n} 2j={tj}");
        }
    }
    for n in [2u32, 4, 6, 8] {
        assert_eq!(
            multiplicity(n - 1, SpinLabel::HALF).unwrap(),
            multiplicity(n, SpinLabel::ZERO).unwrap()
        );
    }
}

#[test]
fn multiplicity_table_completeness() {
    for n in 1..=20u32 {
        let t = MultiplicityTable::new(n).unwrap();
        assert_eq!(t.completeness_sum(), 1u128 << n);
    }
    let t = MultiplicityTable::new(4).unwrap();
    assert_eq!(t.get(SpinLabel::ZERO), 2);
    assert_eq!(t.get(SpinLabel::from_twice(2)), 3);
    assert_eq!(t.get(SpinLabel::from_twice(4)), 1);
}

/// Matrix units `E_ab` (a≠b) and `E_aa − E_bb` span sl(d).
fn sl_generators(d: usize) -> Vec<CMatrix> {
    let mut out = Vec::new();
    for a in 0..d {
        for b in 0..d {
            let mut m = CMatrix::zeros(d, d);
            if a != b {
                m[(a, b)] = Complex64::new(1.0, 0.0);
                out.push(m);
            } else if a + 1 < d {
                m[(a, a)] = Complex64::new(1.0, 0.0);
                m[(a + 1, a + 1)] = Complex64::new(-1.0, 0.0);
                out.push(m);
            }
        }
    }
    out
}

fn full_space_projector(n: usize, d: usize) -> CMatrix {
    let dim = d.pow(n as u32);
    let mut gram = CMatrix::zeros(dim, dim);
    for g in sl_generators(d) {
        let mut total = CMatrix::zeros(dim, dim);
        for site in 0..n {
            let mut term = CMatrix::identity(1, 1);
            for k in 0..n {
                let factor = if k == site {
                    g.clone()
                } else {
                    CMatrix::identity(d, d)
                };
                term = term.kronecker(&factor);
            }
            total += term;
        }
        gram += total.adjoint() * total;
    }
    let eig = gram.symmetric_eigen();
    let mut proj = CMatrix::zeros(dim, dim);
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda.abs() < 1e-8 {
            let v = eig.eigenvectors.column(k);
            proj += v * v.adjoint();
        }
    }
    proj
}

#[test]
fn basis_spans_full_space_null_space() {
    for (n, d) in [(2, 2), (4, 2), (6, 2), (3, 3)] {
        let basis = dfs_basis(n, d).unwrap();
        let dim = basis.states()[0].dim();
        let mut proj = CMatrix::zeros(dim, dim);
        for s in basis.states() {
            proj += s.amplitudes() * s.amplitudes().adjoint();
        }
        let oracle = full_space_projector(n, d);
        assert!(linalg::max_abs(&(proj - oracle)) < 1e-9, "({n},{d})");
    }
}

#[test]
fn basis_dimensions() {
    let expected = [
        ((2, 2), 1),
        ((4, 2), 2),
        ((6, 2), 5),
        ((8, 2), 14),
        ((3, 3), 1),
        ((6, 3), 5),
    ];
    for ((n, d), dim) in expected {
        assert_eq!(dfs_basis(n, d).unwrap().dimension(), dim, "({n},{d})");
    }
    for n in [2usize, 4, 6, 8] {
        let k0 = multiplicity(n as u32, SpinLabel::ZERO).unwrap() as usize;
        assert_eq!(dfs_basis(n, 2).unwrap().dimension(), k0);
    }
}

#[test]
fn basis_is_orthonormal_and_invariant() {
    for (n, d) in CASES {
        let basis = dfs_basis(n, d).unwrap();
        let g = basis.gram();
        assert!(
            linalg::max_abs(&(g - CMatrix::identity(basis.dimension(), basis.dimension()))) < 1e-12
        );
        for psi in basis.states() {
            let r = verify_invariance(psi, 100, 7, 1e-10);
            assert!(r.pass, "({n},{d}) {}", r.max_deviation);
            assert!(balanced_support_check(psi));
        }
    }
}

#[test]
fn basis_is_deterministic() {
    let a = dfs_basis(6, 3).unwrap();
    let b = dfs_basis(6, 3).unwrap();
    assert_eq!(a, b);
}

#[test]
fn rejects_missing_subspace() {
    assert!(matches!(
        dfs_basis(3, 2),
        Err(Error::NoInvariantSubspace { .. })
    ));
    assert!(matches!(
        dfs_basis(4, 3),
        Err(Error::NoInvariantSubspace { .. })
    ));
    assert!(dfs_basis(4, 1).is_err());
}

#[test]
fn antisymmetric_products_lie_in_basis_span() {
    let basis = dfs_basis(6, 3).unwrap();
    for groups in [
        vec![vec![1, 2, 3], vec![4, 5, 6]],
        vec![vec![1, 3, 5], vec![2, 6, 4]],
    ] {
        let psi = antisymmetric_product(3, &groups).unwrap();
        assert!(basis.residual(&psi).unwrap() < 1e-10);
        assert!(verify_invariance(&psi, 20, 1, 1e-10).pass);
    }
}

#[test]
fn non_dfs_states_fail() {
    let plus = psi_plus();
    assert!(!verify_invariance(&plus, 10, 0, 1e-10).pass);
    let zeros = PureState::basis(2, &[0, 0]).unwrap();
    assert!(!balanced_support_check(&zeros));
}

#[test]
fn singlet_product_hand_expansion() {
    // ψ⁻⊗ψ⁻ = ½(|0101⟩ − |0110⟩ − |1001⟩ + |1010⟩)
    let psi = tensor(&psi_minus(), &psi_minus()).unwrap();
    let h = 0.5;
    let expect = [(0b0101, h), (0b0110, -h), (0b1001, -h), (0b1010, h)];
    for i in 0..16 {
        let want = expect
            .iter()
            .find(|(k, _)| *k == i)
            .map_or(0.0, |(_, v)| *v);
        assert!((psi.amplitudes()[i] - Complex64::new(want, 0.0)).norm() < 1e-15);
    }
    let xi1 = singlet_product(&[(1, 2), (3, 4)]).unwrap();
    assert!(xi1.distance(&psi).unwrap() < 1e-15);
}

#[test]
fn trine_geometry() {
    let g = trine_gram();
    for k in 0..3 {
        for l in 0..3 {
            let want = if k == l { 1.0 } else { -0.5 };
            assert!((g[(k, l)] - Complex64::new(want, 0.0)).norm() < 1e-12);
        }
    }
    let basis = dfs_basis(4, 2).unwrap();
    for k in Trine::ALL {
        assert_abs_diff_eq!(
            xi(k).inner(&xi_perp(k)).unwrap().norm(),
            0.0,
            epsilon = 1e-12
        );
        assert!(basis.residual(&xi_perp(k)).unwrap() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn superpositions_stay_invariant(re in prop::collection::vec(-1.0f64..1.0, 10), seed in any::<u64>()) {
        let basis = dfs_basis(6, 2).unwrap();
        let c: Vec<Complex64> = re.chunks(2).map(|p| Complex64::new(p[0], p[1])).collect();
        let norm = c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        prop_assume!(norm > 1e-3);
        let c: Vec<Complex64> = c.iter().map(|z| z / norm).collect();
        let psi = basis.combine(&c).unwrap();
        let u = haar_random_su(2, seed).unwrap();
        prop_assert!(psi.apply_collective(&u).unwrap().distance(&psi).unwrap() < 1e-10);
    }
}
