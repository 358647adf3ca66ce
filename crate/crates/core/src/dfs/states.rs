use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use nalgebra::Matrix3;
use num_complex::Complex64;
use num_traits::Float;

use super::dfs_basis;
use crate::linalg::{self, CVector};
use crate::qcore::PureState;
use crate::{Error, Result};

/// Sign of the permutation `values` of `0..values.len()`, or 0 when it is
/// not a permutation.
fn permutation_sign(values: &[usize]) -> i32 {
    let k = values.len();
    let mut seen = vec![false; k];
    for &v in values {
        if v >= k || seen[v] {
            return 0;
        }
        seen[v] = true;
    }
    let mut sign = 1;
    let mut visited = vec![false; k];
    for start in 0..k {
        if visited[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !visited[i] {
            visited[i] = true;
            i = values[i];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// Product of totally antisymmetric `d`-qudit states, one per group of
/// sites (1-based). Each factor is `Σ_π sgn(π) |π(0) … π(d-1)⟩ / √d!` on the
/// listed sites in the listed order.
///
/// The groups must partition `1..=n`.
pub fn antisymmetric_product(d: usize, groups: &[Vec<usize>]) -> Result<PureState> {
    if d < 2 {
        return Err(Error::InvalidLocalDim { got: d, min: 2 });
    }
    if groups.is_empty() {
        return Err(Error::InvalidGrouping("no groups given"));
    }
    if groups.iter().any(|g| g.len() != d) {
        return Err(Error::InvalidGrouping(
            "every group must hold exactly d sites",
        ));
    }
    let n = d * groups.len();
    let mut covered = vec![false; n + 1];
    for &s in groups.iter().flatten() {
        if s == 0 || s > n {
            return Err(Error::InvalidGrouping("site outside 1..=n"));
        }
        if covered[s] {
            return Err(Error::InvalidGrouping("groups overlap"));
        }
        covered[s] = true;
    }
    let mut local = vec![0; d];
    PureState::from_fn(d, n, |digits| {
        let mut sign = 1;
        for g in groups {
            for (slot, &site) in local.iter_mut().zip(g) {
                *slot = digits[site - 1];
            }
            sign *= permutation_sign(&local);
            if sign == 0 {
                break;
            }
        }
        Complex64::new(sign as f64, 0.0)
    })
}

/// Product of two-qubit singlets `|ψ⁻⟩_{ab} = (|01⟩_{ab} − |10⟩_{ab})/√2`
/// over a perfect matching of the sites.
pub fn singlet_product(pairing: &[(usize, usize)]) -> Result<PureState> {
    let groups: Vec<Vec<usize>> = pairing.iter().map(|&(a, b)| vec![a, b]).collect();
    antisymmetric_product(2, &groups)
}

/// `(|01⟩ − |10⟩)/√2`.
pub fn psi_minus() -> PureState {
    singlet_product(&[(1, 2)]).expect("fixed pairing")
}

/// `(|01⟩ + |10⟩)/√2`.
pub fn psi_plus() -> PureState {
    let h = Complex64::new(Float::sqrt(0.5), 0.0);
    PureState::new(
        2,
        2,
        CVector::from_vec(vec![linalg::ZERO, h, h, linalg::ZERO]),
    )
    .expect("normalized")
}

/// The three four-qubit singlet products of the trine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Trine {
    /// `|ψ⁻⟩₁₂ |ψ⁻⟩₃₄`
    Xi1,
    /// `|ψ⁻⟩₁₃ |ψ⁻⟩₄₂`
    Xi2,
    /// `|ψ⁻⟩₁₄ |ψ⁻⟩₂₃`
    Xi3,
}

impl Trine {
    pub const ALL: [Trine; 3] = [Trine::Xi1, Trine::Xi2, Trine::Xi3];

    /// 1, 2 or 3.
    pub fn label(self) -> usize {
        self as usize + 1
    }

    pub fn from_label(k: usize) -> Result<Self> {
        match k {
            1 => Ok(Trine::Xi1),
            2 => Ok(Trine::Xi2),
            3 => Ok(Trine::Xi3),
            _ => Err(Error::InvalidArgument("trine index must be 1, 2 or 3")),
        }
    }

    /// Singlet pairs, in the order they are written.
    pub fn pairing(self) -> [(usize, usize); 2] {
        match self {
            Trine::Xi1 => [(1, 2), (3, 4)],
            Trine::Xi2 => [(1, 3), (4, 2)],
            Trine::Xi3 => [(1, 4), (2, 3)],
        }
    }

    /// Site order that carries `Ξ₁` onto this state via
    /// [`PureState::relabel`]; also the photon routing onto ports 1–4.
    pub fn routing(self) -> [usize; 4] {
        let [(a, b), (c, e)] = self.pairing();
        [a, b, c, e]
    }
}

impl fmt::Display for Trine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Xi{}", self.label())
    }
}

/// `|Ξ_k⟩`.
pub fn xi(k: Trine) -> PureState {
    singlet_product(&k.pairing()).expect("fixed pairing")
}

/// `Ξ₁^⊥ = (|00⟩₁₂|11⟩₃₄ + |11⟩₁₂|00⟩₃₄ − |ψ⁺⟩₁₂|ψ⁺⟩₃₄)/√3`, written out.
fn xi1_perp_expansion() -> PureState {
    PureState::from_fn(2, 4, |s| {
        let (a, b) = (s[0] + s[1], s[2] + s[3]);
        let value = match (s[0] == s[1], s[2] == s[3]) {
            (true, true) if a != b => 1.0,
            (false, false) => -0.5,
            _ => 0.0,
        };
        Complex64::new(value, 0.0)
    })
    .expect("nonzero")
}

/// The state orthogonal to `Ξ_k` inside the two-dimensional four-qubit DFS.
///
/// Built by Gram–Schmidt against the numerical DFS basis; the global phase
/// is fixed so the overlap with the relabeled closed-form `Ξ₁^⊥` is real and
/// positive.
pub fn xi_perp(k: Trine) -> PureState {
    let basis = dfs_basis(4, 2).expect("four-qubit DFS exists");
    let target = xi(k);
    let candidates = core::iter::once(target.amplitudes().clone())
        .chain(basis.states().iter().map(|s| s.amplitudes().clone()));
    let ortho = linalg::gram_schmidt(candidates, 1e-6, 2);
    let mut perp = ortho[1].clone();
    let reference = xi1_perp_expansion()
        .relabel(&k.routing())
        .expect("four sites");
    let overlap = reference.amplitudes().dotc(&perp);
    let phase = overlap.conj() / overlap.norm();
    for z in perp.iter_mut() {
        *z *= phase;
    }
    PureState::normalized(2, 4, perp).expect("unit vector")
}

/// Gram matrix `G_{kl} = ⟨Ξ_k|Ξ_l⟩`.
pub fn trine_gram() -> Matrix3<Complex64> {
    let states: Vec<PureState> = Trine::ALL.iter().map(|&k| xi(k)).collect();
    Matrix3::from_fn(|k, l| states[k].inner(&states[l]).expect("same space"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn permutation_signs() {
        assert_eq!(permutation_sign(&[0, 1, 2]), 1);
        assert_eq!(permutation_sign(&[1, 0, 2]), -1);
        assert_eq!(permutation_sign(&[1, 2, 0]), 1);
        assert_eq!(permutation_sign(&[0, 0, 2]), 0);
    }

    #[test]
    fn xi1_is_pair_of_singlets() {
        let x = xi(Trine::Xi1);
        assert_abs_diff_eq!(x.amplitude(&[0, 1, 0, 1]).re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(x.amplitude(&[0, 1, 1, 0]).re, -0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(x.amplitude(&[1, 0, 0, 1]).re, -0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(x.amplitude(&[1, 0, 1, 0]).re, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn xi3_matches_its_pairing() {
        // Ξ₃ = ψ⁻₁₄ ψ⁻₂₃: |0 0 1 1⟩ has s1=0,s4=1 (+) and s2=0,s3=1 (+)
        let x = xi(Trine::Xi3);
        assert_abs_diff_eq!(x.amplitude(&[0, 0, 1, 1]).re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(x.amplitude(&[0, 1, 0, 1]).re, -0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(x.amplitude(&[0, 1, 1, 0]).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn relabel_maps_xi1_to_each_trine_state() {
        for k in Trine::ALL {
            let mapped = xi(Trine::Xi1).relabel(&k.routing()).unwrap();
            assert!(mapped.distance(&xi(k)).unwrap() < 1e-14, "{k}");
        }
    }

    #[test]
    fn swapped_pair_flips_sign_only() {
        let a = singlet_product(&[(1, 2)]).unwrap();
        let b = singlet_product(&[(2, 1)]).unwrap();
        let overlap = a.inner(&b).unwrap();
        assert_abs_diff_eq!(overlap.re, -1.0, epsilon = 1e-15);
    }

    #[test]
    fn rejects_bad_pairings() {
        assert!(singlet_product(&[(1, 2), (2, 3)]).is_err());
        assert!(singlet_product(&[(1, 3)]).is_err());
        assert!(singlet_product(&[]).is_err());
        assert!(antisymmetric_product(3, &[vec![1, 2]]).is_err());
    }

    #[test]
    fn xi1_perp_matches_closed_form() {
        let perp = xi_perp(Trine::Xi1);
        assert!(perp.distance(&xi1_perp_expansion()).unwrap() < 1e-12);
        let third = 1.0 / Float::sqrt(3.0);
        assert_abs_diff_eq!(perp.amplitude(&[0, 0, 1, 1]).re, third, epsilon = 1e-12);
        assert_abs_diff_eq!(perp.amplitude(&[1, 1, 0, 0]).re, third, epsilon = 1e-12);
    }

    #[test]
    fn perp_states_are_orthogonal_to_their_trine() {
        for k in Trine::ALL {
            let overlap = xi(k).inner(&xi_perp(k)).unwrap();
            assert!(overlap.norm() < 1e-12, "{k}");
            let expected = xi1_perp_expansion().relabel(&k.routing()).unwrap();
            assert!(xi_perp(k).distance(&expected).unwrap() < 1e-12, "{k}");
        }
    }

    #[test]
    fn trine_labels_round_trip() {
        for k in Trine::ALL {
            assert_eq!(Trine::from_label(k.label()).unwrap(), k);
        }
        assert!(Trine::from_label(0).is_err());
        assert!(Trine::from_label(4).is_err());
    }
}
