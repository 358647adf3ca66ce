use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;
use rand::Rng;

use super::branch::lose_particle;
use crate::linalg::{self, CMatrix, CVector, ZERO};
use crate::qcore::{check_site, fidelity, DensityOperator, PureState, UnitaryMatrix};
use crate::{Error, Result, EXACT_TOL};

/// Total `σᶻ` eigenvalue of a qubit string, with `σᶻ = |0⟩⟨0| − |1⟩⟨1|`.
fn pseudospin(digits: &[usize]) -> i32 {
    digits.iter().map(|&s| 1 - 2 * s as i32).sum()
}

const PSEUDOSPIN_VALUES: [i32; 4] = [-3, -1, 1, 3];

/// One branch of the `σᶻ₂ + σᶻ₃ + σᶻ₄` measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudospinOutcome {
    pub eigenvalue: i32,
    pub probability: f64,
    /// Normalized post-measurement state; `None` when the outcome is impossible.
    pub post_state: Option<PureState>,
}

fn check_three_qubits(state: &PureState) -> Result<()> {
    if state.local_dim() != 2 || state.num_sites() != 3 {
        return Err(Error::InvalidArgument(
            "pseudospin measurement acts on three qubits",
        ));
    }
    Ok(())
}

fn project(state: &PureState, eigenvalue: i32) -> CVector {
    let mut v = state.amplitudes().clone();
    for (i, z) in v.iter_mut().enumerate() {
        if pseudospin(&linalg::digits(i, 2, 3)) != eigenvalue {
            *z = ZERO;
        }
    }
    v
}

/// Exact enumeration of the projective total-pseudospin measurement, in
/// order of eigenvalue `−3, −1, +1, +3`.
pub fn measure_total_pseudospin_z(state: &PureState) -> Result<Vec<PseudospinOutcome>> {
    check_three_qubits(state)?;
    let total = state.norm_sqr();
    PSEUDOSPIN_VALUES
        .iter()
        .map(|&eigenvalue| {
            let v = project(state, eigenvalue);
            let probability = v.norm_squared() / total;
            let post_state = if probability > 1e-14 {
                Some(PureState::normalized(2, 3, v)?)
            } else {
                None
            };
            Ok(PseudospinOutcome {
                eigenvalue,
                probability,
                post_state,
            })
        })
        .collect()
}

/// Samples one outcome of the pseudospin measurement.
pub fn sample_total_pseudospin_z<R: Rng + ?Sized>(
    state: &PureState,
    rng: &mut R,
) -> Result<PseudospinOutcome> {
    let outcomes = measure_total_pseudospin_z(state)?;
    let u: f64 = rng.random();
    let mut acc = 0.0;
    let mut last_possible = None;
    for o in outcomes {
        if o.post_state.is_none() {
            continue;
        }
        acc += o.probability;
        if u < acc {
            return Ok(o);
        }
        last_possible = Some(o);
    }
    last_possible.ok_or(Error::Numerical("measurement has no possible outcome"))
}

/// `C-NOT` on `n` qubits as a permutation matrix (sites 1-based).
pub fn cnot(n: usize, control: usize, target: usize) -> CMatrix {
    assert!(control != target && control >= 1 && target >= 1 && control.max(target) <= n);
    let dim = 1 << n;
    let mut m = CMatrix::zeros(dim, dim);
    for i in 0..dim {
        let mut s = linalg::digits(i, 2, n);
        if s[control - 1] == 1 {
            s[target - 1] ^= 1;
        }
        m[(linalg::index_of(&s, 2), i)] = linalg::ONE;
    }
    m
}

/// `|0⟩⟨0|_c ⊗ 1 + |1⟩⟨1|_c ⊗ (σˣ)^{⊗3}` on four qubits with control `c`.
fn controlled_flip_at(control: usize) -> CMatrix {
    let mut m = CMatrix::zeros(16, 16);
    for i in 0..16 {
        let mut s = linalg::digits(i, 2, 4);
        if s[control - 1] == 1 {
            for (k, bit) in s.iter_mut().enumerate() {
                if k != control - 1 {
                    *bit ^= 1;
                }
            }
        }
        m[(linalg::index_of(&s, 2), i)] = linalg::ONE;
    }
    m
}

/// The repair rotation controlled by the fresh qubit on site 1.
pub fn controlled_flip_operator() -> CMatrix {
    controlled_flip_at(1)
}

/// True iff three C-NOTs from site 1 onto sites 2, 3, 4 equal the repair
/// rotation.
pub fn cnot_decomposition_check() -> bool {
    let product = cnot(4, 1, 2) * cnot(4, 1, 3) * cnot(4, 1, 4);
    linalg::max_abs(&(product - controlled_flip_operator())) < 1e-14
}

/// Inserts a single-qudit state at `site` (1-based) of the output.
pub fn insert_site(state: &PureState, site: usize, single: &CVector) -> Result<PureState> {
    let d = state.local_dim();
    let n = state.num_sites() + 1;
    check_site(site, n)?;
    if single.len() != d {
        return Err(Error::DimensionMismatch(single.len(), d));
    }
    let stride = d.pow((n - site) as u32);
    let amps = CVector::from_fn(d.pow(n as u32), |full, _| {
        let low = full % stride;
        let i = (full / stride) % d;
        let high = full / (stride * d);
        single[i] * state.amplitudes()[high * stride + low]
    });
    PureState::normalized(d, n, amps)
}

fn plus_state() -> CVector {
    let h = Float::sqrt(0.5);
    CVector::from_vec(alloc::vec![Complex64::new(h, 0.0), Complex64::new(h, 0.0)])
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryOutcome {
    /// Measured total pseudospin, `−1` or `+1` for genuine branches.
    pub measured_value: i32,
    pub correction_applied: bool,
    pub recovered: PureState,
    pub fidelity_with_original: f64,
}

/// Repairs a three-qubit branch left after losing `lost_site` of a
/// four-qubit DFS state:
///
/// 1. measure `Σσᶻ` on the survivors;
/// 2. on `+1`, apply `(σˣ)^{⊗3}`;
/// 3. put a fresh qubit in `|+⟩` back at `lost_site`;
/// 4. apply the rotation controlled by the fresh qubit.
pub fn recover_four_qubit(
    branch: &PureState,
    original: &PureState,
    lost_site: usize,
) -> Result<RecoveryOutcome> {
    check_three_qubits(branch)?;
    if original.local_dim() != 2 || original.num_sites() != 4 {
        return Err(Error::InvalidArgument(
            "original must be a four-qubit state",
        ));
    }
    check_site(lost_site, 4)?;
    let outcomes = measure_total_pseudospin_z(branch)?;
    if let Some(bad) = outcomes
        .iter()
        .find(|o| o.eigenvalue.abs() == 3 && o.probability > EXACT_TOL)
    {
        return Err(Error::NonDfsProvenance(bad.eigenvalue));
    }
    let mut possible = outcomes.into_iter().filter(|o| o.probability > EXACT_TOL);
    let outcome = possible.next().ok_or(Error::IndefiniteSyndrome)?;
    if possible.next().is_some() {
        return Err(Error::IndefiniteSyndrome);
    }
    let mut post = outcome.post_state.expect("possible outcome has a state");
    let correction_applied = outcome.eigenvalue == 1;
    if correction_applied {
        post = post.apply_collective(&UnitaryMatrix::pauli_x())?;
    }
    let padded = insert_site(&post, lost_site, &plus_state())?;
    let rotation = UnitaryMatrix::new(controlled_flip_at(lost_site))?;
    let recovered = padded.apply(&rotation)?;
    let fidelity_with_original = original.inner(&recovered)?.norm_sqr().clamp(0.0, 1.0);
    Ok(RecoveryOutcome {
        measured_value: outcome.eigenvalue,
        correction_applied,
        recovered,
        fidelity_with_original,
    })
}

/// Runs the repair as a channel on the three-qubit mixture left after
/// losing `lost_site`, summing both measurement outcomes.
pub fn recover_mixture(rho: &DensityOperator, lost_site: usize) -> Result<DensityOperator> {
    if rho.local_dim() != 2 || rho.num_sites() != 3 {
        return Err(Error::InvalidArgument(
            "recovery acts on a three-qubit mixture",
        ));
    }
    check_site(lost_site, 4)?;
    let value_of: Vec<i32> = (0..8)
        .map(|i| pseudospin(&linalg::digits(i, 2, 3)))
        .collect();
    for bad in [-3, 3] {
        let weight: f64 = (0..8)
            .filter(|&i| value_of[i] == bad)
            .map(|i| rho.matrix()[(i, i)].re)
            .sum();
        if weight > EXACT_TOL {
            return Err(Error::NonDfsProvenance(bad));
        }
    }
    // embedding |χ⟩ ↦ |+⟩_lost ⊗ |χ⟩
    let plus = plus_state();
    let embed = CMatrix::from_fn(16, 8, |full, part| {
        let s = linalg::digits(full, 2, 4);
        let rest: Vec<usize> = s
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != lost_site - 1)
            .map(|(_, &b)| b)
            .collect();
        if linalg::index_of(&rest, 2) == part {
            plus[s[lost_site - 1]]
        } else {
            ZERO
        }
    });
    let flip3 = crate::qcore::collective(&UnitaryMatrix::pauli_x(), 3)?;
    let rotation = controlled_flip_at(lost_site);
    let mut out = CMatrix::zeros(16, 16);
    for (value, flip) in [(-1, false), (1, true)] {
        let projector = CMatrix::from_fn(8, 8, |r, c| {
            if r == c && value_of[r] == value {
                linalg::ONE
            } else {
                ZERO
            }
        });
        let corrected = if flip {
            flip3.matrix() * projector
        } else {
            projector
        };
        let kraus = &rotation * &embed * corrected;
        out += &kraus * rho.matrix() * kraus.adjoint();
    }
    DensityOperator::new(2, 4, out)
}

/// Loses `lost_site` from a four-qubit state, repairs the mixture and
/// returns the fidelity with the original.
pub fn recovery_fidelity(original: &PureState, lost_site: usize) -> Result<f64> {
    let rho = lose_particle(original, lost_site)?;
    let repaired = recover_mixture(&rho, lost_site)?;
    fidelity(original, &repaired)
}
