use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dfs::{verify_invariance, InvarianceReport};
use crate::linalg::{self, CMatrix, CVector};
use crate::qcore::{check_site, haar_random_su_with, DensityOperator, PureState, UnitaryMatrix};
use crate::{Error, Result, EXACT_TOL};

/// Haar trials used to gate branch operations on DFS membership.
pub const GATE_TRIALS: usize = 8;
/// Invariance deviation accepted by the gate.
pub const GATE_TOL: f64 = 1e-8;
const GATE_SEED: u64 = 0x5eed_0df5;

/// Rejects states that are not invariant under collective SU(d).
pub fn ensure_dfs(psi: &PureState) -> Result<()> {
    let report = verify_invariance(psi, GATE_TRIALS, GATE_SEED, GATE_TOL);
    if report.pass {
        Ok(())
    } else {
        Err(Error::NotInvariant(report.max_deviation))
    }
}

/// `Tr_site |ψ⟩⟨ψ|`.
pub fn lose_particle(psi: &PureState, site: usize) -> Result<DensityOperator> {
    check_site(site, psi.num_sites())?;
    let keep: Vec<usize> = (1..=psi.num_sites()).filter(|&s| s != site).collect();
    psi.reduced(&keep)
}

/// `Ψ^{(i)} = √d · ⟨i|_site ψ` for `i = 0 … d-1`, on the remaining sites in
/// their original order. No DFS check; the branches are unit vectors only
/// for DFS inputs.
pub fn branch_vectors(psi: &PureState, site: usize) -> Result<Vec<PureState>> {
    let (d, n) = (psi.local_dim(), psi.num_sites());
    check_site(site, n)?;
    if n < 2 {
        return Err(Error::InvalidArgument(
            "need at least two sites to lose one",
        ));
    }
    let rest = d.pow((n - 1) as u32);
    let scale = Float::sqrt(d as f64);
    let stride = d.pow((n - site) as u32);
    Ok((0..d)
        .map(|i| {
            let amps = CVector::from_fn(rest, |r, _| {
                // split r into the digits above and below the removed site
                let (high, low) = (r / stride, r % stride);
                let full = (high * d + i) * stride + low;
                psi.amplitudes()[full] * scale
            });
            PureState::from_raw(d, n - 1, amps)
        })
        .collect())
}

/// Branches of a DFS state after losing one site.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchSet {
    lost_site: usize,
    local_dim: usize,
    branches: Vec<PureState>,
}

impl BranchSet {
    pub fn lost_site(&self) -> usize {
        self.lost_site
    }

    pub fn branches(&self) -> &[PureState] {
        &self.branches
    }

    /// `Σ_i |i⟩_site ⊗ Ψ^{(i)} / √d`.
    pub fn reconstruct(&self) -> PureState {
        let d = self.local_dim;
        let n = self.branches[0].num_sites() + 1;
        let stride = d.pow((n - self.lost_site) as u32);
        let scale = 1.0 / Float::sqrt(d as f64);
        let amps = CVector::from_fn(d.pow(n as u32), |full, _| {
            let low = full % stride;
            let i = (full / stride) % d;
            let high = full / (stride * d);
            self.branches[i].amplitudes()[high * stride + low] * scale
        });
        PureState::from_raw(d, n, amps)
    }

    /// `(1/d) Σ_i |Ψ^{(i)}⟩⟨Ψ^{(i)}|`.
    pub fn mixture(&self) -> DensityOperator {
        let dim = self.branches[0].dim();
        let mut m = CMatrix::zeros(dim, dim);
        for b in &self.branches {
            let v = b.amplitudes();
            m += v * v.adjoint();
        }
        let first = &self.branches[0];
        DensityOperator::from_raw(
            first.local_dim(),
            first.num_sites(),
            m.unscale(self.local_dim as f64),
        )
    }
}

/// Branch decomposition of a DFS state; non-DFS input is rejected.
pub fn branch_decompose(psi: &PureState, lost_site: usize) -> Result<BranchSet> {
    check_site(lost_site, psi.num_sites())?;
    ensure_dfs(psi)?;
    Ok(BranchSet {
        lost_site,
        local_dim: psi.local_dim(),
        branches: branch_vectors(psi, lost_site)?,
    })
}

/// `M_{ij} = ⟨Φ^{(i)}|Ψ^{(j)}⟩` without any membership check.
pub fn branch_overlap_matrix(
    phi: &PureState,
    psi: &PureState,
    lost_site: usize,
) -> Result<CMatrix> {
    if phi.local_dim() != psi.local_dim() || phi.dim() != psi.dim() {
        return Err(Error::DimensionMismatch(phi.dim(), psi.dim()));
    }
    let a = branch_vectors(phi, lost_site)?;
    let b = branch_vectors(psi, lost_site)?;
    let d = phi.local_dim();
    Ok(CMatrix::from_fn(d, d, |i, j| {
        a[i].amplitudes().dotc(b[j].amplitudes())
    }))
}

/// `M_{ij} = ⟨Φ^{(i)}|Ψ^{(j)}⟩` for DFS inputs; equals `⟨Φ|Ψ⟩·1`.
pub fn verify_branch_property(
    phi: &PureState,
    psi: &PureState,
    lost_site: usize,
) -> Result<CMatrix> {
    ensure_dfs(phi)?;
    ensure_dfs(psi)?;
    branch_overlap_matrix(phi, psi, lost_site)
}

/// The cyclic shift `|i⟩ ↦ |i+1 mod d⟩` times a constant `c` making the
/// determinant one: `c = 1` for odd `d`, `c = e^{iπ/d}` for even `d`.
pub fn cyclic_shift_w(d: usize) -> Result<UnitaryMatrix> {
    if d < 2 {
        return Err(Error::InvalidLocalDim { got: d, min: 2 });
    }
    // det(shift) = (-1)^{d-1}, so c^d must equal (-1)^{d-1}
    let c = if d % 2 == 1 {
        linalg::ONE
    } else {
        Complex64::from_polar(1.0, core::f64::consts::PI / d as f64)
    };
    let mut m = CMatrix::zeros(d, d);
    for i in 0..d {
        m[((i + 1) % d, i)] = c;
    }
    UnitaryMatrix::new_special(m)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BranchCycleReport {
    /// `⟨Ψ^{(i+1)}| W^{⊗(n-1)} |Ψ^{(i)}⟩` for `i = 0 … d-1`.
    pub overlaps: Vec<Complex64>,
    /// Phases of the overlaps, in radians.
    pub phases: Vec<f64>,
    /// `max_i ||overlap_i| − 1|`.
    pub max_modulus_deviation: f64,
    pub pass: bool,
}

/// Checks that consecutive branches are related by `W^{⊗(n-1)}` up to a
/// global phase.
pub fn verify_branch_cycle(psi: &PureState, lost_site: usize) -> Result<BranchCycleReport> {
    let set = branch_decompose(psi, lost_site)?;
    let d = psi.local_dim();
    let w = cyclic_shift_w(d)?;
    let branches = set.branches();
    let overlaps: Vec<Complex64> = (0..d)
        .map(|i| {
            let moved = branches[i]
                .apply_collective(&w)
                .expect("matching dimension");
            branches[(i + 1) % d].amplitudes().dotc(moved.amplitudes())
        })
        .collect();
    let max_modulus_deviation = overlaps
        .iter()
        .map(|z| (z.norm() - 1.0).abs())
        .fold(0.0, f64::max);
    Ok(BranchCycleReport {
        phases: overlaps.iter().map(|z| z.arg()).collect(),
        overlaps,
        max_modulus_deviation,
        pass: max_modulus_deviation < EXACT_TOL,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransformReport {
    /// `‖U^{⊗(n-1)}Ψ^{(i)} − Σ_j ⟨j|U|i⟩^* Ψ^{(j)}‖` per branch.
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    pub pass: bool,
}

/// Checks how the branches transform under a collective special unitary.
pub fn transform_identity_check(
    psi: &PureState,
    u: &UnitaryMatrix,
    lost_site: usize,
) -> Result<TransformReport> {
    let d = psi.local_dim();
    if u.dim() != d {
        return Err(Error::DimensionMismatch(u.dim(), d));
    }
    let det_dev = (u.determinant() - linalg::ONE).norm();
    if det_dev > EXACT_TOL {
        return Err(Error::NotSpecial(det_dev));
    }
    let set = branch_decompose(psi, lost_site)?;
    let branches = set.branches();
    let residuals: Vec<f64> = (0..d)
        .map(|i| {
            let lhs = branches[i].apply_collective(u).expect("matching dimension");
            let mut rhs = CVector::zeros(lhs.dim());
            for (j, b) in branches.iter().enumerate() {
                rhs.axpy(u.matrix()[(j, i)].conj(), b.amplitudes(), linalg::ONE);
            }
            (lhs.amplitudes() - rhs).norm()
        })
        .collect();
    let max_residual = residuals.iter().cloned().fold(0.0, f64::max);
    Ok(TransformReport {
        residuals,
        max_residual,
        pass: max_residual < EXACT_TOL,
    })
}

/// `max ‖U^{⊗(n-1)} ρ U^{†⊗(n-1)} − ρ‖_max` over Haar draws, with `ρ` the
/// state after losing `lost_site`. Works for any input, so non-DFS controls
/// can be measured too.
pub fn post_loss_invariance(
    psi: &PureState,
    lost_site: usize,
    trials: usize,
    seed: u64,
) -> Result<InvarianceReport> {
    // ρ = (1/d) B B† with the branches as columns of B, so rotating ρ only
    // needs the d branches rotated.
    let branches = branch_vectors(psi, lost_site)?;
    let d = psi.local_dim();
    let mixture = |vs: &[PureState]| -> CMatrix {
        let columns: Vec<CVector> = vs.iter().map(|v| v.amplitudes().clone()).collect();
        let b = CMatrix::from_columns(&columns);
        (&b * b.adjoint()).unscale(d as f64)
    };
    let rho = mixture(&branches);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_deviation: f64 = 0.0;
    for _ in 0..trials {
        let u = haar_random_su_with(d, &mut rng);
        let moved = branches
            .iter()
            .map(|b| b.apply_collective(&u))
            .collect::<Result<Vec<_>>>()?;
        max_deviation = max_deviation.max(linalg::max_abs(&(mixture(&moved) - &rho)));
    }
    Ok(InvarianceReport {
        trials,
        max_deviation,
        tolerance: EXACT_TOL,
        pass: max_deviation < EXACT_TOL,
    })
}
