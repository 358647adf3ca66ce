use alloc::vec::Vec;

use num_complex::Complex64;

use super::state::SiteSplit;
use super::{checked_sites, PureState, UnitaryMatrix, NORM_TOL};
use crate::linalg::{self, CMatrix};
use crate::{Error, Result};

/// Smallest eigenvalue tolerated before a matrix stops counting as positive.
const EIGEN_FLOOR: f64 = -1e-10;

/// A mixed state over `n` qudits: Hermitian, unit trace, positive.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    local_dim: usize,
    num_sites: usize,
    matrix: CMatrix,
}

impl DensityOperator {
    /// Validates hermiticity, trace and positivity.
    pub fn new(local_dim: usize, num_sites: usize, matrix: CMatrix) -> Result<Self> {
        let dim = linalg::hilbert_dim(local_dim, num_sites)?;
        if local_dim < 2 {
            return Err(Error::InvalidLocalDim {
                got: local_dim,
                min: 2,
            });
        }
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch(matrix.nrows(), dim));
        }
        let rho = Self {
            local_dim,
            num_sites,
            matrix,
        };
        rho.validate()?;
        Ok(rho)
    }

    pub(crate) fn from_raw(local_dim: usize, num_sites: usize, matrix: CMatrix) -> Self {
        Self {
            local_dim,
            num_sites,
            matrix,
        }
    }

    pub fn from_pure(psi: &PureState) -> Self {
        let v = psi.amplitudes();
        Self::from_raw(psi.local_dim(), psi.num_sites(), v * v.adjoint())
    }

    /// `Σ w_k |ψ_k⟩⟨ψ_k|` with weights summing to one.
    pub fn mixture(terms: &[(f64, &PureState)]) -> Result<Self> {
        let (_, first) = terms
            .first()
            .ok_or(Error::InvalidArgument("empty mixture"))?;
        let mut m = CMatrix::zeros(first.dim(), first.dim());
        for (w, psi) in terms {
            if psi.dim() != first.dim() || psi.local_dim() != first.local_dim() {
                return Err(Error::DimensionMismatch(psi.dim(), first.dim()));
            }
            let v = psi.amplitudes();
            m += (v * v.adjoint()).scale(*w);
        }
        Self::new(first.local_dim(), first.num_sites(), m)
    }

    pub fn maximally_mixed(local_dim: usize, num_sites: usize) -> Result<Self> {
        let dim = linalg::hilbert_dim(local_dim, num_sites)?;
        Self::new(
            local_dim,
            num_sites,
            linalg::identity(dim).unscale(dim as f64),
        )
    }

    /// Checks the density-operator invariants.
    pub fn validate(&self) -> Result<()> {
        let herm = linalg::max_abs(&(&self.matrix - self.matrix.adjoint()));
        if herm > NORM_TOL {
            return Err(Error::InvalidDensity("not Hermitian"));
        }
        if (self.trace() - Complex64::new(1.0, 0.0)).norm() > NORM_TOL {
            return Err(Error::InvalidDensity("trace differs from one"));
        }
        if self.eigenvalues().first().is_some_and(|&l| l < EIGEN_FLOOR) {
            return Err(Error::InvalidDensity("negative eigenvalue"));
        }
        Ok(())
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn num_sites(&self) -> usize {
        self.num_sites
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// Eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigenvalues(&self.matrix)
    }

    /// `⟨ψ|ρ|ψ⟩` without clamping.
    pub fn expectation(&self, psi: &PureState) -> Result<Complex64> {
        if psi.dim() != self.dim() {
            return Err(Error::DimensionMismatch(psi.dim(), self.dim()));
        }
        let v = psi.amplitudes();
        Ok(v.dotc(&(&self.matrix * v)))
    }

    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        partial_trace(self, keep)
    }

    /// `U^{⊗n} ρ U^{†⊗n}`.
    pub fn conjugate_collective(&self, op: &UnitaryMatrix) -> Result<Self> {
        if op.dim() != self.local_dim {
            return Err(Error::DimensionMismatch(op.dim(), self.local_dim));
        }
        let m =
            linalg::conjugate_collective(&self.matrix, self.local_dim, self.num_sites, op.matrix());
        Ok(Self::from_raw(self.local_dim, self.num_sites, m))
    }

    /// Largest entrywise deviation `‖self − other‖_max`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        Ok(linalg::max_abs(&(&self.matrix - &other.matrix)))
    }

    pub fn trace_distance(&self, other: &Self) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        Ok(linalg::trace_distance(&self.matrix, &other.matrix))
    }
}

/// Reduced operator on the `keep` sites (1-based). The output orders the kept
/// sites ascending regardless of the order given.
pub fn partial_trace(rho: &DensityOperator, keep: &[usize]) -> Result<DensityOperator> {
    let keep = checked_sites(keep, rho.num_sites)?;
    let split = SiteSplit::new(rho.local_dim, rho.num_sites, &keep);
    let dk = split.kept_dim;
    let mut out = CMatrix::zeros(dk, dk);
    for group in &split.groups {
        for &(i, a) in group {
            for &(j, b) in group {
                out[(a, b)] += rho.matrix[(i, j)];
            }
        }
    }
    Ok(DensityOperator::from_raw(rho.local_dim, keep.len(), out))
}

/// `⟨ψ|ρ|ψ⟩`, clamped to `[0, 1]`.
pub fn fidelity(psi: &PureState, rho: &DensityOperator) -> Result<f64> {
    if psi.local_dim() != rho.local_dim {
        return Err(Error::LocalDimMismatch(psi.local_dim(), rho.local_dim));
    }
    let f = rho.expectation(psi)?.re;
    Ok(f.clamp(0.0, 1.0))
}
