use num_complex::Complex64;
use num_traits::Float;

use super::NORM_TOL;
use crate::linalg::{self, CMatrix};
use crate::{Error, Result};

/// A square unitary matrix; `special` records a certified unit determinant.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    matrix: CMatrix,
    special: bool,
}

impl UnitaryMatrix {
    /// Certifies `U†U = 1` within `1e-12`.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() == 0 {
            return Err(Error::DimensionMismatch(matrix.nrows(), matrix.ncols()));
        }
        let dev = unitarity_deviation(&matrix);
        if dev > NORM_TOL {
            return Err(Error::NotUnitary(dev));
        }
        Ok(Self {
            matrix,
            special: false,
        })
    }

    /// Certifies unitarity and `det U = 1`.
    pub fn new_special(matrix: CMatrix) -> Result<Self> {
        let mut u = Self::new(matrix)?;
        let det_dev = (u.determinant() - linalg::ONE).norm();
        if det_dev > NORM_TOL {
            return Err(Error::NotSpecial(det_dev));
        }
        u.special = true;
        Ok(u)
    }

    pub(crate) fn from_raw(matrix: CMatrix, special: bool) -> Self {
        Self { matrix, special }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_raw(linalg::identity(dim), true)
    }

    /// `σˣ = |0⟩⟨1| + |1⟩⟨0|` (unitary, determinant −1).
    pub fn pauli_x() -> Self {
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 1)] = linalg::ONE;
        m[(1, 0)] = linalg::ONE;
        Self::from_raw(m, false)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn is_special(&self) -> bool {
        self.special
    }

    pub fn determinant(&self) -> Complex64 {
        self.matrix.determinant()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_raw(self.matrix.adjoint(), self.special)
    }

    /// Matrix product `self · other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        Ok(Self::from_raw(
            &self.matrix * &other.matrix,
            self.special && other.special,
        ))
    }

    /// `‖U†U − 1‖_max`.
    pub fn unitarity_deviation(&self) -> f64 {
        unitarity_deviation(&self.matrix)
    }
}

fn unitarity_deviation(m: &CMatrix) -> f64 {
    linalg::max_abs(&(m.adjoint() * m - linalg::identity(m.nrows())))
}

/// `U^{⊗n}` as an explicit `d^n × d^n` matrix.
pub fn collective(u: &UnitaryMatrix, n: usize) -> Result<UnitaryMatrix> {
    if n < 1 {
        return Err(Error::NoSites);
    }
    linalg::hilbert_dim(u.dim(), n)?;
    let mut m = u.matrix.clone();
    for _ in 1..n {
        m = linalg::kron(&m, &u.matrix);
    }
    // det(U^{⊗n}) = det(U)^{n d^{n-1}}
    Ok(UnitaryMatrix::from_raw(m, u.special))
}

/// `diag(e^{iφ_0}, …, e^{iφ_{d-1}})` after subtracting the mean phase, so
/// the result always lies in SU(d).
pub fn diagonal_phase_unitary(phases: &[f64]) -> Result<UnitaryMatrix> {
    if phases.is_empty() {
        return Err(Error::InvalidArgument("at least one phase is required"));
    }
    let mean = phases.iter().sum::<f64>() / phases.len() as f64;
    let diag = nalgebra::DVector::from_iterator(
        phases.len(),
        phases.iter().map(|&p| {
            let (s, c) = Float::sin_cos(p - mean);
            Complex64::new(c, s)
        }),
    );
    Ok(UnitaryMatrix::from_raw(CMatrix::from_diagonal(&diag), true))
}
