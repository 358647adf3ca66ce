//! Dense complex linear-algebra helpers shared by the modules.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Largest Hilbert space the dense representation accepts.
pub const MAX_DIM: usize = 1 << 20;

/// `d^n`, refusing anything above [`MAX_DIM`].
pub fn hilbert_dim(d: usize, n: usize) -> Result<usize> {
    if d < 1 {
        return Err(Error::InvalidLocalDim { got: d, min: 1 });
    }
    let mut dim: usize = 1;
    for _ in 0..n {
        dim = dim
            .checked_mul(d)
            .filter(|&x| x <= MAX_DIM)
            .ok_or(Error::TooLarge { d, n })?;
    }
    Ok(dim)
}

/// Digits of a basis index, site 1 first.
pub fn digits(mut index: usize, d: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for k in (0..n).rev() {
        out[k] = index % d;
        index /= d;
    }
    out
}

/// Inverse of [`digits`].
pub fn index_of(digits: &[usize], d: usize) -> usize {
    digits.iter().fold(0, |acc, &s| acc * d + s)
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

/// Applies the `d × d` matrix `op` to one site (1-based) of an `n`-site
/// amplitude vector, in place.
pub fn apply_site(amps: &mut [Complex64], d: usize, n: usize, site: usize, op: &CMatrix) {
    debug_assert!(site >= 1 && site <= n);
    let stride = d.pow((n - site) as u32);
    let block = stride * d;
    let mut scratch = vec![ZERO; d];
    for base in (0..amps.len()).step_by(block) {
        for offset in 0..stride {
            let start = base + offset;
            for (s, slot) in scratch.iter_mut().enumerate() {
                *slot = amps[start + s * stride];
            }
            for r in 0..d {
                let mut acc = ZERO;
                for (c, &v) in scratch.iter().enumerate() {
                    acc += op[(r, c)] * v;
                }
                amps[start + r * stride] = acc;
            }
        }
    }
}

/// Applies `op^{⊗n}` to an amplitude vector, one site at a time.
pub fn apply_collective(amps: &mut [Complex64], d: usize, n: usize, op: &CMatrix) {
    for site in 1..=n {
        apply_site(amps, d, n, site, op);
    }
}

/// `op^{⊗n} ρ op^{†⊗n}` for a density matrix over `n` sites.
pub fn conjugate_collective(rho: &CMatrix, d: usize, n: usize, op: &CMatrix) -> CMatrix {
    let dim = rho.nrows();
    let mut out = rho.clone();
    for c in 0..dim {
        apply_collective(out.column_mut(c).as_mut_slice(), d, n, op);
    }
    // now out = U ρ; right-multiplying by U† is (U (U ρ)†)†
    let mut tmp = out.adjoint();
    for c in 0..dim {
        apply_collective(tmp.column_mut(c).as_mut_slice(), d, n, op);
    }
    tmp.adjoint()
}

/// Orthonormal basis (as columns) of the null space of `a`, using the SVD
/// with singular values below `rel_tol · σ_max` treated as zero.
pub fn null_space(a: &CMatrix, rel_tol: f64) -> Result<CMatrix> {
    let cols = a.ncols();
    if cols == 0 {
        return Ok(CMatrix::zeros(0, 0));
    }
    // pad to at least square so that V is complete
    let rows = a.nrows().max(cols);
    let mut padded = CMatrix::zeros(rows, cols);
    padded.view_mut((0, 0), (a.nrows(), cols)).copy_from(a);
    let svd = padded
        .try_svd(false, true, f64::EPSILON, 10_000)
        .ok_or(Error::Numerical("SVD did not converge"))?;
    let v_t = svd
        .v_t
        .ok_or(Error::Numerical("SVD returned no right vectors"))?;
    let sigma_max = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let cutoff = if sigma_max > 0.0 {
        rel_tol * sigma_max
    } else {
        f64::INFINITY
    };
    let null: Vec<CVector> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|&(_, &s)| s < cutoff)
        .map(|(k, _)| v_t.row(k).adjoint())
        .collect();
    if null.is_empty() {
        return Ok(CMatrix::zeros(cols, 0));
    }
    Ok(CMatrix::from_columns(&null))
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let herm = (m + m.adjoint()).scale(0.5);
    let mut values: Vec<f64> = herm.symmetric_eigenvalues().iter().cloned().collect();
    values.sort_by(|a, b| a.total_cmp(b));
    values
}

/// `½ ‖a − b‖₁` for Hermitian `a`, `b`.
pub fn trace_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    0.5 * hermitian_eigenvalues(&(a - b))
        .iter()
        .map(|x| x.abs())
        .sum::<f64>()
}

/// Gram–Schmidt over `candidates` in order, keeping vectors whose residual
/// norm exceeds `threshold`, until `limit` vectors are collected.
pub fn gram_schmidt<I>(candidates: I, threshold: f64, limit: usize) -> Vec<CVector>
where
    I: IntoIterator<Item = CVector>,
{
    let mut out: Vec<CVector> = Vec::with_capacity(limit);
    for mut v in candidates {
        if out.len() == limit {
            break;
        }
        // two passes for numerical orthogonality
        for _ in 0..2 {
            for u in &out {
                let proj = u.dotc(&v);
                v.axpy(-proj, u, ONE);
            }
        }
        let norm = v.norm();
        if norm > threshold {
            out.push(v.unscale(norm));
        }
    }
    out
}

/// Rotates `v` so its first amplitude with modulus above `tol` is real positive.
pub fn fix_global_phase(v: &mut CVector, tol: f64) {
    if let Some(z) = v.iter().find(|z| z.norm() > tol).copied() {
        let phase = z.conj() / z.norm();
        for a in v.iter_mut() {
            *a *= phase;
        }
    }
}
