use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{self, CMatrix, CVector, ZERO};
use crate::qcore::{haar_random_su_with, PureState};
use crate::{Error, Result};

/// Singular values below this fraction of the largest count as zero.
pub const NULL_SPACE_REL_TOL: f64 = 1e-9;

/// Amplitudes below this modulus count as absent in support checks.
const SUPPORT_TOL: f64 = 1e-12;

/// Generalized Gell-Mann matrices: the `d² − 1` Hermitian, traceless
/// generators of su(d). Off-diagonal symmetric and antisymmetric pairs come
/// first, the `d − 1` diagonal ones last.
pub fn su_generators(d: usize) -> Vec<CMatrix> {
    let mut out = Vec::with_capacity(d * d - 1);
    for a in 0..d {
        for b in (a + 1)..d {
            let mut sym = CMatrix::zeros(d, d);
            sym[(a, b)] = linalg::ONE;
            sym[(b, a)] = linalg::ONE;
            out.push(sym);
            let mut anti = CMatrix::zeros(d, d);
            anti[(a, b)] = Complex64::new(0.0, -1.0);
            anti[(b, a)] = Complex64::new(0.0, 1.0);
            out.push(anti);
        }
    }
    for l in 1..d {
        let norm = Float::sqrt(2.0 / (l * (l + 1)) as f64);
        let mut diag = CMatrix::zeros(d, d);
        for k in 0..l {
            diag[(k, k)] = Complex64::new(norm, 0.0);
        }
        diag[(l, l)] = Complex64::new(-(l as f64) * norm, 0.0);
        out.push(diag);
    }
    out
}

fn is_diagonal(m: &CMatrix) -> bool {
    (0..m.nrows()).all(|r| (0..m.ncols()).all(|c| r == c || m[(r, c)] == ZERO))
}

/// Orthonormal basis of the states fixed by every `U^{⊗n}`, `U ∈ SU(d)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DfsBasis {
    local_dim: usize,
    num_sites: usize,
    states: Vec<PureState>,
}

impl DfsBasis {
    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn num_sites(&self) -> usize {
        self.num_sites
    }

    pub fn states(&self) -> &[PureState] {
        &self.states
    }

    pub fn dimension(&self) -> usize {
        self.states.len()
    }

    /// `G_{ab} = ⟨b_a|b_b⟩`.
    pub fn gram(&self) -> CMatrix {
        let k = self.states.len();
        CMatrix::from_fn(k, k, |a, b| {
            self.states[a]
                .amplitudes()
                .dotc(self.states[b].amplitudes())
        })
    }

    /// Norm of the component of `psi` outside the subspace.
    pub fn residual(&self, psi: &PureState) -> Result<f64> {
        let mut rest = psi.amplitudes().clone();
        for b in &self.states {
            let c = b.inner(psi)?;
            rest.axpy(-c, b.amplitudes(), linalg::ONE);
        }
        Ok(rest.norm())
    }

    /// Normalized `Σ c_k |b_k⟩`; missing coefficients count as zero.
    pub fn combine(&self, coefficients: &[Complex64]) -> Result<PureState> {
        let mut amps = CVector::zeros(self.states[0].dim());
        for (c, b) in coefficients.iter().zip(&self.states) {
            amps.axpy(*c, b.amplitudes(), linalg::ONE);
        }
        PureState::normalized(self.local_dim, self.num_sites, amps)
    }
}

/// Basis of the decoherence-free subspace of `n` qudits of dimension `d`.
///
/// The subspace is the joint null space of the collective generators
/// `Σ_k g^{(k)}` over the su(d) generators `g`. The diagonal generators are
/// handled exactly: their joint null space is spanned by the basis strings
/// holding every letter `n/d` times. The off-diagonal generators restricted
/// to those strings go through an SVD.
///
/// The returned basis is canonical: Gram–Schmidt of the null-space
/// projector applied to basis strings in ascending index order, each vector
/// rotated so its first non-negligible amplitude is real and positive.
pub fn dfs_basis(n: usize, d: usize) -> Result<DfsBasis> {
    if d < 2 {
        return Err(Error::InvalidLocalDim { got: d, min: 2 });
    }
    if n < 1 {
        return Err(Error::NoSites);
    }
    if !n.is_multiple_of(d) {
        return Err(Error::NoInvariantSubspace { n, d });
    }
    let dim = linalg::hilbert_dim(d, n)?;
    let generators = su_generators(d);
    let (diagonal, off_diagonal): (Vec<&CMatrix>, Vec<&CMatrix>) =
        generators.iter().partition(|g| is_diagonal(g));

    // stage 1: strings with zero eigenvalue under every collective diagonal generator
    let kept: Vec<usize> = (0..dim)
        .filter(|&i| {
            let s = linalg::digits(i, d, n);
            diagonal.iter().all(|g| {
                let eig: f64 = s.iter().map(|&x| g[(x, x)].re).sum();
                eig.abs() < 1e-9
            })
        })
        .collect();
    if kept.is_empty() {
        return Err(Error::Numerical("no zero-weight strings"));
    }

    // stage 2: the off-diagonal collective generators on the kept strings
    let mut columns: Vec<Vec<(usize, Complex64)>> = Vec::with_capacity(kept.len());
    for &i in &kept {
        let s = linalg::digits(i, d, n);
        let mut entries = Vec::new();
        for (g_idx, g) in off_diagonal.iter().enumerate() {
            for site in 0..n {
                for r in 0..d {
                    let coeff = g[(r, s[site])];
                    if coeff == ZERO {
                        continue;
                    }
                    let mut t = s.clone();
                    t[site] = r;
                    // one row per (generator, target string)
                    entries.push((g_idx * dim + linalg::index_of(&t, d), coeff));
                }
            }
        }
        columns.push(entries);
    }
    let mut row_of: BTreeMap<usize, usize> = BTreeMap::new();
    for entries in &columns {
        for &(key, _) in entries {
            let next = row_of.len();
            row_of.entry(key).or_insert(next);
        }
    }
    let mut a = CMatrix::zeros(row_of.len(), kept.len());
    for (col, entries) in columns.iter().enumerate() {
        for &(key, coeff) in entries {
            a[(row_of[&key], col)] += coeff;
        }
    }

    let null = linalg::null_space(&a, NULL_SPACE_REL_TOL)?;
    let k = null.ncols();
    if k == 0 {
        return Err(Error::Numerical("invariant subspace came out empty"));
    }
    let projector = &null * null.adjoint();
    let candidates = (0..kept.len()).map(|c| projector.column(c).into_owned());
    let reduced = linalg::gram_schmidt(candidates, 1e-6, k);
    if reduced.len() != k {
        return Err(Error::Numerical("could not extract a canonical basis"));
    }
    let states = reduced
        .into_iter()
        .map(|v| {
            let mut full = CVector::zeros(dim);
            for (c, &i) in kept.iter().enumerate() {
                full[i] = v[c];
            }
            linalg::fix_global_phase(&mut full, 1e-9);
            PureState::normalized(d, n, full)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DfsBasis {
        local_dim: d,
        num_sites: n,
        states,
    })
}

/// Outcome of a Haar-sampled invariance test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvarianceReport {
    pub trials: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// `max ‖U^{⊗n}ψ − ψ‖` over `trials` Haar-random `U ∈ SU(d)`.
pub fn verify_invariance(psi: &PureState, trials: usize, seed: u64, tol: f64) -> InvarianceReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    verify_invariance_with(psi, trials, &mut rng, tol)
}

pub fn verify_invariance_with<R: Rng + ?Sized>(
    psi: &PureState,
    trials: usize,
    rng: &mut R,
    tol: f64,
) -> InvarianceReport {
    let mut max_deviation: f64 = 0.0;
    for _ in 0..trials {
        let u = haar_random_su_with(psi.local_dim(), rng);
        let moved = psi.apply_collective(&u).expect("matching local dimension");
        max_deviation = max_deviation.max(moved.distance(psi).expect("same space"));
    }
    InvarianceReport {
        trials,
        max_deviation,
        tolerance: tol,
        pass: max_deviation < tol,
    }
}

/// True iff every amplitude above `1e-12` sits on a string holding each
/// letter `0 … d-1` exactly `n/d` times.
pub fn balanced_support_check(psi: &PureState) -> bool {
    let (d, n) = (psi.local_dim(), psi.num_sites());
    if n % d != 0 {
        return false;
    }
    let share = n / d;
    let mut counts = alloc::vec![0usize; d];
    psi.amplitudes().iter().enumerate().all(|(i, z)| {
        if z.norm() <= SUPPORT_TOL {
            return true;
        }
        counts.iter_mut().for_each(|c| *c = 0);
        for s in linalg::digits(i, d, n) {
            counts[s] += 1;
        }
        counts.iter().all(|&c| c == share)
    })
}
