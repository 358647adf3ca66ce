use alloc::vec::Vec;

use num_complex::Complex64;

use super::{check_site, checked_sites, DensityOperator, UnitaryMatrix, NORM_TOL};
use crate::linalg::{self, CVector, ZERO};
use crate::{Error, Result};

/// A normalized pure state of `n` qudits of local dimension `d`.
///
/// Amplitudes are indexed by `Σ_k s_k d^{n-k}`: site 1 is the most
/// significant digit.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    local_dim: usize,
    num_sites: usize,
    amplitudes: CVector,
}

impl PureState {
    /// Wraps an amplitude vector that must already be normalized.
    pub fn new(local_dim: usize, num_sites: usize, amplitudes: CVector) -> Result<Self> {
        let state = Self::checked_shape(local_dim, num_sites, amplitudes)?;
        let norm_sqr = state.norm_sqr();
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm_sqr));
        }
        Ok(state)
    }

    /// Wraps an amplitude vector and rescales it to unit norm.
    pub fn normalized(local_dim: usize, num_sites: usize, amplitudes: CVector) -> Result<Self> {
        let mut state = Self::checked_shape(local_dim, num_sites, amplitudes)?;
        let norm = state.amplitudes.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized(norm * norm));
        }
        state.amplitudes.unscale_mut(norm);
        Ok(state)
    }

    /// The computational basis state `|s_1 s_2 … s_n⟩`.
    pub fn basis(local_dim: usize, digits: &[usize]) -> Result<Self> {
        let dim = linalg::hilbert_dim(local_dim, digits.len())?;
        if digits.iter().any(|&s| s >= local_dim) {
            return Err(Error::InvalidArgument(
                "basis digit exceeds local dimension",
            ));
        }
        let mut amps = CVector::zeros(dim);
        amps[linalg::index_of(digits, local_dim)] = linalg::ONE;
        Self::new(local_dim, digits.len(), amps)
    }

    /// Builds a state from a function of the basis digits, then normalizes.
    pub fn from_fn<F>(local_dim: usize, num_sites: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(&[usize]) -> Complex64,
    {
        let dim = linalg::hilbert_dim(local_dim, num_sites)?;
        let amps = CVector::from_fn(dim, |i, _| f(&linalg::digits(i, local_dim, num_sites)));
        Self::normalized(local_dim, num_sites, amps)
    }

    fn checked_shape(local_dim: usize, num_sites: usize, amplitudes: CVector) -> Result<Self> {
        if local_dim < 2 {
            return Err(Error::InvalidLocalDim {
                got: local_dim,
                min: 2,
            });
        }
        if num_sites < 1 {
            return Err(Error::NoSites);
        }
        let expected = linalg::hilbert_dim(local_dim, num_sites)?;
        if amplitudes.len() != expected {
            return Err(Error::AmplitudeCount {
                expected,
                got: amplitudes.len(),
            });
        }
        Ok(Self {
            local_dim,
            num_sites,
            amplitudes,
        })
    }

    /// No checks at all; callers guarantee shape (norm may differ from 1).
    pub(crate) fn from_raw(local_dim: usize, num_sites: usize, amplitudes: CVector) -> Self {
        debug_assert_eq!(amplitudes.len(), local_dim.pow(num_sites as u32));
        Self {
            local_dim,
            num_sites,
            amplitudes,
        }
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn num_sites(&self) -> usize {
        self.num_sites
    }

    /// `d^n`.
    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> CVector {
        self.amplitudes
    }

    /// Amplitude of `|s_1 … s_n⟩`.
    pub fn amplitude(&self, digits: &[usize]) -> Complex64 {
        self.amplitudes[linalg::index_of(digits, self.local_dim)]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.norm_squared()
    }

    fn same_space(&self, other: &Self) -> Result<()> {
        if self.local_dim != other.local_dim {
            return Err(Error::LocalDimMismatch(self.local_dim, other.local_dim));
        }
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        Ok(())
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.same_space(other)?;
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// Euclidean distance `‖self − other‖`.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        self.same_space(other)?;
        Ok((&self.amplitudes - &other.amplitudes).norm())
    }

    /// `Σ c_k |ψ_k⟩`; the result must come out normalized.
    pub fn superpose(terms: &[(Complex64, &PureState)]) -> Result<Self> {
        let (_, first) = terms
            .first()
            .ok_or(Error::InvalidArgument("empty superposition"))?;
        let mut amps = CVector::zeros(first.dim());
        for (c, psi) in terms {
            first.same_space(psi)?;
            amps.axpy(*c, &psi.amplitudes, linalg::ONE);
        }
        Self::new(first.local_dim, first.num_sites, amps)
    }

    /// Applies a `d × d` unitary to one site.
    pub fn apply_local(&self, op: &UnitaryMatrix, site: usize) -> Result<Self> {
        check_site(site, self.num_sites)?;
        if op.dim() != self.local_dim {
            return Err(Error::DimensionMismatch(op.dim(), self.local_dim));
        }
        let mut amps = self.amplitudes.clone();
        linalg::apply_site(
            amps.as_mut_slice(),
            self.local_dim,
            self.num_sites,
            site,
            op.matrix(),
        );
        Ok(Self::from_raw(self.local_dim, self.num_sites, amps))
    }

    /// Applies `U^{⊗n}` site by site (without forming the `d^n` matrix).
    pub fn apply_collective(&self, op: &UnitaryMatrix) -> Result<Self> {
        if op.dim() != self.local_dim {
            return Err(Error::DimensionMismatch(op.dim(), self.local_dim));
        }
        let mut amps = self.amplitudes.clone();
        linalg::apply_collective(
            amps.as_mut_slice(),
            self.local_dim,
            self.num_sites,
            op.matrix(),
        );
        Ok(Self::from_raw(self.local_dim, self.num_sites, amps))
    }

    /// Applies a full `d^n × d^n` unitary.
    pub fn apply(&self, op: &UnitaryMatrix) -> Result<Self> {
        if op.dim() != self.dim() {
            return Err(Error::DimensionMismatch(op.dim(), self.dim()));
        }
        Ok(Self::from_raw(
            self.local_dim,
            self.num_sites,
            op.matrix() * &self.amplitudes,
        ))
    }

    /// Reorders sites: the new state has amplitude
    /// `ψ'(t_1, …, t_n) = ψ(t_{order[0]}, …, t_{order[n-1]})` (1-based `order`).
    ///
    /// With `order = (1,3,4,2)` this maps `|ψ⁻⟩₁₂|ψ⁻⟩₃₄` onto `|ψ⁻⟩₁₃|ψ⁻⟩₄₂`.
    pub fn relabel(&self, order: &[usize]) -> Result<Self> {
        let n = self.num_sites;
        if order.len() != n {
            return Err(Error::InvalidGrouping(
                "relabeling must list every site once",
            ));
        }
        let sorted = checked_sites(order, n)?;
        debug_assert_eq!(sorted.len(), n);
        let d = self.local_dim;
        let amps = CVector::from_fn(self.dim(), |i, _| {
            let t = linalg::digits(i, d, n);
            let s: Vec<usize> = order.iter().map(|&k| t[k - 1]).collect();
            self.amplitudes[linalg::index_of(&s, d)]
        });
        Ok(Self::from_raw(d, n, amps))
    }

    /// Reduced density operator on the `keep` sites (1-based).
    pub fn reduced(&self, keep: &[usize]) -> Result<DensityOperator> {
        let keep = checked_sites(keep, self.num_sites)?;
        let split = SiteSplit::new(self.local_dim, self.num_sites, &keep);
        let dk = split.kept_dim;
        let mut out = linalg::CMatrix::zeros(dk, dk);
        for group in &split.groups {
            for &(i, a) in group {
                let ai = self.amplitudes[i];
                if ai == ZERO {
                    continue;
                }
                for &(j, b) in group {
                    out[(a, b)] += ai * self.amplitudes[j].conj();
                }
            }
        }
        Ok(DensityOperator::from_raw(self.local_dim, keep.len(), out))
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn projector(&self) -> DensityOperator {
        DensityOperator::from_pure(self)
    }
}

/// Kronecker product `|a⟩ ⊗ |b⟩` with `a` on the leading sites.
pub fn tensor(a: &PureState, b: &PureState) -> Result<PureState> {
    if a.local_dim != b.local_dim {
        return Err(Error::LocalDimMismatch(a.local_dim, b.local_dim));
    }
    let n = a.num_sites + b.num_sites;
    linalg::hilbert_dim(a.local_dim, n)?;
    let amps = a.amplitudes.kronecker(&b.amplitudes);
    Ok(PureState::from_raw(a.local_dim, n, amps))
}

/// Index bookkeeping for splitting sites into kept and traced sets.
pub(crate) struct SiteSplit {
    pub kept_dim: usize,
    /// For every configuration of the traced sites, the list of
    /// `(full index, kept index)` pairs sharing it.
    pub groups: Vec<Vec<(usize, usize)>>,
}

impl SiteSplit {
    pub fn new(d: usize, n: usize, keep: &[usize]) -> Self {
        let traced: Vec<usize> = (1..=n).filter(|s| !keep.contains(s)).collect();
        let kept_dim = d.pow(keep.len() as u32);
        let traced_dim = d.pow(traced.len() as u32);
        let mut groups = alloc::vec![Vec::with_capacity(kept_dim); traced_dim];
        for i in 0..d.pow(n as u32) {
            let s = linalg::digits(i, d, n);
            let a = keep.iter().fold(0, |acc, &k| acc * d + s[k - 1]);
            let t = traced.iter().fold(0, |acc, &k| acc * d + s[k - 1]);
            groups[t].push((i, a));
        }
        Self { kept_dim, groups }
    }
}
