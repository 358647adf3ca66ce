use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::Matrix2;
use num_complex::Complex64;
use num_traits::Float;

use crate::linalg::{self, CMatrix, ZERO};
use crate::qcore::{PureState, UnitaryMatrix, NORM_TOL};
use crate::{Error, Result};

/// Spatial ports.
pub const PORTS: usize = 4;
/// Bosonic modes: every port carries H and V.
pub const MODES: usize = 2 * PORTS;

/// Amplitudes below this modulus are dropped.
const PRUNE: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarization {
    H,
    V,
}

impl Polarization {
    pub fn from_bit(bit: usize) -> Self {
        if bit == 0 {
            Polarization::H
        } else {
            Polarization::V
        }
    }
}

/// Mode index of `(port, polarization)`, port 1-based.
pub(crate) fn mode(port: usize, pol: Polarization) -> usize {
    2 * (port - 1) + pol as usize
}

fn check_port(port: usize) -> Result<()> {
    if port == 0 || port > PORTS {
        return Err(Error::SiteOutOfRange {
            site: port,
            n: PORTS,
        });
    }
    Ok(())
}

/// Photon numbers in the eight modes, ordered `(1H, 1V, 2H, 2V, …)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ModeOccupation([u8; MODES]);

impl ModeOccupation {
    pub fn new(counts: [u8; MODES]) -> Self {
        Self(counts)
    }

    pub fn counts(&self) -> &[u8; MODES] {
        &self.0
    }

    pub fn get(&self, port: usize, pol: Polarization) -> u8 {
        self.0[mode(port, pol)]
    }

    pub fn total(&self) -> u32 {
        self.0.iter().map(|&c| c as u32).sum()
    }

    /// Photons in a spatial port, both polarizations.
    pub fn port_count(&self, port: usize) -> u8 {
        self.get(port, Polarization::H) + self.get(port, Polarization::V)
    }

    /// `Π_m n_m!`.
    fn factorial_product(&self) -> f64 {
        self.0
            .iter()
            .map(|&n| (1..=n as u32).product::<u32>() as f64)
            .product()
    }
}

/// A pure state of the eight modes as a superposition of Fock states.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FockState {
    terms: BTreeMap<ModeOccupation, Complex64>,
}

impl FockState {
    /// Drops negligible amplitudes; no normalization.
    pub fn new(terms: BTreeMap<ModeOccupation, Complex64>) -> Self {
        let terms = terms
            .into_iter()
            .filter(|(_, c)| c.norm() > PRUNE)
            .collect();
        Self { terms }
    }

    pub fn single(occupation: ModeOccupation) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(occupation, linalg::ONE);
        Self { terms }
    }

    pub fn terms(&self) -> &BTreeMap<ModeOccupation, Complex64> {
        &self.terms
    }

    pub fn amplitude(&self, occupation: &ModeOccupation) -> Complex64 {
        self.terms.get(occupation).copied().unwrap_or(ZERO)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.terms.values().map(|c| c.norm_sqr()).sum()
    }

    /// Total photon number when it is the same in every term.
    pub fn photon_number(&self) -> Option<u32> {
        let mut totals = self.terms.keys().map(|o| o.total());
        let first = totals.next()?;
        totals.all(|t| t == first).then_some(first)
    }

    fn normalized(mut self) -> Result<Self> {
        let norm = Float::sqrt(self.norm_sqr());
        if norm == 0.0 {
            return Err(Error::NotNormalized(0.0));
        }
        for c in self.terms.values_mut() {
            *c /= norm;
        }
        Ok(self)
    }
}

/// Puts one photon per port: port `p` carries the photon `routing[p-1]`
/// (1-based), with the qubit value as polarization.
pub fn encode_photons(psi: &PureState, routing: [usize; PORTS]) -> Result<FockState> {
    if psi.local_dim() != 2 || psi.num_sites() != PORTS {
        return Err(Error::InvalidArgument(
            "photonic encoding takes a four-qubit state",
        ));
    }
    let mut seen = [false; PORTS];
    for &photon in &routing {
        if photon == 0 || photon > PORTS || seen[photon - 1] {
            return Err(Error::InvalidGrouping(
                "routing must be a permutation of 1..=4",
            ));
        }
        seen[photon - 1] = true;
    }
    let mut terms = BTreeMap::new();
    for (i, &c) in psi.amplitudes().iter().enumerate() {
        let photons = linalg::digits(i, 2, PORTS);
        let mut counts = [0u8; MODES];
        for (port, &photon) in routing.iter().enumerate() {
            counts[mode(port + 1, Polarization::from_bit(photons[photon - 1]))] += 1;
        }
        *terms.entry(ModeOccupation(counts)).or_insert(ZERO) += c;
    }
    let state = FockState::new(terms);
    if (state.norm_sqr() - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized(state.norm_sqr()));
    }
    Ok(state)
}

/// Applies a passive linear-optics transformation to the listed modes:
/// `a†_{modes[c]} ↦ Σ_r u[(r, c)] a†_{modes[r]}`. Other modes are untouched.
pub fn apply_linear_optics(state: &FockState, modes: &[usize], u: &CMatrix) -> FockState {
    assert_eq!(u.nrows(), modes.len());
    assert_eq!(u.ncols(), modes.len());
    let position = |m: usize| modes.iter().position(|&x| x == m);
    let mut out: BTreeMap<ModeOccupation, Complex64> = BTreeMap::new();
    for (occ, &amp) in &state.terms {
        // creation operators of this term, one entry per photon
        let photons: Vec<usize> = occ
            .0
            .iter()
            .enumerate()
            .flat_map(|(m, &n)| core::iter::repeat_n(m, n as usize))
            .collect();
        let images: Vec<Vec<(usize, Complex64)>> = photons
            .iter()
            .map(|&m| match position(m) {
                Some(c) => (0..modes.len())
                    .filter(|&r| u[(r, c)] != ZERO)
                    .map(|r| (modes[r], u[(r, c)]))
                    .collect(),
                None => vec![(m, linalg::ONE)],
            })
            .collect();
        let norm_in = Float::sqrt(occ.factorial_product());
        let mut partial: BTreeMap<[u8; MODES], Complex64> = BTreeMap::new();
        partial.insert([0; MODES], amp / norm_in);
        for image in &images {
            let mut next = BTreeMap::new();
            for (counts, c) in &partial {
                for &(m, coeff) in image {
                    let mut k = *counts;
                    k[m] += 1;
                    *next.entry(k).or_insert(ZERO) += c * coeff;
                }
            }
            partial = next;
        }
        for (counts, c) in partial {
            let occ = ModeOccupation(counts);
            *out.entry(occ).or_insert(ZERO) += c * Float::sqrt(occ.factorial_product());
        }
    }
    FockState::new(out)
}

/// A two-port, polarization-independent beam splitter with mode matrix
/// `u` acting on `(a, b)`.
pub fn beam_splitter_with(
    state: &FockState,
    port_a: usize,
    port_b: usize,
    u: &Matrix2<Complex64>,
) -> Result<FockState> {
    check_port(port_a)?;
    check_port(port_b)?;
    if port_a == port_b {
        return Err(Error::InvalidArgument(
            "beam splitter needs two distinct ports",
        ));
    }
    let m = CMatrix::from_fn(2, 2, |r, c| u[(r, c)]);
    let mut out = state.clone();
    for pol in [Polarization::H, Polarization::V] {
        out = apply_linear_optics(&out, &[mode(port_a, pol), mode(port_b, pol)], &m);
    }
    Ok(out)
}

/// 50/50 beam splitter `a ↦ (a + b)/√2`, `b ↦ (a − b)/√2`.
pub fn balanced_beam_splitter(
    state: &FockState,
    port_a: usize,
    port_b: usize,
) -> Result<FockState> {
    let h = Complex64::new(Float::sqrt(0.5), 0.0);
    beam_splitter_with(state, port_a, port_b, &Matrix2::new(h, h, h, -h))
}

/// A polarization unitary on one port (`|H⟩ = |0⟩`, `|V⟩ = |1⟩`).
pub fn polarization_rotation(
    state: &FockState,
    port: usize,
    u: &UnitaryMatrix,
) -> Result<FockState> {
    check_port(port)?;
    if u.dim() != 2 {
        return Err(Error::DimensionMismatch(u.dim(), 2));
    }
    let modes = [mode(port, Polarization::H), mode(port, Polarization::V)];
    Ok(apply_linear_optics(state, &modes, u.matrix()))
}

/// Which input photon goes missing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhotonLoss {
    /// The photon entering this port (1-based).
    Port(usize),
    /// Each port with probability ¼.
    Uniform,
}

/// A classical mixture of Fock states, weights summing to one.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FockMixture {
    components: Vec<(f64, FockState)>,
}

impl FockMixture {
    pub fn pure(state: FockState) -> Self {
        Self {
            components: vec![(1.0, state)],
        }
    }

    pub fn components(&self) -> &[(f64, FockState)] {
        &self.components
    }

    pub fn total_weight(&self) -> f64 {
        self.components.iter().map(|(w, _)| w).sum()
    }

    /// Applies a map to every component.
    pub fn try_map<F>(&self, mut f: F) -> Result<Self>
    where
        F: FnMut(&FockState) -> Result<FockState>,
    {
        let components = self
            .components
            .iter()
            .map(|(w, s)| Ok((*w, f(s)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { components })
    }
}

fn lose_at_port(state: &FockState, port: usize) -> Result<FockMixture> {
    check_port(port)?;
    let mut by_pol: [BTreeMap<ModeOccupation, Complex64>; 2] = [BTreeMap::new(), BTreeMap::new()];
    for (occ, &c) in &state.terms {
        match occ.port_count(port) {
            0 => return Err(Error::EmptyPort(port)),
            1 => {}
            _ => {
                return Err(Error::InvalidArgument(
                    "loss expects one photon per input port",
                ))
            }
        }
        let pol = if occ.get(port, Polarization::H) == 1 {
            Polarization::H
        } else {
            Polarization::V
        };
        let mut counts = occ.0;
        counts[mode(port, pol)] -= 1;
        *by_pol[pol as usize]
            .entry(ModeOccupation(counts))
            .or_insert(ZERO) += c;
    }
    let total = state.norm_sqr();
    let mut components = Vec::new();
    for terms in by_pol {
        let part = FockState::new(terms);
        let weight = part.norm_sqr() / total;
        if weight > PRUNE * PRUNE {
            components.push((weight, part.normalized()?));
        }
    }
    Ok(FockMixture { components })
}

/// Removes one input photon before interference. The result mixes over the
/// polarization of the lost photon (and over ports for uniform loss).
pub fn lose_photon_fock(state: &FockState, which: PhotonLoss) -> Result<FockMixture> {
    if state.terms.is_empty() {
        return Err(Error::InvalidArgument("empty Fock state"));
    }
    match which {
        PhotonLoss::Port(port) => lose_at_port(state, port),
        PhotonLoss::Uniform => {
            let mut components = Vec::new();
            for port in 1..=PORTS {
                for (w, s) in lose_at_port(state, port)?.components {
                    components.push((w / PORTS as f64, s));
                }
            }
            Ok(FockMixture { components })
        }
    }
}
