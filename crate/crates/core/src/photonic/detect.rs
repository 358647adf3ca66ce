use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use super::fock::{balanced_beam_splitter, encode_photons, lose_photon_fock};
use super::{FockMixture, FockState, ModeOccupation, PhotonLoss, PORTS};
use crate::dfs::{xi, xi_perp, Trine};
use crate::qcore::PureState;
use crate::{Error, Result};

/// Photon counts at the outputs of the two beam splitters.
///
/// Stored in normal form: each inner pair sorted descending, then the two
/// pairs sorted descending, so `{{1,0},{1,1}}` and `{{1,1},{0,1}}` are the
/// same event.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DetectionEvent {
    pairs: [[u8; 2]; 2],
}

impl DetectionEvent {
    pub fn new(first: [u8; 2], second: [u8; 2]) -> Self {
        let sort = |[a, b]: [u8; 2]| if a >= b { [a, b] } else { [b, a] };
        let (x, y) = (sort(first), sort(second));
        let pairs = if x >= y { [x, y] } else { [y, x] };
        Self { pairs }
    }

    /// From the counts at output ports 1–4 (1,2 and 3,4 share a beam splitter).
    pub fn from_port_counts(counts: [u8; PORTS]) -> Self {
        Self::new([counts[0], counts[1]], [counts[2], counts[3]])
    }

    pub fn pairs(&self) -> [[u8; 2]; 2] {
        self.pairs
    }

    pub fn total(&self) -> u32 {
        self.pairs.iter().flatten().map(|&c| c as u32).sum()
    }
}

impl fmt::Display for DetectionEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [[a, b], [c, d]] = self.pairs;
        write!(f, "{{{{{a},{b}}},{{{c},{d}}}}}")
    }
}

/// Readout verdict for one detection event.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Outcome {
    /// Projection onto `Ξ_k`.
    Xi,
    /// Projection onto `Ξ_k^⊥`.
    XiPerp,
    /// Not reachable from a DFS input with at most one photon lost.
    Invalid,
}

impl Outcome {
    pub const ALL: [Outcome; 3] = [Outcome::Xi, Outcome::XiPerp, Outcome::Invalid];

    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Xi => "XI",
            Outcome::XiPerp => "XI_PERP",
            Outcome::Invalid => "INVALID",
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Anti-bunching at both beam splitters heralds `Ξ_k`; bunching heralds
/// `Ξ_k^⊥`. One beam splitter may show a single photon after a loss.
pub fn classify(event: &DetectionEvent) -> Outcome {
    match event.pairs() {
        [[1, 1], [1, 1]] | [[1, 1], [1, 0]] => Outcome::Xi,
        [[2, 0], [2, 0]] | [[2, 0], [1, 0]] => Outcome::XiPerp,
        _ => Outcome::Invalid,
    }
}

fn port_counts(occ: &ModeOccupation) -> [u8; PORTS] {
    core::array::from_fn(|p| occ.port_count(p + 1))
}

/// Polarization-blind count statistics of a pure Fock state.
pub fn count_distribution(state: &FockState) -> BTreeMap<DetectionEvent, f64> {
    let mut out = BTreeMap::new();
    let total = state.norm_sqr();
    for (occ, c) in state.terms() {
        *out.entry(DetectionEvent::from_port_counts(port_counts(occ)))
            .or_insert(0.0) += c.norm_sqr() / total;
    }
    out
}

/// Polarization-resolved statistics: probability of every mode occupation.
pub fn resolved_distribution(state: &FockState) -> BTreeMap<ModeOccupation, f64> {
    let total = state.norm_sqr();
    state
        .terms()
        .iter()
        .map(|(occ, c)| (*occ, c.norm_sqr() / total))
        .collect()
}

impl FockMixture {
    pub fn count_distribution(&self) -> BTreeMap<DetectionEvent, f64> {
        let mut out = BTreeMap::new();
        for (w, s) in self.components() {
            for (event, p) in count_distribution(s) {
                *out.entry(event).or_insert(0.0) += w * p;
            }
        }
        out
    }

    pub fn resolved_distribution(&self) -> BTreeMap<ModeOccupation, f64> {
        let mut out = BTreeMap::new();
        for (w, s) in self.components() {
            for (occ, p) in resolved_distribution(s) {
                *out.entry(occ).or_insert(0.0) += w * p;
            }
        }
        out
    }
}

/// Probabilities of the three readout verdicts.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct OutcomeProbabilities {
    pub xi: f64,
    pub xi_perp: f64,
    pub invalid: f64,
}

impl OutcomeProbabilities {
    pub fn from_distribution(distribution: &BTreeMap<DetectionEvent, f64>) -> Self {
        let mut out = Self::default();
        for (event, &p) in distribution {
            match classify(event) {
                Outcome::Xi => out.xi += p,
                Outcome::XiPerp => out.xi_perp += p,
                Outcome::Invalid => out.invalid += p,
            }
        }
        out
    }

    pub fn get(&self, outcome: Outcome) -> f64 {
        match outcome {
            Outcome::Xi => self.xi,
            Outcome::XiPerp => self.xi_perp,
            Outcome::Invalid => self.invalid,
        }
    }

    /// `max` over outcomes of the absolute difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        Outcome::ALL
            .iter()
            .map(|&o| (self.get(o) - other.get(o)).abs())
            .fold(0.0, f64::max)
    }
}

/// Both beam splitters: ports 1,2 and ports 3,4.
pub fn interfere(mixture: &FockMixture) -> Result<FockMixture> {
    mixture.try_map(|s| balanced_beam_splitter(&balanced_beam_splitter(s, 1, 2)?, 3, 4))
}

/// Full photonic measurement of a four-qubit polarization state in the
/// `{Ξ_k, Ξ_k^⊥}` basis, optionally after losing photon `lost_photon`
/// (1-based photon label, before routing).
pub fn measure_trine_basis(
    psi: &PureState,
    basis: Trine,
    lost_photon: Option<usize>,
) -> Result<OutcomeProbabilities> {
    Ok(OutcomeProbabilities::from_distribution(&detect(
        psi,
        basis,
        lost_photon,
    )?))
}

fn detect(
    psi: &PureState,
    basis: Trine,
    lost_photon: Option<usize>,
) -> Result<BTreeMap<DetectionEvent, f64>> {
    let routing = basis.routing();
    let encoded = encode_photons(psi, routing)?;
    let mixture = match lost_photon {
        None => FockMixture::pure(encoded),
        Some(photon) => {
            let port = routing
                .iter()
                .position(|&p| p == photon)
                .ok_or(Error::SiteOutOfRange {
                    site: photon,
                    n: PORTS,
                })?;
            lose_photon_fock(&encoded, PhotonLoss::Port(port + 1))?
        }
    };
    Ok(interfere(&mixture)?.count_distribution())
}

/// One row of the detection table: a basis, an input and a loss pattern.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectionRow {
    pub basis: Trine,
    /// `false` for `Ξ_k`, `true` for `Ξ_k^⊥`.
    pub perp_input: bool,
    pub lost_photon: Option<usize>,
    pub distribution: BTreeMap<DetectionEvent, f64>,
    pub outcomes: OutcomeProbabilities,
}

/// Count statistics of `Ξ_k` and `Ξ_k^⊥` in their own basis, with no loss
/// and with each single photon lost.
pub fn detection_table() -> Result<Vec<DetectionRow>> {
    let mut rows = Vec::new();
    for basis in Trine::ALL {
        for perp_input in [false, true] {
            let input = if perp_input {
                xi_perp(basis)
            } else {
                xi(basis)
            };
            for lost_photon in core::iter::once(None).chain((1..=PORTS).map(Some)) {
                let distribution = detect(&input, basis, lost_photon)?;
                rows.push(DetectionRow {
                    basis,
                    perp_input,
                    lost_photon,
                    outcomes: OutcomeProbabilities::from_distribution(&distribution),
                    distribution,
                });
            }
        }
    }
    Ok(rows)
}
