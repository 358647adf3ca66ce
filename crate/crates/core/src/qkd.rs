//! Monte Carlo simulation of trine-state key distribution over a channel
//! with collective depolarization and single-photon loss.
//!
//! Round `i` draws all of its randomness from
//! `ChaCha8Rng::seed_from_u64(seed.wrapping_add(i))`, so any partition of
//! the rounds into ranges merges to the same statistics.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::ops::Range;

use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dfs::{xi, xi_perp, Trine};
use crate::lossrec::branch_vectors;
use crate::photonic::{measure_trine_basis, Outcome, OutcomeProbabilities, PORTS};
use crate::qcore::{haar_random_su_with, PureState};
use crate::{Error, Result};

/// Probabilities below this are treated as exact zeros before sampling.
pub const PROBABILITY_FLOOR: f64 = 1e-12;

/// Channel between Alice and Bob.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelConfig {
    /// Apply a fresh Haar-random `U^{⊗4}` every round.
    pub collective_noise: bool,
    /// Probability that exactly one uniformly chosen photon is removed.
    pub loss_probability: f64,
    pub seed: u64,
}

impl ChannelConfig {
    pub fn new(collective_noise: bool, loss_probability: f64, seed: u64) -> Result<Self> {
        let config = Self {
            collective_noise,
            loss_probability,
            seed,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if (0.0..=1.0).contains(&self.loss_probability) {
            Ok(())
        } else {
            Err(Error::InvalidArgument(
                "loss probability must lie in [0, 1]",
            ))
        }
    }
}

/// How Bob's measurement is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Backend {
    /// Projection onto the trine basis and its loss branches.
    Abstract,
    /// Photon routing, beam splitters and count classification.
    Fock,
}

/// `Ξ_l`, `Ξ_l^⊥` and their loss branches, computed once.
#[derive(Debug, Clone)]
pub struct TrineReference {
    xi: [PureState; 3],
    xi_perp: [PureState; 3],
    // [basis][lost photon - 1]
    xi_branches: [[Vec<PureState>; PORTS]; 3],
    xi_perp_branches: [[Vec<PureState>; PORTS]; 3],
}

impl TrineReference {
    pub fn new() -> Self {
        let xi = Trine::ALL.map(xi);
        let xi_perp = Trine::ALL.map(xi_perp);
        let branches = |states: &[PureState; 3]| {
            core::array::from_fn(|l| {
                core::array::from_fn(|j| branch_vectors(&states[l], j + 1).expect("valid site"))
            })
        };
        Self {
            xi_branches: branches(&xi),
            xi_perp_branches: branches(&xi_perp),
            xi,
            xi_perp,
        }
    }

    /// Outcome probabilities of measuring `psi` in basis `basis`, with photon
    /// `lost` (1-based) removed first.
    ///
    /// After a loss the state is the equal mixture of its branches, and the
    /// `Ξ_l` outcome projects onto the span of the `Ξ_l` branches.
    pub fn measure(
        &self,
        psi: &PureState,
        basis: Trine,
        lost: Option<usize>,
    ) -> Result<OutcomeProbabilities> {
        let l = basis as usize;
        let (xi, xi_perp) = match lost {
            None => (
                psi.inner(&self.xi[l])?.norm_sqr(),
                psi.inner(&self.xi_perp[l])?.norm_sqr(),
            ),
            Some(j) => {
                if !(1..=PORTS).contains(&j) {
                    return Err(Error::SiteOutOfRange { site: j, n: PORTS });
                }
                let branches = branch_vectors(psi, j)?;
                let weight = |targets: &[PureState]| -> Result<f64> {
                    let mut sum = 0.0;
                    for t in targets {
                        for b in &branches {
                            sum += t.inner(b)?.norm_sqr();
                        }
                    }
                    Ok(sum / branches.len() as f64)
                };
                (
                    weight(&self.xi_branches[l][j - 1])?,
                    weight(&self.xi_perp_branches[l][j - 1])?,
                )
            }
        };
        Ok(OutcomeProbabilities {
            xi,
            xi_perp,
            invalid: (1.0 - xi - xi_perp).max(0.0),
        })
    }
}

impl Default for TrineReference {
    fn default() -> Self {
        Self::new()
    }
}

/// Abstract-backend outcome probabilities.
pub fn abstract_measurement(
    psi: &PureState,
    basis: Trine,
    lost: Option<usize>,
) -> Result<OutcomeProbabilities> {
    TrineReference::new().measure(psi, basis, lost)
}

/// Everything that happened in one round.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundRecord {
    pub index: u64,
    pub alice: Trine,
    pub bob: Trine,
    pub lost_photon: Option<usize>,
    pub probabilities: OutcomeProbabilities,
    pub outcome: Outcome,
}

/// Key of the count table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CountKey {
    pub alice: Trine,
    pub bob: Trine,
    pub outcome: Outcome,
    pub lost: bool,
}

/// Aggregated counts over protocol rounds.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ProtocolStats {
    pub rounds: u64,
    pub counts: BTreeMap<CountKey, u64>,
    /// Rounds with outcome `XI_PERP`, the ones that exclude a preparation.
    pub sifted_pairs: u64,
}

impl ProtocolStats {
    pub fn record(&mut self, round: &RoundRecord) {
        let key = CountKey {
            alice: round.alice,
            bob: round.bob,
            outcome: round.outcome,
            lost: round.lost_photon.is_some(),
        };
        *self.counts.entry(key).or_insert(0) += 1;
        self.rounds += 1;
        if round.outcome == Outcome::XiPerp {
            self.sifted_pairs += 1;
        }
    }

    pub fn merge(&mut self, other: &ProtocolStats) {
        self.rounds += other.rounds;
        self.sifted_pairs += other.sifted_pairs;
        for (key, n) in &other.counts {
            *self.counts.entry(*key).or_insert(0) += n;
        }
    }

    /// Sum of counts matching `filter`.
    pub fn count_where<F: Fn(&CountKey) -> bool>(&self, filter: F) -> u64 {
        self.counts
            .iter()
            .filter(|(k, _)| filter(k))
            .map(|(_, n)| n)
            .sum()
    }
}

fn sample_outcome<R: Rng + ?Sized>(p: &OutcomeProbabilities, rng: &mut R) -> Outcome {
    let floor = |x: f64| if x < PROBABILITY_FLOOR { 0.0 } else { x };
    let weights = [floor(p.xi), floor(p.xi_perp), floor(p.invalid)];
    let total: f64 = weights.iter().sum();
    let mut u = rng.random::<f64>() * total;
    for (outcome, w) in Outcome::ALL.into_iter().zip(weights) {
        if w > 0.0 && u < w {
            return outcome;
        }
        u -= w;
    }
    // Rounding can leave `u` just past the last bucket.
    Outcome::ALL
        .into_iter()
        .zip(weights)
        .rev()
        .find(|(_, w)| *w > 0.0)
        .map(|(o, _)| o)
        .unwrap_or(Outcome::Invalid)
}

/// Simulates round `index`.
pub fn run_round(
    index: u64,
    channel: &ChannelConfig,
    backend: Backend,
    reference: &TrineReference,
) -> Result<RoundRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(channel.seed.wrapping_add(index));
    let alice = Trine::ALL[rng.random_range(0..3)];
    let mut state = reference.xi[alice as usize].clone();
    if channel.collective_noise {
        let u = haar_random_su_with(2, &mut rng);
        state = state.apply_collective(&u)?;
    }
    let lost_photon = if rng.random_bool(channel.loss_probability) {
        Some(rng.random_range(1..=PORTS))
    } else {
        None
    };
    let bob = Trine::ALL[rng.random_range(0..3)];
    let probabilities = match backend {
        Backend::Abstract => reference.measure(&state, bob, lost_photon)?,
        Backend::Fock => measure_trine_basis(&state, bob, lost_photon)?,
    };
    let outcome = sample_outcome(&probabilities, &mut rng);
    Ok(RoundRecord {
        index,
        alice,
        bob,
        lost_photon,
        probabilities,
        outcome,
    })
}

/// Simulates the rounds with indices in `range`.
pub fn run_rounds(
    range: Range<u64>,
    channel: &ChannelConfig,
    backend: Backend,
    reference: &TrineReference,
) -> Result<ProtocolStats> {
    channel.validate()?;
    let mut stats = ProtocolStats::default();
    for index in range {
        stats.record(&run_round(index, channel, backend, reference)?);
    }
    Ok(stats)
}

pub fn run_protocol(
    rounds: u64,
    channel: &ChannelConfig,
    backend: Backend,
) -> Result<ProtocolStats> {
    if rounds == 0 {
        return Err(Error::InvalidArgument("at least one round is required"));
    }
    run_rounds(0..rounds, channel, backend, &TrineReference::new())
}

/// Empirical `P(XI_PERP in basis l | Alice sent k)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExclusionCell {
    pub trials: u64,
    pub xi_perp: u64,
    pub probability: f64,
    /// Binomial standard error `√(p(1−p)/n)`.
    pub std_error: f64,
}

impl ExclusionCell {
    pub fn from_counts(trials: u64, xi_perp: u64) -> Option<Self> {
        if trials == 0 {
            return None;
        }
        let probability = xi_perp as f64 / trials as f64;
        let std_error = Float::sqrt(probability * (1.0 - probability) / trials as f64);
        Some(Self {
            trials,
            xi_perp,
            probability,
            std_error,
        })
    }

    /// Binomial standard error of the count under success probability `p`.
    pub fn sigma_under(&self, p: f64) -> f64 {
        Float::sqrt(p * (1.0 - p) / self.trials as f64)
    }
}

/// Rows are Alice's preparation, columns Bob's basis. Cells without trials
/// are `None`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExclusionTable {
    pub cells: [[Option<ExclusionCell>; 3]; 3],
}

impl ExclusionTable {
    pub fn get(&self, alice: Trine, bob: Trine) -> Option<ExclusionCell> {
        self.cells[alice as usize][bob as usize]
    }

    fn pooled<F: Fn(usize, usize) -> bool>(&self, pick: F) -> Option<ExclusionCell> {
        let (mut trials, mut hits) = (0, 0);
        for (k, row) in self.cells.iter().enumerate() {
            for (l, cell) in row.iter().enumerate() {
                if let (true, Some(c)) = (pick(k, l), cell) {
                    trials += c.trials;
                    hits += c.xi_perp;
                }
            }
        }
        ExclusionCell::from_counts(trials, hits)
    }

    pub fn diagonal(&self) -> Option<ExclusionCell> {
        self.pooled(|k, l| k == l)
    }

    pub fn off_diagonal(&self) -> Option<ExclusionCell> {
        self.pooled(|k, l| k != l)
    }
}

pub fn conditional_exclusion_table(stats: &ProtocolStats) -> ExclusionTable {
    let cells = core::array::from_fn(|k| {
        core::array::from_fn(|l| {
            let (alice, bob) = (Trine::ALL[k], Trine::ALL[l]);
            let trials = stats.count_where(|key| key.alice == alice && key.bob == bob);
            let hits = stats.count_where(|key| {
                key.alice == alice && key.bob == bob && key.outcome == Outcome::XiPerp
            });
            ExclusionCell::from_counts(trials, hits)
        })
    });
    ExclusionTable { cells }
}

/// Result of applying independent `U⊗U` and `U′⊗U′` to the two photon pairs
/// that meet at each beam splitter, with Bob measuring in the matched basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairwiseNoiseReport {
    pub rounds: u64,
    /// Mean probability of the correct outcome.
    pub mean_correct: f64,
    pub min_correct: f64,
    pub mean_invalid: f64,
    pub max_invalid: f64,
    pub pass: bool,
}

/// Trine inputs chosen uniformly; pass iff every round yields `XI` with
/// probability 1 within [`crate::EXACT_TOL`].
pub fn uu_random_check(rounds: u64, seed: u64) -> Result<PairwiseNoiseReport> {
    pairwise_noise(rounds, seed, |rng| {
        let k = Trine::ALL[rng.random_range(0..3)];
        (xi(k), k, Outcome::Xi)
    })
}

/// Fixed input `psi` measured in `basis`; the correct outcome is taken to be `XI`.
pub fn uu_random_check_state(
    psi: &PureState,
    basis: Trine,
    rounds: u64,
    seed: u64,
) -> Result<PairwiseNoiseReport> {
    if psi.local_dim() != 2 {
        return Err(Error::LocalDimMismatch(psi.local_dim(), 2));
    }
    if psi.num_sites() != PORTS {
        return Err(Error::DimensionMismatch(psi.num_sites(), PORTS));
    }
    pairwise_noise(rounds, seed, |_| (psi.clone(), basis, Outcome::Xi))
}

fn pairwise_noise<F>(rounds: u64, seed: u64, mut input: F) -> Result<PairwiseNoiseReport>
where
    F: FnMut(&mut ChaCha8Rng) -> (PureState, Trine, Outcome),
{
    if rounds == 0 {
        return Err(Error::InvalidArgument("at least one round is required"));
    }
    let (mut sum_correct, mut min_correct) = (0.0, f64::INFINITY);
    let (mut sum_invalid, mut max_invalid) = (0.0, 0.0f64);
    for index in 0..rounds {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(index));
        let (mut state, basis, correct) = input(&mut rng);
        let u = haar_random_su_with(2, &mut rng);
        let u_prime = haar_random_su_with(2, &mut rng);
        let routing = basis.routing();
        for (port, photon) in routing.iter().enumerate() {
            let op = if port < 2 { &u } else { &u_prime };
            state = state.apply_local(op, *photon)?;
        }
        let p = measure_trine_basis(&state, basis, None)?;
        let c = p.get(correct);
        sum_correct += c;
        min_correct = min_correct.min(c);
        sum_invalid += p.invalid;
        max_invalid = max_invalid.max(p.invalid);
    }
    let n = rounds as f64;
    Ok(PairwiseNoiseReport {
        rounds,
        mean_correct: sum_correct / n,
        min_correct,
        mean_invalid: sum_invalid / n,
        max_invalid,
        pass: min_correct >= 1.0 - crate::EXACT_TOL,
    })
}
