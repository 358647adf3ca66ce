use alloc::vec::Vec;

use super::LogicalAmplitudes;
use crate::dfs::{psi_minus, xi, Trine};
use crate::linalg::{self, CVector};
use crate::qcore::{checked_sites, DensityOperator, PureState};
use crate::{Error, Result};

/// Trace distance below which two orthogonal logical states count as no
/// longer perfectly distinguishable after losing two qubits.
pub const DISTINGUISHABILITY_BOUND: f64 = 0.99;

/// State of the survivors after losing two sites of a four-qubit state.
pub fn lose_two(psi: &PureState, lost: [usize; 2]) -> Result<DensityOperator> {
    let lost = checked_sites(&lost, psi.num_sites())?;
    let keep: Vec<usize> = (1..=psi.num_sites())
        .filter(|s| !lost.contains(s))
        .collect();
    psi.reduced(&keep)
}

/// The logical state orthogonal to `psi` within `span{Ξ₁, Ξ₃}`.
pub fn logical_partner(psi: &PureState) -> Result<PureState> {
    let candidates = [psi, &xi(Trine::Xi1), &xi(Trine::Xi3)].map(|s| s.amplitudes().clone());
    let ortho = linalg::gram_schmidt(candidates, 1e-6, 2);
    let perp: &CVector = ortho
        .get(1)
        .ok_or(Error::Numerical("no orthogonal partner"))?;
    PureState::normalized(2, 4, perp.clone())
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoLossEntry {
    pub input: LogicalAmplitudes,
    /// `⟨ψ⁻|ρ|ψ⁻⟩` of the two survivors.
    pub singlet_weight: f64,
    /// Trace distance between the survivors of the input and of its
    /// orthogonal logical partner.
    pub partner_trace_distance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoLossReport {
    pub lost_sites: [usize; 2],
    pub entries: Vec<TwoLossEntry>,
    pub min_trace_distance: f64,
    /// Index into `entries` attaining the minimum.
    pub witness: Option<usize>,
    /// True when some orthogonal pair dropped below
    /// [`DISTINGUISHABILITY_BOUND`], i.e. the encoding cannot be recovered.
    pub exhibited: bool,
}

/// Losing sites 1 and 2 from each logical input.
pub fn two_loss_counterexample(inputs: &[LogicalAmplitudes]) -> Result<TwoLossReport> {
    two_loss_counterexample_at(inputs, [1, 2])
}

pub fn two_loss_counterexample_at(
    inputs: &[LogicalAmplitudes],
    lost: [usize; 2],
) -> Result<TwoLossReport> {
    let singlet = psi_minus();
    let entries = inputs
        .iter()
        .map(|input| {
            let psi = input.encode();
            let rho = lose_two(&psi, lost)?;
            let partner = lose_two(&logical_partner(&psi)?, lost)?;
            Ok(TwoLossEntry {
                input: *input,
                singlet_weight: rho.expectation(&singlet)?.re,
                partner_trace_distance: rho.trace_distance(&partner)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let witness = entries
        .iter()
        .enumerate()
        .min_by(|a, b| {
            a.1.partner_trace_distance
                .total_cmp(&b.1.partner_trace_distance)
        })
        .map(|(i, _)| i);
    let min_trace_distance = witness.map_or(f64::INFINITY, |i| entries[i].partner_trace_distance);
    Ok(TwoLossReport {
        lost_sites: lost,
        entries,
        min_trace_distance,
        witness,
        exhibited: min_trace_distance < DISTINGUISHABILITY_BOUND,
    })
}
