//! Single-particle loss: the partial-trace channel, branch decomposition,
//! the general immunity checks, the explicit four-qubit repair and the
//! two-particle-loss counterexample.

mod branch;
mod logical;
mod recovery;
mod two_loss;

pub use branch::{
    branch_decompose, branch_overlap_matrix, branch_vectors, cyclic_shift_w, ensure_dfs,
    lose_particle, post_loss_invariance, transform_identity_check, verify_branch_cycle,
    verify_branch_property, BranchCycleReport, BranchSet, TransformReport, GATE_TOL, GATE_TRIALS,
};
pub use logical::LogicalAmplitudes;
pub use recovery::{
    cnot, cnot_decomposition_check, controlled_flip_operator, insert_site,
    measure_total_pseudospin_z, recover_four_qubit, recover_mixture, recovery_fidelity,
    sample_total_pseudospin_z, PseudospinOutcome, RecoveryOutcome,
};
pub use two_loss::{
    logical_partner, lose_two, two_loss_counterexample, two_loss_counterexample_at, TwoLossEntry,
    TwoLossReport, DISTINGUISHABILITY_BOUND,
};
