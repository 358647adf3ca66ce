//! Four-photon linear-optics readout of the logical DFS qubit.
//!
//! Each photon carries one qubit in its polarization (`|0⟩ = H`,
//! `|1⟩ = V`) and enters one of four spatial ports. Ports 1,2 and 3,4 meet
//! on two balanced beam splitters; detectors count photons per output port
//! without resolving polarization.

mod detect;
mod fock;

pub use detect::{
    classify, count_distribution, detection_table, interfere, measure_trine_basis,
    resolved_distribution, DetectionEvent, DetectionRow, Outcome, OutcomeProbabilities,
};
pub use fock::{
    apply_linear_optics, balanced_beam_splitter, beam_splitter_with, encode_photons,
    lose_photon_fock, polarization_rotation, FockMixture, FockState, ModeOccupation, PhotonLoss,
    Polarization, MODES, PORTS,
};
