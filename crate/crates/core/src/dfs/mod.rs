//! Decoherence-free subspaces: multiplicities, explicit singlet-product
//! states, a numerical basis of the collective-invariant subspace and the
//! invariance verifier.

mod basis;
mod multiplicity;
mod states;

pub use basis::{
    balanced_support_check, dfs_basis, su_generators, verify_invariance, verify_invariance_with,
    DfsBasis, InvarianceReport, NULL_SPACE_REL_TOL,
};
pub use multiplicity::{multiplicity, MultiplicityTable, SpinLabel};
pub use states::{
    antisymmetric_product, psi_minus, psi_plus, singlet_product, trine_gram, xi, xi_perp, Trine,
};
