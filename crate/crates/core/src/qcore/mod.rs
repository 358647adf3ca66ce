//! Dense qudit state-vector and density-operator algebra.

mod density;
mod haar;
mod state;
mod unitary;

pub use density::{fidelity, partial_trace, DensityOperator};
pub use haar::{haar_random_su, haar_random_su_with};
pub use state::{tensor, PureState};
pub use unitary::{collective, diagonal_phase_unitary, UnitaryMatrix};

/// Tolerance on normalization, hermiticity and unitarity.
pub const NORM_TOL: f64 = 1e-12;

use alloc::vec::Vec;

use crate::{Error, Result};

/// Validates a 1-based site set against `n` and returns it sorted.
pub(crate) fn checked_sites(sites: &[usize], n: usize) -> Result<Vec<usize>> {
    if sites.is_empty() {
        return Err(Error::EmptySiteSet);
    }
    let mut sorted = sites.to_vec();
    sorted.sort_unstable();
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            return Err(Error::DuplicateSite(w[0]));
        }
    }
    if let Some(&bad) = sorted.iter().find(|&&s| s == 0 || s > n) {
        return Err(Error::SiteOutOfRange { site: bad, n });
    }
    Ok(sorted)
}

pub(crate) fn check_site(site: usize, n: usize) -> Result<()> {
    if site == 0 || site > n {
        return Err(Error::SiteOutOfRange { site, n });
    }
    Ok(())
}
