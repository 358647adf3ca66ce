use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::UnitaryMatrix;
use crate::linalg::CMatrix;
use crate::{Error, Result};

/// Haar-random element of SU(d), reproducible from `seed`.
pub fn haar_random_su(d: usize, seed: u64) -> Result<UnitaryMatrix> {
    if d < 1 {
        return Err(Error::InvalidLocalDim { got: d, min: 1 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(haar_random_su_with(d, &mut rng))
}

/// Haar-random element of SU(d) drawn from `rng`.
///
/// QR of a complex Ginibre matrix with the phases of `diag R` moved into
/// `Q`, then divided by a `d`-th root of its determinant.
pub fn haar_random_su_with<R: Rng + ?Sized>(d: usize, rng: &mut R) -> UnitaryMatrix {
    assert!(d >= 1, "local dimension must be positive");
    let mut gauss = || -> f64 { StandardNormal.sample(rng) };
    let z = CMatrix::from_fn(d, d, |_, _| Complex64::new(gauss(), gauss()));
    let qr = z.qr();
    let r = qr.r();
    let mut q = qr.q();
    for k in 0..d {
        let rkk = r[(k, k)];
        let phase = if rkk.norm() > 0.0 {
            rkk / rkk.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for row in 0..d {
            q[(row, k)] *= phase;
        }
    }
    let det = q.determinant();
    let root = Complex64::from_polar(1.0, -det.arg() / d as f64);
    for z in q.iter_mut() {
        *z *= root;
    }
    UnitaryMatrix::from_raw(q, true)
}
