use num_complex::Complex64;
use num_traits::Float;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::dfs::{xi, Trine};
use crate::qcore::{PureState, NORM_TOL};
use crate::{Error, Result};

/// Coefficients of a logical four-qubit state `α Ξ₁ + β Ξ₃`.
///
/// `⟨Ξ₁|Ξ₃⟩ = −½`, so the state is normalized when
/// `|α|² + |β|² − Re(α* β) = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogicalAmplitudes {
    alpha: Complex64,
    beta: Complex64,
}

fn weight(alpha: Complex64, beta: Complex64) -> f64 {
    alpha.norm_sqr() + beta.norm_sqr() - (alpha.conj() * beta).re
}

impl LogicalAmplitudes {
    /// Accepts coefficients that already satisfy the normalization.
    pub fn new(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let w = weight(alpha, beta);
        if (w - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(w));
        }
        Ok(Self { alpha, beta })
    }

    /// Rescales arbitrary (not both zero) coefficients.
    pub fn normalized(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let w = weight(alpha, beta);
        if w <= 0.0 || !w.is_finite() {
            return Err(Error::NotNormalized(w));
        }
        let s = Float::sqrt(w);
        Ok(Self {
            alpha: alpha / s,
            beta: beta / s,
        })
    }

    /// Unitarily-invariant random logical state.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let mut g = || -> f64 { StandardNormal.sample(rng) };
            let a = Complex64::new(g(), g());
            let b = Complex64::new(g(), g());
            // sample uniformly in an orthonormal frame, then convert to (α, β)
            // with Ξ₁ = e₀ and Ξ₃ = −½ e₀ + (√3/2) e₁
            let h = Float::sqrt(3.0) / 2.0;
            let beta = b / h;
            let alpha = a + beta * 0.5;
            if let Ok(x) = Self::normalized(alpha, beta) {
                return x;
            }
        }
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn beta(&self) -> Complex64 {
        self.beta
    }

    /// `α|Ξ₁⟩ + β|Ξ₃⟩`.
    pub fn encode(&self) -> PureState {
        let (x1, x3) = (xi(Trine::Xi1), xi(Trine::Xi3));
        let amps = x1.amplitudes() * self.alpha + x3.amplitudes() * self.beta;
        PureState::normalized(2, 4, amps).expect("normalized coefficients")
    }
}
