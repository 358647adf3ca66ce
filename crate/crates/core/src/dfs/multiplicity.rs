use alloc::collections::BTreeMap;
use core::fmt;
use core::str::FromStr;

use crate::{Error, Result};

/// Largest ensemble size whose multiplicities are guaranteed to fit in `u64`.
const MAX_SITES: u32 = 64;

/// A spin quantum number `j`, stored as the integer `2j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpinLabel(u32);

impl SpinLabel {
    pub const ZERO: Self = Self(0);
    pub const HALF: Self = Self(1);

    pub fn from_twice(twice_j: u32) -> Self {
        Self(twice_j)
    }

    pub fn twice(self) -> u32 {
        self.0
    }

    /// `2j + 1`.
    pub fn degeneracy(self) -> u64 {
        self.0 as u64 + 1
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }
}

impl fmt::Display for SpinLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_multiple_of(2) {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Accepts `"1"`, `"3/2"` and `"1.5"`.
impl FromStr for SpinLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = Error::InvalidArgument("spin must be a non-negative integer or half-integer");
        let s = s.trim();
        if let Some((num, den)) = s.split_once('/') {
            let num: u32 = num.trim().parse().map_err(|_| bad.clone())?;
            return match den.trim() {
                "1" => Ok(Self(2 * num)),
                "2" => Ok(Self(num)),
                _ => Err(bad),
            };
        }
        if let Ok(k) = s.parse::<u32>() {
            return Ok(Self(2 * k));
        }
        let x: f64 = s.parse().map_err(|_| bad.clone())?;
        let twice = x * 2.0;
        if !(0.0..=u32::MAX as f64).contains(&twice) || twice != (twice as u32) as f64 {
            return Err(bad);
        }
        Ok(Self(twice as u32))
    }
}

fn binomial(n: u32, k: u32) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Number of spin-`j` irreducible copies in `n` spin-½ particles:
/// `K^j_n = (2j+1)/(n/2+j+1) · C(n, n/2+j)`.
///
/// Returns 0 when `j` exceeds `n/2` or has the wrong parity.
pub fn multiplicity(n: u32, j: SpinLabel) -> Result<u64> {
    if n > MAX_SITES {
        return Err(Error::InvalidArgument(
            "multiplicity supports at most 64 particles",
        ));
    }
    let t = j.twice();
    if t > n || !(n + t).is_multiple_of(2) {
        return Ok(0);
    }
    let k = (n + t) / 2;
    let value = binomial(n, k) * (t as u128 + 1) / (k as u128 + 1);
    Ok(value as u64)
}

/// All non-zero multiplicities `K^j_n` for one `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicityTable {
    n: u32,
    entries: BTreeMap<SpinLabel, u64>,
}

impl MultiplicityTable {
    pub fn new(n: u32) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for t in (n % 2..=n).step_by(2) {
            let j = SpinLabel::from_twice(t);
            entries.insert(j, multiplicity(n, j)?);
        }
        Ok(Self { n, entries })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn entries(&self) -> &BTreeMap<SpinLabel, u64> {
        &self.entries
    }

    pub fn get(&self, j: SpinLabel) -> u64 {
        self.entries.get(&j).copied().unwrap_or(0)
    }

    /// `Σ_j (2j+1) K^j_n`, which must equal `2^n`.
    pub fn completeness_sum(&self) -> u128 {
        self.entries
            .iter()
            .map(|(j, &k)| j.degeneracy() as u128 * k as u128)
            .sum()
    }
}
