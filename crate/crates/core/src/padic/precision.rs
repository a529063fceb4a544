use serde::{Deserialize, Serialize};

use super::zp::{checked_pow, is_prime, Zp};
use crate::error::{Error, Result};

/// Extra digits beyond `n_work` that internal computations may use
/// (log series denominators, kernel solving). Validated up front so the
/// pipeline never runs out of modulus halfway through.
pub const INTERNAL_HEADROOM: u32 = 16;

pub const DEFAULT_CHECK_PRECISION: u32 = 16;

/// Prime, working precision, comparison precision and RNG seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionContext {
    pub p: u64,
    pub n_work: u32,
    pub n_check: u32,
    pub seed: u64,
}

/// `ceil(log_p n)` for `n >= 1`.
pub fn ceil_log(p: u64, n: usize) -> u32 {
    let mut k = 0;
    let mut acc = 1usize;
    while acc < n {
        acc *= p as usize;
        k += 1;
    }
    k
}

impl PrecisionContext {
    pub fn new(p: u64, n_work: u32, n_check: u32, seed: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::BadParams(format!("{p} is not prime")));
        }
        if n_check < 1 || n_work <= n_check {
            return Err(Error::InvalidPrecision(format!(
                "need n_work > n_check >= 1, got n_work={n_work}, n_check={n_check}"
            )));
        }
        if checked_pow(p, n_work + INTERNAL_HEADROOM).is_none() {
            return Err(Error::InvalidPrecision(format!(
                "{p}^{} does not fit the 126-bit residue type",
                n_work + INTERNAL_HEADROOM
            )));
        }
        Ok(PrecisionContext { p, n_work, n_check, seed })
    }

    /// Default working precision for a group of the given order:
    /// `n_check + 2*ceil(log_p |G|) + 4`.
    pub fn default_work(p: u64, group_order: usize, n_check: u32) -> u32 {
        n_check + 2 * ceil_log(p, group_order) + 4
    }

    pub fn for_group(p: u64, group_order: usize, n_check: u32, seed: u64) -> Result<Self> {
        Self::new(p, Self::default_work(p, group_order, n_check), n_check, seed)
    }

    pub fn work_ring(&self) -> Zp {
        Zp::new(self.p, self.n_work).expect("validated at construction")
    }

    pub fn check_ring(&self) -> Zp {
        Zp::new(self.p, self.n_check).expect("validated at construction")
    }

    pub fn ring(&self, prec: u32) -> Zp {
        Zp::new(self.p, prec).expect("precision within validated headroom")
    }

    pub fn with_work(&self, n_work: u32) -> Result<Self> {
        Self::new(self.p, n_work, self.n_check, self.seed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_precisions() {
        assert_eq!(PrecisionContext::default_work(2, 8, 16), 26);
        assert_eq!(PrecisionContext::default_work(3, 27, 16), 26);
        assert_eq!(PrecisionContext::default_work(5, 25, 16), 24);
        assert_eq!(PrecisionContext::default_work(2, 1, 16), 20);
    }

    #[test]
    fn rejects_bad_contexts() {
        assert!(PrecisionContext::new(4, 20, 16, 0).is_err());
        assert!(PrecisionContext::new(2, 16, 16, 0).is_err());
        assert!(PrecisionContext::new(2, 20, 0, 0).is_err());
        assert!(PrecisionContext::new(5, 60, 16, 0).is_err());
        assert!(PrecisionContext::new(5, 34, 16, 0).is_ok());
    }
}
