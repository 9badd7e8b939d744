//! Explicit brute-force thresholds. Exceeding one is an error.

use crate::error::{Error, Result};

pub const GUARD_ENV: &str = "TSRFORGE_GUARD_BITS";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Guards {
    /// Candidate-space cap for enumerations and the TSR brute force.
    pub enumeration: u128,
    /// Candidate-space cap for the special-form enumeration.
    pub special: u128,
    /// Cap on q^(m^2) for matrix enumeration.
    pub matrices: u128,
    /// Cap on field orders and on q^(mn) for period computation.
    pub field_order: u128,
    /// Largest m for coset tallies over F_(2^(2m)).
    pub coset_m: u32,
}

impl Default for Guards {
    fn default() -> Self {
        Guards { enumeration: 1 << 22, special: 1 << 24, matrices: 1 << 20, field_order: 1 << 24, coset_m: 14 }
    }
}

impl Guards {
    /// Defaults, with the enumeration cap replaced by `2^bits` when the
    /// environment variable is set.
    pub fn from_env() -> Result<Guards> {
        let mut g = Guards::default();
        if let Ok(v) = std::env::var(GUARD_ENV) {
            let bits: u32 =
                v.trim().parse().map_err(|_| Error::Invalid(format!("{GUARD_ENV}={v} is not an integer")))?;
            g = g.with_enumeration_bits(bits)?;
        }
        Ok(g)
    }

    pub fn with_enumeration_bits(mut self, bits: u32) -> Result<Guards> {
        if !(1..=100).contains(&bits) {
            return Err(Error::Invalid(format!("guard bits {bits} out of range 1..=100")));
        }
        self.enumeration = 1u128 << bits;
        Ok(self)
    }

    pub fn check(what: &'static str, value: u128, limit: u128) -> Result<()> {
        if value > limit {
            return Err(Error::ScaleExceeded { what, value, limit });
        }
        Ok(())
    }
}

/// `base^exp` saturating at `u128::MAX`, for guard comparisons.
pub fn sat_pow(base: u64, exp: u32) -> u128 {
    (base as u128).checked_pow(exp).unwrap_or(u128::MAX)
}
