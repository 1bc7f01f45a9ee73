//! Size ceilings for exhaustive enumerations.

use crate::error::{Error, Result};

/// Environment variable overriding both ambient-dimension ceilings.
pub const MAX_M_ENV: &str = "RM_SRR_MAX_M";

pub const DEFAULT_MAX_M_GEOMETRIC: u32 = 5;
pub const DEFAULT_MAX_M_ORACLE: u32 = 4;

/// The brute-force oracle scans `2^n` subsets; `n = 32` is the last size that finishes.
pub const HARD_MAX_M_ORACLE: u32 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest `m` for subspace and flat enumeration.
    pub max_m_geometric: u32,
    /// Largest `m` for the `2^n` subset scan.
    pub max_m_oracle: u32,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_m_geometric: DEFAULT_MAX_M_GEOMETRIC,
            max_m_oracle: DEFAULT_MAX_M_ORACLE,
        }
    }
}

impl Limits {
    /// Defaults, overridden by `RM_SRR_MAX_M` when it parses as an integer.
    pub fn from_env() -> Self {
        match std::env::var(MAX_M_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<u32>().ok())
        {
            Some(v) => Limits {
                max_m_geometric: v,
                max_m_oracle: v.min(HARD_MAX_M_ORACLE),
            },
            None => Limits::default(),
        }
    }

    /// Refuses subspace and flat enumeration above the geometric ceiling.
    pub fn check_geometric(&self, m: u32) -> Result<()> {
        check(
            "geometric enumeration (ambient dimension m)",
            m,
            self.max_m_geometric,
        )
    }

    /// Refuses the brute-force subset scan above the oracle ceiling.
    pub fn check_oracle(&self, m: u32) -> Result<()> {
        check(
            "brute-force recovery-set oracle (ambient dimension m)",
            m,
            self.max_m_oracle,
        )
    }
}

fn check(what: &'static str, m: u32, limit: u32) -> Result<()> {
    if m > limit {
        return Err(Error::Capacity {
            what,
            requested: m as usize,
            limit: limit as usize,
        });
    }
    Ok(())
}
