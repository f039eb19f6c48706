use serde::Serialize;

use crate::{Error, Result};

/// Running-time estimate for decomposing an `N`-variable formula down to
/// blocks of `n0` variables.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CostEstimate {
    pub total_vars: u64,
    pub n0: u64,
    /// `N div n0`
    pub depth: u64,
    /// `N mod n0`, the size of the last block.
    pub remainder: u64,
    /// Average time to enumerate all solutions of a leaf.
    pub leaf_time: f64,
    /// Average time of one substitution round.
    pub substitution_time: f64,
    /// `leaf_time^depth + depth * substitution_time`
    pub total: f64,
}

pub fn estimate_cost(
    total_vars: u64,
    n0: u64,
    leaf_time: f64,
    substitution_time: f64,
) -> Result<CostEstimate> {
    if n0 < 1 {
        return Err(Error::Usage("n0 must be at least 1".into()));
    }
    if !(leaf_time >= 0.0 && substitution_time >= 0.0) {
        return Err(Error::Usage("timing constants must be nonnegative".into()));
    }
    let depth = total_vars / n0;
    let remainder = total_vars % n0;
    let power = match i32::try_from(depth) {
        Ok(d) => leaf_time.powi(d),
        Err(_) => leaf_time.powf(depth as f64),
    };
    Ok(CostEstimate {
        total_vars,
        n0,
        depth,
        remainder,
        leaf_time,
        substitution_time,
        total: power + depth as f64 * substitution_time,
    })
}
