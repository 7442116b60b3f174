//! Depth guards. `TENTLAB_MAX_DEPTH` replaces every default bound when set.

use crate::error::{Error, Result};

pub const ENV_MAX_DEPTH: &str = "TENTLAB_MAX_DEPTH";

pub const PREIMAGE_DEPTH: u32 = 20;
pub const SLOPE_DEPTH: u32 = 24;
pub const BRUTE_FORCE_FULL_DEPTH: u32 = 3;
pub const BRUTE_FORCE_DEPTH: u32 = 5;
pub const CONTINUABLE_DEPTH: u32 = 10;
/// the extension count has about `2^(n+1)` bits
pub const COUNT_AUDIT_DEPTH: u32 = 16;
pub const CONJUGACY_EXPLICIT_DEPTH: u32 = 24;
pub const CONJUGACY_AGGREGATE_DEPTH: u32 = 10_000;
pub const DENSITY_DEPTH: u32 = 16;

pub fn bound(default: u32) -> u32 {
    std::env::var(ENV_MAX_DEPTH)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(default)
}

pub fn check(requested: u32, default: u32) -> Result<()> {
    let bound = bound(default);
    if requested > bound {
        Err(Error::DepthExceeded { requested, bound })
    } else {
        Ok(())
    }
}
