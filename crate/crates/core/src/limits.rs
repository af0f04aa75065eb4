//! Size caps that turn runaway inputs into clean errors.

use std::env;

pub const DEFAULT_MAX_CYCLO_ORDER: u64 = 10_000;
pub const DEFAULT_MAX_LATTICE_POINTS: u128 = 10_000_000;

pub const ENV_MAX_CYCLO_ORDER: &str = "LE_MAX_CYCLO_ORDER";
pub const ENV_MAX_LATTICE_POINTS: &str = "LE_MAX_LATTICE_POINTS";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_cyclo_order: u64,
    pub max_lattice_points: u128,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_cyclo_order: DEFAULT_MAX_CYCLO_ORDER,
            max_lattice_points: DEFAULT_MAX_LATTICE_POINTS,
        }
    }
}

impl Limits {
    /// Defaults overridden by `LE_MAX_CYCLO_ORDER` / `LE_MAX_LATTICE_POINTS`.
    /// Unparseable values are ignored.
    pub fn from_env() -> Self {
        let mut limits = Limits::default();
        if let Some(v) = env::var(ENV_MAX_CYCLO_ORDER)
            .ok()
            .and_then(|s| s.parse().ok())
        {
            limits.max_cyclo_order = v;
        }
        if let Some(v) = env::var(ENV_MAX_LATTICE_POINTS)
            .ok()
            .and_then(|s| s.parse().ok())
        {
            limits.max_lattice_points = v;
        }
        limits
    }
}
