//! Size caps for group closure and bar-resolution computations.

/// Environment variable overriding every size cap at once.
pub const MAX_GROUP_ORDER_ENV: &str = "FLASQUE_LAB_MAX_GROUP_ORDER";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest group produced by permutation closure or accepted as a table.
    pub max_group_order: usize,
    /// Largest group on which degree-2 cohomology is computed from normalized
    /// bar cochains.
    pub max_bar_order: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_group_order: 512,
            max_bar_order: 12,
        }
    }
}

impl Limits {
    /// Defaults, with both caps replaced by `FLASQUE_LAB_MAX_GROUP_ORDER` when it
    /// holds a positive integer.
    pub fn from_env() -> Self {
        match std::env::var(MAX_GROUP_ORDER_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&v| v > 0)
        {
            Some(v) => Limits {
                max_group_order: v,
                max_bar_order: v,
            },
            None => Limits::default(),
        }
    }
}
