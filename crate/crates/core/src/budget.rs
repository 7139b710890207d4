/// Resource limits for the exhaustive searches.
///
/// Every enumeration in the engine is exhaustive-or-error: when a limit is
/// hit the operation fails with [`crate::Error::Resource`] instead of
/// returning a truncated answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Maximum number of backtrack nodes per search.
    pub max_nodes: u64,
    /// Maximum group order accepted from generator closures.
    pub group_order_cap: usize,
    /// Maximum group order for automorphism-group searches.
    pub aut_order_cap: usize,
}

impl Budget {
    pub const DEFAULT_MAX_NODES: u64 = 10_000_000;
    pub const DEFAULT_GROUP_ORDER_CAP: usize = 512;
    pub const DEFAULT_AUT_ORDER_CAP: usize = 64;

    pub fn with_max_nodes(mut self, max_nodes: u64) -> Self {
        self.max_nodes = max_nodes;
        self
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_nodes: Self::DEFAULT_MAX_NODES,
            group_order_cap: Self::DEFAULT_GROUP_ORDER_CAP,
            aut_order_cap: Self::DEFAULT_AUT_ORDER_CAP,
        }
    }
}

/// Deterministic counters reported alongside search results.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Backtrack nodes visited.
    pub nodes: u64,
    /// Candidates that passed all constraints.
    pub solutions: u64,
}

impl SearchStats {
    pub fn merge(self, other: SearchStats) -> SearchStats {
        SearchStats {
            nodes: self.nodes + other.nodes,
            solutions: self.solutions + other.solutions,
        }
    }
}
