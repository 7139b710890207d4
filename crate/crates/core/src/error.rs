use thiserror::Error;

/// Errors surfaced by the engine. Exhaustive searches never truncate
/// silently: hitting a budget is always an `Resource` error.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A group, subgroup, morphism or crossed-module axiom failed.
    #[error("structure error: {0}")]
    Structure(String),

    /// A configured order cap was exceeded.
    #[error("{what} has order {value}, exceeding the cap {cap}")]
    Size {
        what: String,
        value: usize,
        cap: usize,
    },

    /// A facet with more than 4 vertices; the calculus stops at tetrahedra.
    #[error("facet with {vertices} vertices; simplices above dimension 3 are not supported")]
    Dimension { vertices: usize },

    /// The complex is not connected over its edges.
    #[error("complex is disconnected; multi-component complexes are not supported")]
    Disconnected,

    /// A cochain was paired with the wrong nerve or coefficient group.
    #[error("mismatch: {0}")]
    Mismatch(String),

    /// A precondition required a cocycle and the input is not one.
    #[error("not a cocycle: {0}")]
    NotCocycle(String),

    /// A search exceeded its node budget.
    #[error("search budget exhausted after {nodes} nodes (budget {budget}); first undecided frontier: {frontier}")]
    Resource {
        nodes: u64,
        budget: u64,
        frontier: String,
    },

    /// An operation was called with arguments outside its contract.
    #[error("usage error: {0}")]
    Usage(String),

    /// Exact integer arithmetic overflowed (should not happen at desk scale).
    #[error("integer overflow in exact arithmetic")]
    Overflow,
}

pub type Result<T> = std::result::Result<T, Error>;
