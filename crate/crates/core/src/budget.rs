/// Size and search caps shared by every builder, verifier and oracle.
///
/// Exceeding any of them is reported as [`crate::Error::BudgetExceeded`]; no
/// operation truncates silently.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Budget {
    /// Maximum number of cells a product certificate may cover (or that a
    /// verifier may enumerate).
    pub cells: u64,
    /// Maximum number of search nodes for backtracking searches.
    pub nodes: u64,
    /// Largest `d` tried when looking for a base embedding into `B(d)`.
    pub max_embedding_dim: u32,
    /// Largest `n` for which copies in `B(n)` are enumerated or `B(n)` is
    /// walked element by element.
    pub max_enumeration_dim: u32,
    /// Largest `n` the r-partition builder may choose.
    pub max_weak_dim: u32,
}

impl Budget {
    pub const DEFAULT_CELLS: u64 = 10_000_000;
    pub const DEFAULT_NODES: u64 = 50_000_000;

    pub fn with_cells(mut self, cells: u64) -> Self {
        self.cells = cells;
        self
    }

    pub fn with_nodes(mut self, nodes: u64) -> Self {
        self.nodes = nodes;
        self
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            cells: Self::DEFAULT_CELLS,
            nodes: Self::DEFAULT_NODES,
            max_embedding_dim: 12,
            max_enumeration_dim: 24,
            max_weak_dim: 4096,
        }
    }
}
