//! Result types shared by the preflow solvers.

/// Operation counters accumulated over one solve.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub pushes: u64,
    pub relabels: u64,
    pub global_relabels: u64,
    /// Relabel work in the global-relabeling currency: out-degree plus a
    /// constant per relabel pass.
    pub work: u64,
    /// Bulk iterations for the parallel solver, discharges for the
    /// sequential one.
    pub iterations: u64,
}

/// Outcome of a preflow computation. The flow itself stays in the network's
/// residual state; `value` is the net inflow at the sink.
#[derive(Debug, Clone)]
pub struct PreflowResult {
    pub value: i64,
    pub labels: Vec<u32>,
    pub stats: SolveStats,
}
