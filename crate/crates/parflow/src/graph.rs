//! Flow network stored as a compressed adjacency structure.
//!
//! Every input edge is materialized as a pair of directed arcs: the edge
//! itself (carrying the input capacity) and a zero-capacity reverse arc.
//! `reverse_arc` maps each arc to its partner and a push moves capacity
//! between the two `residual_cap` slots of one pair, so
//! `residual_cap[a] + residual_cap[reverse_arc[a]]` is constant for the
//! lifetime of the network.
//!
//! Residual capacities live in atomics so solver phases may update disjoint
//! arc pairs from worker threads. All accesses use relaxed ordering; the
//! phase barriers inside the solvers provide cross-thread visibility.

use std::sync::atomic::{AtomicI64, Ordering};

use thiserror::Error;

/// Capacities, flows and excesses. Signed so flows can be antisymmetric.
pub type Capacity = i64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BuildError {
    #[error("network needs at least 2 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("source and sink are both vertex {0}")]
    SourceEqualsSink(usize),
    #[error("vertex {vertex} out of range for {vertex_count} vertices")]
    VertexOutOfRange { vertex: usize, vertex_count: usize },
    #[error("negative capacity {cap} on edge ({tail}, {head})")]
    NegativeCapacity { tail: usize, head: usize, cap: i64 },
}

/// Directed flow network with paired arcs and mutable residual capacities.
#[derive(Debug)]
pub struct FlowNetwork {
    vertex_count: usize,
    source: usize,
    sink: usize,
    /// Arc offsets per vertex, length `vertex_count + 1`.
    first_out: Vec<u32>,
    arc_head: Vec<u32>,
    reverse_arc: Vec<u32>,
    /// Input capacity on forward arcs, 0 on reverse arcs. Immutable.
    original_cap: Vec<Capacity>,
    residual_cap: Vec<AtomicI64>,
}

impl FlowNetwork {
    /// Builds the paired-arc structure from an edge list. Edges with zero
    /// capacity and self-loops are dropped, since neither can carry any
    /// source to sink flow; parallel edges stay distinct arc pairs.
    pub fn build(
        vertex_count: usize,
        source: usize,
        sink: usize,
        edges: &[(usize, usize, Capacity)],
    ) -> Result<Self, BuildError> {
        if vertex_count < 2 {
            return Err(BuildError::TooFewVertices(vertex_count));
        }
        for &v in &[source, sink] {
            if v >= vertex_count {
                return Err(BuildError::VertexOutOfRange { vertex: v, vertex_count });
            }
        }
        if source == sink {
            return Err(BuildError::SourceEqualsSink(source));
        }
        let mut degree = vec![0u32; vertex_count];
        let mut kept = 0usize;
        for &(tail, head, cap) in edges {
            for &v in &[tail, head] {
                if v >= vertex_count {
                    return Err(BuildError::VertexOutOfRange { vertex: v, vertex_count });
                }
            }
            if cap < 0 {
                return Err(BuildError::NegativeCapacity { tail, head, cap });
            }
            if cap == 0 || tail == head {
                continue;
            }
            degree[tail] += 1;
            degree[head] += 1;
            kept += 1;
        }
        let arc_count = kept * 2;
        // Ids are stored in u32 arrays; u32::MAX doubles as a sentinel.
        assert!(vertex_count < u32::MAX as usize, "vertex count too large");
        assert!(arc_count < u32::MAX as usize, "arc count too large");
        let mut first_out = vec![0u32; vertex_count + 1];
        for v in 0..vertex_count {
            first_out[v + 1] = first_out[v] + degree[v];
        }
        let mut cursor: Vec<u32> = first_out[..vertex_count].to_vec();
        let mut arc_head = vec![0u32; arc_count];
        let mut reverse_arc = vec![0u32; arc_count];
        let mut original_cap = vec![0i64; arc_count];
        for &(tail, head, cap) in edges {
            if cap == 0 || tail == head {
                continue;
            }
            let fwd = cursor[tail] as usize;
            cursor[tail] += 1;
            let rev = cursor[head] as usize;
            cursor[head] += 1;
            arc_head[fwd] = head as u32;
            arc_head[rev] = tail as u32;
            reverse_arc[fwd] = rev as u32;
            reverse_arc[rev] = fwd as u32;
            original_cap[fwd] = cap;
        }
        let residual_cap = original_cap.iter().map(|&c| AtomicI64::new(c)).collect();
        Ok(FlowNetwork {
            vertex_count,
            source,
            sink,
            first_out,
            arc_head,
            reverse_arc,
            original_cap,
            residual_cap,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Directed arcs, twice the number of kept input edges.
    pub fn arc_count(&self) -> usize {
        self.arc_head.len()
    }

    /// Kept input edges.
    pub fn edge_count(&self) -> usize {
        self.arc_head.len() / 2
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    pub fn out_arcs(&self, v: usize) -> std::ops::Range<usize> {
        self.first_out[v] as usize..self.first_out[v + 1] as usize
    }

    pub fn out_degree(&self, v: usize) -> usize {
        (self.first_out[v + 1] - self.first_out[v]) as usize
    }

    pub fn head(&self, arc: usize) -> usize {
        self.arc_head[arc] as usize
    }

    pub fn reverse(&self, arc: usize) -> usize {
        self.reverse_arc[arc] as usize
    }

    pub fn original_cap(&self, arc: usize) -> Capacity {
        self.original_cap[arc]
    }

    pub fn residual_cap(&self, arc: usize) -> Capacity {
        self.residual_cap[arc].load(Ordering::Relaxed)
    }

    /// True for the arc of a pair that carries the input edge. Exactly one
    /// arc per pair is forward because zero-capacity edges are dropped.
    pub fn is_forward(&self, arc: usize) -> bool {
        self.original_cap[arc] > 0
    }

    /// Moves `delta` units of residual capacity from `arc` to its partner.
    /// Callers must not exceed the available residual capacity.
    pub fn push_on_arc(&self, arc: usize, delta: Capacity) {
        debug_assert!(delta >= 0, "negative push of {delta} on arc {arc}");
        let before = self.residual_cap[arc].fetch_sub(delta, Ordering::Relaxed);
        assert!(
            before >= delta,
            "push of {delta} exceeds residual {before} on arc {arc}"
        );
        self.residual_cap[self.reverse(arc)].fetch_add(delta, Ordering::Relaxed);
    }

    /// Restores the untouched residual state (all flow removed).
    pub fn reset_residuals(&self) {
        for (slot, &cap) in self.residual_cap.iter().zip(&self.original_cap) {
            slot.store(cap, Ordering::Relaxed);
        }
    }

    /// Net inflow per vertex under the current residual state.
    pub fn excesses(&self) -> Vec<Capacity> {
        let mut excess = vec![0i64; self.vertex_count];
        for arc in 0..self.arc_count() {
            excess[self.head(arc)] += self.original_cap[arc] - self.residual_cap(arc);
        }
        excess
    }

    /// Reads the flow off the residual state. `flow[a]` is antisymmetric
    /// across each arc pair; `value` is the net inflow at the sink.
    pub fn extract_flow(&self) -> FlowAssignment {
        let flow: Vec<i64> = (0..self.arc_count())
            .map(|a| self.original_cap[a] - self.residual_cap(a))
            .collect();
        // Net inflow at the sink equals the negated flow on the arcs the
        // sink owns, since each pair's flows cancel.
        let value = self.out_arcs(self.sink).map(|a| -flow[a]).sum();
        FlowAssignment { flow, value }
    }

    /// Forward arcs in owner-major adjacency order as (tail, head, cap).
    pub fn forward_edges(&self) -> impl Iterator<Item = (usize, usize, Capacity)> + '_ {
        (0..self.vertex_count).flat_map(move |v| {
            self.out_arcs(v).filter_map(move |a| {
                self.is_forward(a)
                    .then(|| (v, self.head(a), self.original_cap[a]))
            })
        })
    }

    /// Same vertices, endpoints and multiset of capacitated edges.
    pub fn structurally_equal(&self, other: &FlowNetwork) -> bool {
        if self.vertex_count != other.vertex_count
            || self.source != other.source
            || self.sink != other.sink
            || self.arc_count() != other.arc_count()
        {
            return false;
        }
        let mut mine: Vec<_> = self.forward_edges().collect();
        let mut theirs: Vec<_> = other.forward_edges().collect();
        mine.sort_unstable();
        theirs.sort_unstable();
        mine == theirs
    }

    /// Checks an assignment for capacity, antisymmetry and conservation
    /// violations. With `allow_excess` only negative excess is an error
    /// (preflow check); otherwise interior vertices must balance exactly.
    pub fn validate(&self, assignment: &FlowAssignment, allow_excess: bool) -> ValidationReport {
        let mut violations = Vec::new();
        if assignment.flow.len() != self.arc_count() {
            violations.push(Violation::WrongArcCount {
                got: assignment.flow.len(),
                expected: self.arc_count(),
            });
            return ValidationReport { violations };
        }
        for arc in 0..self.arc_count() {
            let f = assignment.flow[arc];
            if f > self.original_cap[arc] {
                violations.push(Violation::CapacityExceeded {
                    arc,
                    flow: f,
                    cap: self.original_cap[arc],
                });
            }
            let rev = self.reverse(arc);
            if arc < rev && f + assignment.flow[rev] != 0 {
                violations.push(Violation::AntisymmetryBroken { arc, reverse: rev });
            }
        }
        let mut excess = vec![0i64; self.vertex_count];
        for v in 0..self.vertex_count {
            for a in self.out_arcs(v) {
                excess[self.head(a)] += assignment.flow[a];
            }
        }
        for v in 0..self.vertex_count {
            if v == self.source {
                continue;
            }
            if excess[v] < 0 {
                violations.push(Violation::NegativeExcess { vertex: v, excess: excess[v] });
            } else if !allow_excess && v != self.sink && excess[v] != 0 {
                violations.push(Violation::ConservationBroken { vertex: v, excess: excess[v] });
            }
        }
        if excess[self.sink] != assignment.value {
            violations.push(Violation::ValueMismatch {
                claimed: assignment.value,
                actual: excess[self.sink],
            });
        }
        ValidationReport { violations }
    }
}

/// Per-arc flow values plus the resulting value at the sink.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowAssignment {
    pub flow: Vec<i64>,
    pub value: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    WrongArcCount { got: usize, expected: usize },
    CapacityExceeded { arc: usize, flow: i64, cap: i64 },
    AntisymmetryBroken { arc: usize, reverse: usize },
    NegativeExcess { vertex: usize, excess: i64 },
    ConservationBroken { vertex: usize, excess: i64 },
    ValueMismatch { claimed: i64, actual: i64 },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::WrongArcCount { got, expected } => {
                write!(f, "assignment covers {got} arcs, network has {expected}")
            }
            Violation::CapacityExceeded { arc, flow, cap } => {
                write!(f, "flow {flow} exceeds capacity {cap} on arc {arc}")
            }
            Violation::AntisymmetryBroken { arc, reverse } => {
                write!(f, "flow on arcs {arc} and {reverse} does not cancel")
            }
            Violation::NegativeExcess { vertex, excess } => {
                write!(f, "vertex {vertex} has negative excess {excess}")
            }
            Violation::ConservationBroken { vertex, excess } => {
                write!(f, "vertex {vertex} holds excess {excess}")
            }
            Violation::ValueMismatch { claimed, actual } => {
                write!(f, "claimed value {claimed}, sink inflow {actual}")
            }
        }
    }
}

#[derive(Debug)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// 0 -> {1,2}, 1 -> {2,3}, 2 -> 3. Max flow from 0 to 3 is 6.
    fn diamond() -> FlowNetwork {
        FlowNetwork::build(
            4,
            0,
            3,
            &[(0, 1, 4), (0, 2, 2), (1, 2, 3), (1, 3, 1), (2, 3, 6)],
        )
        .unwrap()
    }

    #[test]
    fn build_pairs_arcs() {
        let net = diamond();
        assert_eq!(net.vertex_count(), 4);
        assert_eq!(net.edge_count(), 5);
        assert_eq!(net.arc_count(), 10);
        for arc in 0..net.arc_count() {
            let rev = net.reverse(arc);
            assert_ne!(arc, rev);
            assert_eq!(net.reverse(rev), arc, "reverse is not an involution");
            assert!(net.is_forward(arc) ^ net.is_forward(rev));
        }
        assert_eq!(net.out_degree(0), 2);
        assert_eq!(net.out_degree(1), 3);
        assert_eq!(net.out_degree(2), 3);
        assert_eq!(net.out_degree(3), 2);
    }

    #[test]
    fn zero_capacity_edges_are_dropped() {
        let net = FlowNetwork::build(3, 0, 2, &[(0, 1, 5), (1, 2, 0), (1, 2, 7)]).unwrap();
        assert_eq!(net.edge_count(), 2);
        let edges: Vec<_> = net.forward_edges().collect();
        assert_eq!(edges, vec![(0, 1, 5), (1, 2, 7)]);
    }

    #[test]
    fn self_loops_are_dropped() {
        let net = FlowNetwork::build(3, 0, 2, &[(0, 1, 5), (1, 1, 9), (1, 2, 7)]).unwrap();
        assert_eq!(net.edge_count(), 2);
        let edges: Vec<_> = net.forward_edges().collect();
        assert_eq!(edges, vec![(0, 1, 5), (1, 2, 7)]);
    }

    #[test]
    fn parallel_edges_stay_distinct() {
        let net = FlowNetwork::build(2, 0, 1, &[(0, 1, 3), (0, 1, 4)]).unwrap();
        assert_eq!(net.edge_count(), 2);
        let caps: Vec<i64> = net.out_arcs(0).map(|a| net.original_cap(a)).collect();
        assert_eq!(caps, vec![3, 4]);
    }

    #[test]
    fn build_rejects_bad_input() {
        assert_eq!(
            FlowNetwork::build(1, 0, 0, &[]).unwrap_err(),
            BuildError::TooFewVertices(1)
        );
        assert_eq!(
            FlowNetwork::build(3, 1, 1, &[]).unwrap_err(),
            BuildError::SourceEqualsSink(1)
        );
        assert_eq!(
            FlowNetwork::build(3, 0, 3, &[]).unwrap_err(),
            BuildError::VertexOutOfRange { vertex: 3, vertex_count: 3 }
        );
        assert_eq!(
            FlowNetwork::build(3, 0, 2, &[(0, 5, 1)]).unwrap_err(),
            BuildError::VertexOutOfRange { vertex: 5, vertex_count: 3 }
        );
        assert_eq!(
            FlowNetwork::build(3, 0, 2, &[(0, 1, -2)]).unwrap_err(),
            BuildError::NegativeCapacity { tail: 0, head: 1, cap: -2 }
        );
    }

    #[test]
    fn push_preserves_pair_sum() {
        let net = diamond();
        let arc = net.out_arcs(0).next().unwrap();
        let rev = net.reverse(arc);
        let total = net.residual_cap(arc) + net.residual_cap(rev);
        net.push_on_arc(arc, 3);
        assert_eq!(net.residual_cap(arc), 1);
        assert_eq!(net.residual_cap(rev), 3);
        assert_eq!(net.residual_cap(arc) + net.residual_cap(rev), total);
        // Pushing back on the reverse arc undoes the move.
        net.push_on_arc(rev, 3);
        assert_eq!(net.residual_cap(arc), 4);
        assert_eq!(net.residual_cap(rev), 0);
    }

    #[test]
    #[should_panic(expected = "exceeds residual")]
    fn push_beyond_residual_is_rejected() {
        let net = diamond();
        let arc = net.out_arcs(0).next().unwrap();
        net.push_on_arc(arc, 5);
    }

    #[test]
    fn reset_restores_original_capacities() {
        let net = diamond();
        let arc = net.out_arcs(0).next().unwrap();
        net.push_on_arc(arc, 2);
        net.reset_residuals();
        for a in 0..net.arc_count() {
            assert_eq!(net.residual_cap(a), net.original_cap(a));
        }
    }

    #[test]
    fn extract_flow_is_antisymmetric() {
        let net = diamond();
        // Route 1 unit along 0 -> 1 -> 3.
        let a01 = net.out_arcs(0).find(|&a| net.head(a) == 1).unwrap();
        let a13 = net
            .out_arcs(1)
            .find(|&a| net.head(a) == 3 && net.is_forward(a))
            .unwrap();
        net.push_on_arc(a01, 1);
        net.push_on_arc(a13, 1);
        let assignment = net.extract_flow();
        assert_eq!(assignment.value, 1);
        for arc in 0..net.arc_count() {
            assert_eq!(
                assignment.flow[arc],
                -assignment.flow[net.reverse(arc)],
                "antisymmetry broken on arc {arc}"
            );
        }
        assert!(net.validate(&assignment, false).is_valid());
    }

    #[test]
    fn validate_flags_stranded_excess() {
        let net = diamond();
        let a01 = net.out_arcs(0).find(|&a| net.head(a) == 1).unwrap();
        net.push_on_arc(a01, 2);
        let assignment = net.extract_flow();
        let report = net.validate(&assignment, false);
        assert!(!report.is_valid());
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::ConservationBroken { vertex: 1, excess: 2 })));
        // The same state is a legal preflow.
        assert!(net.validate(&assignment, true).is_valid());
    }

    #[test]
    fn validate_flags_value_mismatch() {
        let net = diamond();
        let mut assignment = net.extract_flow();
        assignment.value = 3;
        let report = net.validate(&assignment, false);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::ValueMismatch { claimed: 3, actual: 0 })));
    }

    #[test]
    fn validate_flags_capacity_and_antisymmetry() {
        let net = diamond();
        let mut assignment = net.extract_flow();
        let a01 = net.out_arcs(0).find(|&a| net.head(a) == 1).unwrap();
        assignment.flow[a01] = 9;
        let report = net.validate(&assignment, true);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::CapacityExceeded { flow: 9, cap: 4, .. })));
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::AntisymmetryBroken { .. })));
    }

    #[test]
    fn structural_equality_ignores_edge_order() {
        let a = FlowNetwork::build(3, 0, 2, &[(0, 1, 5), (1, 2, 7)]).unwrap();
        let b = FlowNetwork::build(3, 0, 2, &[(1, 2, 7), (0, 1, 5)]).unwrap();
        let c = FlowNetwork::build(3, 0, 2, &[(0, 1, 5), (1, 2, 8)]).unwrap();
        assert!(a.structurally_equal(&b));
        assert!(!a.structurally_equal(&c));
    }

    #[test]
    fn excesses_track_pushes() {
        let net = diamond();
        let a01 = net.out_arcs(0).find(|&a| net.head(a) == 1).unwrap();
        net.push_on_arc(a01, 3);
        let excess = net.excesses();
        assert_eq!(excess[1], 3);
        assert_eq!(excess[0], -3);
        assert_eq!(excess.iter().sum::<i64>(), 0);
    }
}
