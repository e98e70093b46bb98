//! Sequential solvers and flow post-processing.

pub mod cut;
pub mod decompose;
pub mod edmonds_karp;
pub mod fifo;

pub use cut::{min_cut, CutError, CutMode, CutResult, CutSide};
pub use decompose::{preflow_to_flow, DecomposeError};
pub use edmonds_karp::solve_edmonds_karp;
pub use fifo::solve_fifo;

use std::collections::VecDeque;

use crate::graph::FlowNetwork;

/// Exact residual distance to the sink for every vertex, `n` when the sink
/// is unreachable. The source is never expanded and always gets `n`.
/// Plain reverse breadth-first search; vertex `w` is one level above `v`
/// when the arc (w, v) has residual capacity, which is the reverse of an
/// arc in v's adjacency.
pub(crate) fn sink_distances(net: &FlowNetwork) -> Vec<u32> {
    let n = net.vertex_count();
    let unreached = n as u32;
    let mut dist = vec![unreached; n];
    let mut queue = VecDeque::new();
    dist[net.sink()] = 0;
    queue.push_back(net.sink());
    while let Some(v) = queue.pop_front() {
        for a in net.out_arcs(v) {
            let w = net.head(a);
            if w == net.source() {
                continue;
            }
            if dist[w] == unreached && net.residual_cap(net.reverse(a)) > 0 {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}
