//! Minimum cut extraction from a solved residual state.

use std::collections::VecDeque;

use thiserror::Error;

use crate::graph::{Capacity, FlowNetwork};
use crate::seq::sink_distances;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutMode {
    /// Source side = vertices the source reaches in the residual graph.
    /// Requires a complete maximum flow.
    FromSource,
    /// Sink side = vertices that reach the sink in the residual graph.
    /// Also correct for a maximum preflow with stranded excess.
    FromSink,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutSide {
    Source,
    Sink,
}

#[derive(Debug, PartialEq, Eq)]
pub struct CutResult {
    pub side: Vec<CutSide>,
    pub capacity: Capacity,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CutError {
    #[error("sink still reachable from source in the residual graph; flow is not maximum")]
    SinkReachableFromSource,
}

/// Splits the vertices along the residual reachability boundary and sums
/// the original capacities of the crossing edges.
pub fn min_cut(net: &FlowNetwork, mode: CutMode) -> Result<CutResult, CutError> {
    let n = net.vertex_count();
    let side = match mode {
        CutMode::FromSource => {
            let mut reached = vec![false; n];
            let mut queue = VecDeque::new();
            reached[net.source()] = true;
            queue.push_back(net.source());
            while let Some(v) = queue.pop_front() {
                for a in net.out_arcs(v) {
                    let w = net.head(a);
                    if !reached[w] && net.residual_cap(a) > 0 {
                        if w == net.sink() {
                            return Err(CutError::SinkReachableFromSource);
                        }
                        reached[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            reached
                .into_iter()
                .map(|r| if r { CutSide::Source } else { CutSide::Sink })
                .collect::<Vec<_>>()
        }
        CutMode::FromSink => {
            let dist = sink_distances(net);
            // The search never expands the source, so test its arcs directly:
            // any residual source arc into the sink side completes a residual
            // path from source to sink.
            let reaches = net
                .out_arcs(net.source())
                .any(|a| net.residual_cap(a) > 0 && dist[net.head(a)] < n as u32);
            if reaches {
                return Err(CutError::SinkReachableFromSource);
            }
            dist.into_iter()
                .map(|d| if d < n as u32 { CutSide::Sink } else { CutSide::Source })
                .collect::<Vec<_>>()
        }
    };
    let mut capacity = 0i64;
    for v in 0..n {
        if side[v] != CutSide::Source {
            continue;
        }
        for a in net.out_arcs(v) {
            if net.is_forward(a) && side[net.head(a)] == CutSide::Sink {
                capacity += net.original_cap(a);
            }
        }
    }
    Ok(CutResult { side, capacity })
}
