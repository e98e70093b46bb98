//! Shortest-augmenting-path solver, the reference the other solvers are
//! checked against. Takes a different algorithmic route than push-relabel:
//! repeated breadth-first searches, each augmenting one s-t path.

use std::collections::VecDeque;

use crate::graph::{FlowAssignment, FlowNetwork};

const NO_ARC: u32 = u32::MAX;

/// Runs to completion and reads the flow off the residual state. The
/// network must start with untouched residuals.
pub fn solve_edmonds_karp(net: &FlowNetwork) -> FlowAssignment {
    let n = net.vertex_count();
    let (s, t) = (net.source(), net.sink());
    let mut pred = vec![NO_ARC; n];
    let mut queue = VecDeque::new();
    loop {
        pred.fill(NO_ARC);
        queue.clear();
        queue.push_back(s);
        'bfs: while let Some(v) = queue.pop_front() {
            for a in net.out_arcs(v) {
                let w = net.head(a);
                if w != s && pred[w] == NO_ARC && net.residual_cap(a) > 0 {
                    pred[w] = a as u32;
                    if w == t {
                        break 'bfs;
                    }
                    queue.push_back(w);
                }
            }
        }
        if pred[t] == NO_ARC {
            break;
        }
        let mut bottleneck = i64::MAX;
        let mut v = t;
        while v != s {
            let a = pred[v] as usize;
            bottleneck = bottleneck.min(net.residual_cap(a));
            v = net.head(net.reverse(a));
        }
        let mut v = t;
        while v != s {
            let a = pred[v] as usize;
            net.push_on_arc(a, bottleneck);
            v = net.head(net.reverse(a));
        }
    }
    net.extract_flow()
}
