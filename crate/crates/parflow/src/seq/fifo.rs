//! Sequential FIFO push-relabel with periodic exact relabeling.
//!
//! Active vertices are discharged in queue order. Global relabeling runs on
//! the same work-counter schedule as the parallel solver so the two are
//! comparable in benchmark output.

use std::collections::VecDeque;

use crate::graph::FlowNetwork;
use crate::par::GrPolicy;
use crate::result::{PreflowResult, SolveStats};
use crate::seq::sink_distances;

/// Computes a maximum preflow. The network must start with untouched
/// residuals; the flow ends up in its residual state.
pub fn solve_fifo(net: &FlowNetwork, gr: &GrPolicy) -> PreflowResult {
    let n = net.vertex_count();
    let m = net.edge_count();
    let (s, t) = (net.source(), net.sink());
    let dead = n as u32;
    let mut d = vec![0u32; n];
    let mut excess = vec![0i64; n];
    let mut cur = vec![0u32; n];
    let mut in_queue = vec![false; n];
    let mut queue: VecDeque<usize> = VecDeque::new();
    let mut stats = SolveStats::default();

    d[s] = dead;
    for a in net.out_arcs(s) {
        let delta = net.residual_cap(a);
        if delta > 0 {
            net.push_on_arc(a, delta);
            excess[net.head(a)] += delta;
            stats.pushes += 1;
        }
    }

    // Saturating the source counts as no work yet the first trigger check
    // must fire, so the solve starts from exact labels.
    let mut work_since = gr.initial_work(n, m);
    loop {
        if gr.should_trigger(work_since, n, m) {
            work_since = 0;
            stats.global_relabels += 1;
            d = sink_distances(net);
            d[s] = dead;
            cur.fill(0);
            in_queue.fill(false);
            queue.clear();
            for v in 0..n {
                if v != s && v != t && excess[v] > 0 && d[v] < dead {
                    queue.push_back(v);
                    in_queue[v] = true;
                }
            }
        }
        let Some(v) = queue.pop_front() else { break };
        in_queue[v] = false;
        if excess[v] == 0 || d[v] >= dead {
            continue;
        }
        stats.iterations += 1;
        let arcs = net.out_arcs(v);
        let degree = arcs.len() as u32;
        loop {
            if cur[v] == degree {
                // Arc list exhausted: lift v to one above its lowest
                // residual neighbor and rescan.
                let mut new_label = dead;
                for a in net.out_arcs(v) {
                    if net.residual_cap(a) > 0 {
                        new_label = new_label.min(d[net.head(a)] + 1);
                    }
                }
                debug_assert!(new_label > d[v], "relabel must raise the label");
                stats.relabels += 1;
                let spent = degree as u64 + gr.work_beta;
                work_since += spent;
                stats.work += spent;
                cur[v] = 0;
                if new_label >= dead {
                    d[v] = dead;
                    break;
                }
                d[v] = new_label;
                continue;
            }
            let a = arcs.start + cur[v] as usize;
            let w = net.head(a);
            if net.residual_cap(a) > 0 && d[v] == d[w] + 1 {
                let delta = excess[v].min(net.residual_cap(a));
                net.push_on_arc(a, delta);
                stats.pushes += 1;
                excess[v] -= delta;
                excess[w] += delta;
                if w != s && w != t && !in_queue[w] && d[w] < dead {
                    queue.push_back(w);
                    in_queue[w] = true;
                }
                if net.residual_cap(a) == 0 {
                    cur[v] += 1;
                }
                if excess[v] == 0 {
                    break;
                }
            } else {
                cur[v] += 1;
            }
        }
    }

    PreflowResult { value: excess[t], labels: d, stats }
}
