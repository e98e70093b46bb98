//! Parallel global relabeling: exact distance labels via a level-synchronous
//! reverse breadth-first search from the sink over residual arcs.

use std::sync::atomic::{AtomicU32, Ordering};

use rayon::prelude::*;

use crate::graph::FlowNetwork;

use super::prefix::concat_lists;

/// Overwrites every label with the exact residual distance to the sink.
/// Vertices that cannot reach the sink, and always the source, get label n.
///
/// Runs on the current rayon pool. Vertices are claimed with a compare and
/// swap; whichever frontier vertex claims first, the written level is the
/// same, so the resulting labels are independent of scheduling.
pub(crate) fn global_relabel(net: &FlowNetwork, d: &[AtomicU32]) {
    let n = net.vertex_count() as u32;
    let s = net.source();
    let t = net.sink();
    d.par_iter().for_each(|x| x.store(n, Ordering::Relaxed));
    d[t].store(0, Ordering::Relaxed);
    let mut frontier: Vec<u32> = vec![t as u32];
    let mut level = 0u32;
    while !frontier.is_empty() {
        level += 1;
        let found: Vec<Vec<u32>> = frontier
            .par_iter()
            .map(|&v| {
                let mut local = Vec::new();
                for a in net.out_arcs(v as usize) {
                    let w = net.head(a);
                    if w == s {
                        continue;
                    }
                    // The residual arc w -> v is the paired reverse of a.
                    if net.residual_cap(net.reverse(a)) == 0 {
                        continue;
                    }
                    if d[w]
                        .compare_exchange(n, level, Ordering::Relaxed, Ordering::Relaxed)
                        .is_ok()
                    {
                        local.push(w as u32);
                    }
                }
                local
            })
            .collect();
        frontier = concat_lists(&found);
    }
}

/// Standalone exact sink distances, computed on a private pool of
/// `threads` workers. Unreachable vertices and the source get n.
pub fn parallel_sink_distances(net: &FlowNetwork, threads: usize) -> Vec<u32> {
    let d: Vec<AtomicU32> = (0..net.vertex_count()).map(|_| AtomicU32::new(0)).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .expect("thread pool");
    pool.install(|| global_relabel(net, &d));
    d.into_iter().map(AtomicU32::into_inner).collect()
}
