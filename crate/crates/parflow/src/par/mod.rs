//! Bulk-synchronous parallel push-relabel solver.

mod discharge;
mod global_relabel;
mod prefix;

pub use global_relabel::parallel_sink_distances;
pub use prefix::{concat_lists, exclusive_prefix_sum, par_filter, par_filter_range};

use std::sync::atomic::Ordering::Relaxed;

use rayon::prelude::*;

use crate::graph::FlowNetwork;
use crate::result::{PreflowResult, SolveStats};

use discharge::{discharge_prsn, lost_arcs, push_pass, relabel_of, DischargeOutcome, SolverState};
use global_relabel::global_relabel;

/// Controls when global relabeling runs, for both the parallel solver and the
/// sequential FIFO baseline.
///
/// A solver accumulates `work` (arcs scanned plus `work_beta` per relabel) and
/// refreshes all labels by a reverse breadth-first search from the sink once
/// `work * freq >= alpha * n + beta * m`.
#[derive(Debug, Clone)]
pub struct GrPolicy {
    pub freq: f64,
    pub alpha: u64,
    pub beta: u64,
    pub work_beta: u64,
}

impl Default for GrPolicy {
    fn default() -> Self {
        GrPolicy {
            freq: 0.5,
            alpha: 12,
            beta: 2,
            work_beta: 12,
        }
    }
}

impl GrPolicy {
    pub fn threshold(&self, n: usize, m: usize) -> u64 {
        self.alpha * n as u64 + self.beta * m as u64
    }

    /// Inclusive at the boundary: firing requires `work * freq >= threshold`.
    pub fn should_trigger(&self, work_since: u64, n: usize, m: usize) -> bool {
        work_since as f64 * self.freq >= self.threshold(n, m) as f64
    }

    /// Initial value of the work counter, chosen so the very first trigger
    /// check fires and the solver starts from exact labels.
    pub fn initial_work(&self, n: usize, m: usize) -> u64 {
        let w = (self.threshold(n, m) as f64 / self.freq).ceil() as u64;
        debug_assert!(self.should_trigger(w, n, m));
        w
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// Full repeated discharge per iteration; pair conflicts settled by
    /// [`wins_pair`].
    Prsn,
    /// At most one push pass and one relabel per vertex per iteration.
    /// Needs no conflict rule and keeps label and excess traces identical
    /// across thread counts.
    SimpleSync,
}

#[derive(Debug, Clone)]
pub struct PrsnConfig {
    pub variant: Variant,
    pub threads: usize,
    pub gr: GrPolicy,
}

impl Default for PrsnConfig {
    fn default() -> Self {
        PrsnConfig {
            variant: Variant::Prsn,
            threads: 1,
            gr: GrPolicy::default(),
        }
    }
}

/// Conflict rule for an arc whose endpoints are both being discharged.
/// The winner pushes on the shared arc pair this iteration; the loser skips
/// those arcs. Exactly one of `wins_pair(v, dv, w, dw)` and
/// `wins_pair(w, dw, v, dv)` holds whenever `v != w`.
pub fn wins_pair(v: u32, dv: u32, w: u32, dw: u32) -> bool {
    let (dv, dw) = (dv as u64, dw as u64);
    dv + 1 < dw || dv == dw + 1 || (dv == dw && v < w)
}

/// Observer events from an instrumented solve, in program order.
pub enum SolveEvent<'a> {
    /// Global relabeling is about to run; `work_before` is the counter value
    /// that tripped the trigger.
    GlobalRelabel { work_before: u64 },
    /// A bulk iteration finished and its sweeps are applied. `processed` is
    /// the working set that was discharged, `d` and `e` are complete label
    /// and excess snapshots, and `work_since_gr` includes this iteration.
    Iteration {
        index: u64,
        processed: &'a [u32],
        d: &'a [u32],
        e: &'a [i64],
        work_since_gr: u64,
    },
}

/// Reusable solver: the thread pool and state arrays are allocated once and
/// shared by every solve, so repeated runs on same-shape networks pay no
/// allocation cost beyond per-iteration working sets.
pub struct PrsnEngine {
    config: PrsnConfig,
    pool: rayon::ThreadPool,
    st: SolverState,
    vertices: usize,
    arcs: usize,
}

impl PrsnEngine {
    pub fn new(net: &FlowNetwork, config: PrsnConfig) -> Self {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.threads.max(1))
            .build()
            .expect("thread pool");
        PrsnEngine {
            st: SolverState::new(net.vertex_count()),
            vertices: net.vertex_count(),
            arcs: net.arc_count(),
            config,
            pool,
        }
    }

    /// Computes a maximum preflow. The network must start with untouched
    /// residuals (fresh build or after `reset_residuals`); the flow ends up
    /// in its residual state.
    pub fn solve(&mut self, net: &FlowNetwork) -> PreflowResult {
        self.run(net, None)
    }

    /// Like `solve`, reporting every global relabel and iteration boundary.
    pub fn solve_observed(
        &mut self,
        net: &FlowNetwork,
        observer: &mut (dyn FnMut(SolveEvent) + Send),
    ) -> PreflowResult {
        self.run(net, Some(observer))
    }

    fn run(
        &mut self,
        net: &FlowNetwork,
        mut observer: Option<&mut (dyn FnMut(SolveEvent) + Send)>,
    ) -> PreflowResult {
        assert_eq!(net.vertex_count(), self.vertices, "engine built for another shape");
        assert_eq!(net.arc_count(), self.arcs, "engine built for another shape");
        let st = &self.st;
        let gr = &self.config.gr;
        let variant = self.config.variant;
        let n = self.vertices;
        let nu = n as u32;
        let m = net.edge_count();
        let s = net.source();
        let t = net.sink();
        self.pool.install(|| {
            let mut stats = SolveStats::default();
            st.reset();
            st.d[s].store(nu, Relaxed);
            for a in net.out_arcs(s) {
                let cap = net.residual_cap(a);
                if cap > 0 {
                    net.push_on_arc(a, cap);
                    st.e[net.head(a)].fetch_add(cap, Relaxed);
                    stats.pushes += 1;
                }
            }
            let active = |v: u32| {
                let vu = v as usize;
                vu != s
                    && vu != t
                    && st.e[vu].load(Relaxed) > 0
                    && st.d[vu].load(Relaxed) < nu
            };
            let mut ws = par_filter_range(n, active);
            let mut work_since = gr.initial_work(n, m);
            let mut index = 0u64;
            loop {
                if ws.is_empty() {
                    break;
                }
                if gr.should_trigger(work_since, n, m) {
                    if let Some(obs) = observer.as_mut() {
                        obs(SolveEvent::GlobalRelabel { work_before: work_since });
                    }
                    global_relabel(net, &st.d);
                    stats.global_relabels += 1;
                    work_since = 0;
                    ws = par_filter_range(n, active);
                    continue;
                }
                index += 1;

                // Freeze membership so dischargers can recognize contested
                // pairs, then capture what the pair losers will read.
                ws.par_iter()
                    .for_each(|&v| st.in_ws[v as usize].store(true, Relaxed));
                let mut outcomes: Vec<DischargeOutcome> = match variant {
                    Variant::Prsn => {
                        let lost: Vec<Vec<(u32, i64)>> =
                            ws.par_iter().map(|&v| lost_arcs(net, st, v)).collect();
                        ws.par_iter()
                            .zip(lost.par_iter())
                            .map(|(&v, lost)| discharge_prsn(net, st, v, lost, gr.work_beta))
                            .collect()
                    }
                    Variant::SimpleSync => {
                        ws.par_iter().map(|&v| push_pass(net, st, v)).collect()
                    }
                };
                if variant == Variant::SimpleSync {
                    // Deferred relabels for the still-active, behind the
                    // push barrier.
                    let work_beta = gr.work_beta;
                    outcomes.par_iter_mut().for_each(|o| {
                        if o.leftover == 0 {
                            return;
                        }
                        let new_label = relabel_of(net, st, o.vertex);
                        debug_assert!(new_label > o.new_label);
                        o.relabels = 1;
                        o.work = net.out_degree(o.vertex as usize) as u64 + work_beta;
                        o.new_label = new_label;
                        if new_label < nu
                            && !st.discovered[o.vertex as usize].swap(true, Relaxed)
                        {
                            o.discovered.push(o.vertex);
                        }
                    });
                }

                // Sweep the processed vertices, then everything discovered;
                // the barrier between the two passes makes the overlap safe
                // because a drained counter yields zero the second time.
                ws.par_iter().zip(outcomes.par_iter()).for_each(|(&v, o)| {
                    let vu = v as usize;
                    st.d[vu].store(o.new_label, Relaxed);
                    let received = st.added[vu].swap(0, Relaxed);
                    if received != 0 {
                        st.e[vu].fetch_add(received, Relaxed);
                    }
                    st.in_ws[vu].store(false, Relaxed);
                });
                let lists: Vec<&[u32]> =
                    outcomes.iter().map(|o| o.discovered.as_slice()).collect();
                let found = concat_lists(&lists);
                found.par_iter().for_each(|&w| {
                    let wu = w as usize;
                    let received = st.added[wu].swap(0, Relaxed);
                    if received != 0 {
                        st.e[wu].fetch_add(received, Relaxed);
                    }
                    st.discovered[wu].store(false, Relaxed);
                });
                // The sink never joins a discovered list; drain it directly.
                let to_sink = st.added[t].swap(0, Relaxed);
                if to_sink != 0 {
                    st.e[t].fetch_add(to_sink, Relaxed);
                }

                let mut iter_work = 0u64;
                for o in &outcomes {
                    stats.pushes += o.pushes;
                    stats.relabels += o.relabels;
                    iter_work += o.work;
                }
                stats.work += iter_work;
                work_since += iter_work;
                if let Some(obs) = observer.as_mut() {
                    let d_snap: Vec<u32> = st.d.iter().map(|x| x.load(Relaxed)).collect();
                    let e_snap: Vec<i64> = st.e.iter().map(|x| x.load(Relaxed)).collect();
                    obs(SolveEvent::Iteration {
                        index,
                        processed: &ws,
                        d: &d_snap,
                        e: &e_snap,
                        work_since_gr: work_since,
                    });
                }
                ws = par_filter(&found, active);
            }
            stats.iterations = index;
            PreflowResult {
                value: st.e[t].load(Relaxed),
                labels: st.d.iter().map(|x| x.load(Relaxed)).collect(),
                stats,
            }
        })
    }
}

/// One-shot convenience wrapper around a fresh engine.
pub fn solve_prsn(net: &FlowNetwork, config: &PrsnConfig) -> PreflowResult {
    PrsnEngine::new(net, config.clone()).solve(net)
}
