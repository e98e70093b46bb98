//! Per-vertex discharge for the bulk-synchronous solver.
//!
//! An iteration freezes the labels and the working set membership, then
//! discharges every member in parallel. All cross-vertex effects go through
//! atomics and are applied at phase barriers, so each discharge is a pure
//! function of the iteration-start state and the results do not depend on
//! scheduling or thread count.

use std::sync::atomic::{AtomicBool, AtomicI64, AtomicU32, Ordering::Relaxed};

use rayon::prelude::*;

use crate::graph::FlowNetwork;

use super::wins_pair;

/// Shared solver arrays. Phase barriers order all cross-thread access, so
/// relaxed operations suffice throughout.
pub(crate) struct SolverState {
    /// Labels; frozen during a discharge phase, stored in the sweep.
    pub d: Vec<AtomicU32>,
    /// Excess; mutated only in sweeps.
    pub e: Vec<AtomicI64>,
    /// Excess received during the running iteration, drained by the sweeps.
    pub added: Vec<AtomicI64>,
    /// Test-and-set guard: a vertex enters at most one discovered list.
    pub discovered: Vec<AtomicBool>,
    /// Frozen working set membership for the running iteration.
    pub in_ws: Vec<AtomicBool>,
}

impl SolverState {
    pub fn new(n: usize) -> Self {
        SolverState {
            d: (0..n).map(|_| AtomicU32::new(0)).collect(),
            e: (0..n).map(|_| AtomicI64::new(0)).collect(),
            added: (0..n).map(|_| AtomicI64::new(0)).collect(),
            discovered: (0..n).map(|_| AtomicBool::new(false)).collect(),
            in_ws: (0..n).map(|_| AtomicBool::new(false)).collect(),
        }
    }

    /// Clears everything for a fresh solve. Runs on the current pool.
    pub fn reset(&self) {
        self.d.par_iter().for_each(|x| x.store(0, Relaxed));
        self.e.par_iter().for_each(|x| x.store(0, Relaxed));
        self.added.par_iter().for_each(|x| x.store(0, Relaxed));
        self.discovered.par_iter().for_each(|x| x.store(false, Relaxed));
        self.in_ws.par_iter().for_each(|x| x.store(false, Relaxed));
    }
}

pub(crate) struct DischargeOutcome {
    pub vertex: u32,
    pub new_label: u32,
    /// Excess still held after the local pushes.
    pub leftover: i64,
    /// Vertices this discharge claimed via the test-and-set, self included.
    pub discovered: Vec<u32>,
    pub pushes: u64,
    pub relabels: u64,
    pub work: u64,
}

/// A lost pair arc as the loser will see it for the whole iteration.
#[derive(Debug, Clone, Copy)]
pub(crate) struct LostArc {
    pub arc: u32,
    /// Residual capacity at iteration start.
    pub cap: i64,
    /// The owner holds residual on the paired arc, so a push this iteration
    /// can reopen this one even though `cap` is zero.
    pub reopenable: bool,
}

/// Snapshot, at iteration start, of v's arcs whose pair is owned by the
/// other endpoint this iteration: head in the working set and the pair won
/// by the head. Captured behind a barrier before discharges begin; the
/// loser reads these instead of the live slots the owner is updating.
pub(crate) fn lost_arcs(net: &FlowNetwork, st: &SolverState, v: u32) -> Vec<LostArc> {
    let dv = st.d[v as usize].load(Relaxed);
    let mut lost = Vec::new();
    for a in net.out_arcs(v as usize) {
        let w = net.head(a);
        if !st.in_ws[w].load(Relaxed) {
            continue;
        }
        if !wins_pair(v, dv, w as u32, st.d[w].load(Relaxed)) {
            lost.push(LostArc {
                arc: a as u32,
                cap: net.residual_cap(a),
                reopenable: net.residual_cap(net.reverse(a)) > 0,
            });
        }
    }
    lost
}

/// Full discharge: alternate push passes and relabels until the excess is
/// gone, the label hits n, or an admissible arc had to be skipped because
/// the other endpoint owns it this iteration.
///
/// `lost` holds the iteration-start residuals of v's lost pair arcs in arc
/// order; every other arc of v has a single writer this phase, so live
/// reads of it are stable.
///
/// A lost arc the owner can reopen caps the relabel at the starting label
/// plus two: any push into v lands while the pusher sits exactly one above
/// v's frozen label, so the reopened arc will tolerate at most that. The
/// cap keeps every label valid against every residual arc at iteration
/// boundaries, which in turn keeps relabels monotone.
pub(crate) fn discharge_prsn(
    net: &FlowNetwork,
    st: &SolverState,
    v: u32,
    lost: &[LostArc],
    work_beta: u64,
) -> DischargeOutcome {
    let n = net.vertex_count() as u32;
    let vu = v as usize;
    let t = net.sink();
    let e_start = st.e[vu].load(Relaxed);
    let d_frozen = st.d[vu].load(Relaxed);
    debug_assert!(e_start > 0);
    debug_assert!(d_frozen < n);
    let mut local_e = e_start;
    let mut d_local = d_frozen;
    let mut discovered = Vec::new();
    let (mut pushes, mut relabels, mut work) = (0u64, 0u64, 0u64);
    loop {
        let mut new_label = n;
        let mut skipped = false;
        let mut li = 0usize;
        for a in net.out_arcs(vu) {
            if local_e == 0 {
                break;
            }
            while li < lost.len() && (lost[li].0 as usize) < a {
                li += 1;
            }
            let lost_here = li < lost.len() && lost[li].0 as usize == a;
            let cap = if lost_here { lost[li].1 } else { net.residual_cap(a) };
            if cap == 0 {
                continue;
            }
            let w = net.head(a);
            let dw = st.d[w].load(Relaxed);
            let admissible = d_local == dw + 1;
            if lost_here && admissible {
                // The owner may be pushing the pair right now; leave the arc
                // alone this iteration and keep it out of the relabel floor.
                skipped = true;
                continue;
            }
            if admissible {
                let delta = local_e.min(cap);
                net.push_on_arc(a, delta);
                local_e -= delta;
                pushes += 1;
                st.added[w].fetch_add(delta, Relaxed);
                if w != t && !st.discovered[w].swap(true, Relaxed) {
                    discovered.push(w as u32);
                }
                if cap > delta {
                    new_label = new_label.min(dw + 1);
                }
            } else {
                new_label = new_label.min(dw + 1);
            }
        }
        if local_e == 0 || skipped {
            break;
        }
        // Every arc still residual in v's view capped new_label, and the
        // admissible ones were saturated or skipped, so this is a strict
        // increase.
        if new_label <= d_local {
            panic!(
                "relabel stuck: v={v} d_frozen={d_frozen} d_local={d_local} \
                 new_label={new_label} e_start={e_start} local_e={local_e} \
                 lost={lost:?} threads={}",
                rayon::current_num_threads()
            );
        }
        relabels += 1;
        work += net.out_degree(vu) as u64 + work_beta;
        d_local = new_label;
        if d_local == n {
            break;
        }
    }
    let sent = e_start - local_e;
    if sent != 0 {
        st.added[vu].fetch_add(-sent, Relaxed);
    }
    if local_e > 0 && d_local < n && !st.discovered[vu].swap(true, Relaxed) {
        discovered.push(v);
    }
    DischargeOutcome {
        vertex: v,
        new_label: d_local,
        leftover: local_e,
        discovered,
        pushes,
        relabels,
        work,
    }
}

/// One push pass with frozen labels and no relabeling. With labels frozen,
/// a pair can never be admissible from both sides, so each pair has one
/// writer and live reads are stable. The caller relabels still-active
/// vertices afterward behind a barrier.
pub(crate) fn push_pass(net: &FlowNetwork, st: &SolverState, v: u32) -> DischargeOutcome {
    let n = net.vertex_count() as u32;
    let vu = v as usize;
    let t = net.sink();
    let e_start = st.e[vu].load(Relaxed);
    let d_frozen = st.d[vu].load(Relaxed);
    debug_assert!(e_start > 0);
    debug_assert!(d_frozen < n);
    let mut local_e = e_start;
    let mut discovered = Vec::new();
    let mut pushes = 0u64;
    for a in net.out_arcs(vu) {
        if local_e == 0 {
            break;
        }
        let cap = net.residual_cap(a);
        if cap == 0 {
            continue;
        }
        let w = net.head(a);
        if d_frozen != st.d[w].load(Relaxed) + 1 {
            continue;
        }
        let delta = local_e.min(cap);
        net.push_on_arc(a, delta);
        local_e -= delta;
        pushes += 1;
        st.added[w].fetch_add(delta, Relaxed);
        if w != t && !st.discovered[w].swap(true, Relaxed) {
            discovered.push(w as u32);
        }
    }
    let sent = e_start - local_e;
    if sent != 0 {
        st.added[vu].fetch_add(-sent, Relaxed);
    }
    DischargeOutcome {
        vertex: v,
        new_label: d_frozen,
        leftover: local_e,
        discovered,
        pushes,
        relabels: 0,
        work: 0,
    }
}

/// Relabel for a vertex still active after a push pass: one above the
/// smallest label across its residual arcs, capped at n. Runs behind the
/// pass barrier, so the residuals it reads are stable.
pub(crate) fn relabel_of(net: &FlowNetwork, st: &SolverState, v: u32) -> u32 {
    let n = net.vertex_count() as u32;
    let mut new_label = n;
    for a in net.out_arcs(v as usize) {
        if net.residual_cap(a) > 0 {
            new_label = new_label.min(st.d[net.head(a)].load(Relaxed) + 1);
        }
    }
    new_label
}
