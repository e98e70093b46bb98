//! Converts a maximum preflow into a complete flow of the same value.
//!
//! Stranded excess is routed back to the source: from each excess vertex
//! the walk follows arcs that carry flow toward it, backward, until the
//! source appears, then cancels the bottleneck along the walked path. A
//! flow cycle discovered on the way is canceled outright. The sink's
//! inflow is never touched, so the value is preserved.

use thiserror::Error;

use crate::graph::{FlowAssignment, FlowNetwork};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecomposeError {
    #[error("vertex {0} holds excess but has no incoming flow; not a preflow")]
    CorruptPreflow(usize),
}

/// Cancelable flow on the edge entering `tail(arc)` through this arc's
/// pair: positive exactly when the paired edge carries flow.
fn incoming_flow(net: &FlowNetwork, arc: usize) -> i64 {
    net.residual_cap(arc) - net.original_cap(arc)
}

/// Drains all interior excess back to the source, leaving a conserving
/// flow in the network's residual state.
pub fn preflow_to_flow(net: &FlowNetwork) -> Result<FlowAssignment, DecomposeError> {
    let n = net.vertex_count();
    let (s, t) = (net.source(), net.sink());
    let mut excess = net.excesses();
    // Cursor per vertex: arcs before it no longer carry incoming flow.
    // Decomposition only removes flow, so cursors never need to back up.
    let mut cursor: Vec<u32> = vec![0; n];
    let mut on_path = vec![false; n];
    // Walk state: arcs[i] leads backward from vertices[i] to vertices[i+1].
    let mut vertices: Vec<usize> = Vec::new();
    let mut arcs: Vec<usize> = Vec::new();

    for v0 in 0..n {
        if v0 == s || v0 == t {
            continue;
        }
        while excess[v0] > 0 {
            vertices.clear();
            arcs.clear();
            vertices.push(v0);
            on_path[v0] = true;
            loop {
                let u = *vertices.last().unwrap();
                if u == s {
                    // Cancel the bottleneck along the whole walk.
                    let mut delta = excess[v0];
                    for &a in &arcs {
                        delta = delta.min(incoming_flow(net, a));
                    }
                    for &a in &arcs {
                        net.push_on_arc(a, delta);
                    }
                    excess[v0] -= delta;
                    break;
                }
                let range = net.out_arcs(u);
                let mut step = None;
                while (cursor[u] as usize) < range.len() {
                    let a = range.start + cursor[u] as usize;
                    if incoming_flow(net, a) > 0 {
                        step = Some(a);
                        break;
                    }
                    cursor[u] += 1;
                }
                let Some(a) = step else {
                    for &v in &vertices {
                        on_path[v] = false;
                    }
                    return Err(DecomposeError::CorruptPreflow(u));
                };
                let x = net.head(a);
                if on_path[x] {
                    // Flow cycle through x: cancel it and resume from x.
                    let pos = vertices.iter().rposition(|&v| v == x).unwrap();
                    let cycle = &arcs[pos..];
                    let mut delta = incoming_flow(net, a);
                    for &c in cycle {
                        delta = delta.min(incoming_flow(net, c));
                    }
                    net.push_on_arc(a, delta);
                    for &c in cycle {
                        net.push_on_arc(c, delta);
                    }
                    for &v in &vertices[pos + 1..] {
                        on_path[v] = false;
                    }
                    vertices.truncate(pos + 1);
                    arcs.truncate(pos);
                } else {
                    vertices.push(x);
                    arcs.push(a);
                    on_path[x] = true;
                }
            }
            for &v in &vertices {
                on_path[v] = false;
            }
        }
    }
    Ok(net.extract_flow())
}
