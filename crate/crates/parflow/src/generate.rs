//! Seeded synthetic instance families.
//!
//! Generators are pure functions of their spec: the same spec yields a
//! structurally identical instance on every call. Randomness comes from a
//! ChaCha stream seeded with the spec's seed, drawn in a fixed order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::dimacs::ProblemInstance;
use crate::graph::{Capacity, FlowNetwork};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorFamily {
    /// Layered box: `layers` square frames of side `a`. Intra-layer grid
    /// arcs carry random capacities, inter-layer arcs are wide enough to
    /// never bottleneck a frame. Source is the first frame's corner, sink
    /// the opposite corner of the last frame.
    GridRmf { a: u32, layers: u32 },
    /// `edges` arcs drawn uniformly over ordered vertex pairs without
    /// self-loops, capacities uniform in 1..=max_cap. Source is vertex 0,
    /// sink the last vertex.
    RandomSparse { vertices: u32, edges: u32 },
    /// Width x height mesh of unit arcs: rightward plus both vertical
    /// directions, a super-source feeding the first column and the last
    /// column draining into a super-sink. Fully deterministic.
    UnitCapMesh { width: u32, height: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub family: GeneratorFamily,
    pub seed: u64,
    pub max_cap: Capacity,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenerateError {
    #[error("dimension {what} must be at least 1")]
    EmptyDimension { what: &'static str },
    #[error("max capacity must be at least 1, got {0}")]
    CapacityTooSmall(Capacity),
    #[error("family needs at least 2 vertices, got {0}")]
    TooFewVertices(u64),
}

pub fn generate(spec: &GeneratorSpec) -> Result<ProblemInstance, GenerateError> {
    if spec.max_cap < 1 {
        return Err(GenerateError::CapacityTooSmall(spec.max_cap));
    }
    match spec.family {
        GeneratorFamily::GridRmf { a, layers } => grid_rmf(a, layers, spec),
        GeneratorFamily::RandomSparse { vertices, edges } => random_sparse(vertices, edges, spec),
        GeneratorFamily::UnitCapMesh { width, height } => unit_cap_mesh(width, height, spec),
    }
}

fn instance(
    network: FlowNetwork,
    name: String,
    spec: &GeneratorSpec,
) -> Result<ProblemInstance, GenerateError> {
    let meta = format!(
        "generated: {name}, seed={}, max_cap={}, n={}, m={}",
        spec.seed,
        spec.max_cap,
        network.vertex_count(),
        network.edge_count()
    );
    Ok(ProblemInstance { network, name, meta })
}

fn grid_rmf(a: u32, layers: u32, spec: &GeneratorSpec) -> Result<ProblemInstance, GenerateError> {
    if a == 0 {
        return Err(GenerateError::EmptyDimension { what: "a" });
    }
    if layers == 0 {
        return Err(GenerateError::EmptyDimension { what: "layers" });
    }
    let a = a as usize;
    let layers = layers as usize;
    let frame = a * a;
    let n = frame * layers;
    if n < 2 {
        return Err(GenerateError::TooFewVertices(n as u64));
    }
    let vertex = |x: usize, y: usize, l: usize| l * frame + y * a + x;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut edges = Vec::new();
    // Wide enough to route a whole frame's worth of traffic.
    let wide = spec.max_cap * frame as i64;
    for l in 0..layers {
        for y in 0..a {
            for x in 0..a {
                if x + 1 < a {
                    let (u, v) = (vertex(x, y, l), vertex(x + 1, y, l));
                    edges.push((u, v, rng.random_range(1..=spec.max_cap)));
                    edges.push((v, u, rng.random_range(1..=spec.max_cap)));
                }
                if y + 1 < a {
                    let (u, v) = (vertex(x, y, l), vertex(x, y + 1, l));
                    edges.push((u, v, rng.random_range(1..=spec.max_cap)));
                    edges.push((v, u, rng.random_range(1..=spec.max_cap)));
                }
            }
        }
        if l + 1 < layers {
            for y in 0..a {
                for x in 0..a {
                    edges.push((vertex(x, y, l), vertex(x, y, l + 1), wide));
                }
            }
        }
    }
    let source = vertex(0, 0, 0);
    let sink = vertex(a - 1, a - 1, layers - 1);
    let network = FlowNetwork::build(n, source, sink, &edges).expect("generator built bad edges");
    let name = format!("grid-rmf-a{a}-b{layers}-c{}-s{}", spec.max_cap, spec.seed);
    instance(network, name, spec)
}

fn random_sparse(
    vertices: u32,
    arcs: u32,
    spec: &GeneratorSpec,
) -> Result<ProblemInstance, GenerateError> {
    if vertices < 2 {
        return Err(GenerateError::TooFewVertices(vertices as u64));
    }
    let n = vertices as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut edges = Vec::with_capacity(arcs as usize);
    for _ in 0..arcs {
        let u = rng.random_range(0..n);
        // Uniform over the n-1 vertices that are not u.
        let mut v = rng.random_range(0..n - 1);
        if v >= u {
            v += 1;
        }
        let cap = rng.random_range(1..=spec.max_cap);
        edges.push((u, v, cap));
    }
    let network = FlowNetwork::build(n, 0, n - 1, &edges).expect("generator built bad edges");
    let name = format!(
        "random-sparse-n{vertices}-m{arcs}-c{}-s{}",
        spec.max_cap, spec.seed
    );
    instance(network, name, spec)
}

fn unit_cap_mesh(
    width: u32,
    height: u32,
    spec: &GeneratorSpec,
) -> Result<ProblemInstance, GenerateError> {
    if width == 0 {
        return Err(GenerateError::EmptyDimension { what: "width" });
    }
    if height == 0 {
        return Err(GenerateError::EmptyDimension { what: "height" });
    }
    let (w, h) = (width as usize, height as usize);
    let n = w * h + 2;
    let source = w * h;
    let sink = w * h + 1;
    let vertex = |x: usize, y: usize| y * w + x;
    let mut edges = Vec::new();
    for y in 0..h {
        edges.push((source, vertex(0, y), 1));
    }
    for y in 0..h {
        for x in 0..w {
            if x + 1 < w {
                edges.push((vertex(x, y), vertex(x + 1, y), 1));
            }
            if y + 1 < h {
                edges.push((vertex(x, y), vertex(x, y + 1), 1));
                edges.push((vertex(x, y + 1), vertex(x, y), 1));
            }
        }
    }
    for y in 0..h {
        edges.push((vertex(w - 1, y), sink, 1));
    }
    let network = FlowNetwork::build(n, source, sink, &edges).expect("generator built bad edges");
    let name = format!("unit-cap-mesh-w{width}-h{height}");
    instance(network, name, spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dimacs::write_dimacs;

    #[test]
    fn same_spec_is_byte_identical() {
        let spec = GeneratorSpec {
            family: GeneratorFamily::GridRmf { a: 3, layers: 4 },
            seed: 42,
            max_cap: 10,
        };
        let one = generate(&spec).unwrap();
        let two = generate(&spec).unwrap();
        assert!(one.network.structurally_equal(&two.network));
        let mut buf1 = Vec::new();
        let mut buf2 = Vec::new();
        write_dimacs(&one, &mut buf1).unwrap();
        write_dimacs(&two, &mut buf2).unwrap();
        assert_eq!(buf1, buf2);
    }

    #[test]
    fn different_seeds_differ() {
        let mk = |seed| GeneratorSpec {
            family: GeneratorFamily::RandomSparse { vertices: 20, edges: 60 },
            seed,
            max_cap: 9,
        };
        let one = generate(&mk(1)).unwrap();
        let two = generate(&mk(2)).unwrap();
        assert!(!one.network.structurally_equal(&two.network));
    }

    #[test]
    fn degenerate_grid_is_one_wide_arc() {
        let spec = GeneratorSpec {
            family: GeneratorFamily::GridRmf { a: 1, layers: 2 },
            seed: 7,
            max_cap: 1,
        };
        let inst = generate(&spec).unwrap();
        let net = &inst.network;
        assert_eq!(net.vertex_count(), 2);
        assert_eq!(net.edge_count(), 1);
        assert_eq!(net.source(), 0);
        assert_eq!(net.sink(), 1);
        let edges: Vec<_> = net.forward_edges().collect();
        assert_eq!(edges, vec![(0, 1, 1)]);
    }

    #[test]
    fn random_sparse_has_no_self_loops_and_caps_in_range() {
        let spec = GeneratorSpec {
            family: GeneratorFamily::RandomSparse { vertices: 30, edges: 200 },
            seed: 99,
            max_cap: 15,
        };
        let inst = generate(&spec).unwrap();
        assert_eq!(inst.network.edge_count(), 200);
        for (u, v, c) in inst.network.forward_edges() {
            assert_ne!(u, v, "self loop generated");
            assert!((1..=15).contains(&c), "capacity {c} out of range");
        }
    }

    #[test]
    fn mesh_shape_is_as_documented() {
        let spec = GeneratorSpec {
            family: GeneratorFamily::UnitCapMesh { width: 3, height: 2 },
            seed: 0,
            max_cap: 1,
        };
        let inst = generate(&spec).unwrap();
        let net = &inst.network;
        assert_eq!(net.vertex_count(), 8);
        // 2 source arcs + 2 sink arcs + rightward 2*2 + vertical 3*2.
        assert_eq!(net.edge_count(), 14);
        for (_, _, c) in net.forward_edges() {
            assert_eq!(c, 1);
        }
    }

    #[test]
    fn rejects_degenerate_parameters() {
        let bad = GeneratorSpec {
            family: GeneratorFamily::GridRmf { a: 0, layers: 3 },
            seed: 0,
            max_cap: 5,
        };
        assert_eq!(
            generate(&bad).unwrap_err(),
            GenerateError::EmptyDimension { what: "a" }
        );
        let bad = GeneratorSpec {
            family: GeneratorFamily::GridRmf { a: 1, layers: 1 },
            seed: 0,
            max_cap: 5,
        };
        assert_eq!(generate(&bad).unwrap_err(), GenerateError::TooFewVertices(1));
        let bad = GeneratorSpec {
            family: GeneratorFamily::RandomSparse { vertices: 1, edges: 0 },
            seed: 0,
            max_cap: 5,
        };
        assert_eq!(generate(&bad).unwrap_err(), GenerateError::TooFewVertices(1));
        let bad = GeneratorSpec {
            family: GeneratorFamily::UnitCapMesh { width: 2, height: 2 },
            seed: 0,
            max_cap: 0,
        };
        assert_eq!(generate(&bad).unwrap_err(), GenerateError::CapacityTooSmall(0));
    }
}
