//! Exact densest subgraph by parametric minimum cut, and the hereditary degree.

use serde::Serialize;

use crate::flow::FlowNetwork;
use crate::graph::{Graph, VertexSet};

/// A vertex set attaining the maximum of `|E(S)| / |S|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DensestSubgraph {
    pub vertices: VertexSet,
    /// Number of edges of `G[S]`.
    pub edges: usize,
}

impl DensestSubgraph {
    pub fn density(&self) -> f64 {
        self.edges as f64 / self.vertices.len() as f64
    }
}

/// Finds a densest vertex set, or `None` for graphs without edges.
///
/// Densities are rationals `p/q` with `q <= n`, so two distinct values differ by
/// at least `1/n^2`. Thresholds are searched on the grid `k / (2 n^2)`; each
/// probe decides whether some `S` has `2n^2 |E(S)| - k |S| > 0` with a min cut
/// in the source -> edge -> endpoint -> sink network. Once the bracket is one
/// grid step wide the best set found is optimal.
pub fn densest_subgraph(g: &Graph) -> Option<DensestSubgraph> {
    let (n, m) = (g.n(), g.m());
    if m == 0 {
        return None;
    }
    let scale = 2 * (n as i64) * (n as i64);
    let mut best = DensestSubgraph {
        vertices: VertexSet::from_sorted_unchecked(
            n,
            (0..n).filter(|&v| g.degree(v) > 0).collect(),
        ),
        edges: m,
    };
    // floor(best density * scale)
    let floor_of = |b: &DensestSubgraph| (b.edges as i64 * scale) / b.vertices.len() as i64;
    let mut lo = floor_of(&best);
    // the maximum density of a simple graph is at most (n - 1) / 2
    let mut hi = (n as i64 - 1) * scale / 2 + 1;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        match denser_than(g, scale, mid) {
            Some(found) => {
                best = found;
                lo = floor_of(&best).max(mid);
            }
            None => hi = mid,
        }
    }
    Some(best)
}

/// A set with `scale * |E(S)| - threshold * |S| > 0`, if one exists.
fn denser_than(g: &Graph, scale: i64, threshold: i64) -> Option<DensestSubgraph> {
    let (n, m) = (g.n(), g.m());
    let (source, sink) = (0, 1);
    let edge_node = |i: usize| 2 + i;
    let vertex_node = |v: usize| 2 + m + v;
    let infinite = scale * m as i64 + 1;
    let mut net = FlowNetwork::new(2 + m + n);
    for (i, &(u, v)) in g.edges().iter().enumerate() {
        net.add_arc(source, edge_node(i), scale);
        net.add_arc(edge_node(i), vertex_node(u), infinite);
        net.add_arc(edge_node(i), vertex_node(v), infinite);
    }
    for v in 0..n {
        net.add_arc(vertex_node(v), sink, threshold);
    }
    let flow = net.max_flow(source, sink);
    if flow >= scale * m as i64 {
        return None;
    }
    let side = net.source_side(source);
    let members: Vec<usize> = (0..n).filter(|&v| side[vertex_node(v)]).collect();
    let mask = {
        let mut mask = vec![false; n];
        members.iter().for_each(|&v| mask[v] = true);
        mask
    };
    let edges = g
        .edges()
        .iter()
        .filter(|&&(u, v)| mask[u] && mask[v])
        .count();
    debug_assert!(scale * edges as i64 > threshold * members.len() as i64);
    Some(DensestSubgraph {
        vertices: VertexSet::from_sorted_unchecked(n, members),
        edges,
    })
}

/// Maximum average degree over all subgraphs, `2 max_S |E(S)|/|S|`.
pub fn hereditary_degree(g: &Graph) -> f64 {
    densest_subgraph(g).map_or(0.0, |d| 2.0 * d.density())
}
