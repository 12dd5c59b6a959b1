//! Girth, short-cycle enumeration and bicycle-freeness.

use std::collections::VecDeque;

use serde::Serialize;

use crate::graph::{canonical, Edge, Graph};

/// Default number of DFS extension steps allowed in [`short_cycles`].
pub const DEFAULT_CYCLE_BUDGET: usize = 50_000_000;

/// Length of the shortest cycle, `None` for forests.
pub fn girth(g: &Graph) -> Option<usize> {
    let n = g.n();
    let mut best = usize::MAX;
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    let mut touched = Vec::new();
    for root in 0..n {
        for &v in &touched {
            dist[v] = usize::MAX;
            parent[v] = usize::MAX;
        }
        touched.clear();
        queue.clear();
        dist[root] = 0;
        touched.push(root);
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            // nothing shorter can be found past this depth
            if 2 * dist[u] >= best {
                break;
            }
            for &w in g.neighbors(u) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    touched.push(w);
                    queue.push_back(w);
                } else if parent[u] != w {
                    best = best.min(dist[u] + dist[w] + 1);
                }
            }
        }
    }
    (best != usize::MAX).then_some(best)
}

/// Result of a bounded cycle enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShortCycles {
    /// Each cycle as a vertex sequence starting at its smallest vertex, oriented
    /// so that the second vertex is smaller than the last.
    pub cycles: Vec<Vec<usize>>,
    /// `false` when the search budget ran out and the list may be partial.
    pub complete: bool,
}

impl ShortCycles {
    pub fn min_length(&self) -> Option<usize> {
        self.cycles.iter().map(Vec::len).min()
    }
}

/// All simple cycles of length at most `max_len`.
pub fn short_cycles(g: &Graph, max_len: usize) -> ShortCycles {
    short_cycles_with_budget(g, max_len, DEFAULT_CYCLE_BUDGET)
}

/// Like [`short_cycles`] with an explicit bound on DFS extension steps.
pub fn short_cycles_with_budget(g: &Graph, max_len: usize, budget: usize) -> ShortCycles {
    let mut out = ShortCycles {
        cycles: Vec::new(),
        complete: true,
    };
    if max_len < 3 {
        return out;
    }
    let n = g.n();
    let mut on_path = vec![false; n];
    let mut steps = 0usize;
    for start in 0..n {
        let mut path = vec![start];
        on_path[start] = true;
        // iterator stack of neighbour positions
        let mut cursor = vec![0usize];
        while let Some(pos) = cursor.last_mut() {
            let u = *path.last().unwrap();
            let nbrs = g.neighbors(u);
            if *pos >= nbrs.len() {
                cursor.pop();
                on_path[u] = false;
                path.pop();
                continue;
            }
            let w = nbrs[*pos];
            *pos += 1;
            steps += 1;
            if steps > budget {
                out.complete = false;
                for &v in &path {
                    on_path[v] = false;
                }
                return out;
            }
            if w == start {
                if path.len() >= 3 && path[1] < u {
                    out.cycles.push(path.clone());
                }
                continue;
            }
            if w < start || on_path[w] || path.len() >= max_len {
                continue;
            }
            on_path[w] = true;
            path.push(w);
            cursor.push(0);
        }
    }
    out
}

/// Edges of a cycle given as a vertex sequence, canonicalised.
pub fn cycle_edges(cycle: &[usize]) -> Vec<Edge> {
    (0..cycle.len())
        .map(|i| canonical(cycle[i], cycle[(i + 1) % cycle.len()]))
        .collect()
}

/// Largest radius at which every ball holds at most one cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "radius", rename_all = "kebab-case")]
pub enum BicycleFree {
    /// Some ball of radius `r + 1` has cycle rank at least 2.
    Radius(usize),
    /// No ball ever holds two cycles; the value is the graph diameter.
    DiameterCapped(usize),
}

impl BicycleFree {
    pub fn radius(self) -> usize {
        match self {
            BicycleFree::Radius(r) | BicycleFree::DiameterCapped(r) => r,
        }
    }
}

/// Cycle rank `|E| - |V| + 1` of `B(v, r)` for every radius up to the eccentricity of `v`.
pub fn ball_cycle_ranks(g: &Graph, v: usize) -> Vec<i64> {
    let dist = g.distances_from(v);
    let ecc = dist
        .iter()
        .copied()
        .filter(|&d| d != usize::MAX)
        .max()
        .unwrap_or(0);
    let mut vertices = vec![0i64; ecc + 1];
    let mut edges = vec![0i64; ecc + 1];
    for &d in dist.iter().filter(|&&d| d != usize::MAX) {
        vertices[d] += 1;
    }
    for &(a, b) in g.edges() {
        if dist[a] != usize::MAX {
            edges[dist[a].max(dist[b])] += 1;
        }
    }
    let (mut nv, mut ne) = (0i64, 0i64);
    (0..=ecc)
        .map(|r| {
            nv += vertices[r];
            ne += edges[r];
            ne - nv + 1
        })
        .collect()
}

pub fn bicycle_free_radius(g: &Graph) -> BicycleFree {
    let mut bounded: Option<usize> = None;
    for v in 0..g.n() {
        let ranks = ball_cycle_ranks(g, v);
        if let Some(r) = ranks.iter().position(|&rank| rank >= 2) {
            // r >= 1 because a single vertex has rank 0
            let radius = r - 1;
            bounded = Some(bounded.map_or(radius, |b| b.min(radius)));
        }
    }
    match bounded {
        Some(r) => BicycleFree::Radius(r),
        None => BicycleFree::DiameterCapped(g.diameter()),
    }
}
