//! Slow reference implementations used to cross-check the fast algorithms.
//!
//! Each function evaluates its quantity straight from the definition by
//! exhaustive enumeration or scanning. They are exported so that test suites
//! outside the crate can use them, and are not meant for production sizes.

use std::collections::VecDeque;

use rand::Rng;

use crate::graph::Graph;
use crate::rng;

/// Erdős–Rényi graph `G(n, p)` from a seeded stream.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut r = rng::rng(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if r.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).expect("simple by construction")
}

/// Uniform random labelled tree on `n` vertices (random attachment), with
/// every degree capped at `max_degree`.
pub fn random_tree(n: usize, max_degree: usize, seed: u64) -> Graph {
    assert!(max_degree >= 2 || n <= 2);
    let mut r = rng::rng(seed);
    let mut degree = vec![0usize; n];
    let mut edges = Vec::new();
    for v in 1..n {
        let open: Vec<usize> = (0..v).filter(|&u| degree[u] < max_degree).collect();
        let u = open[r.random_range(0..open.len())];
        degree[u] += 1;
        degree[v] += 1;
        edges.push((u, v));
    }
    Graph::from_edges(n, edges).expect("tree edges are simple")
}

/// Small named graphs with at most 12 vertices.
pub fn small_catalog() -> Vec<Graph> {
    let mut out = vec![Graph::petersen()];
    for n in 1..=12 {
        out.push(Graph::empty(n));
        out.push(Graph::path(n));
        out.push(Graph::complete(n));
        if n >= 3 {
            out.push(Graph::cycle(n));
        }
        if n >= 2 {
            out.push(Graph::star(n - 1));
        }
        for a in 1..n {
            out.push(Graph::complete_bipartite(a, n - a));
        }
        if n >= 4 {
            // wheel: cycle on 1..n plus hub 0
            let rim = n - 1;
            let edges = (1..n)
                .map(|i| (0, i))
                .chain((0..rim).map(|i| (1 + i, 1 + (i + 1) % rim)));
            out.push(Graph::from_edges(n, edges).expect("wheel"));
        }
    }
    // K5 with a pendant path, and two disjoint triangles joined by an edge
    out.push(
        Graph::from_edges(
            8,
            [
                (0, 1),
                (0, 2),
                (0, 3),
                (0, 4),
                (1, 2),
                (1, 3),
                (1, 4),
                (2, 3),
                (2, 4),
                (3, 4),
            ]
            .into_iter()
            .chain([(4, 5), (5, 6), (6, 7)]),
        )
        .expect("K5 with tail"),
    );
    out.push(
        Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])
            .expect("bowtie"),
    );
    out
}

fn neighbor_masks(g: &Graph) -> Vec<u64> {
    assert!(g.n() <= 30, "enumeration oracles need n <= 30");
    (0..g.n())
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, &w| m | 1 << w))
        .collect()
}

/// `max 2|E(T)|/|T|` over all nonempty vertex subsets `T`.
pub fn hereditary_degree_by_enumeration(g: &Graph) -> f64 {
    let n = g.n();
    let nbr = neighbor_masks(g);
    let mut best = 0.0f64;
    for mask in 1u64..(1u64 << n) {
        let mut twice_edges = 0u32;
        let mut bits = mask;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            twice_edges += (nbr[v] & mask).count_ones();
            bits &= bits - 1;
        }
        best = best.max(twice_edges as f64 / mask.count_ones() as f64);
    }
    best
}

/// `min |E(S, S̄)|/|S|` over nonempty `S` with `|S| <= max_size`.
pub fn edge_expansion_by_enumeration(g: &Graph, max_size: usize) -> f64 {
    let n = g.n();
    let nbr = neighbor_masks(g);
    let mut best = f64::INFINITY;
    for mask in 1u64..(1u64 << n) {
        let size = mask.count_ones() as usize;
        if size > max_size {
            continue;
        }
        let mut boundary = 0u32;
        let mut bits = mask;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            boundary += (nbr[v] & !mask).count_ones();
            bits &= bits - 1;
        }
        best = best.min(boundary as f64 / size as f64);
    }
    best
}

/// Shortest cycle through each edge `{u, v}` is one more than the distance
/// from `u` to `v` once that edge is deleted.
pub fn girth_by_edge_deletion(g: &Graph) -> Option<usize> {
    let mut best: Option<usize> = None;
    let mut dist = vec![usize::MAX; g.n()];
    for &(u, v) in g.edges() {
        dist.iter_mut().for_each(|x| *x = usize::MAX);
        dist[u] = 0;
        let mut queue = VecDeque::from([u]);
        while let Some(w) = queue.pop_front() {
            for &x in g.neighbors(w) {
                if (w == u && x == v) || (w == v && x == u) {
                    continue;
                }
                if dist[x] == usize::MAX {
                    dist[x] = dist[w] + 1;
                    queue.push_back(x);
                }
            }
        }
        if dist[v] != usize::MAX {
            let len = dist[v] + 1;
            best = Some(best.map_or(len, |b| b.min(len)));
        }
    }
    best
}

fn normal_cdf(x: f64, sigma: f64) -> f64 {
    if sigma == 0.0 {
        if x >= 0.0 {
            1.0
        } else {
            0.0
        }
    } else {
        0.5 * libm::erfc(-x / (sigma * std::f64::consts::SQRT_2))
    }
}

/// Lévy–Prokhorov distance to `N(0, sigma^2)` by scanning `eps`: a coarse
/// pass with step `1e-3`, then a fine pass with step `5e-5` below the first
/// coarse success. Feasibility is tested on a dense `x` grid together with
/// every sample point shifted by `±eps` and nudged to either side.
pub fn lp_distance_by_grid_scan(samples: &[f64], sigma: f64) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let m = sorted.len() as f64;
    let ecdf = |x: f64| sorted.partition_point(|&s| s <= x) as f64 / m;
    let lo = sorted[0].min(-4.0 * sigma) - 2.0;
    let hi = sorted[sorted.len() - 1].max(4.0 * sigma) + 2.0;
    let grid: Vec<f64> = (0..=4000)
        .map(|i| lo + (hi - lo) * i as f64 / 4000.0)
        .chain([0.0, -1e-9, 1e-9])
        .collect();
    let feasible = |eps: f64| {
        let nudge = 1e-9;
        let special = sorted.iter().flat_map(|&s| {
            [
                s - eps - nudge,
                s - eps,
                s - eps + nudge,
                s + eps - nudge,
                s + eps,
                s + eps + nudge,
            ]
        });
        grid.iter().copied().chain(special).all(|x| {
            let g = normal_cdf(x, sigma);
            ecdf(x - eps) - eps <= g + 1e-12 && g <= ecdf(x + eps) + eps + 1e-12
        })
    };
    let mut coarse = 1.0;
    for k in 0..=1000 {
        let eps = k as f64 * 1e-3;
        if feasible(eps) {
            coarse = eps;
            break;
        }
    }
    let start = (coarse - 1e-3).max(0.0);
    let mut k = 0;
    loop {
        let eps = start + k as f64 * 5e-5;
        if eps >= coarse || feasible(eps) {
            return eps.min(coarse);
        }
        k += 1;
    }
}
