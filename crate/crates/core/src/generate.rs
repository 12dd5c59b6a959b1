//! Random d-regular graphs from the pairing (configuration) model.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{canonical, Graph};
use crate::rng;

/// Maximum number of pairing attempts before giving up.
pub const RETRY_CAP: usize = 10_000;

/// Degrees up to this value use plain rejection sampling; above it the
/// probability that a uniform pairing is simple (about `exp(-(d^2-1)/4)`)
/// is too small and pairs are drawn sequentially instead.
const REJECTION_MAX_DEGREE: usize = 5;

/// Samples a simple d-regular graph on `n` vertices.
///
/// For `d <= 5` a uniform perfect matching of the `n*d` half-edges is drawn and
/// rejected until it has no loops or multi-edges. For larger `d` half-edges are
/// paired one at a time, rejecting unsuitable pairs and restarting on dead ends.
/// The result is a pure function of `(n, d, seed)`.
pub fn random_regular(n: usize, d: usize, seed: u64) -> Result<Graph> {
    if d < 2 {
        return Err(Error::invalid(format!(
            "degree must be at least 2, got {d}"
        )));
    }
    if d >= n {
        return Err(Error::invalid(format!(
            "degree {d} must be smaller than n = {n}"
        )));
    }
    if (n * d) % 2 == 1 {
        return Err(Error::Parity { n, d });
    }
    let mut rng = rng::rng(seed);
    let edges = if d <= REJECTION_MAX_DEGREE {
        rejection_pairing(n, d, &mut rng)
    } else {
        sequential_pairing(n, d, &mut rng)
    };
    let mut edges = edges.ok_or(Error::GenerationFailed {
        n,
        d,
        attempts: RETRY_CAP,
    })?;
    edges.sort_unstable();
    Ok(Graph::from_canonical(n, edges))
}

fn rejection_pairing(n: usize, d: usize, rng: &mut ChaCha8Rng) -> Option<Vec<(usize, usize)>> {
    let mut points: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::with_capacity(d); n];
    'attempt: for _ in 0..RETRY_CAP {
        points.shuffle(rng);
        adjacency.iter_mut().for_each(Vec::clear);
        let mut edges = Vec::with_capacity(n * d / 2);
        for pair in points.chunks_exact(2) {
            let (u, v) = (pair[0], pair[1]);
            if u == v || adjacency[u].contains(&v) {
                continue 'attempt;
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
            edges.push(canonical(u, v));
        }
        return Some(edges);
    }
    None
}

fn sequential_pairing(n: usize, d: usize, rng: &mut ChaCha8Rng) -> Option<Vec<(usize, usize)>> {
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::with_capacity(d); n];
    'attempt: for _ in 0..RETRY_CAP {
        let mut points: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
        adjacency.iter_mut().for_each(Vec::clear);
        let mut edges = Vec::with_capacity(n * d / 2);
        let mut misses = 0usize;
        while !points.is_empty() {
            let i = rng.random_range(0..points.len());
            let j = rng.random_range(0..points.len());
            let (u, v) = (points[i], points[j]);
            if i == j || u == v || adjacency[u].contains(&v) {
                misses += 1;
                if misses > 64 + 4 * points.len() {
                    if !has_suitable_pair(&points, &adjacency) {
                        continue 'attempt;
                    }
                    misses = 0;
                }
                continue;
            }
            misses = 0;
            adjacency[u].push(v);
            adjacency[v].push(u);
            edges.push(canonical(u, v));
            let (hi, lo) = if i > j { (i, j) } else { (j, i) };
            points.swap_remove(hi);
            points.swap_remove(lo);
        }
        return Some(edges);
    }
    None
}

fn has_suitable_pair(points: &[usize], adjacency: &[Vec<usize>]) -> bool {
    let mut vertices = points.to_vec();
    vertices.sort_unstable();
    vertices.dedup();
    vertices.iter().enumerate().any(|(k, &u)| {
        vertices[k + 1..]
            .iter()
            .any(|&v| !adjacency[u].contains(&v))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_simple_regular(g: &Graph, n: usize, d: usize) {
        assert_eq!(g.n(), n);
        assert_eq!(g.m(), n * d / 2);
        for v in 0..n {
            assert_eq!(g.degree(v), d, "vertex {v}");
            assert!(!g.neighbors(v).contains(&v));
            assert!(g.neighbors(v).windows(2).all(|w| w[0] < w[1]));
        }
        assert_eq!(g.regular_degree(), Some(d));
    }

    #[test]
    fn k4_is_the_only_cubic_graph_on_four_vertices() {
        for seed in 0..5 {
            assert_eq!(random_regular(4, 3, seed).unwrap(), Graph::complete(4));
        }
    }

    #[test]
    fn parity_is_rejected() {
        assert!(matches!(
            random_regular(5, 3, 0),
            Err(Error::Parity { n: 5, d: 3 })
        ));
    }

    #[test]
    fn degree_bounds_are_rejected() {
        assert!(random_regular(10, 1, 0).is_err());
        assert!(random_regular(4, 4, 0).is_err());
    }

    #[test]
    fn cubic_sample_is_simple_and_regular() {
        let g = random_regular(10, 3, 7).unwrap();
        assert_simple_regular(&g, 10, 3);
    }

    #[test]
    fn dense_degrees_use_sequential_pairing() {
        let g = random_regular(300, 100, 1).unwrap();
        assert_simple_regular(&g, 300, 100);
        let g = random_regular(12, 11, 3).unwrap();
        assert_eq!(g, Graph::complete(12));
    }

    #[test]
    fn same_seed_same_graph() {
        assert_eq!(
            random_regular(200, 3, 42).unwrap(),
            random_regular(200, 3, 42).unwrap()
        );
        assert_ne!(
            random_regular(200, 3, 42).unwrap(),
            random_regular(200, 3, 43).unwrap()
        );
        assert_eq!(
            random_regular(100, 8, 5).unwrap(),
            random_regular(100, 8, 5).unwrap()
        );
    }
}
