use std::fmt::Write as _;

use rand::seq::SliceRandom;
use serde::Serialize;

use super::model::ball_size;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng;

/// Where a set of local samples came from.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Source {
    Wave {
        d: usize,
        lambda: f64,
        sigma: f64,
        seed: u64,
    },
    Graph {
        graph_hash: String,
        seed: u64,
    },
}

/// How to fill a sample whose ball has fewer than `C_l` vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Padding {
    /// Keep the ball entries and append zeros.
    #[default]
    Tail,
    /// Replace the whole sample by the zero vector.
    ZeroAll,
}

/// Samples of length `width = C_radius`, one per row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocalDistribution {
    pub radius: usize,
    pub width: usize,
    pub samples: Vec<Vec<f64>>,
    pub source: Source,
}

impl LocalDistribution {
    /// Coordinate `k` of every sample.
    pub fn coordinate(&self, k: usize) -> Vec<f64> {
        self.samples.iter().map(|x| x[k]).collect()
    }

    /// Header `x0,...` then one row per sample, shortest round-trip formatting.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let header: Vec<String> = (0..self.width).map(|k| format!("x{k}")).collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for x in &self.samples {
            for (k, v) in x.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                let _ = write!(out, "{v}");
            }
            out.push('\n');
        }
        out
    }
}

pub fn local_distribution(
    g: &Graph,
    f: &[f64],
    radius: usize,
    seed: u64,
) -> Result<LocalDistribution> {
    local_distribution_with(g, f, radius, seed, Padding::Tail)
}

/// One sample per vertex `u`: `sqrt(n) f` read along a breadth-first search
/// from `u` whose ties are broken by a stream derived from `(seed, u)`.
pub fn local_distribution_with(
    g: &Graph,
    f: &[f64],
    radius: usize,
    seed: u64,
    padding: Padding,
) -> Result<LocalDistribution> {
    let n = g.n();
    let d = g
        .regular_degree()
        .ok_or_else(|| Error::precondition("local statistics need a regular graph"))?;
    if f.len() != n {
        return Err(Error::invalid("vector length differs from vertex count"));
    }
    let norm2: f64 = f.iter().map(|x| x * x).sum();
    if (norm2 - 1.0).abs() > 1e-8 {
        return Err(Error::precondition(format!("|f|^2 = {norm2}, expected 1")));
    }
    let width = ball_size(d, radius);
    let scale = (n as f64).sqrt();
    let mut stamp = vec![usize::MAX; n];
    let mut depth = vec![0usize; n];
    let mut samples = Vec::with_capacity(n);
    let mut order = Vec::with_capacity(width);
    let mut fresh = Vec::with_capacity(d);
    for u in 0..n {
        let mut rng = rng::rng_for(seed, u as u64);
        order.clear();
        order.push(u);
        stamp[u] = u;
        depth[u] = 0;
        let mut head = 0;
        while head < order.len() {
            let w = order[head];
            head += 1;
            if depth[w] == radius {
                continue;
            }
            fresh.clear();
            fresh.extend(g.neighbors(w).iter().copied().filter(|&x| stamp[x] != u));
            fresh.shuffle(&mut rng);
            for &x in &fresh {
                stamp[x] = u;
                depth[x] = depth[w] + 1;
                order.push(x);
            }
        }
        let mut x = vec![0.0; width];
        if padding == Padding::Tail || order.len() == width {
            for (slot, &v) in x.iter_mut().zip(&order) {
                *slot = scale * f[v];
            }
        }
        samples.push(x);
    }
    Ok(LocalDistribution {
        radius,
        width,
        samples,
        source: Source::Graph {
            graph_hash: g.content_hash().to_owned(),
            seed,
        },
    })
}

/// Mean of `x_k^2`.
pub fn second_moment(dist: &LocalDistribution, k: usize) -> f64 {
    let m = dist.samples.len().max(1) as f64;
    dist.samples.iter().map(|x| x[k] * x[k]).sum::<f64>() / m
}

/// Mean over samples and over the `d` neighbour slots of `x_0 x_slot`.
pub fn neighbor_correlation(dist: &LocalDistribution, d: usize) -> Result<f64> {
    if dist.width < d + 1 {
        return Err(Error::invalid("samples have no neighbour slots"));
    }
    let m = dist.samples.len().max(1) as f64;
    let total: f64 = dist
        .samples
        .iter()
        .map(|x| x[1..=d].iter().map(|v| x[0] * v).sum::<f64>())
        .sum();
    Ok(total / (m * d as f64))
}
