use faer::{Mat, Side};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use super::local::{LocalDistribution, Source};
use super::spherical::SphericalProfile;
use crate::error::{Error, Result};
use crate::rng;

/// Samples per shard. Shard `i` draws from `rng_for(seed, i)`, so the sample
/// stream does not depend on how many workers process the shards.
pub const CHUNK: usize = 1 << 16;

/// Covariance eigenvalues in `[-PSD_TOLERANCE, 0)` are clamped to zero; lower
/// ones reject the model.
const PSD_TOLERANCE: f64 = 1e-10;

/// `C_R = 1 + d((d-1)^R - 1)/(d-2)`, the number of vertices of a radius-`R`
/// ball in the `d`-regular tree.
pub fn ball_size(d: usize, radius: usize) -> usize {
    if radius == 0 {
        return 1;
    }
    let mut size = 1 + d;
    let mut layer = d;
    for _ in 1..radius {
        layer *= d - 1;
        size += layer;
    }
    size
}

/// The wave restricted to a tree ball.
#[derive(Debug, Clone, Serialize)]
pub struct WaveModel {
    pub d: usize,
    pub lambda: f64,
    pub radius: usize,
    /// `Sigma[u][v] = Phi(dist(u, v))` in breadth-first layout.
    pub covariance: Vec<Vec<f64>>,
    /// Smallest eigenvalue of `Sigma` before clamping.
    pub min_eigenvalue: f64,
    #[serde(skip)]
    parent: Vec<usize>,
    #[serde(skip)]
    depth: Vec<usize>,
    /// Symmetric square root of the repaired covariance, row-major.
    #[serde(skip)]
    factor: Vec<f64>,
}

impl WaveModel {
    pub fn new(d: usize, lambda: f64, radius: usize) -> Result<Self> {
        if radius < 1 {
            return Err(Error::invalid("wave radius must be at least 1"));
        }
        let profile = SphericalProfile::new(d, lambda, 2 * radius)?;
        let size = ball_size(d, radius);
        // vertex 0 is the root; children follow their parents layer by layer
        let mut parent = vec![0usize; size];
        let mut depth = vec![0usize; size];
        let mut next = 1;
        for v in 0..size {
            if depth[v] == radius {
                continue;
            }
            let children = if v == 0 { d } else { d - 1 };
            for _ in 0..children {
                parent[next] = v;
                depth[next] = depth[v] + 1;
                next += 1;
            }
        }
        debug_assert_eq!(next, size);

        let mut covariance = vec![vec![0.0; size]; size];
        for u in 0..size {
            for v in u..size {
                let phi = profile.values[tree_distance(&parent, &depth, u, v)];
                covariance[u][v] = phi;
                covariance[v][u] = phi;
            }
        }

        crate::spectral::sequential_solver();
        let sigma = Mat::<f64>::from_fn(size, size, |i, j| covariance[i][j]);
        let evd = sigma
            .self_adjoint_eigen(Side::Lower)
            .map_err(|e| Error::Solver {
                reason: format!("{e:?}"),
                residual: f64::NAN,
            })?;
        let s = evd.S().column_vector();
        let u = evd.U();
        let min_eigenvalue = (0..size).map(|k| s[k]).fold(f64::INFINITY, f64::min);
        if min_eigenvalue < -PSD_TOLERANCE {
            return Err(Error::ModelInvalid {
                eigenvalue: min_eigenvalue,
            });
        }
        let roots: Vec<f64> = (0..size).map(|k| s[k].max(0.0).sqrt()).collect();
        let mut factor = vec![0.0; size * size];
        for i in 0..size {
            for j in i..size {
                let x: f64 = (0..size).map(|k| u[(i, k)] * roots[k] * u[(j, k)]).sum();
                factor[i * size + j] = x;
                factor[j * size + i] = x;
            }
        }
        Ok(WaveModel {
            d,
            lambda,
            radius,
            covariance,
            min_eigenvalue,
            parent,
            depth,
            factor,
        })
    }

    pub fn size(&self) -> usize {
        self.covariance.len()
    }

    /// Tree distance between two positions of the layout.
    pub fn distance(&self, u: usize, v: usize) -> usize {
        tree_distance(&self.parent, &self.depth, u, v)
    }

    /// Runs `f` once per shard and returns the results in shard order.
    pub(crate) fn map_chunks<T, F>(&self, sigma: f64, m: usize, seed: u64, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(Draws<'_>) -> T + Sync,
    {
        let chunks = m.div_ceil(CHUNK);
        (0..chunks)
            .into_par_iter()
            .map(|i| {
                f(Draws {
                    model: self,
                    sigma,
                    rng: rng::rng_for(seed, i as u64),
                    remaining: CHUNK.min(m - i * CHUNK),
                    g: vec![0.0; self.size()],
                    x: vec![0.0; self.size()],
                })
            })
            .collect()
    }
}

fn tree_distance(parent: &[usize], depth: &[usize], mut u: usize, mut v: usize) -> usize {
    let mut steps = 0;
    while depth[u] > depth[v] {
        u = parent[u];
        steps += 1;
    }
    while depth[v] > depth[u] {
        v = parent[v];
        steps += 1;
    }
    while u != v {
        u = parent[u];
        v = parent[v];
        steps += 2;
    }
    steps
}

/// Sample stream of one shard.
pub(crate) struct Draws<'a> {
    model: &'a WaveModel,
    sigma: f64,
    rng: ChaCha8Rng,
    remaining: usize,
    g: Vec<f64>,
    x: Vec<f64>,
}

impl Draws<'_> {
    pub(crate) fn next_sample(&mut self) -> Option<&[f64]> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        if self.sigma == 0.0 {
            self.x.fill(0.0);
            return Some(&self.x);
        }
        let size = self.g.len();
        for gi in self.g.iter_mut() {
            *gi = self.rng.sample(StandardNormal);
        }
        for (i, xi) in self.x.iter_mut().enumerate() {
            let row = &self.model.factor[i * size..(i + 1) * size];
            *xi = self.sigma * row.iter().zip(&self.g).map(|(a, b)| a * b).sum::<f64>();
        }
        Some(&self.x)
    }
}

/// `m` independent draws of `sigma * Sigma^{1/2} g`.
pub fn sample_wave(
    model: &WaveModel,
    sigma: f64,
    m: usize,
    seed: u64,
) -> Result<LocalDistribution> {
    if !(0.0..=1.0).contains(&sigma) {
        return Err(Error::invalid(format!("sigma {sigma} not in [0, 1]")));
    }
    if m == 0 {
        return Err(Error::invalid("sample count must be positive"));
    }
    let shards = model.map_chunks(sigma, m, seed, |mut draws| {
        let mut out = Vec::new();
        while let Some(x) = draws.next_sample() {
            out.push(x.to_vec());
        }
        out
    });
    Ok(LocalDistribution {
        radius: model.radius,
        width: model.size(),
        samples: shards.into_iter().flatten().collect(),
        source: Source::Wave {
            d: model.d,
            lambda: model.lambda,
            sigma,
            seed,
        },
    })
}

/// Raw second moments `E[x_i x_j]` of a sample set.
pub fn empirical_covariance(dist: &LocalDistribution) -> Vec<Vec<f64>> {
    let w = dist.width;
    let mut acc = vec![vec![0.0; w]; w];
    for x in &dist.samples {
        for i in 0..w {
            for j in i..w {
                acc[i][j] += x[i] * x[j];
            }
        }
    }
    let m = dist.samples.len().max(1) as f64;
    for i in 0..w {
        for j in i..w {
            acc[i][j] /= m;
            acc[j][i] = acc[i][j];
        }
    }
    acc
}
