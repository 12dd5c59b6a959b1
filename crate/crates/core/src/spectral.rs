//! Adjacency spectra: full symmetric eigendecomposition and derived quantities.

use std::fmt::Write as _;

use faer::{Mat, Side};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Full adjacency spectrum with an orthonormal eigenbasis.
///
/// Values are sorted descending. Within a repeated eigenvalue the basis is
/// whatever the solver returns; only the sign of each vector is normalised
/// (first non-negligible coordinate positive), so statistics computed on
/// individual vectors of a degenerate eigenspace depend on that basis.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub values: Vec<f64>,
    /// `vectors[i]` is the unit eigenvector for `values[i]`.
    pub vectors: Vec<Vec<f64>>,
    /// `max_i |A v_i - values[i] v_i|`.
    pub residual: f64,
}

/// Extreme eigenvalues and the spectral expansion `max(lambda_2, -lambda_n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralSummary {
    pub lambda_max: f64,
    pub lambda2: f64,
    pub lambda_min: f64,
    pub expansion: f64,
}

/// JSON export shape for spectra.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumExport {
    pub values: Vec<f64>,
    pub residual: f64,
}

/// Residual allowed for a decomposition of `g`.
pub fn solver_tolerance(g: &Graph) -> f64 {
    1e-8 * g.n().max(1) as f64 * g.max_degree().max(1) as f64
}

/// Pins the dense solver to one thread, once per process. Decompositions are
/// then bitwise reproducible no matter how many workers call them.
pub(crate) fn sequential_solver() {
    static ONCE: std::sync::Once = std::sync::Once::new();
    ONCE.call_once(|| faer::set_global_parallelism(faer::Par::Seq));
}

fn adjacency_matrix(g: &Graph) -> Mat<f64> {
    sequential_solver();
    let n = g.n();
    let mut a = Mat::<f64>::zeros(n, n);
    for &(u, v) in g.edges() {
        a[(u, v)] = 1.0;
        a[(v, u)] = 1.0;
    }
    a
}

/// `y = A x` for the adjacency matrix of `g`.
pub fn adjacency_apply(g: &Graph, x: &[f64], y: &mut [f64]) {
    y.iter_mut().for_each(|v| *v = 0.0);
    for &(u, v) in g.edges() {
        y[u] += x[v];
        y[v] += x[u];
    }
}

/// `x^T A x`.
pub fn quadratic_form(g: &Graph, x: &[f64]) -> f64 {
    2.0 * g.edges().iter().map(|&(u, v)| x[u] * x[v]).sum::<f64>()
}

pub fn eigendecompose(g: &Graph) -> Result<EigenSystem> {
    let n = g.n();
    if n == 0 {
        return Err(Error::invalid("cannot decompose a graph with no vertices"));
    }
    let a = adjacency_matrix(g);
    let evd = a
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Solver {
            reason: format!("{e:?}"),
            residual: f64::NAN,
        })?;
    let s = evd.S().column_vector();
    let u = evd.U();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| s[j].total_cmp(&s[i]).then(i.cmp(&j)));

    let mut values = Vec::with_capacity(n);
    let mut vectors = Vec::with_capacity(n);
    for &k in &order {
        let mut v: Vec<f64> = (0..n).map(|i| u[(i, k)]).collect();
        canonicalize_sign(&mut v);
        values.push(s[k]);
        vectors.push(v);
    }

    let mut scratch = vec![0.0; n];
    let mut residual = 0.0f64;
    for (lambda, v) in values.iter().zip(&vectors) {
        adjacency_apply(g, v, &mut scratch);
        let r = scratch
            .iter()
            .zip(v)
            .map(|(av, x)| (av - lambda * x).powi(2))
            .sum::<f64>()
            .sqrt();
        residual = residual.max(r);
    }
    if !residual.is_finite() || residual > solver_tolerance(g) {
        return Err(Error::Solver {
            reason: "residual above tolerance".into(),
            residual,
        });
    }
    Ok(EigenSystem {
        values,
        vectors,
        residual,
    })
}

/// Eigenvalues only, sorted descending.
pub fn eigenvalues(g: &Graph) -> Result<Vec<f64>> {
    if g.n() == 0 {
        return Ok(Vec::new());
    }
    let a = adjacency_matrix(g);
    let mut values = a
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::Solver {
            reason: format!("{e:?}"),
            residual: f64::NAN,
        })?;
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(values)
}

fn canonicalize_sign(v: &mut [f64]) {
    let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if let Some(&first) = v.iter().find(|x| x.abs() > 1e-10 * scale) {
        if first < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

impl SpectralSummary {
    /// Summary of a descending spectrum with at least two values.
    pub fn from_values(values: &[f64]) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::invalid("spectral expansion needs n >= 2"));
        }
        let lambda_max = values[0];
        let lambda2 = values[1];
        let lambda_min = values[values.len() - 1];
        Ok(SpectralSummary {
            lambda_max,
            lambda2,
            lambda_min,
            expansion: lambda2.max(-lambda_min),
        })
    }
}

impl EigenSystem {
    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn summary(&self) -> Result<SpectralSummary> {
        SpectralSummary::from_values(&self.values)
    }

    pub fn export(&self) -> SpectrumExport {
        SpectrumExport {
            values: self.values.clone(),
            residual: self.residual,
        }
    }

    /// Eigenvectors as CSV, one row per vertex and one column per eigenvalue.
    pub fn vectors_csv(&self) -> String {
        let n = self.n();
        let mut out = String::new();
        let header: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
        let _ = writeln!(out, "vertex,{}", header.join(","));
        for row in 0..n {
            let _ = write!(out, "{row}");
            for v in &self.vectors {
                let _ = write!(out, ",{:e}", v[row]);
            }
            out.push('\n');
        }
        out
    }
}

pub fn spectral_expansion(g: &Graph) -> Result<SpectralSummary> {
    SpectralSummary::from_values(&eigenvalues(g)?)
}

/// Rayleigh quotient `f^T A f / |f|^2`.
pub fn rayleigh(g: &Graph, f: &[f64]) -> Result<f64> {
    if f.len() != g.n() {
        return Err(Error::invalid(format!(
            "vector length {} does not match n = {}",
            f.len(),
            g.n()
        )));
    }
    let norm2: f64 = f.iter().map(|x| x * x).sum();
    if norm2 == 0.0 {
        return Err(Error::invalid("Rayleigh quotient of the zero vector"));
    }
    Ok(quadratic_form(g, f) / norm2)
}

/// Largest adjacency eigenvalue (0 for graphs without vertices).
pub fn spectral_radius(g: &Graph) -> Result<f64> {
    Ok(eigenvalues(g)?.first().copied().unwrap_or(0.0).max(0.0))
}
