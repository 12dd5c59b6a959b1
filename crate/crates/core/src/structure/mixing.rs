use serde::Serialize;

use crate::certificate::BOUND_SLACK;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::spectral::spectral_expansion;

/// One evaluation of the expander mixing inequality.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixingReport {
    pub s: VertexSet,
    pub t: VertexSet,
    /// Ordered tuples `(u, v)` with `u in S`, `v in T`, `{u, v}` an edge. Edges
    /// inside `S ∩ T` are counted in both orientations.
    pub e_st: usize,
    /// `d |S| |T| / n`.
    pub center: f64,
    /// `lambda(G) sqrt(|S||T| (1 - |S|/n)(1 - |T|/n))`.
    pub radius: f64,
    pub holds: bool,
}

pub fn mixing_certificate(g: &Graph, s: &VertexSet, t: &VertexSet) -> Result<MixingReport> {
    let expansion = spectral_expansion(g)?.expansion;
    mixing_certificate_with(g, s, t, expansion)
}

/// Mixing check with a precomputed spectral expansion.
pub fn mixing_certificate_with(
    g: &Graph,
    s: &VertexSet,
    t: &VertexSet,
    expansion: f64,
) -> Result<MixingReport> {
    let d = g
        .regular_degree()
        .ok_or_else(|| Error::precondition("mixing lemma needs a regular graph"))?;
    if s.host_n() != g.n() || t.host_n() != g.n() {
        return Err(Error::invalid("vertex sets belong to a different host"));
    }
    let in_t = t.mask();
    let e_st = s
        .members()
        .iter()
        .map(|&u| g.neighbors(u).iter().filter(|&&v| in_t[v]).count())
        .sum();
    let n = g.n() as f64;
    let (a, b) = (s.len() as f64, t.len() as f64);
    let center = d as f64 * a * b / n;
    let radius = expansion * (a * b * (1.0 - a / n) * (1.0 - b / n)).max(0.0).sqrt();
    Ok(MixingReport {
        s: s.clone(),
        t: t.clone(),
        e_st,
        center,
        radius,
        holds: (e_st as f64 - center).abs() <= radius + BOUND_SLACK,
    })
}
