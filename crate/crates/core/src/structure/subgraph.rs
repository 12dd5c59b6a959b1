use std::collections::BTreeSet;

use serde::Serialize;

use crate::certificate::BOUND_SLACK;
use crate::cycles::girth;
use crate::density::hereditary_degree;
use crate::error::{Error, Result};
use crate::graph::{canonical, Edge, Graph, VertexSet};
use crate::nodal::{singletons_from_signs, SignVector};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HOptions {
    /// Slack in the hereditary-degree check `<= 2 + delta`.
    pub delta: f64,
    /// Girth that `H` is expected to reach (item 1).
    pub girth_target: usize,
}

impl Default for HOptions {
    fn default() -> Self {
        HOptions {
            delta: 0.1,
            girth_target: 3,
        }
    }
}

/// Outcome of the four checks on `H`. Failures are data: they record which
/// hypotheses the input did not meet.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HChecks {
    pub girth_ok: bool,
    pub max_degree_ok: bool,
    pub hereditary_degree_ok: bool,
    pub quad_form_ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct HReport {
    /// `S`, in host labels; `H` uses the positions in this list as vertex ids.
    pub vertices: VertexSet,
    #[serde(skip)]
    pub h: Graph,
    /// Same-sign edges of `G[S]`.
    pub removed_plus: Vec<Edge>,
    /// One edge per full-degree singleton vertex of `S`.
    pub removed_circ: Vec<Edge>,
    /// `F ∩ E(G[S])` not already removed.
    pub removed_f: Vec<Edge>,
    pub checks: HChecks,
    /// `f_S^T A_H f_S / |f_S|^2`.
    pub quad_form: f64,
    /// `f^T A_G f / |f|^2`.
    pub lambda: f64,
    /// `1 - |f_S|^2 / |f|^2`.
    pub eta: f64,
    /// Whether `4 d sqrt(eta) < delta sqrt(d - 2)`.
    pub eta_constraint: bool,
    pub girth: Option<usize>,
    pub max_degree: usize,
    pub hereditary_degree: f64,
    /// `f_S^T A f_S` over `G[S]` and over each removed class, unnormalised.
    pub energy_induced: f64,
    pub energy_plus: f64,
    pub energy_circ: f64,
    pub energy_f: f64,
}

fn energy(edges: &[Edge], f: &[f64]) -> f64 {
    2.0 * edges.iter().map(|&(u, v)| f[u] * f[v]).sum::<f64>()
}

/// Builds `H = G[S] - (L+ ∪ L∘ ∪ (F ∩ E(G[S])))` and evaluates its properties.
///
/// `L+` holds the edges of `G[S]` whose endpoints satisfy `f(u) f(v) >= 0`.
/// `L∘` takes, for every vertex of `S` that is a singleton nodal domain of `f`
/// in `G` and has full degree in `G[S]`, its lexicographically least incident
/// edge not already removed.
pub fn build_h(
    g: &Graph,
    f: &[f64],
    s: &VertexSet,
    forbidden: &[Edge],
    options: HOptions,
) -> Result<HReport> {
    let d = g
        .regular_degree()
        .ok_or_else(|| Error::precondition("graph is not regular"))?;
    if f.len() != g.n() || s.host_n() != g.n() {
        return Err(Error::invalid(
            "vector or vertex set does not match the graph",
        ));
    }
    let signs = SignVector::new(f).signs;
    let induced = g.induced_edges(s);
    let mut removed: BTreeSet<Edge> = BTreeSet::new();

    let removed_plus: Vec<Edge> = induced
        .iter()
        .copied()
        .filter(|&(u, v)| i16::from(signs[u]) * i16::from(signs[v]) >= 0)
        .collect();
    removed.extend(removed_plus.iter().copied());

    let in_s = s.mask();
    let mut removed_circ = Vec::new();
    for v in singletons_from_signs(g, &signs) {
        if !in_s[v] || g.neighbors(v).iter().any(|&u| !in_s[u]) {
            continue;
        }
        // neighbours are sorted, so the first free edge is the least one
        let pick = g
            .neighbors(v)
            .iter()
            .map(|&u| canonical(u, v))
            .filter(|e| !removed.contains(e))
            .min();
        if let Some(e) = pick {
            removed.insert(e);
            removed_circ.push(e);
        }
    }
    removed_circ.sort_unstable();

    let mut removed_f: Vec<Edge> = forbidden
        .iter()
        .map(|&(u, v)| canonical(u, v))
        .filter(|&(u, v)| in_s[u] && in_s[v] && g.has_edge(u, v))
        .filter(|e| !removed.contains(e))
        .collect();
    removed_f.sort_unstable();
    removed_f.dedup();
    removed.extend(removed_f.iter().copied());

    let kept: Vec<Edge> = induced
        .iter()
        .copied()
        .filter(|e| !removed.contains(e))
        .collect();

    let mut index = vec![usize::MAX; g.n()];
    for (i, &v) in s.members().iter().enumerate() {
        index[v] = i;
    }
    let h = Graph::from_edges(s.len(), kept.iter().map(|&(u, v)| (index[u], index[v])))?;

    let norm2: f64 = f.iter().map(|x| x * x).sum();
    let norm_s2: f64 = s.members().iter().map(|&v| f[v] * f[v]).sum();
    let energy_h = energy(&kept, f);
    let quad_form = if norm_s2 > 0.0 {
        energy_h / norm_s2
    } else {
        0.0
    };
    let lambda = if norm2 > 0.0 {
        energy(g.edges(), f) / norm2
    } else {
        0.0
    };
    let eta = if norm2 > 0.0 {
        (1.0 - norm_s2 / norm2).max(0.0)
    } else {
        0.0
    };
    let dd = d as f64;
    let h_girth = girth(&h);
    let max_degree = h.max_degree();
    let hd = hereditary_degree(&h);
    let checks = HChecks {
        girth_ok: h_girth.is_none_or(|len| len >= options.girth_target),
        max_degree_ok: max_degree < d,
        hereditary_degree_ok: hd <= 2.0 + options.delta + BOUND_SLACK,
        quad_form_ok: quad_form <= lambda + 4.0 * dd * eta.sqrt() + BOUND_SLACK,
    };
    Ok(HReport {
        vertices: s.clone(),
        h,
        energy_induced: energy(&induced, f),
        energy_plus: energy(&removed_plus, f),
        energy_circ: energy(&removed_circ, f),
        energy_f: energy(&removed_f, f),
        removed_plus,
        removed_circ,
        removed_f,
        checks,
        quad_form,
        lambda,
        eta,
        eta_constraint: 4.0 * dd * eta.sqrt() < options.delta * (dd - 2.0).max(0.0).sqrt(),
        girth: h_girth,
        max_degree,
        hereditary_degree: hd,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::random_regular;
    use crate::spectral::eigendecompose;

    #[test]
    fn same_sign_edges_are_gone() {
        let g = random_regular(60, 3, 11).unwrap();
        let es = eigendecompose(&g).unwrap();
        let f = es.vectors.last().unwrap();
        let s = VertexSet::full(60);
        let r = build_h(&g, f, &s, &[], HOptions::default()).unwrap();
        for &(u, v) in r.h.edges() {
            assert!(f[u] * f[v] < 0.0);
        }
        assert!(r.eta.abs() < 1e-12);
    }

    #[test]
    fn edge_partition_identity() {
        let g = random_regular(80, 3, 5).unwrap();
        let es = eigendecompose(&g).unwrap();
        let f = &es.vectors[70];
        let s = VertexSet::new(80, (0..80).filter(|v| v % 3 != 0)).unwrap();
        let forbidden = vec![g.edges()[0], g.edges()[5], g.edges()[9]];
        let r = build_h(&g, f, &s, &forbidden, HOptions::default()).unwrap();
        let total = r.h.m() + r.removed_plus.len() + r.removed_circ.len() + r.removed_f.len();
        assert_eq!(total, g.induced_edges(&s).len());
        let norm_s2: f64 = s.members().iter().map(|&v| f[v] * f[v]).sum();
        let lhs = r.energy_induced;
        let rhs = r.quad_form * norm_s2 + r.energy_plus + r.energy_circ + r.energy_f;
        assert!((lhs - rhs).abs() < 1e-9);
    }

    #[test]
    fn complete_bipartite_singletons() {
        // every vertex is a full-degree singleton; vertex 3 finds all of its
        // edges already taken by 0, 1 and 2 and removes nothing
        let g = Graph::complete_bipartite(3, 3);
        let f = [1.0, 1.0, 1.0, -1.0, -1.0, -1.0];
        let r = build_h(&g, &f, &VertexSet::full(6), &[], HOptions::default()).unwrap();
        assert!(r.removed_plus.is_empty());
        assert_eq!(r.removed_circ, vec![(0, 3), (0, 4), (0, 5), (1, 3), (2, 3)]);
        assert!(r.checks.max_degree_ok);
        assert_eq!(r.h.m(), 4);
    }
}
