//! Nodal domains and the deterministic certificates on their sizes and counts.

use serde::{Deserialize, Serialize};

use crate::certificate::{Certificate, Outcome, Provenance};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::spectral::spectral_expansion;
use crate::union_find::UnionFind;

/// Entries with `|f(v)| <= ZERO_TOLERANCE * max|f|` are treated as zero.
pub const ZERO_TOLERANCE: f64 = 1e-12;

/// Margin by which `lambda(G)` must stay below `d` for the expander bounds.
pub const EXPANSION_MARGIN: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Weak,
    Strong,
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "weak" => Ok(Mode::Weak),
            "strong" => Ok(Mode::Strong),
            other => Err(Error::invalid(format!("unknown mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Positive,
    Negative,
    /// A weak domain made only of zero entries.
    Zero,
}

/// Sign pattern of a vector after thresholding tiny entries to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SignVector {
    pub values: Vec<f64>,
    /// Per-vertex sign: `1`, `-1` or `0`.
    pub signs: Vec<i8>,
    pub zero_count: usize,
    pub positive_set: VertexSet,
    pub negative_set: VertexSet,
}

impl SignVector {
    pub fn new(f: &[f64]) -> Self {
        Self::with_tolerance(f, ZERO_TOLERANCE)
    }

    /// `relative_tol` is scaled by `max|f|`; an all-zero vector is all zeros.
    pub fn with_tolerance(f: &[f64], relative_tol: f64) -> Self {
        let threshold = relative_tol * f.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let signs: Vec<i8> = f
            .iter()
            .map(|&x| {
                if x.abs() <= threshold {
                    0
                } else if x > 0.0 {
                    1
                } else {
                    -1
                }
            })
            .collect();
        let n = f.len();
        let positive_set =
            VertexSet::from_sorted_unchecked(n, (0..n).filter(|&v| signs[v] > 0).collect());
        let negative_set =
            VertexSet::from_sorted_unchecked(n, (0..n).filter(|&v| signs[v] < 0).collect());
        SignVector {
            values: f.to_vec(),
            zero_count: n - positive_set.len() - negative_set.len(),
            signs,
            positive_set,
            negative_set,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodalDomain {
    pub sign: Sign,
    pub vertices: VertexSet,
}

impl NodalDomain {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_singleton(&self) -> bool {
        self.vertices.len() == 1
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodalPartition {
    pub mode: Mode,
    /// Positive domains first, then negative, then all-zero weak domains;
    /// each group ordered by smallest vertex.
    pub domains: Vec<NodalDomain>,
    pub singleton_flags: Vec<bool>,
    /// Sum of the two largest domain sizes (zero vertices counted in each
    /// weak domain that lists them).
    pub two_largest_total: usize,
}

impl NodalPartition {
    pub fn count(&self) -> usize {
        self.domains.len()
    }

    pub fn singleton_domains(&self) -> usize {
        self.singleton_flags.iter().filter(|&&s| s).count()
    }
}

pub fn nodal_domains(g: &Graph, f: &[f64], mode: Mode) -> Result<NodalPartition> {
    nodal_domains_with_tolerance(g, f, mode, ZERO_TOLERANCE)
}

pub fn nodal_domains_with_tolerance(
    g: &Graph,
    f: &[f64],
    mode: Mode,
    relative_tol: f64,
) -> Result<NodalPartition> {
    check_len(g, f)?;
    let sv = SignVector::with_tolerance(f, relative_tol);
    Ok(partition_from_signs(g, &sv.signs, mode))
}

pub(crate) fn partition_from_signs(g: &Graph, signs: &[i8], mode: Mode) -> NodalPartition {
    let n = g.n();
    let (in_pos, in_neg): (fn(i8) -> bool, fn(i8) -> bool) = match mode {
        Mode::Strong => (|s| s > 0, |s| s < 0),
        Mode::Weak => (|s| s >= 0, |s| s <= 0),
    };
    let mut pos = UnionFind::new(n);
    let mut neg = UnionFind::new(n);
    for &(u, v) in g.edges() {
        let (su, sv) = (signs[u], signs[v]);
        if in_pos(su) && in_pos(sv) {
            pos.union(u, v);
        }
        if in_neg(su) && in_neg(sv) {
            neg.union(u, v);
        }
    }
    let pos_blocks = pos.blocks(|v| in_pos(signs[v]));
    let neg_blocks = neg.blocks(|v| in_neg(signs[v]));

    let mut domains = Vec::with_capacity(pos_blocks.len() + neg_blocks.len());
    let mut zero_blocks = Vec::new();
    for block in pos_blocks {
        if block.iter().all(|&v| signs[v] == 0) {
            zero_blocks.push(block);
        } else {
            domains.push(NodalDomain {
                sign: Sign::Positive,
                vertices: VertexSet::from_sorted_unchecked(n, block),
            });
        }
    }
    for block in neg_blocks {
        if block.iter().all(|&v| signs[v] == 0) {
            // the same all-zero set may appear on both sides
            if zero_blocks.binary_search(&block).is_err() {
                let at = zero_blocks.partition_point(|b| *b < block);
                zero_blocks.insert(at, block);
            }
        } else {
            domains.push(NodalDomain {
                sign: Sign::Negative,
                vertices: VertexSet::from_sorted_unchecked(n, block),
            });
        }
    }
    zero_blocks.sort_by_key(|b| b[0]);
    domains.extend(zero_blocks.into_iter().map(|b| NodalDomain {
        sign: Sign::Zero,
        vertices: VertexSet::from_sorted_unchecked(n, b),
    }));

    let singleton_flags = domains.iter().map(NodalDomain::is_singleton).collect();
    let (mut first, mut second) = (0usize, 0usize);
    for d in &domains {
        let s = d.len();
        if s > first {
            second = first;
            first = s;
        } else if s > second {
            second = s;
        }
    }
    NodalPartition {
        mode,
        domains,
        singleton_flags,
        two_largest_total: first + second,
    }
}

/// Vertices `v` with `f(v) != 0` whose neighbours all carry the strictly opposite sign.
pub fn singleton_vertices(g: &Graph, f: &[f64]) -> Result<Vec<usize>> {
    check_len(g, f)?;
    let signs = SignVector::new(f).signs;
    Ok(singletons_from_signs(g, &signs))
}

pub(crate) fn singletons_from_signs(g: &Graph, signs: &[i8]) -> Vec<usize> {
    (0..g.n())
        .filter(|&v| {
            signs[v] != 0
                && g.neighbors(v)
                    .iter()
                    .all(|&u| i16::from(signs[u]) * i16::from(signs[v]) < 0)
        })
        .collect()
}

pub fn singleton_count(g: &Graph, f: &[f64]) -> Result<usize> {
    Ok(singleton_vertices(g, f)?.len())
}

fn check_len(g: &Graph, f: &[f64]) -> Result<()> {
    if f.len() != g.n() {
        return Err(Error::invalid(format!(
            "vector length {} does not match n = {}",
            f.len(),
            g.n()
        )));
    }
    Ok(())
}

fn regular_expander(g: &Graph, expansion: f64) -> Result<f64> {
    let d = g
        .regular_degree()
        .ok_or_else(|| Error::precondition("graph is not regular"))? as f64;
    if expansion >= d - EXPANSION_MARGIN * d.max(1.0) {
        return Err(Error::precondition(format!(
            "spectral expansion {expansion} is not below d = {d}"
        )));
    }
    Ok(d)
}

/// Largest component of `G[S]` against `(c - 2(1-c) lambda/(d - lambda)) n`, `c = |S|/n`.
pub fn giant_component_certificate(g: &Graph, s: &VertexSet) -> Result<Certificate> {
    let expansion = spectral_expansion(g)?.expansion;
    giant_component_certificate_with(g, s, expansion)
}

/// As [`giant_component_certificate`] with a precomputed `lambda(G)`.
pub fn giant_component_certificate_with(
    g: &Graph,
    s: &VertexSet,
    expansion: f64,
) -> Result<Certificate> {
    let d = regular_expander(g, expansion)?;
    let n = g.n() as f64;
    let c = s.len() as f64 / n;
    let bound = (c - 2.0 * (1.0 - c) * expansion / (d - expansion)) * n;
    let achieved = g
        .component_blocks(&s.mask())
        .iter()
        .map(Vec::len)
        .max()
        .unwrap_or(0) as f64;
    let inputs = Provenance::for_graph(g)
        .param("subset_size", s.len() as f64)
        .param("lambda_G", expansion);
    Ok(Certificate::lower(
        "giant-component",
        bound,
        achieved,
        inputs,
    ))
}

/// Two largest weak domains of `f` against `(1 - 2 lambda/(d - lambda)) n`.
pub fn two_giant_domains_certificate(g: &Graph, f: &[f64]) -> Result<Certificate> {
    let expansion = spectral_expansion(g)?.expansion;
    two_giant_domains_certificate_with(g, f, expansion, None)
}

pub fn two_giant_domains_certificate_with(
    g: &Graph,
    f: &[f64],
    expansion: f64,
    vector_id: Option<&str>,
) -> Result<Certificate> {
    check_len(g, f)?;
    let d = regular_expander(g, expansion)?;
    let partition = nodal_domains(g, f, Mode::Weak)?;
    Ok(two_giant_from_partition(
        g, &partition, d, expansion, vector_id,
    ))
}

pub(crate) fn two_giant_from_partition(
    g: &Graph,
    weak: &NodalPartition,
    d: f64,
    expansion: f64,
    vector_id: Option<&str>,
) -> Certificate {
    let n = g.n() as f64;
    let bound = (1.0 - 2.0 * expansion / (d - expansion)) * n;
    let mut inputs = Provenance::for_graph(g).param("lambda_G", expansion);
    if let Some(id) = vector_id {
        inputs = inputs.vector(id);
    }
    Certificate::lower(
        "two-giant-domains",
        bound,
        weak.two_largest_total as f64,
        inputs,
    )
}

/// Exponent `2 + log(d-1) / log(1 + alpha/(d-1))` of the low-degree domain bound.
pub fn warmup_exponent(d: f64, alpha: f64) -> f64 {
    2.0 + (d - 1.0).ln() / (1.0 + alpha / (d - 1.0)).ln()
}

/// `n / (2 eta)^exponent`.
pub fn warmup_bound(n: f64, d: f64, alpha: f64, eta: f64) -> f64 {
    n / (2.0 * eta).powf(warmup_exponent(d, alpha))
}

/// `sqrt(n) |f|_inf / |f|`.
pub fn delocalization_eta(f: &[f64]) -> f64 {
    let norm = f.iter().map(|x| x * x).sum::<f64>().sqrt();
    let sup = f.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    (f.len() as f64).sqrt() * sup / norm
}

/// Weak-domain count of an eigenvector with `lambda <= -(d-1) - alpha` against
/// `n / (2 eta)^(2 + log(d-1)/log(1 + alpha/(d-1)))`, `eta = sqrt(n)|f|_inf/|f|`.
pub fn warmup_certificate(g: &Graph, f: &[f64], lambda: f64, alpha: f64) -> Result<Outcome> {
    const NAME: &str = "warmup-domain-count";
    check_len(g, f)?;
    let d = g
        .regular_degree()
        .ok_or_else(|| Error::precondition("graph is not regular"))?;
    if d < 3 {
        return Err(Error::precondition(format!("degree {d} < 3")));
    }
    if alpha <= 0.0 {
        return Err(Error::precondition("alpha must be positive"));
    }
    if f.iter().all(|&x| x == 0.0) {
        return Err(Error::invalid("zero vector"));
    }
    let d = d as f64;
    let threshold = -(d - 1.0) - alpha;
    if lambda > threshold {
        return Ok(Outcome::not_applicable(
            NAME,
            format!("eigenvalue {lambda} above {threshold}"),
        ));
    }
    let eta = delocalization_eta(f);
    let bound = warmup_bound(g.n() as f64, d, alpha, eta);
    let achieved = nodal_domains(g, f, Mode::Weak)?.count() as f64;
    let inputs = Provenance::for_graph(g)
        .param("lambda", lambda)
        .param("alpha", alpha)
        .param("eta", eta);
    Ok(Outcome::Checked(Certificate::lower(
        NAME, bound, achieved, inputs,
    )))
}

/// Checks the descent property behind the low-degree bound: every vertex with
/// `|f(v)| >= 1/(2 sqrt n)` (for unit `f`) has a singleton domain within
/// distance `floor(log(2 eta) / log(1 + alpha/(d-1)))`.
pub fn descent_property_holds(g: &Graph, f: &[f64], alpha: f64) -> Result<bool> {
    check_len(g, f)?;
    let d = g
        .regular_degree()
        .ok_or_else(|| Error::precondition("graph is not regular"))? as f64;
    let n = g.n();
    let norm = f.iter().map(|x| x * x).sum::<f64>().sqrt();
    let unit: Vec<f64> = f.iter().map(|x| x / norm).collect();
    let eta = delocalization_eta(&unit);
    let reach = ((2.0 * eta).ln() / (1.0 + alpha / (d - 1.0)).ln()).floor() as usize;
    let singles = singleton_vertices(g, &unit)?;
    let source = VertexSet::from_sorted_unchecked(n, singles);
    let near = g.ball(&source, reach).mask();
    let cutoff = 0.5 / (n as f64).sqrt();
    Ok((0..n).all(|v| unit[v].abs() < cutoff || near[v]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::eigendecompose;

    #[test]
    fn bipartite_sign_vector_gives_singletons() {
        let k33 = Graph::complete_bipartite(3, 3);
        let f = [1.0, 1.0, 1.0, -1.0, -1.0, -1.0];
        let p = nodal_domains(&k33, &f, Mode::Weak).unwrap();
        assert_eq!(p.count(), 6);
        assert!(p.singleton_flags.iter().all(|&s| s));
        assert_eq!(p.two_largest_total, 2);
        assert_eq!(singleton_count(&k33, &f).unwrap(), 6);
    }

    #[test]
    fn alternating_cycle() {
        let f = [1.0, -1.0, 1.0, -1.0, 1.0, -1.0];
        let p = nodal_domains(&Graph::cycle(6), &f, Mode::Strong).unwrap();
        assert_eq!(p.count(), 6);
        assert_eq!(p.singleton_domains(), 6);
    }

    #[test]
    fn constant_vector_is_one_domain() {
        let g = Graph::petersen();
        let p = nodal_domains(&g, &[1.0; 10], Mode::Weak).unwrap();
        assert_eq!(p.count(), 1);
        assert_eq!(p.domains[0].vertices, VertexSet::full(10));
        assert_eq!(singleton_count(&g, &[0.0; 10]).unwrap(), 0);
    }

    #[test]
    fn zero_vertices_join_both_weak_sides() {
        // path 0-1-2 with f = (1, 0, -1)
        let g = Graph::path(3);
        let f = [1.0, 0.0, -1.0];
        let weak = nodal_domains(&g, &f, Mode::Weak).unwrap();
        assert_eq!(weak.count(), 2);
        assert_eq!(weak.domains[0].vertices.members(), &[0, 1]);
        assert_eq!(weak.domains[1].vertices.members(), &[1, 2]);
        assert_eq!(weak.two_largest_total, 4);
        let strong = nodal_domains(&g, &f, Mode::Strong).unwrap();
        assert_eq!(strong.count(), 2);
        assert_eq!(singleton_count(&g, &f).unwrap(), 0);
    }

    #[test]
    fn all_zero_component_is_listed_once() {
        let g = Graph::path(3);
        let p = nodal_domains(&g, &[0.0, 0.0, 0.0], Mode::Weak).unwrap();
        assert_eq!(p.count(), 1);
        assert_eq!(p.domains[0].sign, Sign::Zero);
    }

    #[test]
    fn solver_noise_counts_as_zero() {
        let g = Graph::path(3);
        let f = [1.0, 1e-15, -1.0];
        let sv = SignVector::new(&f);
        assert_eq!(sv.zero_count, 1);
        assert_eq!(nodal_domains(&g, &f, Mode::Strong).unwrap().count(), 2);
    }

    #[test]
    fn petersen_singletons_match_direct_scan() {
        let g = Graph::petersen();
        let es = eigendecompose(&g).unwrap();
        for (lambda, v) in es.values.iter().zip(&es.vectors) {
            if (lambda + 2.0).abs() > 1e-6 {
                continue;
            }
            let tol = ZERO_TOLERANCE * v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            let scan = (0..10)
                .filter(|&u| {
                    v[u].abs() > tol
                        && g.neighbors(u)
                            .iter()
                            .all(|&w| v[w].abs() > tol && v[w] * v[u] < 0.0)
                })
                .count();
            assert_eq!(singleton_count(&g, v).unwrap(), scan);
        }
    }

    #[test]
    fn giant_component_examples() {
        let k4 = Graph::complete(4);
        let s = VertexSet::new(4, [0, 1]).unwrap();
        let c = giant_component_certificate(&k4, &s).unwrap();
        assert!(c.bound.abs() < 1e-9);
        assert_eq!(c.achieved, 2.0);
        assert!(c.holds);
        let c6 = Graph::cycle(6);
        let s = VertexSet::new(6, [0, 1, 2]).unwrap();
        assert!(matches!(
            giant_component_certificate(&c6, &s),
            Err(Error::Precondition(_))
        ));
        assert!(giant_component_certificate(&Graph::path(4), &s).is_err());
    }

    #[test]
    fn two_giant_examples() {
        let k4 = Graph::complete(4);
        let es = eigendecompose(&k4).unwrap();
        for v in &es.vectors {
            let c = two_giant_domains_certificate(&k4, v).unwrap();
            assert!(c.bound.abs() < 1e-9);
            assert!(c.holds);
        }
        let p = Graph::petersen();
        let es = eigendecompose(&p).unwrap();
        let c = two_giant_domains_certificate(&p, es.vectors.last().unwrap()).unwrap();
        assert!(c.bound < 0.0);
        assert!(c.holds);
    }

    #[test]
    fn warmup_formula() {
        let e = warmup_exponent(3.0, 0.5);
        assert!((e - (2.0 + 2f64.ln() / 1.25f64.ln())).abs() < 1e-12);
        assert!((e - 5.106).abs() < 1e-3);
        let bound = warmup_bound(1186.0, 3.0, 0.5, 2.0);
        assert!((bound - 1.0).abs() < 0.01, "{bound}");
    }

    #[test]
    fn warmup_applicability() {
        let g = Graph::petersen();
        let f = vec![1.0; 10];
        let out = warmup_certificate(&g, &f, -2.4, 0.5).unwrap();
        assert!(matches!(out, Outcome::NotApplicable { .. }));
        let out = warmup_certificate(&Graph::cycle(6), &[1.0; 6], -3.0, 0.5);
        assert!(matches!(out, Err(Error::Precondition(_))));
    }

    #[test]
    fn warmup_on_bipartite_extreme_vector() {
        let k33 = Graph::complete_bipartite(3, 3);
        let f = [1.0, 1.0, 1.0, -1.0, -1.0, -1.0];
        let out = warmup_certificate(&k33, &f, -3.0, 0.5).unwrap();
        let c = out.certificate().unwrap();
        assert!(c.holds);
        assert_eq!(c.achieved, 6.0);
        assert!(descent_property_holds(&k33, &f, 0.5).unwrap());
    }
}
