//! Simple undirected graphs, vertex subsets and the edge-list interchange format.

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::sync::OnceLock;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Canonical undirected edge, always stored with `0 < 1`.
pub type Edge = (usize, usize);

/// Orders an edge's endpoints so that the smaller id comes first.
#[inline]
pub fn canonical(u: usize, v: usize) -> Edge {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// A simple undirected graph on vertices `0..n`.
///
/// The edge list is canonical (each pair `u < v`, sorted lexicographically) and
/// adjacency lists are sorted. Values are immutable once built.
#[derive(Debug, Clone)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<usize>>,
    regular_degree: Option<usize>,
    hash: OnceLock<String>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges
    }
}

impl Eq for Graph {}

impl Graph {
    /// Builds a simple graph. Loops and repeated edges are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = Edge>,
    {
        let mut list: Vec<Edge> = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::invalid(format!(
                    "edge ({u}, {v}) out of range for n = {n}"
                )));
            }
            if u == v {
                return Err(Error::invalid(format!("self-loop at vertex {u}")));
            }
            list.push(canonical(u, v));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::invalid(format!(
                "parallel edge ({}, {})",
                w[0].0, w[0].1
            )));
        }
        Ok(Self::from_canonical(n, list))
    }

    /// `edges` must already be canonical, sorted and free of duplicates.
    pub(crate) fn from_canonical(n: usize, edges: Vec<Edge>) -> Self {
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let regular_degree = match adjacency.first() {
            Some(first) if adjacency.iter().all(|a| a.len() == first.len()) => Some(first.len()),
            _ => None,
        };
        Graph {
            n,
            edges,
            adjacency,
            regular_degree,
            hash: OnceLock::new(),
        }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_canonical(n, Vec::new())
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        Self::from_canonical(n, edges)
    }

    /// Cycle `0 - 1 - ... - (n-1) - 0`; requires `n >= 3`.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least 3 vertices");
        Self::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle is simple")
    }

    pub fn path(n: usize) -> Self {
        Self::from_canonical(n, (1..n).map(|i| (i - 1, i)).collect())
    }

    /// Star with centre 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Self {
        Self::from_canonical(leaves + 1, (1..=leaves).map(|i| (0, i)).collect())
    }

    /// `K_{a,b}` with sides `0..a` and `a..a+b`.
    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let edges = (0..a)
            .flat_map(|u| (a..a + b).map(move |v| (u, v)))
            .collect();
        Self::from_canonical(a + b, edges)
    }

    /// The Petersen graph: outer 5-cycle `0..5`, inner pentagram `5..10`.
    pub fn petersen() -> Self {
        let mut edges = Vec::with_capacity(15);
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        Self::from_edges(10, edges).expect("petersen is simple")
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// `Some(d)` iff every vertex has degree `d`.
    #[inline]
    pub fn regular_degree(&self) -> Option<usize> {
        self.regular_degree
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Position of an edge in the canonical edge list.
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.edges.binary_search(&canonical(u, v)).ok()
    }

    /// Copy of the graph without the listed edges. Edges not present are ignored.
    pub fn without_edges(&self, removed: &[Edge]) -> Graph {
        let mut drop: Vec<Edge> = removed.iter().map(|&(u, v)| canonical(u, v)).collect();
        drop.sort_unstable();
        let kept = self
            .edges
            .iter()
            .copied()
            .filter(|e| drop.binary_search(e).is_err())
            .collect();
        Graph::from_canonical(self.n, kept)
    }

    /// Induced subgraph `G[S]`, relabelled to `0..|S|` in the order of `s.members()`.
    pub fn induced(&self, s: &VertexSet) -> Graph {
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in s.members().iter().enumerate() {
            index[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| index[u] != usize::MAX && index[v] != usize::MAX)
            .map(|&(u, v)| canonical(index[u], index[v]))
            .collect::<Vec<_>>();
        // relabelling is monotone, so the list stays sorted
        Graph::from_canonical(s.len(), edges)
    }

    /// Edges of `G[S]` in host labels.
    pub fn induced_edges(&self, s: &VertexSet) -> Vec<Edge> {
        let mask = s.mask();
        self.edges
            .iter()
            .copied()
            .filter(|&(u, v)| mask[u] && mask[v])
            .collect()
    }

    /// BFS distances from `source`; `usize::MAX` marks unreachable vertices.
    pub fn distances_from(&self, source: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n];
        let mut queue = VecDeque::new();
        dist[source] = 0;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adjacency[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Largest finite eccentricity over all vertices (0 for graphs with no edges).
    pub fn diameter(&self) -> usize {
        (0..self.n)
            .map(|v| {
                self.distances_from(v)
                    .into_iter()
                    .filter(|&d| d != usize::MAX)
                    .max()
                    .unwrap_or(0)
            })
            .max()
            .unwrap_or(0)
    }

    pub fn is_connected(&self) -> bool {
        self.n == 0 || self.distances_from(0).iter().all(|&d| d != usize::MAX)
    }

    /// All vertices within distance `radius` of `s`.
    pub fn ball(&self, s: &VertexSet, radius: usize) -> VertexSet {
        let mut dist = vec![usize::MAX; self.n];
        let mut queue = VecDeque::new();
        for &v in s.members() {
            dist[v] = 0;
            queue.push_back(v);
        }
        while let Some(u) = queue.pop_front() {
            if dist[u] == radius {
                continue;
            }
            for &w in &self.adjacency[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        VertexSet::from_sorted_unchecked(
            self.n,
            (0..self.n).filter(|&v| dist[v] != usize::MAX).collect(),
        )
    }

    /// Connected components of the induced subgraph `G[S]`.
    pub fn components(&self, s: &VertexSet) -> ComponentPartition {
        let blocks = self
            .component_blocks(&s.mask())
            .into_iter()
            .map(|b| VertexSet::from_sorted_unchecked(self.n, b))
            .collect();
        ComponentPartition {
            blocks,
            host: self.content_hash().to_owned(),
        }
    }

    /// Components of `G[mask]` as sorted member lists, ordered by smallest member.
    pub(crate) fn component_blocks(&self, mask: &[bool]) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut blocks = Vec::new();
        let mut stack = Vec::new();
        for start in 0..self.n {
            if !mask[start] || seen[start] {
                continue;
            }
            let mut block = vec![start];
            seen[start] = true;
            stack.push(start);
            while let Some(u) = stack.pop() {
                for &w in &self.adjacency[u] {
                    if mask[w] && !seen[w] {
                        seen[w] = true;
                        block.push(w);
                        stack.push(w);
                    }
                }
            }
            block.sort_unstable();
            blocks.push(block);
        }
        blocks
    }

    /// SHA-256 of the canonical edge-list text, hex encoded.
    pub fn content_hash(&self) -> &str {
        self.hash.get_or_init(|| {
            let mut hasher = Sha256::new();
            hasher.update(self.to_edge_list().as_bytes());
            hex::encode(hasher.finalize())
        })
    }

    /// Serialises as `n m` followed by one `u v` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::with_capacity(12 * (self.edges.len() + 1));
        let _ = writeln!(out, "{} {}", self.n, self.edges.len());
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    /// Parses the edge-list format. Blank lines and `#` comments are skipped.
    pub fn parse_edge_list(text: &str) -> Result<Graph> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (line, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let (n, m) = parse_pair(line, header)?;
        let mut edges = Vec::with_capacity(m);
        for (line, l) in lines {
            let (u, v) = parse_pair(line, l)?;
            if u >= v {
                return Err(Error::Parse {
                    line,
                    msg: format!("expected u < v, got {u} {v}"),
                });
            }
            if let Some(&prev) = edges.last() {
                if prev >= (u, v) {
                    return Err(Error::Parse {
                        line,
                        msg: "edges must be strictly lexicographically increasing".into(),
                    });
                }
            }
            if v >= n {
                return Err(Error::Parse {
                    line,
                    msg: format!("vertex {v} out of range for n = {n}"),
                });
            }
            edges.push((u, v));
        }
        if edges.len() != m {
            return Err(Error::Parse {
                line: 1,
                msg: format!("header declares {m} edges, found {}", edges.len()),
            });
        }
        Ok(Graph::from_canonical(n, edges))
    }
}

fn parse_pair(line: usize, text: &str) -> Result<(usize, usize)> {
    let mut parts = text.split_whitespace();
    let mut next = || -> Result<usize> {
        parts
            .next()
            .ok_or(Error::Parse {
                line,
                msg: "expected two integers".into(),
            })?
            .parse::<usize>()
            .map_err(|e| Error::Parse {
                line,
                msg: e.to_string(),
            })
    };
    let a = next()?;
    let b = next()?;
    if parts.next().is_some() {
        return Err(Error::Parse {
            line,
            msg: "trailing tokens".into(),
        });
    }
    Ok((a, b))
}

/// A sorted, duplicate-free subset of a host graph's vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct VertexSet {
    members: Vec<usize>,
    host_n: usize,
}

impl VertexSet {
    /// Collects `members`, sorting and removing duplicates. Rejects ids `>= host_n`.
    pub fn new<I: IntoIterator<Item = usize>>(host_n: usize, members: I) -> Result<Self> {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        if let Some(&v) = members.last() {
            if v >= host_n {
                return Err(Error::invalid(format!(
                    "vertex {v} out of range for host with {host_n} vertices"
                )));
            }
        }
        Ok(VertexSet { members, host_n })
    }

    pub(crate) fn from_sorted_unchecked(host_n: usize, members: Vec<usize>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        VertexSet { members, host_n }
    }

    pub fn full(host_n: usize) -> Self {
        VertexSet {
            members: (0..host_n).collect(),
            host_n,
        }
    }

    pub fn empty(host_n: usize) -> Self {
        VertexSet {
            members: Vec::new(),
            host_n,
        }
    }

    pub fn singleton(host_n: usize, v: usize) -> Result<Self> {
        Self::new(host_n, [v])
    }

    pub fn from_mask(mask: &[bool]) -> Self {
        VertexSet {
            members: (0..mask.len()).filter(|&v| mask[v]).collect(),
            host_n: mask.len(),
        }
    }

    #[inline]
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    #[inline]
    pub fn host_n(&self) -> usize {
        self.host_n
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.members.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.members.iter().all(|&v| other.contains(v))
    }

    pub fn mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.host_n];
        for &v in &self.members {
            mask[v] = true;
        }
        mask
    }

    /// Complement in the host vertex set.
    pub fn complement(&self) -> VertexSet {
        let mask = self.mask();
        VertexSet {
            members: (0..self.host_n).filter(|&v| !mask[v]).collect(),
            host_n: self.host_n,
        }
    }
}

/// Connected components of an induced subgraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentPartition {
    /// Blocks ordered by their smallest member.
    pub blocks: Vec<VertexSet>,
    /// Content hash of the host graph.
    pub host: String,
}

impl ComponentPartition {
    pub fn largest(&self) -> usize {
        self.blocks.iter().map(VertexSet::len).max().unwrap_or(0)
    }
}
