use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::rng;

/// Largest host for which exact enumeration is allowed.
pub const EXACT_MAX_N: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExpansionMethod {
    Exact,
    Heuristic,
}

/// Minimum of `|E(S, S̄)| / |S|` over nonempty `S` with `|S| <= epsilon n`.
///
/// Heuristic reports are upper bounds on that minimum and carry `exact = false`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpansionReport {
    pub epsilon: f64,
    pub value: f64,
    pub boundary: usize,
    pub witness: VertexSet,
    pub exact: bool,
}

pub fn edge_expansion(
    g: &Graph,
    epsilon: f64,
    method: ExpansionMethod,
    seed: u64,
) -> Result<ExpansionReport> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::invalid(format!("epsilon {epsilon} not in (0, 1]")));
    }
    let max_size = (epsilon * g.n() as f64 + 1e-9).floor() as usize;
    if max_size == 0 {
        return Err(Error::invalid(format!(
            "epsilon * n = {} admits no nonempty set",
            epsilon * g.n() as f64
        )));
    }
    let (boundary, members, exact) = match method {
        ExpansionMethod::Exact => {
            if g.n() > EXACT_MAX_N {
                return Err(Error::invalid(format!(
                    "exact edge expansion limited to n <= {EXACT_MAX_N}"
                )));
            }
            let (b, m) = exact_min(g, max_size);
            (b, m, true)
        }
        ExpansionMethod::Heuristic => {
            let (b, m) = local_search(g, max_size, seed);
            (b, m, false)
        }
    };
    Ok(ExpansionReport {
        epsilon,
        value: boundary as f64 / members.len() as f64,
        boundary,
        witness: VertexSet::new(g.n(), members)?,
        exact,
    })
}

/// `|E(S, S̄)|` for an arbitrary member list.
pub(crate) fn boundary_size(g: &Graph, members: &[usize]) -> usize {
    let mut mask = vec![false; g.n()];
    members.iter().for_each(|&v| mask[v] = true);
    members
        .iter()
        .map(|&u| g.neighbors(u).iter().filter(|&&v| !mask[v]).count())
        .sum()
}

/// `a/b < c/d` for nonnegative numerators and positive denominators.
#[inline]
fn ratio_less(a: usize, b: usize, c: usize, d: usize) -> bool {
    a * d < c * b
}

fn exact_min(g: &Graph, max_size: usize) -> (usize, Vec<usize>) {
    let n = g.n();
    let nbr: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | (1 << w)))
        .collect();
    let full: u64 = (1u64 << n) - 1;
    let mut best: Option<(usize, usize, u32)> = None;
    for k in 1..=max_size.min(n) {
        // Gosper's hack over k-subsets in increasing numeric order
        let mut set: u64 = (1u64 << k) - 1;
        while set <= full {
            let s = set as u32;
            let mut boundary = 0usize;
            let mut bits = s;
            while bits != 0 {
                let v = bits.trailing_zeros() as usize;
                boundary += (nbr[v] & !s).count_ones() as usize;
                bits &= bits - 1;
            }
            if best.is_none_or(|(b, sz, _)| ratio_less(boundary, k, b, sz)) {
                best = Some((boundary, k, s));
            }
            let c = set & set.wrapping_neg();
            let r = set + c;
            set = (((r ^ set) >> 2) / c) | r;
        }
    }
    let (boundary, _, s) = best.expect("max_size >= 1");
    (boundary, (0..n).filter(|&v| s >> v & 1 == 1).collect())
}

fn local_search(g: &Graph, max_size: usize, seed: u64) -> (usize, Vec<usize>) {
    let n = g.n();
    let restarts = 32;
    let mut best: Option<(usize, Vec<usize>)> = None;
    for r in 0..restarts {
        let mut rng = rng::rng_for(seed, r);
        let k = rng.random_range(1..=max_size);
        let start = rng.random_range(0..n);
        let mut in_set = vec![false; n];
        let mut members = Vec::with_capacity(k);
        // randomised BFS seed set
        let mut frontier = vec![start];
        in_set[start] = true;
        members.push(start);
        while members.len() < k && !frontier.is_empty() {
            let mut next = Vec::new();
            for &u in &frontier {
                let mut nbrs = g.neighbors(u).to_vec();
                nbrs.shuffle(&mut rng);
                for w in nbrs {
                    if members.len() < k && !in_set[w] {
                        in_set[w] = true;
                        members.push(w);
                        next.push(w);
                    }
                }
            }
            frontier = next;
        }
        let mut boundary = boundary_size(g, &members);
        // inside[v] = neighbours of v inside S
        let mut inside: Vec<usize> = (0..n)
            .map(|v| g.neighbors(v).iter().filter(|&&w| in_set[w]).count())
            .collect();
        for _ in 0..4 * max_size.max(8) {
            let size = members.len();
            let mut best_move: Option<(usize, usize, usize, bool)> = None;
            let mut consider = |v: usize, add: bool| {
                let (nb, ns) = if add {
                    (boundary + g.degree(v) - 2 * inside[v], size + 1)
                } else {
                    (boundary + 2 * inside[v] - g.degree(v), size - 1)
                };
                let current = best_move.map_or((boundary, size), |(b, s, _, _)| (b, s));
                if ratio_less(nb, ns, current.0, current.1) {
                    best_move = Some((nb, ns, v, add));
                }
            };
            for v in 0..n {
                if in_set[v] {
                    if size > 1 {
                        consider(v, false);
                    }
                } else if size < max_size && inside[v] > 0 {
                    consider(v, true);
                }
            }
            let Some((nb, _, v, add)) = best_move else {
                break;
            };
            boundary = nb;
            in_set[v] = add;
            if add {
                members.push(v);
            } else {
                members.retain(|&u| u != v);
            }
            for &w in g.neighbors(v) {
                if add {
                    inside[w] += 1;
                } else {
                    inside[w] -= 1;
                }
            }
        }
        let better = best
            .as_ref()
            .is_none_or(|(b, m)| ratio_less(boundary, members.len(), *b, m.len()));
        if better {
            best = Some((boundary, members));
        }
    }
    let (b, mut m) = best.expect("at least one restart");
    m.sort_unstable();
    (b, m)
}
