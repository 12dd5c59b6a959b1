use std::collections::BTreeSet;

use serde::Serialize;

use crate::cycles::{bicycle_free_radius, cycle_edges, girth, short_cycles, BicycleFree};
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};

/// Edge set whose removal lifts the girth to a target value.
#[derive(Debug, Clone, Serialize)]
pub struct GirthRepair {
    /// Removed edges, canonical and sorted.
    pub removed: Vec<Edge>,
    pub target_girth: usize,
    /// Number of cycles shorter than the target that were hit.
    pub short_cycle_count: usize,
    /// Measured bicycle-free radius of the input.
    pub bicycle_free: BicycleFree,
    /// `radius / log_{d-1} n` for the measured radius; `None` when `d < 3`.
    pub bicycle_free_constant: Option<f64>,
    /// `(d-1) n^(1 - c/2)` with `c` the measured constant.
    pub size_bound: Option<f64>,
    /// Girth of the repaired graph (`None` = acyclic).
    pub repaired_girth: Option<usize>,
    #[serde(skip)]
    pub repaired: Graph,
}

/// Removes the lexicographically smallest edge of every cycle shorter than `target`.
pub fn girth_repair(g: &Graph, target: usize) -> Result<GirthRepair> {
    if target < 3 {
        return Err(Error::invalid(format!("target girth {target} < 3")));
    }
    let cycles = short_cycles(g, target - 1);
    if !cycles.complete {
        return Err(Error::BudgetExceeded {
            budget: crate::cycles::DEFAULT_CYCLE_BUDGET,
        });
    }
    let removed: BTreeSet<Edge> = cycles
        .cycles
        .iter()
        .map(|c| *cycle_edges(c).iter().min().expect("cycles have edges"))
        .collect();
    let removed: Vec<Edge> = removed.into_iter().collect();
    let repaired = g.without_edges(&removed);
    let repaired_girth = girth(&repaired);
    if repaired_girth.is_some_and(|len| len < target) {
        return Err(Error::invalid(format!(
            "repair left a cycle of length {}",
            repaired_girth.unwrap_or(0)
        )));
    }

    let bicycle_free = bicycle_free_radius(g);
    let d = g.max_degree() as f64;
    let n = g.n() as f64;
    let bicycle_free_constant =
        (d >= 3.0 && n > 1.0).then(|| bicycle_free.radius() as f64 * (d - 1.0).ln() / n.ln());
    let size_bound = bicycle_free_constant.map(|c| (d - 1.0) * n.powf(1.0 - c / 2.0));
    Ok(GirthRepair {
        removed,
        target_girth: target,
        short_cycle_count: cycles.cycles.len(),
        bicycle_free,
        bicycle_free_constant,
        size_bound,
        repaired_girth,
        repaired,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn petersen_already_has_girth_five() {
        let r = girth_repair(&Graph::petersen(), 5).unwrap();
        assert!(r.removed.is_empty());
        assert_eq!(r.repaired_girth, Some(5));
    }

    #[test]
    fn petersen_to_girth_six() {
        let r = girth_repair(&Graph::petersen(), 6).unwrap();
        assert_eq!(r.short_cycle_count, 12);
        assert!(r.removed.len() >= 3);
        assert!(r.repaired_girth.is_none_or(|g| g >= 6));
        for e in &r.removed {
            assert!(Graph::petersen().has_edge(e.0, e.1));
        }
    }

    #[test]
    fn trees_need_nothing() {
        let r = girth_repair(&Graph::star(6), 10).unwrap();
        assert!(r.removed.is_empty());
        assert_eq!(r.repaired_girth, None);
    }

    #[test]
    fn complete_graph_becomes_acyclic_or_long() {
        let r = girth_repair(&Graph::complete(6), 6).unwrap();
        assert!(r.repaired_girth.is_none_or(|g| g >= 6));
        assert!(girth_repair(&Graph::complete(4), 2).is_err());
    }
}
