//! Named inequality instances with the inputs they were evaluated on.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::graph::Graph;

/// Absolute slack applied when comparing an achieved value with a bound.
pub const BOUND_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Holds when `achieved >= bound`.
    Lower,
    /// Holds when `achieved <= bound`.
    Upper,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub graph_hash: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vector_id: Option<String>,
    pub parameters: BTreeMap<String, f64>,
}

impl Provenance {
    pub fn for_graph(g: &Graph) -> Self {
        Provenance {
            graph_hash: g.content_hash().to_owned(),
            vector_id: None,
            parameters: BTreeMap::new(),
        }
    }

    pub fn vector(mut self, id: impl Into<String>) -> Self {
        self.vector_id = Some(id.into());
        self
    }

    pub fn param(mut self, key: &str, value: f64) -> Self {
        self.parameters.insert(key.to_owned(), value);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub name: String,
    pub direction: Direction,
    pub bound: f64,
    pub achieved: f64,
    pub holds: bool,
    pub inputs: Provenance,
}

impl Certificate {
    /// Evaluates `achieved` against `bound` with [`BOUND_SLACK`].
    pub fn evaluate(
        name: &str,
        direction: Direction,
        bound: f64,
        achieved: f64,
        inputs: Provenance,
    ) -> Self {
        let holds = match direction {
            Direction::Lower => achieved + BOUND_SLACK >= bound,
            Direction::Upper => achieved <= bound + BOUND_SLACK,
        };
        Certificate {
            name: name.to_owned(),
            direction,
            bound,
            achieved,
            holds,
            inputs,
        }
    }

    pub fn lower(name: &str, bound: f64, achieved: f64, inputs: Provenance) -> Self {
        Self::evaluate(name, Direction::Lower, bound, achieved, inputs)
    }

    pub fn upper(name: &str, bound: f64, achieved: f64, inputs: Provenance) -> Self {
        Self::evaluate(name, Direction::Upper, bound, achieved, inputs)
    }
}

/// A certificate evaluation, or the reason its hypotheses do not apply.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Outcome {
    Checked(Certificate),
    NotApplicable { name: String, reason: String },
}

impl Outcome {
    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            Outcome::Checked(c) => Some(c),
            Outcome::NotApplicable { .. } => None,
        }
    }

    /// `false` only for a checked certificate that failed.
    pub fn is_ok(&self) -> bool {
        self.certificate().is_none_or(|c| c.holds)
    }

    pub(crate) fn not_applicable(name: &str, reason: impl Into<String>) -> Self {
        Outcome::NotApplicable {
            name: name.to_owned(),
            reason: reason.into(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slack_is_applied_in_the_right_direction() {
        let p = Provenance::for_graph(&Graph::complete(3));
        assert!(Certificate::lower("x", 1.0, 1.0 - 1e-10, p.clone()).holds);
        assert!(!Certificate::lower("x", 1.0, 1.0 - 1e-6, p.clone()).holds);
        assert!(Certificate::upper("x", 1.0, 1.0 + 1e-10, p.clone()).holds);
        assert!(!Certificate::upper("x", 1.0, 1.1, p).holds);
    }

    #[test]
    fn json_shape() {
        let p = Provenance::for_graph(&Graph::complete(3))
            .vector("eig:1")
            .param("alpha", 0.5);
        let c = Certificate::lower("two-giant-domains", 0.0, 3.0, p);
        let v: serde_json::Value = serde_json::to_value(&c).unwrap();
        for key in ["name", "bound", "achieved", "holds", "inputs"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["inputs"]["vector_id"], "eig:1");
        assert_eq!(v["inputs"]["graph_hash"].as_str().unwrap().len(), 64);
    }
}
