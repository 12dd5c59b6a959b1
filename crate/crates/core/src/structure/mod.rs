//! Structural certificates: expander mixing, small-set edge expansion, girth
//! repair, the bounded-degree subgraph construction and the spectral-radius
//! bound for almost-treelike graphs.

mod expansion;
mod mixing;
mod repair;
mod specrad;
mod subgraph;

pub use crate::density::{densest_subgraph, hereditary_degree, DensestSubgraph};
pub use expansion::{edge_expansion, ExpansionMethod, ExpansionReport, EXACT_MAX_N};
pub use mixing::{mixing_certificate, mixing_certificate_with, MixingReport};
pub use repair::{girth_repair, GirthRepair};
pub use specrad::{specrad_bound, specrad_bound_certificate};
pub use subgraph::{build_h, HChecks, HOptions, HReport};
