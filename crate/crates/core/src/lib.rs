//! Nodal domains of adjacency eigenvectors of random regular graphs.
//!
//! Graphs come from [`generate`] and spectra from [`spectral`]. The [`nodal`]
//! and [`structure`] modules turn an eigenvector into domains and into
//! certificates, each comparing a measured quantity with the bound a
//! deterministic inequality predicts for it. The [`wave`] module samples the
//! Gaussian wave on tree balls and compares it with local eigenvector
//! statistics.

pub mod certificate;
pub mod cycles;
pub mod density;
pub mod error;
pub mod experiment;
pub mod flow;
pub mod generate;
pub mod graph;
pub mod nodal;
pub mod oracle;
pub mod rng;
pub mod spectral;
pub mod structure;
pub mod svg;
pub mod union_find;
pub mod wave;

pub use certificate::{Certificate, Outcome, Provenance};
pub use cycles::{bicycle_free_radius, girth, short_cycles, BicycleFree, ShortCycles};
pub use error::{Error, Result};
pub use generate::random_regular;
pub use graph::{ComponentPartition, Edge, Graph, VertexSet};
pub use nodal::{nodal_domains, singleton_count, Mode, NodalPartition, SignVector};
pub use spectral::{
    eigendecompose, rayleigh, spectral_expansion, spectral_radius, EigenSystem, SpectralSummary,
};
