//! Gaussian waves on balls of the regular tree and the local statistics of
//! graph eigenvectors they are compared with.
//!
//! The wave with parameter `lambda` is the centred Gaussian process on the
//! infinite `d`-regular tree whose covariance depends only on tree distance
//! through the spherical function `Phi`. [`WaveModel`] restricts it to a ball
//! of radius `R` laid out in breadth-first order. [`local_distribution`] reads
//! the same layout off a graph eigenvector, and [`lp_distance_1d`] and
//! [`fit_sigma`] compare one-dimensional marginals.

mod levy;
mod local;
mod model;
mod singleton;
mod spherical;

pub use levy::{fit_sigma, fit_sigma_samples, lp_distance_1d, SigmaFit, SIGMA_GRID};
pub use local::{
    local_distribution, local_distribution_with, neighbor_correlation, second_moment,
    LocalDistribution, Padding, Source,
};
pub use model::{ball_size, empirical_covariance, sample_wave, WaveModel, CHUNK};
pub use singleton::{singleton_constant, singleton_probability, SingletonEstimate};
pub use spherical::{spherical_function, SphericalProfile};
