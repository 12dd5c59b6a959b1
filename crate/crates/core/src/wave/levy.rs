use serde::Serialize;

use super::local::LocalDistribution;
use crate::error::{Error, Result};

/// Number of equally spaced scales in `[0, 1]` tried by [`fit_sigma`].
pub const SIGMA_GRID: usize = 200;

/// Bisection tolerance on the distance.
const TOLERANCE: f64 = 1e-6;

/// Sorted distinct sample values with the empirical CDF just below and at each.
struct Empirical {
    values: Vec<f64>,
    below: Vec<f64>,
    at: Vec<f64>,
}

impl Empirical {
    fn new(samples: &[f64]) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::invalid("no samples"));
        }
        if samples.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("samples must be finite"));
        }
        let mut sorted = samples.to_vec();
        sorted.sort_by(f64::total_cmp);
        let m = sorted.len() as f64;
        let (mut values, mut below, mut at) = (Vec::new(), Vec::new(), Vec::new());
        let mut i = 0;
        while i < sorted.len() {
            let mut j = i;
            while j < sorted.len() && sorted[j] == sorted[i] {
                j += 1;
            }
            values.push(sorted[i]);
            below.push(i as f64 / m);
            at.push(j as f64 / m);
            i = j;
        }
        Ok(Empirical { values, below, at })
    }

    /// Whether `F(y) <= G(y + eps) + eps` and `G(x) <= F(x + eps) + eps`
    /// for all real `x, y`. Both suprema are attained at sample values, so
    /// checking there is exact.
    fn feasible(&self, sigma: f64, eps: f64) -> bool {
        const SLACK: f64 = 1e-12;
        self.values.iter().enumerate().all(|(i, &s)| {
            self.at[i] - gauss_cdf(s + eps, sigma) <= eps + SLACK
                && gauss_cdf_left(s - eps, sigma) - self.below[i] <= eps + SLACK
        })
    }

    /// Smallest feasible `eps` in `[0, hi]`, given that `hi` is feasible.
    fn bisect(&self, sigma: f64, hi: f64) -> f64 {
        if self.feasible(sigma, 0.0) {
            return 0.0;
        }
        let (mut lo, mut hi) = (0.0, hi);
        while hi - lo > TOLERANCE {
            let mid = 0.5 * (lo + hi);
            if self.feasible(sigma, mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }
}

fn gauss_cdf(x: f64, sigma: f64) -> f64 {
    if sigma == 0.0 {
        f64::from(u8::from(x >= 0.0))
    } else {
        0.5 * libm::erfc(-x / (sigma * std::f64::consts::SQRT_2))
    }
}

/// Left limit of the CDF; differs from [`gauss_cdf`] only at the atom of `sigma = 0`.
fn gauss_cdf_left(x: f64, sigma: f64) -> f64 {
    if sigma == 0.0 {
        f64::from(u8::from(x > 0.0))
    } else {
        gauss_cdf(x, sigma)
    }
}

/// Lévy–Prokhorov distance between the empirical law of `samples` and
/// `N(0, sigma^2)`, to within `1e-6` from above.
pub fn lp_distance_1d(samples: &[f64], sigma: f64) -> Result<f64> {
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::invalid(format!(
            "sigma {sigma} must be finite and >= 0"
        )));
    }
    Ok(Empirical::new(samples)?.bisect(sigma, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SigmaFit {
    pub sigma: f64,
    pub distance: f64,
}

/// Best scale on the grid `k / (SIGMA_GRID - 1)`. A larger scale replaces the
/// incumbent only if it improves the distance by more than the bisection
/// tolerance, so near-ties go to the smaller scale.
pub fn fit_sigma_samples(samples: &[f64]) -> Result<SigmaFit> {
    let emp = Empirical::new(samples)?;
    let mut best = SigmaFit {
        sigma: 0.0,
        distance: emp.bisect(0.0, 1.0),
    };
    for k in 1..SIGMA_GRID {
        let sigma = k as f64 / (SIGMA_GRID - 1) as f64;
        let target = best.distance - TOLERANCE;
        // cheap rejection: most scales cannot beat the incumbent
        if target < 0.0 || !emp.feasible(sigma, target) {
            continue;
        }
        best = SigmaFit {
            sigma,
            distance: emp.bisect(sigma, target),
        };
    }
    Ok(best)
}

/// Fits the scale of coordinate 0 of `dist`.
pub fn fit_sigma(dist: &LocalDistribution) -> Result<SigmaFit> {
    fit_sigma_samples(&dist.coordinate(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand_distr::StandardNormal;

    fn normals(m: usize, scale: f64, seed: u64) -> Vec<f64> {
        let mut rng = crate::rng::rng(seed);
        (0..m)
            .map(|_| scale * rng.sample::<f64, _>(StandardNormal))
            .collect()
    }

    #[test]
    fn point_masses() {
        assert_eq!(lp_distance_1d(&[0.0; 5], 0.0).unwrap(), 0.0);
        // fixed point of Phi(-eps) = eps
        let eps = lp_distance_1d(&[0.0; 5], 1.0).unwrap();
        let residual = gauss_cdf(-eps, 1.0) - eps;
        assert!(residual.abs() < 2e-6, "{eps}");
        assert!((eps - 0.3597).abs() < 1e-3);
    }

    #[test]
    fn gaussian_samples_are_close() {
        let x = normals(100_000, 1.0, 3);
        assert!(lp_distance_1d(&x, 1.0).unwrap() <= 0.02);
        assert!(lp_distance_1d(&x, 0.3).unwrap() > 0.1);
    }

    #[test]
    fn fits() {
        assert_eq!(fit_sigma_samples(&[0.0; 10]).unwrap().sigma, 0.0);
        let fit = fit_sigma_samples(&normals(20_000, 0.5, 8)).unwrap();
        assert!((fit.sigma - 0.5).abs() <= 0.02, "{fit:?}");
    }

    #[test]
    fn bad_input() {
        assert!(lp_distance_1d(&[], 1.0).is_err());
        assert!(lp_distance_1d(&[1.0], -1.0).is_err());
        assert!(lp_distance_1d(&[f64::NAN], 1.0).is_err());
    }
}
