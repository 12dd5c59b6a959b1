use serde::Serialize;

use crate::error::{Error, Result};

/// `Phi(0..=radius)` for one `(d, lambda)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SphericalProfile {
    pub d: usize,
    pub lambda: f64,
    pub values: Vec<f64>,
}

pub(crate) fn check_parameters(d: usize, lambda: f64) -> Result<()> {
    if d < 3 {
        return Err(Error::precondition(format!("degree {d} < 3")));
    }
    if !lambda.is_finite() || lambda.abs() > d as f64 {
        return Err(Error::precondition(format!(
            "|lambda| = {} exceeds d = {d}",
            lambda.abs()
        )));
    }
    Ok(())
}

impl SphericalProfile {
    /// Forward recursion `Phi(k+1) = (lambda Phi(k) - Phi(k-1)) / (d-1)`.
    pub fn new(d: usize, lambda: f64, radius: usize) -> Result<Self> {
        check_parameters(d, lambda)?;
        let dd = d as f64;
        let mut values = Vec::with_capacity(radius + 1);
        values.push(1.0);
        if radius >= 1 {
            values.push(lambda / dd);
        }
        for k in 1..radius {
            let next = (lambda * values[k] - values[k - 1]) / (dd - 1.0);
            values.push(next);
        }
        Ok(SphericalProfile { d, lambda, values })
    }

    /// `max_k |lambda Phi(k) - Phi(k-1) - (d-1) Phi(k+1)|`.
    pub fn recursion_residual(&self) -> f64 {
        let dd = self.d as f64;
        self.values
            .windows(3)
            .map(|w| (self.lambda * w[1] - w[0] - (dd - 1.0) * w[2]).abs())
            .fold(0.0, f64::max)
    }
}

pub fn spherical_function(d: usize, lambda: f64, k: usize) -> Result<f64> {
    Ok(SphericalProfile::new(d, lambda, k)?.values[k])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_values() {
        let p = SphericalProfile::new(3, -2.0, 2).unwrap();
        assert_eq!(p.values[0], 1.0);
        assert!((p.values[1] + 2.0 / 3.0).abs() < 1e-15);
        assert!((p.values[2] - 1.0 / 6.0).abs() < 1e-15);
        for d in 3..8 {
            assert_eq!(spherical_function(d, -(d as f64), 1).unwrap(), -1.0);
            let phi2 = spherical_function(d, 0.0, 2).unwrap();
            assert!((phi2 + 1.0 / (d as f64 - 1.0)).abs() < 1e-15);
        }
    }

    #[test]
    fn bounded_and_recursive() {
        for d in 3..7 {
            for i in 0..=40 {
                let lambda = -(d as f64) + 2.0 * d as f64 * i as f64 / 40.0;
                let p = SphericalProfile::new(d, lambda, 12).unwrap();
                assert!(p.recursion_residual() <= 1e-12);
                assert!(
                    p.values.iter().all(|v| v.abs() <= 1.0 + 1e-9),
                    "{d} {lambda}"
                );
            }
        }
    }

    #[test]
    fn out_of_range() {
        assert!(spherical_function(3, 3.5, 1).is_err());
        assert!(spherical_function(2, 1.0, 1).is_err());
    }
}
