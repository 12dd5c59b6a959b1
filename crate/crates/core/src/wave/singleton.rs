use serde::Serialize;

use super::model::WaveModel;
use crate::certificate::{Certificate, Provenance};
use crate::error::{Error, Result};

/// `alpha^d / (3^(d+2) d^(d+1))`.
pub fn singleton_constant(d: usize, alpha: f64) -> f64 {
    let dd = d as f64;
    alpha.powi(d as i32) / (3f64.powi(d as i32 + 2) * dd.powi(d as i32 + 1))
}

#[derive(Debug, Clone, Serialize)]
pub struct SingletonEstimate {
    pub samples: usize,
    pub hits: usize,
    pub estimate: f64,
    pub stderr: f64,
    /// Guaranteed lower bound `c` on the singleton probability.
    pub constant: f64,
    /// Holds when `estimate + 3 stderr >= c`.
    pub certificate: Certificate,
}

/// Monte Carlo frequency with which the root of the unit-variance wave on
/// `B(o, 1)` is a singleton whose entries all have modulus at least `alpha/(5d)`.
pub fn singleton_probability(
    d: usize,
    lambda: f64,
    alpha: f64,
    m: usize,
    seed: u64,
) -> Result<SingletonEstimate> {
    if !(alpha > 0.0 && alpha <= d as f64) {
        return Err(Error::precondition(format!(
            "alpha {alpha} not in (0, {d}]"
        )));
    }
    if lambda > -alpha {
        return Err(Error::precondition(format!("lambda {lambda} > -alpha")));
    }
    if m == 0 {
        return Err(Error::invalid("sample count must be positive"));
    }
    let model = WaveModel::new(d, lambda, 1)?;
    let floor = alpha / (5.0 * d as f64);
    let counts = model.map_chunks(1.0, m, seed, |mut draws| {
        let mut hits = 0usize;
        while let Some(x) = draws.next_sample() {
            let root = x[0];
            let event = x.iter().all(|v| v.abs() >= floor) && x[1..].iter().all(|v| root * v < 0.0);
            hits += usize::from(event);
        }
        hits
    });
    let hits: usize = counts.into_iter().sum();
    let p = hits as f64 / m as f64;
    let stderr = (p * (1.0 - p) / m as f64).sqrt();
    let constant = singleton_constant(d, alpha);
    let inputs = Provenance {
        graph_hash: String::new(),
        vector_id: None,
        parameters: Default::default(),
    }
    .param("d", d as f64)
    .param("lambda", lambda)
    .param("alpha", alpha)
    .param("samples", m as f64)
    .param("seed", seed as f64);
    Ok(SingletonEstimate {
        samples: m,
        hits,
        estimate: p,
        stderr,
        constant,
        certificate: Certificate::lower(
            "wave-singleton-probability",
            constant,
            p + 3.0 * stderr,
            inputs,
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants() {
        assert!((singleton_constant(3, 3.0) - 27.0 / 19683.0).abs() < 1e-15);
        assert!((singleton_constant(3, 0.5) - 0.125 / (243.0 * 81.0)).abs() < 1e-18);
    }

    #[test]
    fn extreme_closed_form() {
        let r = singleton_probability(3, -3.0, 3.0, 200_000, 4).unwrap();
        // neighbours equal minus the root, so only |x_o| >= 0.2 matters
        let exact = libm::erfc(0.2 / std::f64::consts::SQRT_2);
        assert!(
            (r.estimate - exact).abs() < 4.0 * r.stderr + 1e-9,
            "{}",
            r.estimate
        );
        assert!(r.certificate.holds);
    }

    #[test]
    fn preconditions() {
        assert!(singleton_probability(3, -2.0, 0.0, 10, 0).is_err());
        assert!(singleton_probability(3, -0.5, 1.0, 10, 0).is_err());
        assert!(singleton_probability(3, -3.0, 3.5, 10, 0).is_err());
    }
}
