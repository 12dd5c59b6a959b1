use crate::certificate::{Certificate, Outcome, Provenance, BOUND_SLACK};
use crate::cycles::girth;
use crate::density::hereditary_degree;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::spectral::spectral_radius;

/// `2 (1 + delta) sqrt(max_degree - 1) / (1 - 1/girth)`; `girth = None` means acyclic.
pub fn specrad_bound(delta: f64, max_degree: usize, girth: Option<usize>) -> f64 {
    let shrink = girth.map_or(1.0, |g| 1.0 - 1.0 / g as f64);
    2.0 * (1.0 + delta) * (max_degree.saturating_sub(1) as f64).sqrt() / shrink
}

/// Spectral radius of `h` against the almost-treelike bound.
///
/// The bound needs hereditary degree at most `2(1 + delta)` and girth at least
/// `min_girth` (`None` = acyclic). It also assumes maximum degree at least 2:
/// the forest bound it rests on, `2 sqrt(Delta - 1)`, is false for a single
/// edge. Graphs outside these hypotheses yield [`Outcome::NotApplicable`].
pub fn specrad_bound_certificate(
    h: &Graph,
    delta: f64,
    min_girth: Option<usize>,
) -> Result<Outcome> {
    const NAME: &str = "almost-treelike-spectral-radius";
    if delta < 0.0 {
        return Err(Error::precondition(format!("delta {delta} < 0")));
    }
    if min_girth.is_some_and(|g| g < 3) {
        return Err(Error::precondition("girth parameter must be at least 3"));
    }
    let inputs = Provenance::for_graph(h).param("delta", delta);
    let inputs = match min_girth {
        Some(g) => inputs.param("girth", g as f64),
        None => inputs,
    };
    if h.m() == 0 {
        return Ok(Outcome::Checked(Certificate::upper(NAME, 0.0, 0.0, inputs)));
    }
    let max_degree = h.max_degree();
    if max_degree < 2 {
        return Ok(Outcome::not_applicable(
            NAME,
            "maximum degree 1 is outside the forest bound",
        ));
    }
    let hd = hereditary_degree(h);
    if hd > 2.0 * (1.0 + delta) + BOUND_SLACK {
        return Ok(Outcome::not_applicable(
            NAME,
            format!("hereditary degree {hd} exceeds 2(1 + {delta})"),
        ));
    }
    let actual_girth = girth(h);
    let girth_ok = match (actual_girth, min_girth) {
        (_, None) => actual_girth.is_none(),
        (None, Some(_)) => true,
        (Some(a), Some(g)) => a >= g,
    };
    if !girth_ok {
        return Ok(Outcome::not_applicable(
            NAME,
            format!("girth {actual_girth:?} below {min_girth:?}"),
        ));
    }
    let bound = specrad_bound(delta, max_degree, min_girth);
    let achieved = spectral_radius(h)?;
    let inputs = inputs
        .param("max_degree", max_degree as f64)
        .param("hereditary_degree", hd);
    Ok(Outcome::Checked(Certificate::upper(
        NAME, bound, achieved, inputs,
    )))
}
