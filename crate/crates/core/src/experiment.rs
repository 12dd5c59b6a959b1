//! Sweeps over random regular graphs: one row per (trial, eigenvector).
//!
//! Every trial is an independent task whose randomness is derived from the
//! master seed and the task index. Tasks run on a dedicated worker pool and
//! their rows are reassembled in task order, so the CSV output is byte-identical
//! for any worker count.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::certificate::Outcome;
use crate::error::{Error, Result};
use crate::generate::random_regular;
use crate::graph::{Graph, VertexSet};
use crate::nodal::{
    delocalization_eta, nodal_domains, two_giant_from_partition, warmup_certificate, Mode,
    EXPANSION_MARGIN,
};
use crate::rng::derive_seed;
use crate::spectral::{eigendecompose, SpectralSummary};
use crate::structure::{build_h, girth_repair, specrad_bound_certificate, HOptions};
use crate::wave::{fit_sigma, local_distribution};

/// Version of the result-table layout, written into every CSV header.
pub const CSV_SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub d: usize,
    pub n_list: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    /// Margin of the low-degree domain-count bound.
    pub alpha: f64,
    /// Localization fraction and hereditary-degree slack.
    pub delta: f64,
    /// Size of the localized set `S` as a fraction of `n`.
    pub epsilon: f64,
    /// Ball radius for the fitted wave scale.
    pub radius: usize,
    /// Girth that the repaired graph must reach before `H` is built.
    pub girth_target: usize,
    /// Fit `sigma*` for eigenvectors in the high-energy window.
    pub fit_sigma: bool,
    /// Build `H` and check the spectral-radius bound for window eigenvectors.
    pub build_h: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            d: 3,
            n_list: vec![500, 1000, 2000],
            trials: 20,
            seed: 1,
            alpha: 0.3,
            delta: 0.1,
            epsilon: 0.1,
            radius: 1,
            girth_target: 5,
            fit_sigma: false,
            build_h: false,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.d < 3 {
            return Err(Error::invalid(format!("degree {} < 3", self.d)));
        }
        if self.n_list.is_empty() || self.trials == 0 {
            return Err(Error::invalid("n list and trial count must be nonempty"));
        }
        for &n in &self.n_list {
            if n <= self.d {
                return Err(Error::invalid(format!(
                    "n = {n} must exceed d = {}",
                    self.d
                )));
            }
            if n * self.d % 2 == 1 {
                return Err(Error::Parity { n, d: self.d });
            }
        }
        if self.alpha <= 0.0 || !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::invalid("need alpha > 0 and delta in (0, 1)"));
        }
        if !(self.epsilon > 0.0 && self.epsilon <= 1.0) {
            return Err(Error::invalid("epsilon must lie in (0, 1]"));
        }
        if self.girth_target < 3 {
            return Err(Error::invalid("girth target must be at least 3"));
        }
        Ok(())
    }

    /// Upper end `-2 sqrt(d - 2) - 0.3` of the high-energy window.
    pub fn window(&self) -> f64 {
        high_energy_threshold(self.d)
    }
}

pub fn high_energy_threshold(d: usize) -> f64 {
    -2.0 * ((d as f64) - 2.0).sqrt() - 0.3
}

/// Status of one certificate in a row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Flag {
    Pass,
    Fail,
    Na,
}

impl Flag {
    fn of(holds: bool) -> Self {
        if holds {
            Flag::Pass
        } else {
            Flag::Fail
        }
    }

    fn of_outcome(o: &Outcome) -> Self {
        o.certificate().map_or(Flag::Na, |c| Flag::of(c.holds))
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Flag::Pass => "pass",
            Flag::Fail => "fail",
            Flag::Na => "na",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRow {
    pub n: usize,
    pub trial: usize,
    pub index: usize,
    pub lambda: f64,
    pub singletons: usize,
    pub weak_domains: usize,
    pub strong_domains: usize,
    pub two_largest: usize,
    /// `sqrt(n) |f|_inf` for unit `f`.
    pub eta: f64,
    /// Squared mass on the `ceil(delta n)` largest coordinates.
    pub localization_mass: f64,
    /// Fitted wave scale; `None` outside the window or when fitting is off.
    pub sigma_star: Option<f64>,
    pub two_giant: Flag,
    pub warmup: Flag,
    /// Spectral-radius bound on `H`.
    pub specrad: Flag,
    /// The four `H` checks as a `0`/`1` string (empty outside the window).
    pub h_checks: String,
}

pub const CSV_COLUMNS: [&str; 15] = [
    "n",
    "trial",
    "index",
    "lambda",
    "singletons",
    "weak_domains",
    "strong_domains",
    "two_largest",
    "eta",
    "localization_mass",
    "sigma_star",
    "two_giant",
    "warmup",
    "specrad",
    "h_checks",
];

/// Per-trial facts that do not belong to a single eigenvector.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialInfo {
    pub n: usize,
    pub trial: usize,
    pub graph_hash: String,
    pub connected: bool,
    pub spectrum: SpectralSummary,
    pub repaired_edges: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentOutput {
    pub config: ExperimentConfig,
    pub trials: Vec<TrialInfo>,
    pub rows: Vec<ResultRow>,
}

/// Runs the sweep on `workers` threads (`None` = rayon default).
pub fn run_experiment(
    config: &ExperimentConfig,
    workers: Option<usize>,
) -> Result<ExperimentOutput> {
    config.validate()?;
    let tasks: Vec<(usize, usize)> = config
        .n_list
        .iter()
        .flat_map(|&n| (0..config.trials).map(move |t| (n, t)))
        .collect();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers {
        builder = builder.num_threads(w.max(1));
    }
    let pool = builder
        .build()
        .map_err(|e| Error::invalid(format!("thread pool: {e}")))?;
    let results: Vec<Result<(TrialInfo, Vec<ResultRow>)>> = pool.install(|| {
        tasks
            .par_iter()
            .enumerate()
            .map(|(i, &(n, t))| run_trial(config, n, t, derive_seed(config.seed, i as u64)))
            .collect()
    });
    let mut trials = Vec::with_capacity(results.len());
    let mut rows = Vec::new();
    for r in results {
        let (info, mut rs) = r?;
        trials.push(info);
        rows.append(&mut rs);
    }
    Ok(ExperimentOutput {
        config: config.clone(),
        trials,
        rows,
    })
}

fn top_mass(f: &[f64], k: usize) -> f64 {
    let mut sq: Vec<f64> = f.iter().map(|x| x * x).collect();
    let k = k.min(sq.len());
    if k == 0 {
        return 0.0;
    }
    sq.select_nth_unstable_by(k - 1, |a, b| b.total_cmp(a));
    sq[..k].iter().sum()
}

/// Indices of the `k` largest `|f|`, ties to the smaller index.
fn top_set(f: &[f64], k: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..f.len()).collect();
    idx.sort_by(|&a, &b| f[b].abs().total_cmp(&f[a].abs()).then(a.cmp(&b)));
    idx.truncate(k);
    idx
}

fn run_trial(
    config: &ExperimentConfig,
    n: usize,
    trial: usize,
    seed: u64,
) -> Result<(TrialInfo, Vec<ResultRow>)> {
    let d = config.d;
    let g = random_regular(n, d, seed)?;
    let es = eigendecompose(&g)?;
    let spectrum = es.summary()?;
    let expansion = spectrum.expansion;
    let dd = d as f64;
    let expander = expansion < dd - EXPANSION_MARGIN * dd;
    let window = config.window();
    let mass_k = (config.delta * n as f64).ceil() as usize;
    let s_size = ((config.epsilon * n as f64).ceil() as usize).max(1);

    let repaired = if config.build_h {
        Some(girth_repair(&g, config.girth_target)?)
    } else {
        None
    };

    let mut rows = Vec::with_capacity(n);
    for (index, (&lambda, f)) in es.values.iter().zip(&es.vectors).enumerate() {
        let weak = nodal_domains(&g, f, Mode::Weak)?;
        let strong = nodal_domains(&g, f, Mode::Strong)?;
        let two_giant = if expander {
            Flag::of(two_giant_from_partition(&g, &weak, dd, expansion, None).holds)
        } else {
            Flag::Na
        };
        let warmup = Flag::of_outcome(&warmup_certificate(&g, f, lambda, config.alpha)?);
        let in_window = lambda <= window;

        let sigma_star = if config.fit_sigma && in_window {
            let dist = local_distribution(&g, f, config.radius, derive_seed(seed, index as u64))?;
            Some(fit_sigma(&dist)?.sigma)
        } else {
            None
        };

        let (specrad, h_checks) = match (&repaired, in_window) {
            (Some(rep), true) => {
                let s = VertexSet::new(n, top_set(f, s_size))?;
                let options = HOptions {
                    delta: config.delta,
                    girth_target: config.girth_target,
                };
                let report = build_h(&g, f, &s, &rep.removed, options)?;
                let c = report.checks;
                let bits: String = [
                    c.girth_ok,
                    c.max_degree_ok,
                    c.hereditary_degree_ok,
                    c.quad_form_ok,
                ]
                .iter()
                .map(|&b| if b { '1' } else { '0' })
                .collect();
                (Flag::of_outcome(&pipeline_specrad(&report.h)?), bits)
            }
            _ => (Flag::Na, String::new()),
        };

        rows.push(ResultRow {
            n,
            trial,
            index,
            lambda,
            singletons: weak.singleton_domains(),
            weak_domains: weak.count(),
            strong_domains: strong.count(),
            two_largest: weak.two_largest_total,
            eta: delocalization_eta(f),
            localization_mass: top_mass(f, mass_k),
            sigma_star,
            two_giant,
            warmup,
            specrad,
            h_checks,
        });
    }
    let info = TrialInfo {
        n,
        trial,
        graph_hash: g.content_hash().to_owned(),
        connected: g.is_connected(),
        spectrum,
        repaired_edges: repaired.as_ref().map_or(0, |r| r.removed.len()),
    };
    Ok((info, rows))
}

/// The spectral-radius bound on `h` at its own measured hereditary degree and
/// girth, so the hypotheses hold by construction.
pub fn pipeline_specrad(h: &Graph) -> Result<Outcome> {
    let hd = crate::density::hereditary_degree(h);
    let delta = (hd / 2.0 - 1.0).max(0.0);
    specrad_bound_certificate(h, delta, crate::cycles::girth(h))
}

fn fmt_f64(out: &mut String, x: f64) {
    let _ = write!(out, "{x}");
}

/// Result rows as CSV with a versioned comment header.
pub fn rows_csv(rows: &[ResultRow]) -> String {
    let mut out = format!(
        "# nodal-lab results schema={CSV_SCHEMA} version={}\n",
        env!("CARGO_PKG_VERSION")
    );
    out.push_str(&CSV_COLUMNS.join(","));
    out.push('\n');
    for r in rows {
        let _ = write!(out, "{},{},{},", r.n, r.trial, r.index);
        fmt_f64(&mut out, r.lambda);
        let _ = write!(
            out,
            ",{},{},{},{},",
            r.singletons, r.weak_domains, r.strong_domains, r.two_largest
        );
        fmt_f64(&mut out, r.eta);
        out.push(',');
        fmt_f64(&mut out, r.localization_mass);
        out.push(',');
        if let Some(s) = r.sigma_star {
            fmt_f64(&mut out, s);
        }
        let _ = writeln!(
            out,
            ",{},{},{},{}",
            r.two_giant.as_str(),
            r.warmup.as_str(),
            r.specrad.as_str(),
            r.h_checks
        );
    }
    out
}

/// Median singleton fraction of the high-energy window, per `n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub n: usize,
    pub window_vectors: usize,
    pub median_singleton_fraction: f64,
}

pub fn median(values: &mut [f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(f64::total_cmp);
    let k = values.len();
    Some(if k % 2 == 1 {
        values[k / 2]
    } else {
        0.5 * (values[k / 2 - 1] + values[k / 2])
    })
}

pub fn summarize(config: &ExperimentConfig, rows: &[ResultRow]) -> Vec<SummaryRow> {
    let window = config.window();
    config
        .n_list
        .iter()
        .map(|&n| {
            let mut fr: Vec<f64> = rows
                .iter()
                .filter(|r| r.n == n && r.lambda <= window)
                .map(|r| r.singletons as f64 / n as f64)
                .collect();
            SummaryRow {
                n,
                window_vectors: fr.len(),
                median_singleton_fraction: median(&mut fr).unwrap_or(0.0),
            }
        })
        .collect()
}

pub fn summary_csv(summary: &[SummaryRow]) -> String {
    let mut out = format!("# nodal-lab summary schema={CSV_SCHEMA}\n");
    out.push_str("n,window_vectors,median_singleton_fraction\n");
    for s in summary {
        let _ = writeln!(
            out,
            "{},{},{}",
            s.n, s.window_vectors, s.median_singleton_fraction
        );
    }
    out
}

/// Window eigenvectors binned by eigenvalue, pooled over `n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trend {
    /// Bin centres, increasing in `lambda`.
    pub centers: Vec<f64>,
    /// Median singleton fraction per bin.
    pub medians: Vec<f64>,
    /// Spearman correlation of the bin medians against `-lambda`.
    pub spearman: f64,
}

pub fn singleton_trend(config: &ExperimentConfig, rows: &[ResultRow], bins: usize) -> Trend {
    let window = config.window();
    let sel: Vec<&ResultRow> = rows.iter().filter(|r| r.lambda <= window).collect();
    let lo = sel.iter().map(|r| r.lambda).fold(f64::INFINITY, f64::min);
    let mut centers = Vec::new();
    let mut medians = Vec::new();
    if sel.is_empty() || bins == 0 {
        return Trend {
            centers,
            medians,
            spearman: f64::NAN,
        };
    }
    let width = (window - lo) / bins as f64;
    for b in 0..bins {
        let (a, z) = (lo + b as f64 * width, lo + (b + 1) as f64 * width);
        let mut fr: Vec<f64> = sel
            .iter()
            .filter(|r| r.lambda >= a && (r.lambda < z || (b + 1 == bins && r.lambda <= z)))
            .map(|r| r.singletons as f64 / r.n as f64)
            .collect();
        if let Some(m) = median(&mut fr) {
            centers.push(0.5 * (a + z));
            medians.push(m);
        }
    }
    let neg: Vec<f64> = centers.iter().map(|c| -c).collect();
    let spearman = spearman(&neg, &medians);
    Trend {
        centers,
        medians,
        spearman,
    }
}

/// Average ranks, ties sharing the mean of their positions.
fn ranks(x: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut r = vec![0.0; x.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && x[idx[j + 1]] == x[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            r[k] = avg;
        }
        i = j + 1;
    }
    r
}

/// Spearman rank correlation; `NaN` for fewer than two points or a constant input.
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    if x.len() < 2 {
        return f64::NAN;
    }
    let (rx, ry) = (ranks(x), ranks(y));
    let mean = (x.len() as f64 + 1.0) / 2.0;
    let (mut num, mut sx, mut sy) = (0.0, 0.0, 0.0);
    for (a, b) in rx.iter().zip(&ry) {
        num += (a - mean) * (b - mean);
        sx += (a - mean).powi(2);
        sy += (b - mean).powi(2);
    }
    num / (sx * sy).sqrt()
}
