use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use nodal_core::experiment::{
    high_energy_threshold, rows_csv, run_experiment, singleton_trend, summarize, summary_csv,
    ExperimentConfig,
};
use nodal_core::nodal::{nodal_domains, two_giant_domains_certificate_with, warmup_certificate};
use nodal_core::structure::{
    build_h, edge_expansion, girth_repair, mixing_certificate_with, ExpansionMethod, HOptions,
};
use nodal_core::svg::{emit_svg, Series};
use nodal_core::wave::{sample_wave, singleton_probability, WaveModel};
use nodal_core::{
    eigendecompose, random_regular, spectral_expansion, Certificate, Graph, Mode, Outcome,
    VertexSet,
};

/// Exit status for a certificate that failed: a proven inequality was violated.
const EXIT_CERTIFICATE: u8 = 1;
/// Exit status for malformed input or unusable parameters.
const EXIT_INPUT: u8 = 2;

#[derive(Parser)]
#[command(
    name = "nodal-lab",
    version,
    about = "Nodal domains of random regular graph eigenvectors"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct GraphInput {
    /// Edge-list file ("n m" header, then "u v" lines).
    #[arg(long)]
    graph: PathBuf,
}

#[derive(Args)]
struct Output {
    /// Output file or directory; stdout when omitted (single-file commands).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a random d-regular graph.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Eigenvalues (JSON) or eigenvectors (CSV).
    Spectrum {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[command(flatten)]
        out: Output,
    },
    /// Nodal-domain statistics for every eigenvector.
    Nodal {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long, default_value = "weak")]
        mode: Mode,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[command(flatten)]
        out: Output,
    },
    /// Evaluate the deterministic certificates on every eigenvector.
    Certify {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long, default_value_t = 0.3)]
        alpha: f64,
        /// Also report edge expansion of sets up to epsilon * n.
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long, conflicts_with = "heuristic")]
        exact: bool,
        #[arg(long)]
        heuristic: bool,
        /// Random (S, T) pairs for the mixing check.
        #[arg(long, default_value_t = 100)]
        pairs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Gaussian wave on a tree ball: model, samples, singleton probability.
    Wave {
        #[arg(long)]
        d: usize,
        #[arg(long, allow_hyphen_values = true)]
        lambda: f64,
        #[arg(long, default_value_t = 1)]
        ell: usize,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        #[arg(long, default_value_t = 10_000)]
        m: usize,
        /// Estimate the singleton probability with this alpha instead of sampling.
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Remove one edge from every cycle shorter than the target girth.
    Repair {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long)]
        girth: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Build the bounded-degree subgraph H for one eigenvector.
    SubgraphH {
        #[command(flatten)]
        input: GraphInput,
        /// Eigenvector index, 0 = largest eigenvalue; default the smallest.
        #[arg(long)]
        index: Option<usize>,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        /// S = the ceil(epsilon n) largest coordinates.
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long, default_value_t = 5)]
        girth: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Sweep random graphs and write result tables and a trend plot.
    Experiment {
        #[arg(long, default_value_t = 3)]
        d: usize,
        /// Comma-separated list of graph sizes.
        #[arg(long, value_delimiter = ',', default_value = "500,1000,2000")]
        n: Vec<usize>,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 0.3)]
        alpha: f64,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long, default_value_t = 1)]
        ell: usize,
        #[arg(long, default_value_t = 5)]
        girth: usize,
        #[arg(long)]
        fit_sigma: bool,
        #[arg(long)]
        build_h: bool,
        /// Worker threads; NODAL_LAB_THREADS caps this.
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
}

/// A run that completed but found a failing certificate.
struct CertificateFailure(usize);

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(CertificateFailure(k))) => {
            eprintln!("error: {k} certificate(s) failed");
            ExitCode::from(EXIT_CERTIFICATE)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

/// Writes through a sibling temporary file so readers never see a partial file.
fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".partial");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, contents).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("renaming to {}", path.display()))?;
    Ok(())
}

fn emit(out: &Output, contents: &str) -> Result<()> {
    match &out.out {
        Some(path) => write_atomic(path, contents),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn out_dir(out: &Option<PathBuf>) -> Result<&Path> {
    let dir = out
        .as_deref()
        .ok_or_else(|| anyhow!("--out DIR is required"))?;
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    Ok(dir)
}

fn read_graph(input: &GraphInput) -> Result<Graph> {
    let text = fs::read_to_string(&input.graph)
        .with_context(|| format!("reading {}", input.graph.display()))?;
    Graph::parse_edge_list(&text).with_context(|| format!("parsing {}", input.graph.display()))
}

fn pretty(v: &impl serde::Serialize) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

/// Effective worker count: the flag, capped by NODAL_LAB_THREADS when set.
fn workers(flag: Option<usize>) -> Result<Option<usize>> {
    let env = match std::env::var("NODAL_LAB_THREADS") {
        Ok(s) => Some(
            s.trim()
                .parse::<usize>()
                .ok()
                .filter(|&w| w > 0)
                .ok_or_else(|| anyhow!("NODAL_LAB_THREADS must be a positive integer"))?,
        ),
        Err(_) => None,
    };
    Ok(match (flag, env) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    })
}

fn failures(outcomes: &[Outcome]) -> Option<CertificateFailure> {
    let k = outcomes.iter().filter(|o| !o.is_ok()).count();
    (k > 0).then_some(CertificateFailure(k))
}

fn run(command: Command) -> Result<Option<CertificateFailure>> {
    match command {
        Command::Generate { n, d, seed, out } => {
            let g = random_regular(n, d, seed)?;
            if !g.is_connected() {
                eprintln!("warning: the sampled graph is disconnected");
            }
            emit(&out, &g.to_edge_list())?;
            Ok(None)
        }
        Command::Spectrum { input, format, out } => {
            let g = read_graph(&input)?;
            let es = eigendecompose(&g)?;
            let text = match format {
                Format::Json => pretty(&es.export())?,
                Format::Csv => es.vectors_csv(),
            };
            emit(&out, &text)?;
            Ok(None)
        }
        Command::Nodal {
            input,
            mode,
            format,
            out,
        } => {
            let g = read_graph(&input)?;
            let es = eigendecompose(&g)?;
            let mut rows = Vec::with_capacity(g.n());
            for (i, (lambda, f)) in es.values.iter().zip(&es.vectors).enumerate() {
                let p = nodal_domains(&g, f, mode)?;
                rows.push((
                    i,
                    *lambda,
                    p.count(),
                    p.singleton_domains(),
                    p.two_largest_total,
                ));
            }
            let text = match format {
                Format::Csv => {
                    let mut s = String::from("index,lambda,domains,singletons,two_largest\n");
                    for (i, l, c, k, t) in rows {
                        s.push_str(&format!("{i},{l},{c},{k},{t}\n"));
                    }
                    s
                }
                Format::Json => pretty(
                    &rows
                        .iter()
                        .map(|&(i, l, c, k, t)| {
                            json!({"index": i, "lambda": l, "domains": c,
                                   "singletons": k, "two_largest": t})
                        })
                        .collect::<Vec<_>>(),
                )?,
            };
            emit(&out, &text)?;
            Ok(None)
        }
        Command::Certify {
            input,
            alpha,
            epsilon,
            exact,
            heuristic,
            pairs,
            seed,
            out,
        } => certify(
            &input,
            alpha,
            epsilon,
            exact || !heuristic,
            pairs,
            seed,
            &out,
        ),
        Command::Wave {
            d,
            lambda,
            ell,
            sigma,
            m,
            alpha,
            seed,
            out,
        } => {
            if let Some(alpha) = alpha {
                let est = singleton_probability(d, lambda, alpha, m, seed)?;
                match &out.out {
                    Some(_) => {
                        let dir = out_dir(&out.out)?;
                        write_atomic(&dir.join("singleton.json"), &pretty(&est)?)?;
                    }
                    None => print!("{}", pretty(&est)?),
                }
                let ok = est.certificate.holds;
                return Ok((!ok).then_some(CertificateFailure(1)));
            }
            let model = WaveModel::new(d, lambda, ell)?;
            let samples = sample_wave(&model, sigma, m, seed)?;
            match &out.out {
                Some(_) => {
                    let dir = out_dir(&out.out)?;
                    write_atomic(&dir.join("model.json"), &pretty(&model)?)?;
                    write_atomic(&dir.join("samples.csv"), &samples.to_csv())?;
                }
                None => print!("{}", pretty(&model)?),
            }
            Ok(None)
        }
        Command::Repair { input, girth, out } => {
            let g = read_graph(&input)?;
            let report = girth_repair(&g, girth)?;
            let mut v = serde_json::to_value(&report)?;
            v["graph_hash"] = Value::from(g.content_hash());
            match &out.out {
                Some(_) => {
                    let dir = out_dir(&out.out)?;
                    write_atomic(&dir.join("report.json"), &pretty(&v)?)?;
                    write_atomic(&dir.join("repaired.txt"), &report.repaired.to_edge_list())?;
                }
                None => print!("{}", pretty(&v)?),
            }
            Ok(None)
        }
        Command::SubgraphH {
            input,
            index,
            delta,
            epsilon,
            girth,
            out,
        } => {
            let g = read_graph(&input)?;
            if !(epsilon > 0.0 && epsilon <= 1.0) {
                bail!("--epsilon must lie in (0, 1]");
            }
            let es = eigendecompose(&g)?;
            let i = index.unwrap_or(g.n() - 1);
            let f = es
                .vectors
                .get(i)
                .ok_or_else(|| anyhow!("eigenvector index {i} out of range"))?;
            let k = ((epsilon * g.n() as f64).ceil() as usize).max(1);
            let mut order: Vec<usize> = (0..g.n()).collect();
            order.sort_by(|&a, &b| f[b].abs().total_cmp(&f[a].abs()).then(a.cmp(&b)));
            let s = VertexSet::new(g.n(), order[..k].iter().copied())?;
            let repaired = girth_repair(&g, girth)?;
            let options = HOptions {
                delta,
                girth_target: girth,
            };
            let report = build_h(&g, f, &s, &repaired.removed, options)?;
            let specrad = nodal_core::experiment::pipeline_specrad(&report.h)?;
            let mut v = serde_json::to_value(&report)?;
            v["graph_hash"] = Value::from(g.content_hash());
            v["eigenvalue"] = Value::from(es.values[i]);
            v["specrad_certificate"] = serde_json::to_value(&specrad)?;
            emit(&out, &pretty(&v)?)?;
            Ok(failures(&[specrad]))
        }
        Command::Experiment {
            d,
            n,
            trials,
            seed,
            alpha,
            delta,
            epsilon,
            ell,
            girth,
            fit_sigma,
            build_h,
            workers: w,
            out,
        } => {
            let config = ExperimentConfig {
                d,
                n_list: n,
                trials,
                seed,
                alpha,
                delta,
                epsilon,
                radius: ell,
                girth_target: girth,
                fit_sigma,
                build_h,
            };
            let result = run_experiment(&config, workers(w)?)?;
            fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
            write_atomic(&out.join("results.csv"), &rows_csv(&result.rows))?;
            let summary = summarize(&config, &result.rows);
            write_atomic(&out.join("summary.csv"), &summary_csv(&summary))?;
            let trend = singleton_trend(&config, &result.rows, 8);
            write_atomic(
                &out.join("run.json"),
                &pretty(&json!({
                    "config": config,
                    "trials": result.trials,
                    "trend": trend,
                }))?,
            )?;
            let window = high_energy_threshold(d);
            let points: Vec<(f64, f64)> = result
                .rows
                .iter()
                .map(|r| (r.lambda, r.weak_domains as f64 / r.n as f64))
                .collect();
            let singles: Vec<(f64, f64)> = result
                .rows
                .iter()
                .filter(|r| r.lambda <= window)
                .map(|r| (r.lambda, r.singletons as f64 / r.n as f64))
                .collect();
            emit_svg(
                &out.join("trend.svg"),
                "Nodal domains against eigenvalue",
                "eigenvalue",
                "fraction of n",
                &[
                    Series::new("weak domains", points),
                    Series::new("singletons (window)", singles),
                ],
            )?;
            let failed = result
                .rows
                .iter()
                .flat_map(|r| [r.two_giant, r.warmup, r.specrad])
                .filter(|f| *f == nodal_core::experiment::Flag::Fail)
                .count();
            Ok((failed > 0).then_some(CertificateFailure(failed)))
        }
    }
}

fn certify(
    input: &GraphInput,
    alpha: f64,
    epsilon: Option<f64>,
    exact: bool,
    pairs: usize,
    seed: u64,
    out: &Output,
) -> Result<Option<CertificateFailure>> {
    use subsets::pair;

    let g = read_graph(input)?;
    let es = eigendecompose(&g)?;
    let summary = spectral_expansion(&g)?;
    let mut outcomes: Vec<Outcome> = Vec::new();
    let d = g.regular_degree();
    let expander = d.is_some_and(|d| summary.expansion < d as f64 * (1.0 - 1e-8));
    for (i, (lambda, f)) in es.values.iter().zip(&es.vectors).enumerate() {
        if expander {
            let c: Certificate = two_giant_domains_certificate_with(
                &g,
                f,
                summary.expansion,
                Some(&format!("eig:{i}")),
            )?;
            outcomes.push(Outcome::Checked(c));
        }
        if d.is_some_and(|d| d >= 3) {
            outcomes.push(warmup_certificate(&g, f, *lambda, alpha)?);
        }
    }
    let mut mixing = Vec::new();
    if d.is_some() {
        for k in 0..pairs {
            let (s, t) = pair(g.n(), seed, k as u64);
            let r = mixing_certificate_with(&g, &s, &t, summary.expansion)?;
            mixing.push(r);
        }
    }
    let mixing_failed = mixing.iter().filter(|r| !r.holds).count();
    let expansion = match epsilon {
        Some(eps) => {
            let method = if exact {
                ExpansionMethod::Exact
            } else {
                ExpansionMethod::Heuristic
            };
            Some(edge_expansion(&g, eps, method, seed)?)
        }
        None => None,
    };
    let report = json!({
        "graph_hash": g.content_hash(),
        "spectrum": summary,
        "certificates": outcomes,
        "mixing_pairs": mixing.len(),
        "mixing_failures": mixing_failed,
        "edge_expansion": expansion,
    });
    emit(out, &pretty(&report)?)?;
    let failed = outcomes.iter().filter(|o| !o.is_ok()).count() + mixing_failed;
    Ok((failed > 0).then_some(CertificateFailure(failed)))
}

/// Deterministic vertex-set pairs drawn from hashed seeds.
mod subsets {
    use nodal_core::rng::derive_seed;
    use nodal_core::VertexSet;

    fn subset(n: usize, seed: u64) -> VertexSet {
        let keep = derive_seed(seed, 0) % 1000;
        let members = (0..n).filter(|&v| derive_seed(seed, v as u64 + 1) % 1000 < keep);
        VertexSet::new(n, members).expect("members are in range")
    }

    pub fn pair(n: usize, seed: u64, k: u64) -> (VertexSet, VertexSet) {
        let base = derive_seed(seed, k);
        (
            subset(n, derive_seed(base, 1)),
            subset(n, derive_seed(base, 2)),
        )
    }
}
