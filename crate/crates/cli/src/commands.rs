//! Subcommand runners. Each resolves its parameters from the merged
//! experiment config, runs the numerical core, prints a summary line, and
//! writes any requested report files. The returned integer is the process
//! exit code (see [`crate::exit`]).

use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use serde::Serialize;

use meanfix_core::certify::{
    certify_mean_nonexpansive, MultiIndex, SamplePlan, DEFAULT_MARGIN_TOL, DEFAULT_TRUNCATION_DIM,
};
use meanfix_core::geometry::{
    asymptotic_center, duality_probe, modulus_of_convexity, opial_margin, weak_continuity_probe,
    AsymptoticCenter, DualityReport, ModulusEstimate, OpialMargin,
};
use meanfix_core::iteration::{
    check_demiclosedness_conclusion, distance_limit, estimate_weak_clusters, run_iteration,
    IterationTrace, DEFAULT_CLUSTER_TOL, DEFAULT_ITERATIONS, DEFAULT_REFERENCE_TOL,
};
use meanfix_core::operators::Operator;
use meanfix_core::space::SeqVector;
use meanfix_core::Error as CoreError;

use crate::config::{join_f64, ExperimentConfig};
use crate::exit;
use crate::io;
use crate::parse::{parse_grid, parse_vector};

fn operator_from(cfg: &ExperimentConfig) -> Result<Operator> {
    let name = cfg
        .op
        .as_deref()
        .ok_or_else(|| anyhow!("missing operator: pass --op or set `op` in the config"))?;
    Operator::from_name(name).map_err(|e| anyhow!("{e}"))
}

fn coeff_list(v: &SeqVector) -> String {
    join_f64(v.coeffs())
}

/// `corpus`: list the built-in operators.
pub fn cmd_corpus() -> Result<i32> {
    for (name, desc) in Operator::corpus() {
        println!("{name:<16} {desc}");
    }
    Ok(exit::OK)
}

#[derive(Debug, Serialize)]
struct CertifyReportFile {
    report: meanfix_core::certify::CertificationReport,
}

/// `certify`: falsification run for the `(α,p)` inequality.
/// Exit 0 when no violation is found, 2 when one is.
pub fn cmd_certify(cfg: &ExperimentConfig) -> Result<i32> {
    let op = operator_from(cfg)?;
    let weights = cfg
        .alpha
        .clone()
        .ok_or_else(|| anyhow!("missing multi-index: pass --alpha"))?;
    let p = cfg.p.ok_or_else(|| anyhow!("missing exponent: pass --p"))?;
    let alpha = MultiIndex::new(weights, p).map_err(|e| anyhow!("{e}"))?;
    let plan = SamplePlan {
        samples: cfg.samples.unwrap_or(100_000),
        seed: cfg.seed.unwrap_or(0),
        dim: cfg.dim.unwrap_or(DEFAULT_TRUNCATION_DIM),
        margin_tol: cfg.margin_tol.unwrap_or(DEFAULT_MARGIN_TOL),
    };
    let report = certify_mean_nonexpansive(&op, &alpha, &plan, &[]).map_err(|e| anyhow!("{e}"))?;

    println!(
        "certify op={} alpha={} p={} samples={} seed={} dim={}",
        report.operator,
        join_f64(&report.weights),
        report.exponent,
        report.samples,
        report.seed,
        report.dim
    );
    println!(
        "min margin = {} at pair {}; violation = {}",
        report.min_margin, report.witness_index, report.violation
    );
    if report.violation {
        println!("witness x = {}", coeff_list(&report.witness.0));
        println!("witness y = {}", coeff_list(&report.witness.1));
    }
    for (j, k) in report.lipschitz_lower.iter().enumerate() {
        println!("sampled lower bound k(T^{}) >= {}", j + 1, k);
    }

    if let Some(path) = &cfg.json {
        io::write_json(
            path,
            &CertifyReportFile {
                report: report.clone(),
            },
        )?;
    }
    if let Some(path) = &cfg.csv {
        io::atomic_write(path, &io::certify_csv(&report))?;
    }
    Ok(if report.violation {
        exit::VIOLATION
    } else {
        exit::OK
    })
}

#[derive(Debug, Serialize)]
struct IterateSummary {
    operator: String,
    steps: usize,
    final_residual: f64,
    q: Option<f64>,
    converged: Option<bool>,
    cluster_count: usize,
    demiclosed: bool,
}

#[derive(Debug, Serialize)]
struct IterateReportFile {
    summary: IterateSummary,
    clusters: Vec<SeqVector>,
    trace: IterationTrace,
}

/// `iterate`: Picard orbit plus diagnostics. Exit 1 when the reference
/// point is not an approximate fixed point.
pub fn cmd_iterate(cfg: &ExperimentConfig) -> Result<i32> {
    let op = operator_from(cfg)?;
    let p = op.domain().p;
    let start = parse_vector(
        cfg.start
            .as_deref()
            .ok_or_else(|| anyhow!("missing start vector: pass --start"))?,
        p,
    )?;
    let reference = cfg
        .reference
        .as_deref()
        .map(|s| parse_vector(s, p))
        .transpose()?;
    let n = cfg.n.unwrap_or(DEFAULT_ITERATIONS);
    let n0 = cfg
        .n0
        .or_else(|| cfg.alpha.as_ref().map(|a| a.len()))
        .unwrap_or(2);
    let tol = cfg.tol.unwrap_or(DEFAULT_CLUSTER_TOL);
    let dim = cfg.dim.unwrap_or(DEFAULT_TRUNCATION_DIM);
    let functionals = cfg.functionals.clone().unwrap_or_default();

    let trace = run_iteration(
        &op,
        &start,
        n,
        reference.as_ref(),
        &functionals,
        DEFAULT_REFERENCE_TOL,
    )
    .map_err(|e| anyhow!("{e}"))?;

    let limit = match reference {
        Some(_) => Some(distance_limit(&trace, n0, tol).map_err(|e| anyhow!("{e}"))?),
        None => None,
    };
    let clusters = estimate_weak_clusters(&trace, tol, dim);
    let demiclosed =
        check_demiclosedness_conclusion(&op, &clusters, tol).map_err(|e| anyhow!("{e}"))?;

    let summary = IterateSummary {
        operator: trace.operator.clone(),
        steps: trace.steps(),
        final_residual: *trace.residuals.last().expect("n >= 1"),
        q: limit.as_ref().map(|l| l.q),
        converged: limit.as_ref().map(|l| l.converged),
        cluster_count: clusters.count(),
        demiclosed,
    };
    match &limit {
        Some(l) => println!(
            "iterate op={} n={}: q = {}, converged = {}, clusters = {}, demiclosed = {}",
            summary.operator, summary.steps, l.q, l.converged, summary.cluster_count, demiclosed
        ),
        None => println!(
            "iterate op={} n={}: final residual = {}, clusters = {}, demiclosed = {}",
            summary.operator,
            summary.steps,
            summary.final_residual,
            summary.cluster_count,
            demiclosed
        ),
    }

    if let Some(path) = &cfg.json {
        io::write_json(
            path,
            &IterateReportFile {
                summary,
                clusters: clusters.clusters.clone(),
                trace: trace.clone(),
            },
        )?;
    }
    if let Some(path) = &cfg.csv {
        io::atomic_write(path, &io::trace_csv(&trace))?;
    }
    if let Some(path) = &cfg.plot_data {
        io::atomic_write(path, &io::plot_data(&trace))?;
    }
    Ok(exit::OK)
}

#[derive(Debug, Serialize)]
struct OpialReportFile {
    p: f64,
    n: usize,
    u: SeqVector,
    v: SeqVector,
    #[serde(flatten)]
    margin: OpialMargin,
}

/// `probe opial`: margins along the weakly null basis sequence `(e_k)`.
pub fn cmd_probe_opial(cfg: &ExperimentConfig, u: Option<&str>, v: &str) -> Result<i32> {
    let p = cfg.p.unwrap_or(2.0);
    let n = cfg.n.unwrap_or(64);
    let u = parse_vector(u.unwrap_or("zero"), p)?;
    let v = parse_vector(v, p)?;
    let margin = opial_margin(|k| SeqVector::basis(k, p).expect("k >= 1"), &u, &v, n)
        .map_err(|e| anyhow!("{e}"))?;
    println!(
        "opial p={p} n={n}: liminf to u = {}, to v = {}, margin = {}",
        margin.to_u, margin.to_v, margin.margin
    );
    if let Some(path) = &cfg.json {
        io::write_json(path, &OpialReportFile { p, n, u, v, margin })?;
    }
    Ok(exit::OK)
}

#[derive(Debug, Serialize)]
struct DualityReportFile {
    p: f64,
    x: SeqVector,
    #[serde(flatten)]
    report: DualityReport,
}

#[derive(Debug, Serialize)]
struct WeakContinuityReportFile {
    p: f64,
    n: usize,
    panel_size: usize,
    passed: bool,
}

/// `probe duality`: evaluate the canonical duality map and its defining
/// identities at `--x`, or (with `--weak`) probe weak sequential
/// continuity along the basis sequence. Exit 2 if the weak probe fails.
pub fn cmd_probe_duality(cfg: &ExperimentConfig, x: Option<&str>, weak: bool) -> Result<i32> {
    let p = cfg.p.unwrap_or(2.0);
    if weak {
        let n = cfg.n.unwrap_or(64);
        let panel = default_weak_panel(p)?;
        let passed = weak_continuity_probe(p, n, &panel, cfg.tol.unwrap_or(1e-12))
            .map_err(|e| anyhow!("{e}"))?;
        println!(
            "duality weak-continuity p={p} n={n} panel={}: {}",
            panel.len(),
            if passed { "pass" } else { "FAIL" }
        );
        if let Some(path) = &cfg.json {
            io::write_json(
                path,
                &WeakContinuityReportFile {
                    p,
                    n,
                    panel_size: panel.len(),
                    passed,
                },
            )?;
        }
        return Ok(if passed { exit::OK } else { exit::VIOLATION });
    }

    let x = parse_vector(x.ok_or_else(|| anyhow!("missing --x (or use --weak)"))?, p)?;
    let report = duality_probe(&x).map_err(|e| anyhow!("{e}"))?;
    println!(
        "duality p={p}: (Jx)(x) = {}, mu(|x|)*|x| = {}, |Jx|_q = {}, mu(|x|) = {}",
        report.pairing,
        report.gauge_of_norm * report.norm_p,
        report.norm_q,
        report.gauge_of_norm
    );
    println!("Jx = {}", coeff_list(&report.jx));
    if let Some(path) = &cfg.csv {
        io::atomic_write(path, &io::vector_csv(&report.jx))?;
    }
    if let Some(path) = &cfg.json {
        io::write_json(path, &DualityReportFile { p, x, report })?;
    }
    Ok(exit::OK)
}

fn default_weak_panel(p: f64) -> Result<Vec<SeqVector>> {
    Ok(vec![
        SeqVector::basis(1, p).map_err(|e| anyhow!("{e}"))?,
        SeqVector::basis(2, p).map_err(|e| anyhow!("{e}"))?,
        SeqVector::new(vec![0.5, 0.0, -0.25], p).map_err(|e| anyhow!("{e}"))?,
        SeqVector::new(vec![0.1, -0.2, 0.3, -0.4], p).map_err(|e| anyhow!("{e}"))?,
    ])
}

#[derive(Debug, Serialize)]
struct ModulusReportFile {
    estimates: Vec<ModulusEstimate>,
}

/// `probe modulus`: sampled modulus of convexity at one or more `ε`.
pub fn cmd_probe_modulus(cfg: &ExperimentConfig, eps: &[f64]) -> Result<i32> {
    if eps.is_empty() {
        bail!("missing --eps");
    }
    let p = cfg.p.unwrap_or(2.0);
    let samples = cfg.samples.unwrap_or(50_000);
    let seed = cfg.seed.unwrap_or(0);
    // low-dimensional sections already attain the modulus; the default
    // keeps the bisection cheap
    let dim = cfg.dim.unwrap_or(8);
    let mut estimates = Vec::with_capacity(eps.len());
    for &e in eps {
        let est = modulus_of_convexity(p, e, samples, seed, dim).map_err(|e| anyhow!("{e}"))?;
        println!(
            "modulus p={p} eps={e} samples={samples} dim={dim}: delta = {} (accepted {})",
            est.delta, est.accepted
        );
        estimates.push(est);
    }
    if let Some(path) = &cfg.csv {
        let rows: Vec<(f64, f64)> = estimates.iter().map(|e| (e.eps, e.delta)).collect();
        io::atomic_write(path, &io::curve_csv("eps", "delta", &rows))?;
    }
    if let Some(path) = &cfg.json {
        io::write_json(path, &ModulusReportFile { estimates })?;
    }
    Ok(exit::OK)
}

#[derive(Debug, Serialize)]
struct CenterReportFile {
    #[serde(flatten)]
    result: AsymptoticCenter,
    /// Weak-cluster representative of the same orbit, for cross-checking
    /// against the minimizer.
    cluster_count: usize,
    clusters: Vec<SeqVector>,
}

/// `probe center`: minimize `φ(y) = lim ‖T^n x − y‖` over a candidate set
/// of fixed points (grid over the first coordinate, or explicit vectors).
pub fn cmd_probe_center(
    cfg: &ExperimentConfig,
    grid: Option<&str>,
    fixed: &[String],
) -> Result<i32> {
    let op = operator_from(cfg)?;
    let p = op.domain().p;
    let start = parse_vector(
        cfg.start
            .as_deref()
            .ok_or_else(|| anyhow!("missing start vector: pass --start"))?,
        p,
    )?;
    let n = cfg.n.unwrap_or(DEFAULT_ITERATIONS);
    let residual_tol = cfg.tol.unwrap_or(DEFAULT_REFERENCE_TOL);

    let (candidates, description) = match (grid, fixed.is_empty()) {
        (Some(g), true) => (parse_grid(g)?, format!("grid {g}")),
        (None, false) => {
            let vs: Result<Vec<SeqVector>> = fixed.iter().map(|s| parse_vector(s, p)).collect();
            (vs?, format!("{} explicit candidates", fixed.len()))
        }
        (None, true) => bail!("pass --grid lo:hi:step or one or more --fixed vectors"),
        (Some(_), false) => bail!("--grid and --fixed are mutually exclusive"),
    };

    let trace = run_iteration(&op, &start, n, None, &[], DEFAULT_REFERENCE_TOL)
        .map_err(|e| anyhow!("{e}"))?;
    let result = asymptotic_center(&op, &trace, &candidates, residual_tol, &description).map_err(
        |e| match e {
            CoreError::Precondition(msg) => anyhow!("{msg}"),
            other => anyhow!("{other}"),
        },
    )?;
    let clusters = estimate_weak_clusters(
        &trace,
        DEFAULT_CLUSTER_TOL,
        cfg.dim.unwrap_or(DEFAULT_TRUNCATION_DIM),
    );

    println!(
        "center op={} over {}: y0 = ({}), r0 = {}",
        op.name(),
        description,
        coeff_list(&result.center),
        result.r0
    );
    if let Some(path) = &cfg.csv {
        let rows: Vec<(f64, f64)> = candidates
            .iter()
            .zip(&result.phi)
            .enumerate()
            .map(|(i, (y, phi))| {
                let x = if grid.is_some() { y.coeff(1) } else { i as f64 };
                (x, *phi)
            })
            .collect();
        let x_name = if grid.is_some() { "c" } else { "index" };
        io::atomic_write(path, &io::curve_csv(x_name, "phi", &rows))?;
    }
    if let Some(path) = &cfg.json {
        io::write_json(
            path,
            &CenterReportFile {
                result,
                cluster_count: clusters.count(),
                clusters: clusters.clusters,
            },
        )?;
    }
    Ok(exit::OK)
}

/// Loads the config file when given and merges flag values over it.
pub fn resolve_config(flags: ExperimentConfig, file: Option<&PathBuf>) -> Result<ExperimentConfig> {
    match file {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading config {}", path.display()))?;
            let base = ExperimentConfig::parse(&text)
                .with_context(|| format!("parsing config {}", path.display()))?;
            Ok(flags.merge_over(base))
        }
        None => Ok(flags),
    }
}
