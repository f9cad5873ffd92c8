//! `oscbif` — bifurcation diagrams, minimal-parameter sequences, asymptotic
//! exponents and verification suites for `-Δu = λ f(u)` with oscillatory
//! nonnegative nonlinearities.

mod config;
mod output;
mod verify;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use oscbif_core::asymptotics::{classify, fit_exponent, Side};
use oscbif_core::quadrature::WindowFamily;
use oscbif_core::radial::lambda_upper_sequence;
use oscbif_core::timemap::{branch_tol, lambda_n_sequence_range, profile, BifurcationBranch, LambdaSequence};
use oscbif_core::FamilyKind;
use rayon::prelude::*;
use serde::Serialize;

use config::{Domain, Opts, RunConfig};
use output::{fmt, write_csv, SvgPlot};

#[derive(Parser)]
#[command(
    name = "oscbif",
    version,
    about = "Bifurcation toolkit for -Δu = λ f(u) with oscillatory nonnegative f"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute bifurcation branches over a window range (CSV, optional SVG).
    Diagram(Opts),
    /// Minimal-parameter sequence: exact 1D minima with --L, radial upper
    /// bounds with --N/--R.
    LambdaSeq(Opts),
    /// Run a verification suite and emit a JSON report.
    Verify(Opts),
    /// Exponent fit and regime classification (JSON), from a sequence CSV
    /// or computed from the family options.
    Asymptotics(Opts),
    /// Solution profile with a prescribed peak (CSV, optional SVG).
    Profile(Opts),
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

fn run() -> Result<()> {
    if let Ok(threads) = std::env::var("OSCBIF_THREADS") {
        let n: usize = threads
            .parse()
            .with_context(|| format!("OSCBIF_THREADS must be an integer, got `{threads}`"))?;
        if n > 0 {
            rayon::ThreadPoolBuilder::new().num_threads(n).build_global().ok();
        }
    }

    let cli = Cli::parse();
    match cli.command {
        Command::Diagram(opts) => cmd_diagram(&load(opts)?),
        Command::LambdaSeq(opts) => cmd_lambda_seq(&load(opts)?),
        Command::Verify(opts) => cmd_verify(&load(opts)?),
        Command::Asymptotics(opts) => cmd_asymptotics(&load(opts)?),
        Command::Profile(opts) => cmd_profile(&load(opts)?),
    }
}

fn load(opts: Opts) -> Result<RunConfig> {
    RunConfig::from_opts(&opts.with_config_file()?)
}

fn out_path<'c>(cfg: &'c RunConfig, what: &str) -> Result<&'c Path> {
    cfg.out.as_deref().with_context(|| format!("{what} needs --out <path>"))
}

fn cmd_diagram(cfg: &RunConfig) -> Result<()> {
    let length = cfg.interval()?;
    let out = out_path(cfg, "diagram")?;

    let branches: Vec<(u32, Result<BifurcationBranch<f64>, oscbif_core::Error>)> = (cfg.n_min
        ..=cfg.n_max)
        .into_par_iter()
        .map(|n| (n, branch_tol(&cfg.nl, length, n, cfg.grid, cfg.tol)))
        .collect();

    let mut rows = Vec::new();
    let mut series = Vec::new();
    let mut markers = Vec::new();
    let mut window_failures = Vec::new();
    let mut point_failures = 0usize;
    for (n, res) in &branches {
        match res {
            Ok(br) => {
                let mut line = Vec::new();
                for p in &br.points {
                    rows.push(vec![n.to_string(), fmt(p.nu), fmt(p.lambda), fmt(p.quad_error)]);
                    line.push((p.lambda, p.nu));
                }
                point_failures += br.failed.len();
                for (nu, why) in &br.failed {
                    eprintln!("window {n}: point nu = {nu} skipped: {why}");
                }
                series.push(line);
                markers.push((br.lambda_min, br.nu_at_min));
            }
            Err(e) => {
                eprintln!("window {n} failed: {e}");
                window_failures.push(*n);
            }
        }
    }
    write_csv(out, "n,nu,lambda,quad_error", &rows)?;

    if let Some(svg) = &cfg.svg {
        // λ horizontal, sup-norm vertical; clip the diverging arms at ten
        // times the largest branch minimum
        let lam_max = markers.iter().map(|m| m.0).fold(0.0f64, f64::max) * 10.0;
        let nu_max = series.iter().flatten().map(|p| p.1).fold(0.0f64, f64::max);
        SvgPlot {
            x_label: "lambda".into(),
            y_label: "sup-norm".into(),
            x_range: (0.0, lam_max.max(1e-12)),
            y_range: (0.0, nu_max * 1.05),
            series,
            markers,
        }
        .write(svg)?;
    }

    if !window_failures.is_empty() || point_failures > 0 {
        bail!(
            "diagram completed with failures: {} whole windows ({:?}), {} points",
            window_failures.len(),
            window_failures,
            point_failures
        );
    }
    Ok(())
}

fn lambda_sequence_for(cfg: &RunConfig) -> Result<(LambdaSequence<f64>, Side)> {
    let side = match cfg.family {
        FamilyKind::SineU => Side::FromInfinity,
        FamilyKind::InverseSineU | FamilyKind::ShiftedInverseSine => Side::FromZero,
        other => bail!("lambda sequences need an oscillatory family, not {}", other.as_str()),
    };
    match cfg.domain {
        Some(Domain::Interval { length }) => {
            let grid = cfg.grid.clamp(9, 65);
            Ok((lambda_n_sequence_range(&cfg.nl, length, cfg.n_min, cfg.n_max, grid, cfg.tol)?, side))
        }
        Some(Domain::Annulus { dim, radius }) => {
            let kind = match cfg.family {
                FamilyKind::SineU => WindowFamily::Divergent,
                FamilyKind::InverseSineU => WindowFamily::Vanishing,
                other => bail!(
                    "radial bounds cover the sine_u / inverse_sine_u families, not {}",
                    other.as_str()
                ),
            };
            let mut seq = lambda_upper_sequence(kind, cfg.r, cfg.gamma, dim, radius, cfg.n_max)?;
            seq.entries.retain(|&n, _| n >= cfg.n_min);
            seq.failures.retain(|&n, _| n >= cfg.n_min);
            Ok((seq, side))
        }
        None => bail!("pass --L <length> for the 1D engine or --N/--R for the radial bounds"),
    }
}

fn cmd_lambda_seq(cfg: &RunConfig) -> Result<()> {
    let out = out_path(cfg, "lambda-seq")?;
    let (seq, _) = lambda_sequence_for(cfg)?;
    let mut rows = Vec::new();
    for (&n, e) in &seq.entries {
        rows.push(vec![n.to_string(), fmt(e.nu_at_min), fmt(e.lambda), e.method.as_str().to_string()]);
    }
    write_csv(out, "n,nu,lambda,method", &rows)?;
    for (n, why) in &seq.failures {
        eprintln!("window {n} failed: {why}");
    }
    if !seq.failures.is_empty() {
        bail!("{} windows failed", seq.failures.len());
    }
    Ok(())
}

fn cmd_verify(cfg: &RunConfig) -> Result<()> {
    let report = verify::run_suite(cfg)?;
    let json = serde_json::to_string_pretty(&report)?;
    match &cfg.out {
        Some(path) => {
            std::fs::write(path, json.as_bytes())
                .with_context(|| format!("writing {}", path.display()))?;
        }
        None => {
            std::io::stdout().write_all(json.as_bytes())?;
            println!();
        }
    }
    if !report.all_passed() {
        bail!("suite `{}`: {}/{} cases failed", report.suite, report.failed, report.cases.len());
    }
    Ok(())
}

#[derive(Serialize)]
struct AsymptoticsReport {
    family: String,
    r: f64,
    side: &'static str,
    slope: f64,
    stderr: f64,
    n_range: (u32, u32),
    points_used: usize,
    regime: Option<&'static str>,
    threshold_estimate: Option<f64>,
    inconclusive: Option<String>,
    config: BTreeMap<String, String>,
}

fn cmd_asymptotics(cfg: &RunConfig) -> Result<()> {
    let (seq, side) = match &cfg.input {
        Some(path) => {
            let side = match cfg.family {
                FamilyKind::InverseSineU | FamilyKind::ShiftedInverseSine => Side::FromZero,
                _ => Side::FromInfinity,
            };
            (read_sequence_csv(path)?, side)
        }
        None => lambda_sequence_for(cfg)?,
    };

    let n0 = *seq.entries.keys().next().context("sequence is empty")?;
    let fit = fit_exponent(&seq, n0)?;
    let (regime, threshold, inconclusive) = match classify(&seq, side) {
        Ok(c) => (Some(c.regime.as_str()), c.threshold_estimate, None),
        Err(e) => (None, None, Some(e.to_string())),
    };
    let report = AsymptoticsReport {
        family: cfg.family.as_str().into(),
        r: cfg.r,
        side: side.as_str(),
        slope: fit.slope,
        stderr: fit.stderr,
        n_range: fit.n_range,
        points_used: fit.points_used,
        regime,
        threshold_estimate: threshold,
        inconclusive,
        config: cfg.echo(),
    };
    let json = serde_json::to_string_pretty(&report)?;
    match &cfg.out {
        Some(path) => std::fs::write(path, json.as_bytes())
            .with_context(|| format!("writing {}", path.display()))?,
        None => {
            std::io::stdout().write_all(json.as_bytes())?;
            println!();
        }
    }
    Ok(())
}

/// Reads sequence rows back in; accepts both the `n,nu,lambda,method`
/// schema this tool writes and a bare `n,lambda`.
fn read_sequence_csv(path: &PathBuf) -> Result<LambdaSequence<f64>> {
    use oscbif_core::timemap::{Method, SequenceEntry};
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut lines = text.lines();
    let header = lines.next().context("empty CSV")?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    let n_col = cols.iter().position(|c| *c == "n").context("CSV needs an `n` column")?;
    let l_col =
        cols.iter().position(|c| *c == "lambda").context("CSV needs a `lambda` column")?;
    let nu_col = cols.iter().position(|c| *c == "nu");

    let mut seq = LambdaSequence::default();
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let ctx = || format!("{}:{}: malformed row", path.display(), lineno + 2);
        let n: u32 = fields.get(n_col).context("row too short")?.parse().with_context(ctx)?;
        let lambda: f64 =
            fields.get(l_col).context("row too short")?.parse().with_context(ctx)?;
        let nu = match nu_col {
            Some(i) => fields.get(i).context("row too short")?.parse().with_context(ctx)?,
            None => f64::NAN,
        };
        seq.entries.insert(n, SequenceEntry { lambda, nu_at_min: nu, method: Method::TimeMap1D });
    }
    Ok(seq)
}

fn cmd_profile(cfg: &RunConfig) -> Result<()> {
    let length = cfg.interval()?;
    let nu = cfg.nu.context("profile needs --nu <peak>")?;
    let out = out_path(cfg, "profile")?;
    let samples = if cfg.samples.is_multiple_of(2) { cfg.samples } else { cfg.samples + 1 };
    let pts = profile(&cfg.nl, length, nu, samples)?;
    let rows: Vec<Vec<String>> = pts.iter().map(|&(x, u)| vec![fmt(x), fmt(u)]).collect();
    write_csv(out, "x,u", &rows)?;
    if let Some(svg) = &cfg.svg {
        SvgPlot {
            x_label: "x".into(),
            y_label: "u".into(),
            x_range: (0.0, length),
            y_range: (0.0, nu * 1.05),
            series: vec![pts],
            markers: vec![(length / 2.0, nu)],
        }
        .write(svg)?;
    }
    Ok(())
}
