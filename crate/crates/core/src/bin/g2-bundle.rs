#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use g2_bundle::degree::{self, Orientation};
use g2_bundle::formats::{self, Sample};
use g2_bundle::report::IdentityReport;
use g2_bundle::sampling;
use g2_bundle::transition::{self, EquatorPoint};
use g2_bundle::verify::{self, Suite};
use g2_bundle::Execution;

/// Band within which `theta` silently accepts and renormalizes its input.
const UNIT_TOL: f64 = 1e-9;

/// Band within which `theta` renormalizes with a warning.
const AUTO_NORMALIZE_TOL: f64 = 1e-3;

#[derive(Parser, Debug)]
#[command(
    name = "g2-bundle",
    version,
    about = "Octonions, G2 and the transition function of G2 -> S^6"
)]
struct Cli {
    #[command(flatten)]
    cfg: RunConfig,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct RunConfig {
    /// Seed for all random sampling.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Samples per check.
    #[arg(long, global = true, default_value_t = 1000)]
    samples: usize,

    /// Override every residual threshold (negative controls keep their floor).
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Central-difference step for the degree Jacobians.
    #[arg(long, global = true, default_value_t = degree::FD_STEP)]
    fd_step: f64,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// With `theta`: also compute the transition from the charts.
    #[arg(long, global = true)]
    cross_check: bool,

    /// With `degree`: the regular value, as six comma-separated reals.
    #[arg(
        long,
        global = true,
        value_delimiter = ',',
        num_args = 1,
        allow_hyphen_values = true
    )]
    value: Option<Vec<f64>>,

    /// Run every batch on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a verification suite.
    Verify {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(Suite::NAMES))]
        suite: String,
    },
    /// Evaluate the transition function at an equator point.
    #[command(allow_negative_numbers = true)]
    Theta {
        /// u_re u_im v_re v_im w_re w_im
        #[arg(num_args = 6, required = true)]
        z: Vec<f64>,
    },
    /// Sample uniform equator points with their transition matrices.
    Sample { n: usize },
    /// Degree of the first column of the transition function.
    Degree,
}

enum Failure {
    Usage(anyhow::Error),
    Verification(Option<anyhow::Error>),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(e)) => {
            if let Some(e) = e {
                eprintln!("error: {e:#}");
            }
            ExitCode::from(1)
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Outcome {
    let cfg = &cli.cfg;
    validate(cfg)?;
    match &cli.command {
        Command::Verify { suite } => cmd_verify(suite, cfg),
        Command::Theta { z } => cmd_theta(z, cfg),
        Command::Sample { n } => cmd_sample(*n, cfg),
        Command::Degree => cmd_degree(cfg),
    }
}

fn validate(cfg: &RunConfig) -> anyhow::Result<()> {
    if cfg.samples == 0 {
        return Err(anyhow!("--samples must be at least 1"));
    }
    if let Some(tol) = cfg.tol {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(anyhow!("--tol must be positive, got {tol}"));
        }
    }
    if !(cfg.fd_step > 0.0 && cfg.fd_step.is_finite()) {
        return Err(anyhow!("--fd-step must be positive, got {}", cfg.fd_step));
    }
    Ok(())
}

fn exec(cfg: &RunConfig) -> Execution {
    if cfg.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

fn emit(cfg: &RunConfig, text: &str) -> anyhow::Result<()> {
    match &cfg.out {
        Some(path) => {
            let mut f =
                File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
            f.write_all(text.as_bytes())
                .with_context(|| format!("cannot write {}", path.display()))?;
        }
        None => io::stdout()
            .write_all(text.as_bytes())
            .context("cannot write to stdout")?,
    }
    Ok(())
}

fn to_json<T: serde::Serialize>(value: &T) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn cmd_verify(suite: &str, cfg: &RunConfig) -> Outcome {
    let suite: Suite = suite.parse().map_err(anyhow::Error::from)?;
    let mut reports =
        verify::run(suite, exec(cfg), cfg.samples, cfg.seed).map_err(anyhow::Error::from)?;
    if let Some(tol) = cfg.tol {
        for r in &mut reports {
            r.checks = std::mem::take(&mut r.checks)
                .into_iter()
                .map(|c| c.with_tol(tol))
                .collect();
        }
    }
    let text = match cfg.format.unwrap_or(Format::Text) {
        Format::Text => reports.iter().map(|r| r.to_string()).collect::<String>(),
        Format::Json if reports.len() == 1 => to_json(&reports[0])?,
        Format::Json => to_json(&reports)?,
        Format::Csv => reports_csv(&reports)?,
    };
    emit(cfg, &text)?;
    if reports.iter().all(IdentityReport::all_pass) {
        Ok(())
    } else {
        Err(Failure::Verification(None))
    }
}

fn table_csv<I>(header: &[&str], rows: I) -> anyhow::Result<String>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn reports_csv(reports: &[IdentityReport]) -> anyhow::Result<String> {
    let rows = reports.iter().flat_map(|r| {
        r.checks.iter().map(|c| {
            vec![
                r.suite.clone(),
                c.name.clone(),
                c.reference.clone(),
                c.residual.to_string(),
                c.tol.to_string(),
                c.passed.to_string(),
            ]
        })
    });
    table_csv(
        &["suite", "name", "paper_ref", "residual", "tol", "pass"],
        rows,
    )
}

fn equator_input(x: &[f64]) -> anyhow::Result<EquatorPoint> {
    let x: [f64; 6] = x
        .try_into()
        .map_err(|_| anyhow!("expected six reals u_re u_im v_re v_im w_re w_im"))?;
    let norm = x.iter().map(|a| a * a).sum::<f64>().sqrt();
    if !((norm - 1.0).abs() <= AUTO_NORMALIZE_TOL) {
        return Err(anyhow::Error::from(g2_bundle::Error::NotUnit { norm }));
    }
    if (norm - 1.0).abs() > UNIT_TOL {
        eprintln!("warning: input has norm {norm}; normalizing");
    }
    Ok(EquatorPoint::from_reals(x.map(|a| a / norm))?)
}

#[derive(serde::Serialize)]
struct ThetaOutput {
    z: EquatorPoint,
    theta: g2_bundle::SU3Matrix,
    #[serde(skip_serializing_if = "Option::is_none")]
    charts: Option<g2_bundle::SU3Matrix>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_diff: Option<f64>,
}

fn cmd_theta(z: &[f64], cfg: &RunConfig) -> Outcome {
    let z = equator_input(z)?;
    let theta = transition::theta_closed_form(&z).map_err(anyhow::Error::from)?;
    let mut out = ThetaOutput {
        z,
        theta,
        charts: None,
        max_diff: None,
    };
    let mut failed = false;
    if cfg.cross_check {
        let charts =
            transition::theta_from_charts(&z).map_err(|e| Failure::Verification(Some(e.into())))?;
        let diff = charts.max_diff(&theta);
        failed = !(diff < cfg.tol.unwrap_or(verify::TOL_BUNDLE));
        out.charts = Some(charts);
        out.max_diff = Some(diff);
    }
    let text = match cfg.format.unwrap_or(Format::Text) {
        Format::Text => {
            let mut s = format!("theta(z) =\n{}", out.theta);
            if let (Some(c), Some(d)) = (&out.charts, out.max_diff) {
                s += &format!("from charts, conj(t21(xi)) =\n{c}max entry difference = {d:e}\n");
            }
            s
        }
        Format::Json => to_json(&out)?,
        Format::Csv => csv_text(&[Sample { z, theta }])?,
    };
    emit(cfg, &text)?;
    if failed {
        Err(Failure::Verification(Some(anyhow!(
            "chart transition differs from the closed form"
        ))))
    } else {
        Ok(())
    }
}

fn csv_text(samples: &[Sample]) -> anyhow::Result<String> {
    let mut buf = Vec::new();
    formats::write_csv(&mut buf, samples).context("cannot format samples")?;
    Ok(String::from_utf8(buf)?)
}

fn cmd_sample(n: usize, cfg: &RunConfig) -> Outcome {
    if n == 0 {
        return Err(anyhow!("sample count must be at least 1").into());
    }
    let mut rng = sampling::rng(cfg.seed);
    let points: Vec<EquatorPoint> = (0..n).map(|_| verify::random_equator(&mut rng)).collect();
    let samples = exec(cfg)
        .map(&points, |z| Sample::new(*z))
        .into_iter()
        .collect::<g2_bundle::Result<Vec<_>>>()
        .map_err(|e| Failure::Verification(Some(e.into())))?;
    let text = match cfg.format.unwrap_or(Format::Csv) {
        Format::Json => to_json(&samples)?,
        Format::Csv | Format::Text => csv_text(&samples)?,
    };
    emit(cfg, &text)?;
    Ok(())
}

fn cmd_degree(cfg: &RunConfig) -> Outcome {
    let value = match &cfg.value {
        Some(v) => equator_input(v)?,
        None => EquatorPoint::from_reals(degree::BASE_VALUE).map_err(anyhow::Error::from)?,
    };
    let report = degree::degree_with(&value, cfg.fd_step, Orientation::OutwardFirst, exec(cfg))
        .map_err(|e| Failure::Verification(Some(e.into())))?;
    let text = match cfg.format.unwrap_or(Format::Text) {
        Format::Json => to_json(&report)?,
        Format::Csv => table_csv(
            &["p1", "p2", "p3", "p4", "p5", "p6", "det", "sign"],
            report.preimages.iter().map(|p| {
                let mut row: Vec<String> = p.point.iter().map(f64::to_string).collect();
                row.push(p.det.to_string());
                row.push(p.sign.to_string());
                row
            }),
        )?,
        Format::Text => {
            let mut s = format!(
                "value = {:?}\nfd_step = {:e}\n",
                report.value, report.fd_step
            );
            for p in &report.preimages {
                let sign = if p.sign > 0 { '+' } else { '-' };
                s += &format!("preimage {:?}  det = {:.6}  sign {sign}\n", p.point, p.det);
            }
            s += &format!(
                "signs = {}\ndegree = {}\n",
                report.sign_pattern(),
                report.degree
            );
            s
        }
    };
    emit(cfg, &text)?;
    Ok(())
}
