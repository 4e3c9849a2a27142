//! Command-line experiment runner. Every subcommand writes its curves and
//! tables as CSV and a JSON run summary to `--out`.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::experiments::{self, Check, Report};
use crate::process::{Beta, TimeGrid};
use crate::stats::Execution;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Run(#[from] crate::Error),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Run(_) => 1,
            CliError::Config(_) => 2,
            CliError::Io { .. } => 3,
        }
    }
}

/// Exit code when the run completes but a check fails.
pub const EXIT_CHECK_FAILED: u8 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "dbm-tridiag",
    version,
    about = "Tridiagonalized Gaussian beta-ensemble matrix processes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Common {
    /// Matrix size.
    #[arg(long, default_value_t = 400)]
    pub n: usize,
    /// 1, 2 or 4.
    #[arg(long, default_value_t = 1)]
    pub beta: u32,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0.5)]
    pub t_max: f64,
    #[arg(long, default_value_t = 0.001)]
    pub dt: f64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Worker threads; defaults to hardware parallelism.
    #[arg(long, env = "DBM_THREADS")]
    #[serde(skip)]
    pub threads: Option<usize>,
    #[arg(long, default_value = "out")]
    #[serde(skip)]
    pub out: PathBuf,
    /// Run replicates on the calling thread.
    #[arg(long)]
    #[serde(skip)]
    pub sequential: bool,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(tag = "experiment", rename_all = "kebab-case")]
pub enum Command {
    /// Covariance curves of the leading entries against the limit.
    SimulateEntries {
        #[command(flatten)]
        #[serde(flatten)]
        common: Common,
        /// Number of leading entries.
        #[arg(long, default_value_t = 5)]
        k: usize,
    },
    /// Tridiagonalized entries next to sampled limit processes.
    CompareLimit {
        #[command(flatten)]
        #[serde(flatten)]
        common: Common,
        #[arg(long, default_value_t = 5)]
        k: usize,
    },
    /// Off-diagonal `b_j` against `b̂_j` and the norm model.
    BhatCompare {
        #[command(flatten)]
        #[serde(flatten)]
        common: Common,
        #[arg(long, default_value_t = 25)]
        j: usize,
    },
    /// Excess kurtosis of `a_j(0) + a_j(t)` per matrix size.
    Kurtosis {
        #[command(flatten)]
        #[serde(flatten)]
        common: Common,
        #[arg(long, default_value_t = 3)]
        j: usize,
        #[arg(long, value_delimiter = ',', default_value = "5,40,320")]
        n_list: Vec<usize>,
    },
    /// Largest-eigenvalue covariance of the full process and two corners.
    EigenCov {
        #[command(flatten)]
        #[serde(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', default_value = "10,30")]
        k_list: Vec<usize>,
    },
    /// Monte Carlo traces of `P_j(X(0)) P_k(X(τ))` against the free limit.
    MomentCheck {
        #[command(flatten)]
        #[serde(flatten)]
        common: Common,
        /// Highest polynomial degree.
        #[arg(long, default_value_t = 4)]
        k: usize,
        #[arg(long, default_value_t = 0.3)]
        tau: f64,
    },
    /// Sup-grid error of the polynomial entry approximation.
    ApproxError {
        #[command(flatten)]
        #[serde(flatten)]
        common: Common,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, value_delimiter = ',', default_value = "250,1000,4000")]
        n_list: Vec<usize>,
    },
    /// Exact partition, permutation and polynomial identities.
    VerifyCombinatorics {
        #[command(flatten)]
        #[serde(flatten)]
        common: Common,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::SimulateEntries { .. } => "simulate-entries",
            Command::CompareLimit { .. } => "compare-limit",
            Command::BhatCompare { .. } => "bhat-compare",
            Command::Kurtosis { .. } => "kurtosis",
            Command::EigenCov { .. } => "eigen-cov",
            Command::MomentCheck { .. } => "moment-check",
            Command::ApproxError { .. } => "approx-error",
            Command::VerifyCombinatorics { .. } => "verify-combinatorics",
        }
    }

    pub fn common(&self) -> &Common {
        match self {
            Command::SimulateEntries { common, .. }
            | Command::CompareLimit { common, .. }
            | Command::BhatCompare { common, .. }
            | Command::Kurtosis { common, .. }
            | Command::EigenCov { common, .. }
            | Command::MomentCheck { common, .. }
            | Command::ApproxError { common, .. }
            | Command::VerifyCombinatorics { common } => common,
        }
    }

    /// SHA-256 of the JSON configuration; output path and thread count are
    /// excluded since they do not affect results.
    pub fn config_hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        Sha256::digest(json.as_bytes()).iter().fold(String::new(), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
    }

    fn validate(&self) -> Result<(Beta, TimeGrid, Execution), CliError> {
        let c = self.common();
        let beta = Beta::try_from(c.beta).map_err(|e| CliError::Config(e.to_string()))?;
        if !(c.dt > 0.0) || !(c.t_max >= 0.0) {
            return Err(CliError::Config(format!(
                "need dt > 0 and t-max ≥ 0, got dt={}, t-max={}",
                c.dt, c.t_max
            )));
        }
        let grid = TimeGrid::span(c.t_max, c.dt).map_err(|e| CliError::Config(e.to_string()))?;
        let need_room = |k: usize| {
            if c.n <= k + 3 {
                Err(CliError::Config(format!("need n > k+3, got n={}, k={k}", c.n)))
            } else {
                Ok(())
            }
        };
        match self {
            Command::SimulateEntries { k, .. } | Command::CompareLimit { k, .. } => need_room(*k)?,
            Command::BhatCompare { j, .. } => need_room(*j)?,
            Command::EigenCov { k_list, .. } => need_room(k_list.iter().copied().max().unwrap_or(0))?,
            _ => {}
        }
        if c.threads == Some(0) {
            return Err(CliError::Config("threads must be at least 1".into()));
        }
        Ok((beta, grid, Execution::from_flags(c.sequential, c.threads)))
    }

    pub fn execute(&self) -> Result<Report, CliError> {
        let (beta, grid, exec) = self.validate()?;
        let c = self.common();
        let report = match self {
            Command::SimulateEntries { k, .. } => {
                experiments::simulate_entries(c.n, beta, *k, &grid, c.samples, c.seed, exec)?
            }
            Command::CompareLimit { k, .. } => {
                experiments::compare_limit(c.n, beta, *k, &grid, c.samples, c.seed, exec)?
            }
            Command::BhatCompare { j, .. } => experiments::bhat_compare(c.n, beta, *j, &grid, c.samples, c.seed, exec)?,
            Command::Kurtosis { j, n_list, .. } => {
                experiments::kurtosis_report(n_list, *j, &grid, c.samples, c.seed, exec)?
            }
            Command::EigenCov { k_list, .. } => {
                experiments::eigen_cov_report(c.n, beta, k_list, &grid, c.samples, c.seed, exec)?
            }
            Command::MomentCheck { k, tau, .. } => experiments::moment_check(c.n, *k, *tau, c.samples, c.seed, exec)?,
            Command::ApproxError { k, n_list, .. } => {
                experiments::approx_error_report(n_list, *k, &grid, c.samples, c.seed, exec)?
            }
            Command::VerifyCombinatorics { .. } => experiments::verify_combinatorics()?,
        };
        Ok(report)
    }
}

#[derive(Serialize)]
struct Summary<'a> {
    config: &'a Command,
    seed: u64,
    git_version: String,
    wall_time_s: f64,
    checks: &'a [Check],
}

fn git_version() -> String {
    std::process::Command::new("git")
        .args(["rev-parse", "--short", "HEAD"])
        .output()
        .ok()
        .filter(|o| o.status.success())
        .and_then(|o| String::from_utf8(o.stdout).ok())
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .unwrap_or_else(|| "unknown".into())
}

fn provenance(cmd: &Command) -> String {
    format!(
        "# experiment={} config_sha256={} seed={} version={}\n",
        cmd.name(),
        cmd.config_hash(),
        cmd.common().seed,
        env!("CARGO_PKG_VERSION")
    )
}

/// Curves as `t,value,stderr,series`.
pub fn curves_csv(cmd: &Command, report: &Report) -> String {
    let mut s = provenance(cmd);
    s.push_str("t,value,stderr,series\n");
    for series in &report.series {
        for p in &series.points {
            let _ = writeln!(s, "{},{},{},{}", p.t, p.value, p.stderr, series.name);
        }
    }
    s
}

pub fn table_csv(cmd: &Command, table: &experiments::Table) -> String {
    let mut s = provenance(cmd);
    s.push_str(&table.header.join(","));
    s.push('\n');
    for row in &table.rows {
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

fn write(path: &Path, body: &str) -> Result<(), CliError> {
    fs::write(path, body).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Run one command and write its outputs. Returns the report.
pub fn run(cmd: &Command) -> Result<Report, CliError> {
    let started = Instant::now();
    let report = cmd.execute()?;
    let wall_time_s = started.elapsed().as_secs_f64();
    let out = &cmd.common().out;
    fs::create_dir_all(out).map_err(|source| CliError::Io {
        path: out.clone(),
        source,
    })?;
    let stem = cmd.name();
    if !report.series.is_empty() {
        write(&out.join(format!("{stem}.csv")), &curves_csv(cmd, &report))?;
    }
    for table in &report.tables {
        write(&out.join(format!("{stem}_{}.csv", table.name)), &table_csv(cmd, table))?;
    }
    let summary = Summary {
        config: cmd,
        seed: cmd.common().seed,
        git_version: git_version(),
        wall_time_s,
        checks: &report.checks,
    };
    let json = serde_json::to_string_pretty(&summary).expect("summary serializes");
    write(&out.join(format!("{stem}_summary.json")), &json)?;
    Ok(report)
}

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(report) => {
            for c in &report.checks {
                println!("[{}] {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            if report.all_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_CHECK_FAILED)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
