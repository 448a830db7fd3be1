use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rug::Rational;
use serde_json::json;

use brauerlab::report::{Check, Report, Status};

mod commands;

#[derive(Parser, Debug)]
#[command(name = "brauerlab", version, about = "Verification pipelines for Brauer algebras and their seminormal models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    config: Config,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Basis size and cell module dimensions.
    Dims,
    /// Defining relations of the diagram algebra.
    Relations,
    /// Jucys-Murphy elements: commutation and their truncated images.
    Jm,
    /// Gram matrices of the cell modules.
    Gram,
    /// Decomposition numbers from the radical filtration.
    Decomp,
    /// Seminormal model: relation suite and the d = 2 matrices.
    Seminormal,
    /// Images of the Brauer generators in the truncated model.
    PhiVerify,
    /// Parabolic Kazhdan-Lusztig tables.
    Kl,
    /// Kazhdan-Lusztig values against decomposition numbers.
    Crosscheck,
    /// Everything above.
    ReportAll,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(clap::Args, Debug, Clone)]
pub struct Config {
    #[arg(long, global = true, default_value_t = 2)]
    d: usize,
    /// Loop parameter, repeatable; rationals such as `1/2` are accepted.
    #[arg(long = "delta", global = true, allow_hyphen_values = true, value_parser = parse_rational)]
    deltas: Vec<Rational>,
    /// Strip width, at least 2d; defaults to 2d.
    #[arg(long, global = true)]
    n: Option<usize>,
    #[arg(long, global = true, default_value_t = 256)]
    precision: u32,
    #[arg(long, global = true, default_value_t = 1e-25)]
    tol: f64,
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Work over Z[delta] instead of specialising.
    #[arg(long, global = true)]
    generic: bool,
    /// Also write the JSON report here.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    s.parse::<Rational>().map_err(|e| format!("{s:?} is not a rational number: {e}"))
}

impl Config {
    pub fn n(&self) -> usize {
        self.n.unwrap_or(2 * self.d)
    }

    /// The sweep used when no `--delta` is given.
    pub fn deltas(&self) -> Vec<Rational> {
        if self.deltas.is_empty() {
            (-2..=3).map(Rational::from).collect()
        } else {
            self.deltas.clone()
        }
    }

    fn validate(&self) -> Result<(), String> {
        if self.d == 0 {
            return Err("--d must be positive".into());
        }
        if self.n() < 2 * self.d {
            return Err(format!("--n {} must be at least 2d = {}", self.n(), 2 * self.d));
        }
        if self.precision < 53 {
            return Err(format!("--precision {} is below 53 bits", self.precision));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err("--tol must be positive".into());
        }
        Ok(())
    }

    fn to_json(&self) -> serde_json::Value {
        json!({
            "d": self.d,
            "delta": self.deltas().iter().map(|q| q.to_string()).collect::<Vec<_>>(),
            "n": self.n(),
            "precision": self.precision,
            "tol": self.tol,
            "seed": self.seed,
            "generic": self.generic,
            "cache_dir": self.cache_dir.as_ref().map(|p| p.display().to_string()),
        })
    }
}

/// What a pipeline produced besides its checks.
#[derive(Default)]
pub struct Outcome {
    pub checks: Vec<Check>,
    pub csv: Vec<String>,
    pub text: Vec<String>,
    pub degenerate: Vec<String>,
}

impl Outcome {
    fn absorb(&mut self, other: Outcome) {
        self.checks.extend(other.checks);
        self.csv.extend(other.csv);
        self.text.extend(other.text);
        self.degenerate.extend(other.degenerate);
    }
}

fn command_name(c: Command) -> &'static str {
    match c {
        Command::Dims => "dims",
        Command::Relations => "relations",
        Command::Jm => "jm",
        Command::Gram => "gram",
        Command::Decomp => "decomp",
        Command::Seminormal => "seminormal",
        Command::PhiVerify => "phi-verify",
        Command::Kl => "kl",
        Command::Crosscheck => "crosscheck",
        Command::ReportAll => "report-all",
    }
}

fn run(command: Command, cfg: &Config) -> Result<Outcome, brauerlab::Error> {
    Ok(match command {
        Command::Dims => commands::dims(cfg),
        Command::Relations => commands::relations(cfg)?,
        Command::Jm => commands::jm(cfg)?,
        Command::Gram => commands::gram(cfg)?,
        Command::Decomp => commands::decomp(cfg)?,
        Command::Seminormal => commands::seminormal(cfg)?,
        Command::PhiVerify => commands::phi_verify(cfg)?,
        Command::Kl => commands::kl(cfg)?,
        Command::Crosscheck => commands::crosscheck(cfg)?,
        Command::ReportAll => {
            let mut all = Outcome::default();
            for c in [
                Command::Dims,
                Command::Relations,
                Command::Jm,
                Command::Gram,
                Command::Decomp,
                Command::Seminormal,
                Command::PhiVerify,
                Command::Kl,
                Command::Crosscheck,
            ] {
                match run(c, cfg) {
                    Ok(o) => all.absorb(o),
                    Err(brauerlab::Error::SizeGuard(why)) => {
                        all.checks.push(Check::skipped(command_name(c), "size-guard", why));
                    }
                    Err(e) => return Err(e),
                }
            }
            all
        }
    })
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = cli.config;
    if let Err(msg) = cfg.validate() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    let start = Instant::now();
    let outcome = match run(cli.command, &cfg) {
        Ok(o) => o,
        Err(brauerlab::Error::Degenerate(why)) => {
            eprintln!("degenerate parameters: {why}");
            return ExitCode::from(3);
        }
        Err(e @ (brauerlab::Error::InvalidInput(_) | brauerlab::Error::SizeGuard(_))) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    };
    let report = Report {
        command: command_name(cli.command).to_string(),
        config: cfg.to_json(),
        checks: outcome.checks,
        elapsed_ms: start.elapsed().as_millis(),
    };
    let json = serde_json::to_string_pretty(&report).expect("report serialises");
    if let Some(path) = &cfg.report {
        if let Err(e) = std::fs::write(path, &json) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::FAILURE;
        }
    }
    match cfg.format {
        Format::Json => println!("{json}"),
        Format::Csv => {
            if outcome.csv.is_empty() {
                println!("name,anchor,status,residual");
                for c in &report.checks {
                    let status = serde_json::to_value(c.status).unwrap();
                    println!("{},{},{},{:e}", csv_escape(&c.name), c.anchor, status.as_str().unwrap(), c.residual);
                }
            } else {
                for block in &outcome.csv {
                    print!("{block}");
                }
            }
        }
        Format::Text => {
            for line in &outcome.text {
                println!("{line}");
            }
            for c in &report.checks {
                let tag = match c.status {
                    Status::Pass => "PASS",
                    Status::Fail => "FAIL",
                    Status::Skip => "SKIP",
                };
                let detail = c.detail.as_deref().map(|d| format!("  ({d})")).unwrap_or_default();
                println!("{tag}  {:<60} {:<22} {:.3e}{detail}", c.name, c.anchor, c.residual);
            }
            let failed = report.checks.iter().filter(|c| !c.ok()).count();
            println!("{} checks, {failed} failed, {} ms", report.checks.len(), report.elapsed_ms);
        }
    }
    for why in &outcome.degenerate {
        eprintln!("degenerate parameters: {why}");
    }
    if !outcome.degenerate.is_empty() {
        ExitCode::from(3)
    } else if report.all_ok() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
