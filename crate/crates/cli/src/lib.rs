//! Command-line front end: argument model, input loading and report emission.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ratectl::closure::{resolve_rate, ClosureKind, ClosureSpec};
use ratectl::config::{self, closure_spec, REFERENCE_SUITE};
use ratectl::model::{solve_at_rate, ModelInstance};
use ratectl::report;
use ratectl::schedules::{compute_schedules, default_grid, linspace, slope_check, ScheduleMode};
use ratectl::statics::run_suite;
use ratectl::verify;
use ratectl::ModelError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_TOLERANCE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "ratectl", version, about = "Open-economy equilibrium with the real interest rate as a control variable")]
pub struct RunConfig {
    /// Instance file (`section.key = value` lines); defaults to the embedded baseline.
    #[arg(long, global = true)]
    pub instance_file: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Full,
    Partial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Closure {
    Fixed,
    BalancedTrade,
    TradeShareTarget,
    WelfareSweep,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the economy at one control rate.
    Solve {
        #[arg(long, allow_hyphen_values = true)]
        rate: f64,
    },
    /// Run a scenario suite (default: the bundled comparative-statics table).
    Table {
        #[arg(long)]
        scenario_file: Option<PathBuf>,
        /// Override every scenario's comparison tolerance.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Pick the rate with a closure rule, then solve there.
    Sweep(SweepArgs),
    /// Saving and investment schedules over a rate grid.
    Schedules {
        /// `start,stop,points`; defaults to 41 points within 0.2 of the reference rate.
        #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
        grid: Option<Grid>,
        #[arg(long, value_enum, default_value_t = Mode::Full)]
        mode: Mode,
        /// Reference rate for the partial mode and the default grid.
        #[arg(long, default_value_t = 0.4821)]
        rate: f64,
    },
    /// Run the acceptance suite.
    Check,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum, default_value_t = Closure::BalancedTrade)]
    pub closure: Closure,
    /// Rate for the fixed closure.
    #[arg(long, allow_hyphen_values = true)]
    pub rate: Option<f64>,
    /// `lo,hi` bracket for the root-finding closures.
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    pub bracket: Option<(f64, f64)>,
    /// Target `tb0 / Y0` for the trade-share closure.
    #[arg(long, allow_hyphen_values = true)]
    pub target: Option<f64>,
    /// `start,stop,points` rate grid for the welfare sweep.
    #[arg(long, value_parser = parse_grid)]
    pub grid: Option<Grid>,
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl Grid {
    pub fn rates(&self) -> Vec<f64> {
        linspace(self.start, self.stop, self.points)
    }
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [a, b] => Ok((
            a.parse().map_err(|_| format!("`{a}` is not a number"))?,
            b.parse().map_err(|_| format!("`{b}` is not a number"))?,
        )),
        _ => Err("expected `lo,hi`".into()),
    }
}

fn parse_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [start, stop, points] = parts.as_slice() else {
        return Err("expected `start,stop,points`".into());
    };
    let grid = Grid {
        start: start.parse().map_err(|_| format!("`{start}` is not a number"))?,
        stop: stop.parse().map_err(|_| format!("`{stop}` is not a number"))?,
        points: points.parse().map_err(|_| format!("`{points}` is not a point count"))?,
    };
    if grid.points < 2 || !(grid.stop > grid.start) {
        return Err("grid needs start < stop and at least 2 points".into());
    }
    Ok(grid)
}

/// What a run printed and how it ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { status: EXIT_OK, stdout, stderr: String::new() }
    }

    fn invalid(message: impl std::fmt::Display) -> Self {
        Outcome { status: EXIT_INVALID, stdout: String::new(), stderr: format!("error: {message}\n") }
    }
}

impl From<ModelError> for Outcome {
    fn from(e: ModelError) -> Self {
        Outcome::invalid(e)
    }
}

fn read(path: &PathBuf) -> Result<String, Outcome> {
    std::fs::read_to_string(path).map_err(|e| Outcome::invalid(format!("cannot read {}: {e}", path.display())))
}

fn load_instance(cfg: &RunConfig) -> Result<ModelInstance, Outcome> {
    match &cfg.instance_file {
        None => Ok(ModelInstance::baseline()),
        Some(path) => config::parse_instance(&read(path)?)
            .map_err(|e| Outcome::invalid(format!("{}: {e}", path.display()))),
    }
}

fn emit(format: Format, csv: String, json: &serde_json::Value) -> String {
    match format {
        Format::Csv => csv,
        Format::Json => report::to_json_string(json),
    }
}

/// Executes one command.
pub fn run(cfg: &RunConfig) -> Outcome {
    match execute(cfg) {
        Ok(outcome) | Err(outcome) => outcome,
    }
}

fn execute(cfg: &RunConfig) -> Result<Outcome, Outcome> {
    let format = cfg.format;
    match &cfg.command {
        Command::Solve { rate } => {
            let inst = load_instance(cfg)?;
            let eq = solve_at_rate(&inst, *rate)?;
            Ok(Outcome::ok(emit(format, report::equilibrium_csv(&eq, &inst), &report::equilibrium_json(&eq, &inst))))
        }
        Command::Table { scenario_file, tol } => {
            let inst = load_instance(cfg)?;
            let text = match scenario_file {
                Some(path) => read(path)?,
                None => REFERENCE_SUITE.to_string(),
            };
            let mut scenarios = config::parse_scenarios(&text)?;
            if let Some(t) = tol {
                if !(*t > 0.0) {
                    return Err(Outcome::invalid(format!("tolerance must be positive, got {t}")));
                }
                for reference in scenarios.iter_mut().filter_map(|s| s.reference.as_mut()) {
                    reference.tolerance = *t;
                }
            }
            let suite = run_suite(&inst, &scenarios);
            let stdout = emit(format, report::suite_csv(&suite), &report::suite_json(&suite));
            let invalid = suite.outcomes.iter().any(|o| o.result.is_err());
            let failures = suite.failures();
            let status = if invalid {
                EXIT_INVALID
            } else if failures.is_empty() {
                EXIT_OK
            } else {
                EXIT_TOLERANCE
            };
            let stderr = failures.iter().map(|f| format!("fail: {f}\n")).collect();
            Ok(Outcome { status, stdout, stderr })
        }
        Command::Sweep(args) => {
            let inst = load_instance(cfg)?;
            let spec = sweep_spec(args)?;
            let closure = resolve_rate(&inst, &spec)?;
            let eq = solve_at_rate(&inst, closure.rate)?;
            let csv = format!(
                "{}{}",
                report::closure_csv(&closure),
                report::equilibrium_csv(&eq, &inst).trim_start_matches("quantity,value\n")
            );
            let json = serde_json::json!({
                "closure": report::closure_json(&closure),
                "equilibrium": report::equilibrium_json(&eq, &inst),
            });
            Ok(Outcome::ok(emit(format, csv, &json)))
        }
        Command::Schedules { grid, mode, rate } => {
            let inst = load_instance(cfg)?;
            let rates = match grid {
                Some(g) => g.rates(),
                None => default_grid(*rate),
            };
            let mode = match mode {
                Mode::Full => ScheduleMode::FullEquilibrium,
                Mode::Partial => ScheduleMode::Partial { r_ref: *rate },
            };
            let curve = compute_schedules(&inst, &rates, mode)?;
            let mut stderr = String::new();
            for (r, e) in &curve.skipped {
                stderr.push_str(&format!("skipped r = {r}: {e}\n"));
            }
            if let Ok(slopes) = slope_check(&curve) {
                for s in slopes.flagged() {
                    stderr.push_str(&format!("saving slope not positive on [{}, {}]\n", s.r_lo, s.r_hi));
                }
            }
            let stdout = emit(format, report::schedule_csv(&curve), &report::schedule_json(&curve));
            Ok(Outcome { status: EXIT_OK, stdout, stderr })
        }
        Command::Check => {
            let criteria = verify::run_all();
            let mut stdout = String::new();
            for c in &criteria {
                stdout.push_str(&c.line());
                stdout.push('\n');
            }
            let passed = criteria.iter().filter(|c| c.pass).count();
            stdout.push_str(&format!("{passed}/{} criteria passed\n", criteria.len()));
            let status = if passed == criteria.len() { EXIT_OK } else { EXIT_TOLERANCE };
            Ok(Outcome { status, stdout, stderr: String::new() })
        }
    }
}

fn sweep_spec(args: &SweepArgs) -> Result<ClosureSpec, Outcome> {
    let mut spec = match args.closure {
        Closure::Fixed => {
            let rate = args.rate.ok_or_else(|| Outcome::invalid("the fixed closure needs --rate"))?;
            ClosureSpec::fixed(rate)
        }
        Closure::BalancedTrade => ClosureSpec::new(ClosureKind::BalancedTrade),
        Closure::TradeShareTarget => closure_spec("trade_share_target", args.target, None)?,
        Closure::WelfareSweep => closure_spec("welfare_sweep", None, args.grid.map(|g| g.rates()))?,
    };
    if let Some((lo, hi)) = args.bracket {
        spec = spec.with_bracket(lo, hi);
    }
    if let Some(t) = args.tol {
        spec = spec.with_tolerance(t);
    }
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(args: &[&str]) -> RunConfig {
        RunConfig::try_parse_from(std::iter::once("ratectl").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn grid_and_pair_parsing() {
        assert_eq!(parse_pair("0.1, 2").unwrap(), (0.1, 2.0));
        assert!(parse_pair("0.1").is_err());
        let g = parse_grid("0.3,0.7,41").unwrap();
        assert_eq!(g.rates().len(), 41);
        assert!(parse_grid("0.7,0.3,41").is_err());
        assert!(parse_grid("0.3,0.7,x").is_err());
    }

    #[test]
    fn solve_defaults_to_csv() {
        let out = run(&cfg(&["solve", "--rate", "0.4821"]));
        assert_eq!(out.status, EXIT_OK);
        assert!(out.stdout.starts_with("quantity,value\nr,0.4821\n"));
    }

    #[test]
    fn inadmissible_rate_is_invalid_input() {
        let out = run(&cfg(&["solve", "--rate", "-2.0"]));
        assert_eq!(out.status, EXIT_INVALID);
        assert!(out.stderr.contains("domain error"));
    }

    #[test]
    fn fixed_sweep_requires_rate() {
        let out = run(&cfg(&["sweep", "--closure", "fixed"]));
        assert_eq!(out.status, EXIT_INVALID);
        let out = run(&cfg(&["sweep", "--closure", "fixed", "--rate", "0.5"]));
        assert_eq!(out.status, EXIT_OK);
        assert!(out.stdout.contains("closure_rate,0.5\n"));
    }

    #[test]
    fn trade_share_sweep_needs_target() {
        let out = run(&cfg(&["sweep", "--closure", "trade-share-target"]));
        assert_eq!(out.status, EXIT_INVALID);
        let out = run(&cfg(&[
            "--format", "json", "sweep", "--closure", "trade-share-target", "--target", "-0.1549", "--bracket", "0.3,0.7",
        ]));
        assert_eq!(out.status, EXIT_OK, "{}", out.stderr);
        let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        let r = v["closure"]["rate"].as_f64().unwrap();
        assert!((r - 0.4821).abs() < 1e-4);
    }
}
