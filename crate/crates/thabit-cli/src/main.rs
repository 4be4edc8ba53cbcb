use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use thabit::bounds::bound_report;
use thabit::enumerate::{detect_families, zero_difference_families, EquationSpec, Mode, TieBreak};
use thabit::numerics::PrecisionPolicy;
use thabit::reduction::ConvergentStrategy;
use thabit::report::{self, BoundsEntry, Format};
use thabit::solver::{run_suite, solve, SolverOptions};
use thabit::verify::{run_checks, VerifyConfig};

/// Solves (b+-1) b^n +- 1 = d1 R(l) +- d2 R(m) in base-g repdigits.
#[derive(Debug, Parser)]
#[command(name = "thabit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve every selected equation completely.
    Solve(RunArgs),
    /// Solve a grid and print the aggregate tables.
    Suite(RunArgs),
    /// Show the two reduction steps case by case.
    Reduce(RunArgs),
    /// Print the theorem bounds.
    Bounds(GridArgs),
    /// List the infinite families of the selected equations.
    Families(GridArgs),
    /// Run the self-checks; exits nonzero if any fails.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct GridArgs {
    /// A base `b`, a range `2..12`, or a list `2,3,5`.
    #[arg(long, required = true, value_parser = parse_range)]
    b: Vec<BSet>,
    /// Repdigit base.
    #[arg(long, default_value_t = 10, value_parser = parse_base)]
    g: u64,
    /// `sum`, `diff` or `sum,diff`.
    #[arg(long, default_value = "sum,diff", value_parser = parse_modes)]
    mode: Modes,
    /// Only the `+` or only the `-` sign in `b +- 1`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_sign)]
    base_sign: Option<i8>,
    /// Only the `+` or only the `-` sign of the constant term.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_sign)]
    const_sign: Option<i8>,
    #[arg(long, default_value = "text")]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[command(flatten)]
    grid: GridArgs,
    /// `first` (smallest q > 6M) or `retry:K`.
    #[arg(long, default_value = "first", value_parser = parse_strategy)]
    strategy: ConvergentStrategy,
    /// Starting precision in bits (env THABIT_INITIAL_BITS).
    #[arg(long)]
    initial_bits: Option<u32>,
    /// Precision ceiling in bits (env THABIT_MAX_BITS).
    #[arg(long)]
    max_bits: Option<u32>,
    /// Count sum solutions with l = m once per unordered digit pair.
    #[arg(long)]
    unordered: bool,
    /// Evaluate the bound on M at this b instead of each equation's own.
    #[arg(long)]
    bound_base: Option<u64>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// A smaller subset that runs in seconds.
    #[arg(long)]
    quick: bool,
    /// Oracle box cap on n.
    #[arg(long)]
    oracle_n: Option<u64>,
    /// Oracle box cap on l and m.
    #[arg(long)]
    oracle_lm: Option<u64>,
}

#[derive(Debug, Clone)]
struct BSet(Vec<u64>);

#[derive(Debug, Clone)]
struct Modes(Vec<Mode>);

fn parse_base(s: &str) -> Result<u64, String> {
    let v: u64 = s
        .trim()
        .parse()
        .map_err(|_| format!("{s:?} is not an integer"))?;
    if v < 2 {
        return Err(format!("bases must be at least 2, got {v}"));
    }
    Ok(v)
}

fn parse_range(s: &str) -> Result<BSet, String> {
    let mut out = Vec::new();
    for part in s.split(',') {
        match part.split_once("..") {
            Some((lo, hi)) => {
                let (lo, hi) = (parse_base(lo)?, parse_base(hi.trim_start_matches('='))?);
                if lo > hi {
                    return Err(format!("empty range {part}"));
                }
                out.extend(lo..=hi);
            }
            None => out.push(parse_base(part)?),
        }
    }
    Ok(BSet(out))
}

fn parse_modes(s: &str) -> Result<Modes, String> {
    let modes = s
        .split(',')
        .map(|m| match m.trim() {
            "sum" => Ok(Mode::Sum),
            "diff" => Ok(Mode::Diff),
            other => Err(format!("unknown mode {other:?} (sum, diff)")),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Modes(modes))
}

fn parse_sign(s: &str) -> Result<i8, String> {
    match s {
        "+" | "plus" | "+1" | "1" => Ok(1),
        "-" | "minus" | "-1" => Ok(-1),
        _ => Err(format!("unknown sign {s:?} (+, -)")),
    }
}

fn parse_strategy(s: &str) -> Result<ConvergentStrategy, String> {
    match s.split_once(':') {
        None if s == "first" => Ok(ConvergentStrategy::FirstAboveSixM),
        Some(("retry", k)) => k
            .parse()
            .map(ConvergentStrategy::RetryNext)
            .map_err(|_| format!("bad retry count {k:?}")),
        _ => Err(format!("unknown strategy {s:?} (first, retry:K)")),
    }
}

impl GridArgs {
    fn b_values(&self) -> Result<Vec<u64>> {
        let mut bs: Vec<u64> = self.b.iter().flat_map(|x| x.0.iter().copied()).collect();
        bs.sort_unstable();
        bs.dedup();
        if bs.is_empty() {
            bail!("--b is required");
        }
        Ok(bs)
    }

    fn modes(&self) -> Vec<Mode> {
        let mut ms: Vec<Mode> = Vec::new();
        for &m in &self.mode.0 {
            if !ms.contains(&m) {
                ms.push(m);
            }
        }
        ms
    }

    fn specs(&self) -> Result<Vec<EquationSpec>> {
        let mut out = Vec::new();
        for &mode in &self.modes() {
            for b in self.b_values()? {
                out.extend(
                    EquationSpec::all_signs(b, self.g, mode)?
                        .into_iter()
                        .filter(|s| self.base_sign.is_none_or(|x| x == s.base_sign))
                        .filter(|s| self.const_sign.is_none_or(|x| x == s.const_sign)),
                );
            }
        }
        Ok(out)
    }

    fn emit(&self, text: String) -> Result<()> {
        match &self.out {
            Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
            None => match std::io::stdout().lock().write_all(text.as_bytes()) {
                // A closed pipe (e.g. `| head`) is not an error.
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    Err(e).context("writing to stdout")
                }
                _ => Ok(()),
            },
        }
    }
}

fn env_bits(name: &str) -> Result<Option<u32>> {
    match std::env::var(name) {
        Ok(v) => {
            Ok(Some(v.parse().with_context(|| {
                format!("{name}={v:?} is not a bit count")
            })?))
        }
        Err(_) => Ok(None),
    }
}

impl RunArgs {
    fn options(&self) -> Result<SolverOptions> {
        let default = PrecisionPolicy::default();
        let initial = self
            .initial_bits
            .or(env_bits("THABIT_INITIAL_BITS")?)
            .unwrap_or(default.initial_bits);
        let max = self
            .max_bits
            .or(env_bits("THABIT_MAX_BITS")?)
            .unwrap_or(default.max_bits.max(initial));
        Ok(SolverOptions {
            policy: PrecisionPolicy::new(initial, max, default.escalation_factor)?,
            strategy: self.strategy,
            tie: if self.unordered {
                TieBreak::Unordered
            } else {
                TieBreak::Ordered
            },
            bound_base: self.bound_base,
        })
    }

    fn solve_all(&self) -> Result<Vec<thabit::solver::SolverReport>> {
        let opts = self.options()?;
        self.grid
            .specs()?
            .iter()
            .map(|s| solve(s, &opts).with_context(|| format!("solving {s}")))
            .collect()
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Solve(a) => {
            let rs = a.solve_all()?;
            a.grid.emit(match a.grid.format {
                Format::Json => report::reports_json(&rs),
                Format::Csv => report::reports_csv(&rs),
                Format::Text => rs.iter().map(report::report_text).collect(),
            })?;
        }
        Command::Reduce(a) => {
            let rs = a.solve_all()?;
            a.grid.emit(match a.grid.format {
                Format::Json => report::steps_json(&rs),
                Format::Csv => report::steps_csv(&rs),
                Format::Text => report::steps_text(&rs),
            })?;
        }
        Command::Suite(a) => {
            if a.grid.base_sign.is_some() || a.grid.const_sign.is_some() {
                bail!("suite always covers all four sign choices; drop --base-sign/--const-sign");
            }
            let s = run_suite(
                &a.grid.b_values()?,
                a.grid.g,
                &a.grid.modes(),
                &a.options()?,
            );
            a.grid.emit(match a.grid.format {
                Format::Json => report::suite_json(&s),
                Format::Csv => report::suite_csv(&s),
                Format::Text => report::suite_text(&s),
            })?;
        }
        Command::Bounds(a) => {
            let mut es = Vec::new();
            for &mode in &a.modes() {
                for b in a.b_values()? {
                    es.push(BoundsEntry {
                        b,
                        g: a.g,
                        mode,
                        bounds: bound_report(b, a.g, mode)?,
                    });
                }
            }
            a.emit(match a.format {
                Format::Json => report::bounds_json(&es),
                Format::Csv => report::bounds_csv(&es),
                Format::Text => report::bounds_text(&es),
            })?;
        }
        Command::Families(a) => {
            let fs: Vec<_> = a
                .specs()?
                .iter()
                .flat_map(|s| {
                    detect_families(s)
                        .into_iter()
                        .chain(zero_difference_families(s))
                })
                .collect();
            a.emit(match a.format {
                Format::Json => report::families_json(&fs),
                Format::Csv => report::families_csv(&fs),
                Format::Text => report::families_text(&fs),
            })?;
        }
        Command::Verify(a) => {
            let mut cfg = if a.quick {
                VerifyConfig::quick()
            } else {
                VerifyConfig::full()
            };
            cfg.oracle_n = a.oracle_n.unwrap_or(cfg.oracle_n);
            cfg.oracle_lm = a.oracle_lm.unwrap_or(cfg.oracle_lm);
            let checks = run_checks(&cfg);
            for c in &checks {
                println!(
                    "{} {}: {}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.detail
                );
            }
            if let Some(c) = checks.iter().find(|c| !c.passed) {
                eprintln!("verification failed: {}", c.name);
                return Ok(ExitCode::FAILURE);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
