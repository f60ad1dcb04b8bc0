mod parse;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cstat_sampsize::bench::{run_bench, speedup_summary, BenchConfig};
use cstat_sampsize::export::{fmt_sig17, write_json, write_results_csv, ResultRow};
use cstat_sampsize::verify::{
    figure1_curves, reproduce_table1_with, run_sweep, GridSpec, SeRange, SweepReport, Table1Check,
};
use cstat_sampsize::{
    ci_width_to_se, solve, ConfidenceSpec, DiscriminationInputs, Error, IterativeConfig,
    SearchStrategy, SolverMethod,
};
use serde::Serialize;

// Aliases keep clap from treating these as repeated flags.
type Values = Vec<f64>;
type Methods = Vec<SolverMethod>;

/// Sample sizes beyond this are flagged as implausible.
const IMPLAUSIBLE_N: f64 = 1.0e7;

#[derive(Parser)]
#[command(
    name = "cstat-sampsize",
    version,
    about = "Minimum external-validation sample size for the C-statistic"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample size for one (C, phi, SE) problem.
    Solve(SolveArgs),
    /// Check the five published examples, optionally the 450-point grid.
    Verify(VerifyArgs),
    /// Evaluate methods over a (C, phi, SE) grid.
    Sweep(SweepArgs),
    /// Sample size against SE for a fixed C, one curve per method and phi.
    Curves(CurvesArgs),
    /// Time single calls of each method.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Human,
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Search {
    Scan,
    Bracketed,
}

impl From<Search> for SearchStrategy {
    fn from(s: Search) -> Self {
        match s {
            Search::Scan => SearchStrategy::Scan,
            Search::Bracketed => SearchStrategy::Bracketed,
        }
    }
}

#[derive(Args)]
struct IterativeArgs {
    /// Search strategy for the iterative method.
    #[arg(long, value_enum, default_value = "scan")]
    search: Search,
    /// First candidate N of the iterative search.
    #[arg(long, default_value_t = IterativeConfig::DEFAULT_START_N)]
    start_n: u64,
    /// Last candidate N of the iterative search.
    #[arg(long, default_value_t = IterativeConfig::DEFAULT_MAX_N)]
    max_n: u64,
}

impl IterativeArgs {
    fn config(&self) -> Result<IterativeConfig, Failure> {
        Ok(IterativeConfig::new(
            self.start_n,
            self.max_n,
            self.search.into(),
        )?)
    }
}

#[derive(Args)]
struct SolveArgs {
    /// Anticipated C-statistic.
    #[arg(long, value_parser = parse::number)]
    c: f64,
    /// Anticipated outcome event proportion.
    #[arg(long, value_parser = parse::number)]
    phi: f64,
    /// Target standard error of C.
    #[arg(long, value_parser = parse::number, required_unless_present = "ci_width", conflicts_with = "ci_width")]
    se: Option<f64>,
    /// Target full width of the confidence interval for C.
    #[arg(long, value_parser = parse::number)]
    ci_width: Option<f64>,
    /// Confidence level used with --ci-width.
    #[arg(long, value_parser = parse::number, default_value_t = ConfidenceSpec::DEFAULT_LEVEL, requires = "ci_width")]
    level: f64,
    /// Method name, or `all`.
    #[arg(long, default_value = "mathgpt")]
    method: String,
    /// Also print the unrounded root.
    #[arg(long)]
    raw: bool,
    #[arg(
        long,
        value_enum,
        env = "CSTAT_SAMPSIZE_FORMAT",
        default_value = "human"
    )]
    format: OutputFormat,
    #[command(flatten)]
    iterative: IterativeArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// Also run the 450-point grid against the iterative search.
    #[arg(long)]
    grid: bool,
    #[arg(
        long,
        value_enum,
        env = "CSTAT_SAMPSIZE_FORMAT",
        default_value = "human"
    )]
    format: OutputFormat,
    #[command(flatten)]
    iterative: IterativeArgs,
}

#[derive(Args)]
struct SweepArgs {
    /// C values as lo:hi:step or a single value.
    #[arg(long, value_parser = parse::step_range)]
    c_range: Values,
    /// phi values as lo:hi:step or a single value.
    #[arg(long, value_parser = parse::step_range)]
    phi_range: Values,
    /// SE values as lo:hi:step.
    #[arg(long, value_parser = parse::step_range, required_unless_present = "se", conflicts_with = "se")]
    se_range: Option<Values>,
    /// A single SE value.
    #[arg(long, value_parser = parse::number)]
    se: Option<f64>,
    /// Comma-separated method names, `closed` or `all`.
    #[arg(long, value_parser = parse::methods, default_value = "mathgpt")]
    methods: Methods,
    #[arg(long, value_enum, env = "CSTAT_SAMPSIZE_FORMAT", default_value = "csv")]
    format: OutputFormat,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    iterative: IterativeArgs,
}

#[derive(Args)]
struct CurvesArgs {
    #[arg(long, value_parser = parse::number, default_value_t = 0.6)]
    c: f64,
    /// Comma-separated phi values.
    #[arg(long, value_parser = parse::number_list, default_value = "0.1,0.2,0.3,0.4,0.5")]
    phi_list: Values,
    /// SE axis as lo:hi:count.
    #[arg(long, value_parser = parse::count_range, default_value = "0.01:0.05:100")]
    se_range: SeRange,
    #[arg(long, value_parser = parse::methods, default_value = "closed")]
    methods: Methods,
    #[arg(long, value_enum, env = "CSTAT_SAMPSIZE_FORMAT", default_value = "csv")]
    format: OutputFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_parser = parse::methods, default_value = "all")]
    methods: Methods,
    /// Timed calls per method.
    #[arg(long, default_value_t = 1_000)]
    reps: usize,
    /// Untimed calls per method before timing.
    #[arg(long, default_value_t = 100)]
    warmup: usize,
    #[arg(long, value_parser = parse::number, default_value_t = 0.7)]
    c: f64,
    #[arg(long, value_parser = parse::number, default_value_t = 0.1)]
    phi: f64,
    #[arg(long, value_parser = parse::number, default_value_t = 0.02551)]
    se: f64,
    /// `csv` writes raw samples, `json` the summary.
    #[arg(long, value_enum, env = "CSTAT_SAMPSIZE_FORMAT", default_value = "csv")]
    format: OutputFormat,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Additionally write the JSON summary to this file.
    #[arg(long)]
    summary: Option<PathBuf>,
    #[command(flatten)]
    iterative: IterativeArgs,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Internal(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        match err {
            Error::Domain { .. }
            | Error::NonFinite { .. }
            | Error::InvalidConfig(_)
            | Error::InvalidGrid(_) => Failure::Usage(err.to_string()),
            _ => Failure::Internal(err.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(err: io::Error) -> Self {
        Failure::Internal(err.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Curves(args) => cmd_curves(args),
        Command::Bench(args) => cmd_bench(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
    }
}

fn output(path: Option<&PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| {
            Failure::Usage(format!("cannot create {}: {e}", p.display()))
        })?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn warn_low_c(c: f64) {
    if c <= 0.5 {
        eprintln!("warning: C = {c} <= 0.5 means the model does not discriminate");
    }
}

fn single_methods(spec: &str) -> Result<Vec<SolverMethod>, Failure> {
    if spec.trim() == "all" {
        return Ok(SolverMethod::ALL.to_vec());
    }
    spec.parse::<SolverMethod>()
        .map(|m| vec![m])
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn cmd_solve(args: SolveArgs) -> Result<(), Failure> {
    let se = match (args.se, args.ci_width) {
        (Some(se), _) => se,
        (None, Some(width)) => ci_width_to_se(&ConfidenceSpec::new(width, args.level)?),
        (None, None) => unreachable!("clap requires --se or --ci-width"),
    };
    let inputs = DiscriminationInputs::new(args.c, args.phi, se)?;
    let methods = single_methods(&args.method)?;
    let iterative = args.iterative.config()?;
    warn_low_c(inputs.c());

    let mut rows = Vec::with_capacity(methods.len());
    for method in methods {
        let result = if method == SolverMethod::Iterative {
            cstat_sampsize::n_iterative(&inputs, &iterative)?
        } else {
            solve(&inputs, method)?
        };
        if result.n_raw > IMPLAUSIBLE_N {
            eprintln!(
                "warning: {method} gives N = {} (> 1e7), an implausible study size",
                result.n
            );
        }
        rows.push(ResultRow {
            method,
            c: inputs.c(),
            phi: inputs.phi(),
            se: inputs.se_target(),
            n_raw: result.n_raw,
            n: result.n,
        });
    }

    let mut out = output(None)?;
    match args.format {
        OutputFormat::Human if rows.len() == 1 => {
            let row = rows[0];
            if args.raw {
                writeln!(out, "{} (n_raw = {})", row.n, fmt_sig17(row.n_raw))?;
            } else {
                writeln!(out, "{}", row.n)?;
            }
        }
        OutputFormat::Human => {
            writeln!(out, "{:<12} {:>24} {:>10}", "method", "n_raw", "n")?;
            for row in &rows {
                writeln!(
                    out,
                    "{:<12} {:>24} {:>10}",
                    row.method.name(),
                    fmt_sig17(row.n_raw),
                    row.n
                )?;
            }
        }
        OutputFormat::Csv => write_results_csv(&mut out, &rows)?,
        OutputFormat::Json if rows.len() == 1 => write_json(&mut out, &rows[0])?,
        OutputFormat::Json => write_json(&mut out, &rows)?,
    }
    out.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct GridSummary {
    points: usize,
    all_within_one: bool,
    max_pairwise_rel_diff: f64,
    max_oracle_abs_diff: u64,
}

#[derive(Serialize)]
struct VerifyReport {
    table1: Vec<Table1Check>,
    table1_pass: bool,
    grid: Option<GridSummary>,
    pass: bool,
}

fn grid_summary(report: &SweepReport) -> GridSummary {
    GridSummary {
        points: report.rows.len(),
        all_within_one: report.all_within_one,
        max_pairwise_rel_diff: report.max_pairwise_rel_diff,
        max_oracle_abs_diff: report
            .rows
            .iter()
            .filter_map(|r| r.oracle_abs_diff_max)
            .max()
            .unwrap_or(0),
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<(), Failure> {
    let iterative = args.iterative.config()?;
    let table1 = reproduce_table1_with(&iterative);
    let table1_pass = table1.iter().all(|c| c.pass);
    let sweep = if args.grid {
        Some(run_sweep(&GridSpec::paper().with_iterative(iterative))?)
    } else {
        None
    };
    let grid = sweep.as_ref().map(grid_summary);
    let pass = table1_pass && grid.as_ref().is_none_or(|g| g.all_within_one);

    let mut out = output(None)?;
    match args.format {
        OutputFormat::Json => write_json(
            &mut out,
            &VerifyReport {
                table1: table1.clone(),
                table1_pass,
                grid,
                pass,
            },
        )?,
        OutputFormat::Csv => {
            writeln!(out, "c,phi,se,expected_n,method,n,pass")?;
            for check in &table1 {
                for (method, n) in &check.n_by_method {
                    writeln!(
                        out,
                        "{},{},{},{},{},{},{}",
                        check.inputs.c(),
                        check.inputs.phi(),
                        check.inputs.se_target(),
                        check.expected_n,
                        method,
                        n.map_or(String::new(), |n| n.to_string()),
                        *n == Some(check.expected_n)
                    )?;
                }
            }
        }
        OutputFormat::Human => {
            for check in &table1 {
                writeln!(
                    out,
                    "{} C = {:<5} phi = {:<6} SE = {:<8} expected N = {:<5}",
                    if check.pass { "PASS" } else { "FAIL" },
                    check.inputs.c(),
                    check.inputs.phi(),
                    check.inputs.se_target(),
                    check.expected_n
                )?;
            }
            let passed = table1.iter().filter(|c| c.pass).count();
            writeln!(out, "worked examples: {passed}/{} rows pass", table1.len())?;
            if let Some(g) = &grid {
                writeln!(
                    out,
                    "grid: {} points, max |closed - iterative| = {}, all within 1: {}, \
                     max pairwise rel diff = {:.3e}",
                    g.points, g.max_oracle_abs_diff, g.all_within_one, g.max_pairwise_rel_diff
                )?;
            }
        }
    }
    out.flush()?;

    if pass {
        return Ok(());
    }
    let mut failures: Vec<String> = table1
        .iter()
        .filter(|c| !c.pass)
        .flat_map(|c| {
            c.n_by_method
                .iter()
                .filter(|(_, n)| **n != Some(c.expected_n))
                .map(move |(m, n)| {
                    format!(
                        "worked example ({}, {}, {}): {m} gave {n:?}, expected {}",
                        c.inputs.c(),
                        c.inputs.phi(),
                        c.inputs.se_target(),
                        c.expected_n
                    )
                })
        })
        .collect();
    if let Some(report) = &sweep {
        failures.extend(
            report
                .rows
                .iter()
                .filter(|r| r.oracle_abs_diff_max.is_some_and(|d| d > 1))
                .map(|r| {
                    format!(
                        "grid point ({}, {}, {}): closed forms differ from the iterative N by {}",
                        r.c,
                        r.phi,
                        r.se,
                        r.oracle_abs_diff_max.unwrap_or(0)
                    )
                }),
        );
    }
    Err(Failure::Verification(format!(
        "verification failed:\n{}",
        failures.join("\n")
    )))
}

fn write_rows(
    format: OutputFormat,
    out: Option<&PathBuf>,
    rows: &[ResultRow],
) -> Result<(), Failure> {
    let mut out = output(out)?;
    match format {
        OutputFormat::Json => write_json(&mut out, rows)?,
        OutputFormat::Csv | OutputFormat::Human => write_results_csv(&mut out, rows)?,
    }
    out.flush()?;
    Ok(())
}

fn cmd_sweep(args: SweepArgs) -> Result<(), Failure> {
    let se_values = match (args.se_range, args.se) {
        (Some(values), _) => values,
        (None, Some(se)) => vec![se],
        (None, None) => unreachable!("clap requires --se or --se-range"),
    };
    if args.c_range.iter().any(|&c| c <= 0.5) {
        eprintln!("warning: grid includes C <= 0.5, where the model does not discriminate");
    }
    let spec = GridSpec::new(args.c_range, args.phi_range, se_values, args.methods)?
        .with_iterative(args.iterative.config()?);
    let report = run_sweep(&spec)?;
    write_rows(args.format, args.out.as_ref(), &report.result_rows())
}

fn cmd_curves(args: CurvesArgs) -> Result<(), Failure> {
    warn_low_c(args.c);
    let rows = figure1_curves(args.c, &args.phi_list, args.se_range, &args.methods)?;
    write_rows(args.format, args.out.as_ref(), &rows)
}

fn cmd_bench(args: BenchArgs) -> Result<(), Failure> {
    let inputs = DiscriminationInputs::new(args.c, args.phi, args.se)?;
    let config = BenchConfig {
        methods: args.methods,
        repetitions: args.reps,
        warmup: args.warmup,
        inputs,
        iterative: args.iterative.config()?,
    };
    let report = run_bench(&config)?;
    for warning in &report.warnings {
        eprintln!("warning: {warning}");
    }

    let mut out = output(args.out.as_ref())?;
    match args.format {
        OutputFormat::Json => report.write_summary_json(&mut out)?,
        OutputFormat::Csv | OutputFormat::Human => report.write_samples_csv(&mut out)?,
    }
    out.flush()?;
    if let Some(path) = &args.summary {
        report.write_summary_json(output(Some(path))?)?;
    }

    if let Ok(ratios) = speedup_summary(&report, SolverMethod::Iterative) {
        for (method, ratio) in ratios.iter().filter(|(m, _)| m.is_closed_form()) {
            eprintln!("{method}: {ratio:.0}x faster than iterative (median)");
        }
    }
    Ok(())
}
