//! Command-line front end: parses flags, runs one experiment, writes CSV and
//! optional SVG into the output directory.
//!
//! Exit status: 0 on success, 1 on invalid flags or I/O errors, 2 when a
//! `verify` suite reports violations.

use std::ffi::OsString;
use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use nonsmooth_lab::experiments::{
    basin_scatter, bisection_cap_sensitivity, compare_methods, run_trajectory, sweep_failure_rate,
    verify_suite, BasinResult, CapRow, ComparePreset, ExperimentConfig, MethodHistory, Outcome,
    ProblemParams, StartDistribution, SweepResult, VerifySuite, BASIN_BOX, BASIN_C1, BASIN_TAUS,
};
use nonsmooth_lab::linesearch::LineSearchConfig;
use nonsmooth_lab::methods::{Classification, RunTrace, StopRule};
use nonsmooth_lab::report::{
    basin_table, cap_table, compare_table, sweep_table, trajectory_table, verify_table, write_csv,
    write_svg, CsvTable, Marker, Plot, PlotKind, Series,
};
use nonsmooth_lab::theory::{a_for_tau, compute_tau};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;

const CAPS: [usize; 3] = [15, 30, 50];

#[derive(Debug, Parser)]
#[command(name = "nslab", version, about = "Nonsmooth line-search experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// One gradient-method trajectory on a|x1| + x2 + ... + xn from a normal start.
    Run(RunArgs),
    /// Failure rate over a grid of a values at fixed c1.
    SweepA(SweepAArgs),
    /// Failure rate over a grid of c1 values at fixed a.
    SweepC1(SweepC1Args),
    /// Success/failure labels of box starts in the plane for preset tau values.
    Basin(BasinArgs),
    /// Five methods on the max-type test function from one normal start.
    Compare(CompareArgs),
    /// Failure counts under bisection caps 15, 30 and 50 with identical seeds.
    CapSensitivity(CapArgs),
    /// Randomized checks of the closed-form results.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// Base seed for all random draws.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output directory (created if missing).
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Also write an SVG plot.
    #[arg(long)]
    pub svg: bool,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// Wolfe parameter.
    #[arg(long, default_value_t = 0.5)]
    pub c2: f64,
    #[arg(long, default_value_t = 30)]
    pub max_bisections: usize,
    /// Iteration bound per run.
    #[arg(long, default_value_t = 50)]
    pub max_iters: usize,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long, default_value_t = 2.0)]
    pub a: f64,
    #[arg(long, default_value_t = 0.1)]
    pub c1: f64,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[command(flatten)]
    pub search: SearchArgs,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct SweepAArgs {
    #[arg(long, default_value_t = 0.05)]
    pub c1: f64,
    /// Comma-separated a values.
    #[arg(long, value_delimiter = ',', required = true)]
    pub a_grid: Vec<f64>,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = 5000)]
    pub trials: usize,
    /// Uniform start box `lo,hi` instead of standard normal starts.
    #[arg(long, allow_hyphen_values = true)]
    pub r#box: Option<String>,
    #[command(flatten)]
    pub search: SearchArgs,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct SweepC1Args {
    #[arg(long, default_value_t = std::f64::consts::SQRT_2)]
    pub a: f64,
    /// Comma-separated c1 values.
    #[arg(long, value_delimiter = ',', required = true)]
    pub c1_grid: Vec<f64>,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = 5000)]
    pub trials: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub r#box: Option<String>,
    #[command(flatten)]
    pub search: SearchArgs,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct BasinArgs {
    /// Comma-separated tau values; defaults to -0.1,-0.01,-0.001.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub tau: Vec<f64>,
    #[arg(long, default_value_t = BASIN_C1)]
    pub c1: f64,
    #[arg(long, default_value_t = 5000)]
    pub trials: usize,
    /// Start box `lo,hi`; defaults to -100,100.
    #[arg(long, allow_hyphen_values = true)]
    pub r#box: Option<String>,
    #[command(flatten)]
    pub search: SearchArgs,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    /// Comma-separated Armijo parameters; one comparison per value.
    #[arg(long, value_delimiter = ',', default_values_t = [0.1, 1e-6])]
    pub c1: Vec<f64>,
    #[arg(long, default_value_t = 0.5)]
    pub c2: f64,
    #[arg(long, default_value_t = 30)]
    pub max_bisections: usize,
    /// Function evaluations per method.
    #[arg(long, default_value_t = 5000)]
    pub budget: usize,
    /// Comma-separated subset of subgradient,gradient,lbfgs5,lbfgs10,bfgs.
    #[arg(long, value_delimiter = ',')]
    pub method: Vec<String>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct CapArgs {
    #[arg(long, default_value_t = -0.01, allow_hyphen_values = true)]
    pub tau: f64,
    #[arg(long, default_value_t = BASIN_C1)]
    pub c1: f64,
    #[arg(long, default_value_t = 5000)]
    pub trials: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub r#box: Option<String>,
    #[arg(long, default_value_t = 0.5)]
    pub c2: f64,
    #[arg(long, default_value_t = 50)]
    pub max_iters: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Comma-separated suites from wolfe,armijo,sums,schedule,entry,pred,halving,unit-steps; defaults to all.
    #[arg(long, value_delimiter = ',')]
    pub suite: Vec<String>,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

/// A failure that maps to exit status 1.
#[derive(Debug)]
pub struct CliError(String);

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<nonsmooth_lab::Error> for CliError {
    fn from(e: nonsmooth_lab::Error) -> Self {
        CliError(e.to_string())
    }
}

fn flag_error(flag: &str, msg: impl fmt::Display) -> CliError {
    CliError(format!("--{flag}: {msg}"))
}

pub type CliResult<T> = Result<T, CliError>;

/// What a successful subcommand reports back.
pub struct Summary {
    pub line: String,
    pub violations: usize,
}

/// Parses `args` (including the program name), runs the subcommand and
/// returns the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    let result = dispatch(cli.command);
    match &result {
        Ok(summary) => println!("{}", summary.line),
        Err(e) => eprintln!("error: {e}"),
    }
    exit_status(&result)
}

pub fn exit_status(result: &CliResult<Summary>) -> i32 {
    match result {
        Ok(s) if s.violations > 0 => EXIT_VIOLATION,
        Ok(_) => EXIT_OK,
        Err(_) => EXIT_INVALID,
    }
}

pub fn dispatch(command: Command) -> CliResult<Summary> {
    match command {
        Command::Run(a) => cmd_run(a),
        Command::SweepA(a) => cmd_sweep_a(a),
        Command::SweepC1(a) => cmd_sweep_c1(a),
        Command::Basin(a) => cmd_basin(a),
        Command::Compare(a) => cmd_compare(a),
        Command::CapSensitivity(a) => cmd_cap(a),
        Command::Verify(a) => cmd_verify(a),
    }
}

fn check_c1(c1: f64, flag: &str) -> CliResult<()> {
    if 0.0 < c1 && c1 < 1.0 {
        Ok(())
    } else {
        Err(flag_error(flag, format!("must lie in (0, 1), got {c1}")))
    }
}

fn check_c2(c1: f64, c2: f64) -> CliResult<()> {
    if c1 < c2 && c2 < 1.0 {
        Ok(())
    } else {
        Err(flag_error("c2", format!("must lie in (c1, 1) = ({c1}, 1), got {c2}")))
    }
}

fn check_positive(value: usize, flag: &str) -> CliResult<()> {
    if value >= 1 {
        Ok(())
    } else {
        Err(flag_error(flag, "must be at least 1"))
    }
}

fn check_n(n: usize) -> CliResult<()> {
    if n >= 2 {
        Ok(())
    } else {
        Err(flag_error("n", format!("must be at least 2, got {n}")))
    }
}

fn check_a(a: f64, n: usize, flag: &str) -> CliResult<()> {
    let floor = ((n - 1) as f64).sqrt();
    if a.is_finite() && a >= floor && a > 0.0 {
        Ok(())
    } else {
        Err(flag_error(
            flag,
            format!("a = {a} must be at least sqrt(n - 1) = {floor}; smaller a is unbounded below"),
        ))
    }
}

fn parse_box(spec: &str) -> CliResult<(f64, f64)> {
    let parts: Vec<&str> = spec.split(',').collect();
    let parsed: Vec<f64> = parts
        .iter()
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| flag_error("box", format!("expected lo,hi, got '{spec}'")))?;
    match parsed[..] {
        [lo, hi] if lo < hi && lo.is_finite() && hi.is_finite() => Ok((lo, hi)),
        _ => Err(flag_error("box", format!("expected lo,hi with lo < hi, got '{spec}'"))),
    }
}

fn start_distribution(spec: &Option<String>) -> CliResult<StartDistribution> {
    match spec {
        None => Ok(StartDistribution::NormalStd),
        Some(s) => {
            let (lo, hi) = parse_box(s)?;
            Ok(StartDistribution::UniformBox { lo, hi })
        }
    }
}

fn search_config(c1: f64, search: &SearchArgs) -> CliResult<(LineSearchConfig, StopRule)> {
    check_c2(c1, search.c2)?;
    check_positive(search.max_iters, "max-iters")?;
    let ls = LineSearchConfig::default()
        .with_c1(c1)
        .with_c2(search.c2)
        .with_max_bisections(search.max_bisections);
    Ok((ls, StopRule::iterations(search.max_iters)))
}

fn prepare_out(dir: &Path) -> CliResult<()> {
    std::fs::create_dir_all(dir)
        .map_err(|e| flag_error("out", format!("cannot create {}: {e}", dir.display())))
}

fn emit(table: &CsvTable, dir: &Path, stem: &str) -> CliResult<PathBuf> {
    let path = dir.join(format!("{stem}.csv"));
    write_csv(table, &path)?;
    Ok(path)
}

fn emit_svg(plot: &Plot, dir: &Path, stem: &str) -> CliResult<()> {
    write_svg(plot, &dir.join(format!("{stem}.svg")))?;
    Ok(())
}

fn classification_label(c: Classification) -> &'static str {
    match c {
        Classification::Success => "success",
        Classification::Failure => "failure",
        Classification::BudgetExhausted => "budget",
    }
}

fn cmd_run(args: RunArgs) -> CliResult<Summary> {
    check_n(args.n)?;
    check_c1(args.c1, "c1")?;
    check_a(args.a, args.n, "a")?;
    let (ls, stop) = search_config(args.c1, &args.search)?;
    prepare_out(&args.common.out)?;
    let config = ExperimentConfig {
        trials: 1,
        base_seed: args.common.seed,
        start: StartDistribution::NormalStd,
        ls,
        stop,
        n: args.n,
    };
    let trace = run_trajectory(&config, ProblemParams { a: args.a, c1: args.c1 })?;
    let path = emit(&trajectory_table(&trace)?, &args.common.out, "trajectory")?;
    if args.common.svg {
        emit_svg(&trajectory_plot(&trace, args.a, args.c1), &args.common.out, "trajectory")?;
    }
    let tau = compute_tau(args.a, args.n, args.c1)?.tau;
    Ok(Summary {
        line: format!(
            "run: tau={tau:.6} iterations={} f={:.6e} outcome={} -> {}",
            trace.steps().count(),
            trace.final_value(),
            classification_label(trace.classification),
            path.display()
        ),
        violations: 0,
    })
}

fn trajectory_plot(trace: &RunTrace, a: f64, c1: f64) -> Plot {
    let path: Vec<(f64, f64)> = trace
        .records
        .iter()
        .map(|r| (r.point[0], r.point.get(1).copied().unwrap_or(0.0)))
        .collect();
    Plot {
        kind: PlotKind::Scatter,
        title: format!("gradient method, a = {a}, c1 = {c1}"),
        x_label: "x1".into(),
        y_label: "x2".into(),
        series: vec![Series {
            label: classification_label(trace.classification).into(),
            points: path,
            color: "steelblue".into(),
            marker: Marker::Dot,
            line: true,
        }],
    }
}

fn sweep_common(
    grid: Vec<ProblemParams>,
    n: usize,
    trials: usize,
    box_spec: &Option<String>,
    search: &SearchArgs,
    common: &Common,
) -> CliResult<SweepResult> {
    check_n(n)?;
    check_positive(trials, "trials")?;
    let start = start_distribution(box_spec)?;
    let (ls, stop) = search_config(grid[0].c1, search)?;
    prepare_out(&common.out)?;
    let config = ExperimentConfig {
        trials,
        base_seed: common.seed,
        start,
        ls,
        stop,
        n,
    };
    Ok(sweep_failure_rate(&config, &grid)?)
}

fn rate_plot(result: &SweepResult, by_a: bool) -> Plot {
    let x = |r: &nonsmooth_lab::experiments::SweepRow| if by_a { r.a } else { r.c1 };
    Plot {
        kind: PlotKind::RateCurve,
        title: if by_a {
            format!("failure rate, c1 = {}", result.rows[0].c1)
        } else {
            format!("failure rate, a = {}", result.rows[0].a)
        },
        x_label: if by_a { "a" } else { "c1" }.into(),
        y_label: "failure rate / tau".into(),
        series: vec![
            Series::markers(
                "failure rate",
                "black",
                Marker::Circle,
                result.rows.iter().map(|r| (x(r), r.failure_rate())).collect(),
            ),
            Series::line("tau", "crimson", result.rows.iter().map(|r| (x(r), r.tau)).collect()),
        ],
    }
}

fn cmd_sweep_a(args: SweepAArgs) -> CliResult<Summary> {
    check_c1(args.c1, "c1")?;
    check_n(args.n)?;
    if args.a_grid.is_empty() {
        return Err(flag_error("a-grid", "needs at least one value"));
    }
    for &a in &args.a_grid {
        check_a(a, args.n, "a-grid")?;
    }
    let grid = args
        .a_grid
        .iter()
        .map(|&a| ProblemParams { a, c1: args.c1 })
        .collect();
    let result = sweep_common(grid, args.n, args.trials, &args.r#box, &args.search, &args.common)?;
    finish_sweep(&result, &args.common, "sweep-a", true)
}

fn cmd_sweep_c1(args: SweepC1Args) -> CliResult<Summary> {
    check_n(args.n)?;
    check_a(args.a, args.n, "a")?;
    if args.c1_grid.is_empty() {
        return Err(flag_error("c1-grid", "needs at least one value"));
    }
    for &c1 in &args.c1_grid {
        check_c1(c1, "c1-grid")?;
        check_c2(c1, args.search.c2)?;
    }
    let grid = args
        .c1_grid
        .iter()
        .map(|&c1| ProblemParams { a: args.a, c1 })
        .collect();
    let result = sweep_common(grid, args.n, args.trials, &args.r#box, &args.search, &args.common)?;
    finish_sweep(&result, &args.common, "sweep-c1", false)
}

fn finish_sweep(result: &SweepResult, common: &Common, stem: &str, by_a: bool) -> CliResult<Summary> {
    let path = emit(&sweep_table(result)?, &common.out, stem)?;
    if common.svg {
        emit_svg(&rate_plot(result, by_a), &common.out, stem)?;
    }
    let failures: usize = result.rows.iter().map(|r| r.failures).sum();
    let trials: usize = result.rows.iter().map(|r| r.trials).sum();
    Ok(Summary {
        line: format!(
            "{stem}: {} grid points, {failures}/{trials} failures -> {}",
            result.rows.len(),
            path.display()
        ),
        violations: 0,
    })
}

fn box_or_default(spec: &Option<String>) -> CliResult<StartDistribution> {
    match spec {
        Some(_) => start_distribution(spec),
        None => Ok(StartDistribution::UniformBox {
            lo: BASIN_BOX.0,
            hi: BASIN_BOX.1,
        }),
    }
}

fn check_tau(tau: f64, c1: f64) -> CliResult<f64> {
    if !(tau < 0.0) {
        return Err(flag_error("tau", format!("must be negative, got {tau}")));
    }
    let a = a_for_tau(tau, c1, 2)?;
    check_a(a, 2, "tau").map(|_| a)
}

fn cmd_basin(args: BasinArgs) -> CliResult<Summary> {
    check_c1(args.c1, "c1")?;
    check_positive(args.trials, "trials")?;
    let taus = if args.tau.is_empty() {
        BASIN_TAUS.to_vec()
    } else {
        args.tau.clone()
    };
    for &tau in &taus {
        check_tau(tau, args.c1)?;
    }
    let start = box_or_default(&args.r#box)?;
    let (ls, stop) = search_config(args.c1, &args.search)?;
    prepare_out(&args.common.out)?;
    let config = ExperimentConfig {
        trials: args.trials,
        base_seed: args.common.seed,
        start,
        ls,
        stop,
        n: 2,
    };
    let results = taus
        .iter()
        .map(|&tau| basin_scatter(&config, tau, args.c1))
        .collect::<Result<Vec<_>, _>>()?;

    let mut table = CsvTable::new(["tau", "a", "c1", "u0", "v0", "outcome"]);
    for r in &results {
        for row in basin_table(r)?.rows() {
            table.push(row.clone()).map_err(CliError::from)?;
        }
    }
    let path = emit(&table, &args.common.out, "basin")?;
    if args.common.svg {
        for (i, r) in results.iter().enumerate() {
            emit_svg(&basin_plot(r), &args.common.out, &format!("basin-{}", i + 1))?;
        }
    }
    let rates: Vec<String> = results
        .iter()
        .map(|r| format!("tau={}: {}/{}", r.tau, r.failures(), r.points.len()))
        .collect();
    Ok(Summary {
        line: format!("basin: failures {} -> {}", rates.join(", "), path.display()),
        violations: 0,
    })
}

fn basin_plot(result: &BasinResult) -> Plot {
    let pick = |o: Outcome| -> Vec<(f64, f64)> {
        result
            .points
            .iter()
            .filter(|p| p.outcome == o)
            .map(|p| (p.u0, p.v0))
            .collect()
    };
    Plot {
        kind: PlotKind::Scatter,
        title: format!("starting points, tau = {}, a = {:.4}", result.tau, result.a),
        x_label: "u0".into(),
        y_label: "v0".into(),
        series: vec![
            Series::markers("success", "green", Marker::Circle, pick(Outcome::Success)),
            Series::markers("failure", "red", Marker::Cross, pick(Outcome::Failure)),
        ],
    }
}

const METHOD_COLORS: [&str; 5] = ["gray", "crimson", "darkorange", "seagreen", "royalblue"];

fn compare_plot(histories: &[MethodHistory], c1: f64, n: usize) -> Plot {
    Plot {
        kind: PlotKind::SemilogY,
        title: format!("max-type function, n = {n}, c1 = {c1}"),
        x_label: "function evaluation".into(),
        y_label: "f".into(),
        series: histories
            .iter()
            .map(|h| {
                let color = ComparePreset::ALL
                    .iter()
                    .position(|p| *p == h.preset)
                    .map_or("black", |i| METHOD_COLORS[i]);
                Series::line(
                    h.preset.label(),
                    color,
                    h.values
                        .iter()
                        .enumerate()
                        .map(|(i, f)| ((i + 1) as f64, *f))
                        .collect(),
                )
            })
            .collect(),
    }
}

fn cmd_compare(args: CompareArgs) -> CliResult<Summary> {
    check_n(args.n)?;
    check_positive(args.budget, "budget")?;
    if args.c1.is_empty() {
        return Err(flag_error("c1", "needs at least one value"));
    }
    for &c1 in &args.c1 {
        check_c1(c1, "c1")?;
        check_c2(c1, args.c2)?;
    }
    let presets = if args.method.is_empty() {
        ComparePreset::ALL.to_vec()
    } else {
        args.method
            .iter()
            .map(|m| ComparePreset::parse(m.trim()).map_err(|e| flag_error("method", e)))
            .collect::<CliResult<Vec<_>>>()?
    };
    prepare_out(&args.common.out)?;

    let mut all = Vec::new();
    let mut notes = Vec::new();
    for (i, &c1) in args.c1.iter().enumerate() {
        let ls = LineSearchConfig::default()
            .with_c1(c1)
            .with_c2(args.c2)
            .with_max_bisections(args.max_bisections);
        let histories = compare_methods(args.n, args.common.seed, &ls, args.budget, &presets)?;
        if args.common.svg {
            emit_svg(&compare_plot(&histories, c1, args.n), &args.common.out, &format!("compare-{}", i + 1))?;
        }
        for h in &histories {
            match (&h.error, h.best_value()) {
                (Some(e), _) => notes.push(format!("{}@{c1}: error {e}", h.preset)),
                (None, Some(v)) => notes.push(format!("{}@{c1}={v:.2e}", h.preset)),
                (None, None) => {}
            }
        }
        all.extend(histories);
    }
    let path = emit(&compare_table(&all)?, &args.common.out, "compare")?;
    Ok(Summary {
        line: format!("compare: best f {} -> {}", notes.join(" "), path.display()),
        violations: 0,
    })
}

fn cmd_cap(args: CapArgs) -> CliResult<Summary> {
    check_c1(args.c1, "c1")?;
    check_c2(args.c1, args.c2)?;
    check_positive(args.trials, "trials")?;
    check_positive(args.max_iters, "max-iters")?;
    let a = check_tau(args.tau, args.c1)?;
    let start = box_or_default(&args.r#box)?;
    prepare_out(&args.common.out)?;
    let config = ExperimentConfig {
        trials: args.trials,
        base_seed: args.common.seed,
        start,
        ls: LineSearchConfig::default().with_c1(args.c1).with_c2(args.c2),
        stop: StopRule::iterations(args.max_iters),
        n: 2,
    };
    let rows = bisection_cap_sensitivity(&config, ProblemParams { a, c1: args.c1 }, &CAPS)?;
    let path = emit(&cap_table(&rows)?, &args.common.out, "cap-sensitivity")?;
    if args.common.svg {
        emit_svg(&cap_plot(&rows, args.tau), &args.common.out, "cap-sensitivity")?;
    }
    let counts: Vec<String> = rows
        .iter()
        .map(|r| format!("cap {}: {}", r.max_bisections, r.row.failures))
        .collect();
    Ok(Summary {
        line: format!("cap-sensitivity: failures {} -> {}", counts.join(", "), path.display()),
        violations: 0,
    })
}

fn cap_plot(rows: &[CapRow], tau: f64) -> Plot {
    Plot {
        kind: PlotKind::RateCurve,
        title: format!("failure rate by bisection cap, tau = {tau}"),
        x_label: "maximum bisections".into(),
        y_label: "failure rate".into(),
        series: vec![Series {
            label: "failure rate".into(),
            points: rows
                .iter()
                .map(|r| (r.max_bisections as f64, r.row.failure_rate()))
                .collect(),
            color: "black".into(),
            marker: Marker::Circle,
            line: true,
        }],
    }
}

fn cmd_verify(args: VerifyArgs) -> CliResult<Summary> {
    check_positive(args.samples, "samples")?;
    let suites = if args.suite.is_empty() {
        VerifySuite::ALL.to_vec()
    } else {
        args.suite
            .iter()
            .map(|s| VerifySuite::parse(s.trim()).map_err(|e| flag_error("suite", e)))
            .collect::<CliResult<Vec<_>>>()?
    };
    prepare_out(&args.out)?;
    let reports = suites
        .iter()
        .map(|&s| verify_suite(s, args.samples, args.seed))
        .collect::<Result<Vec<_>, _>>()?;
    let path = emit(&verify_table(&reports)?, &args.out, "verify")?;
    let violations: usize = reports.iter().map(|r| r.violations).sum();
    let parts: Vec<String> = reports
        .iter()
        .map(|r| format!("{}: {}/{}", r.suite, r.violations, r.checks))
        .collect();
    Ok(Summary {
        line: format!(
            "verify: {violations} violations ({}) -> {}",
            parts.join(", "),
            path.display()
        ),
        violations,
    })
}
