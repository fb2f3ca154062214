//! The `bgrank` command-line driver.
//!
//! Every subcommand produces a [`RunReport`] that is written as CSV (rows
//! only) or JSON (everything) to `--out` or standard output. Exit codes:
//! 0 on success, 1 when a check in the report fails, 2 on bad arguments or
//! I/O errors.

pub mod cache;
pub mod commands;
pub mod report;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::qseries::{StatKind, StatParams};
use crate::turan::TuranOrder;

pub use cache::{cache_roundtrip, Cache, CacheEntry, CacheMeta};
pub use commands::Context;
pub use report::{Cell, Check, OutputFormat, RunReport};

#[derive(Debug, Parser)]
#[command(name = "bgrank", version, about = "BG-rank and 2-quotient rank statistics of partitions")]
pub struct Cli {
    /// Directory for cached coefficient tables.
    #[arg(long, global = true, value_name = "PATH")]
    pub cache_dir: Option<PathBuf>,

    /// Compute everything from scratch and leave the cache untouched.
    #[arg(long, global = true)]
    pub no_cache: bool,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,

    /// Worker threads for data-parallel steps.
    #[arg(long, global = true, value_name = "K")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StatArg {
    P,
    P2,
    Pbar,
    PbarAb,
}

impl From<StatArg> for StatKind {
    fn from(s: StatArg) -> Self {
        match s {
            StatArg::P => StatKind::P,
            StatArg::P2 => StatKind::P2,
            StatArg::Pbar => StatKind::PbarJ,
            StatArg::PbarAb => StatKind::PbarJab,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OrderArg {
    #[value(name = "2")]
    Two,
    #[value(name = "3")]
    Three,
    Convexity,
}

impl From<OrderArg> for TuranOrder {
    fn from(o: OrderArg) -> Self {
        match o {
            OrderArg::Two => TuranOrder::Two,
            OrderArg::Three => TuranOrder::Three,
            OrderArg::Convexity => TuranOrder::Convexity,
        }
    }
}

#[derive(Clone, Debug, Args)]
pub struct OutArg {
    /// Output file; standard output when absent.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, Subcommand)]
pub enum Command {
    /// Coefficient table of p, p2, p̄_j or p̄_j(a,b;·).
    Table {
        #[arg(long, value_enum)]
        stat: StatArg,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        j: i64,
        #[arg(long)]
        a: Option<usize>,
        #[arg(long)]
        b: Option<usize>,
        #[arg(long)]
        n_max: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Bivariate counts p̄_j(m,n) for n ≤ 60.
    Joint {
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        j: i64,
        #[arg(long)]
        n_max: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Ratios b·p̄_j(a,b;n)/p̄_j(n).
    Equidist {
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        j: i64,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Empirical main-term constant R(n) = p̄_0(n) n^{5/4} e^{−π√(2n/3)}.
    Asympt {
        #[arg(long, value_delimiter = ',', required = true)]
        n_list: Vec<u64>,
        #[arg(long)]
        b: Option<usize>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Jensen polynomial J^{d,n} of α(m) = p̄_0(2m).
    Jensen {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: usize,
        /// Renormalize and compare with the Hermite polynomial H_d.
        #[arg(long)]
        renormalized: bool,
        #[command(flatten)]
        out: OutArg,
    },
    /// Order-2, order-3 or convexity scan of α(m) = p̄_0(2m).
    Turan {
        #[arg(long, value_enum)]
        order: OrderArg,
        /// Inclusive index range LO:HI.
        #[arg(long, value_parser = parse_range)]
        range: (usize, usize),
        #[command(flatten)]
        out: OutArg,
    },
    /// Arc-dominance inequality and minor-arc sampling.
    Arcs {
        #[arg(long)]
        b: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Run the invariant suite.
    Validate {
        #[command(flatten)]
        out: OutArg,
    },
    /// Run every experiment at default scale into a directory.
    Report {
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
    },
}

fn parse_range(s: &str) -> std::result::Result<(usize, usize), String> {
    let (lo, hi) = s.split_once(':').ok_or_else(|| format!("expected LO:HI, got {s:?}"))?;
    let lo: usize = lo.trim().parse().map_err(|e| format!("bad LO: {e}"))?;
    let hi: usize = hi.trim().parse().map_err(|e| format!("bad HI: {e}"))?;
    if lo > hi {
        return Err(format!("LO {lo} exceeds HI {hi}"));
    }
    Ok((lo, hi))
}

impl Command {
    /// Canonical echo of the experiment. Output location, cache and thread
    /// flags are left out so they never change the report bytes.
    pub fn echo(&self) -> String {
        match self {
            Command::Table { stat, j, a, b, n_max, .. } => {
                let stat = stat.to_possible_value().expect("named").get_name().to_string();
                let mut s = format!("table --stat {stat}");
                if matches!(stat.as_str(), "pbar" | "pbar-ab") {
                    s += &format!(" --j {j}");
                }
                if let Some(a) = a {
                    s += &format!(" --a {a}");
                }
                if let Some(b) = b {
                    s += &format!(" --b {b}");
                }
                s + &format!(" --n-max {n_max}")
            }
            Command::Joint { j, n_max, .. } => format!("joint --j {j} --n-max {n_max}"),
            Command::Equidist { j, b, n, .. } => format!("equidist --j {j} --b {b} --n {n}"),
            Command::Asympt { n_list, b, .. } => {
                let list: Vec<String> = n_list.iter().map(u64::to_string).collect();
                let mut s = format!("asympt --n-list {}", list.join(","));
                if let Some(b) = b {
                    s += &format!(" --b {b}");
                }
                s
            }
            Command::Jensen { d, n, renormalized, .. } => {
                let flag = if *renormalized { " --renormalized" } else { "" };
                format!("jensen --d {d} --n {n}{flag}")
            }
            Command::Turan { order, range, .. } => {
                let order = order.to_possible_value().expect("named").get_name().to_string();
                format!("turan --order {order} --range {}:{}", range.0, range.1)
            }
            Command::Arcs { b, .. } => format!("arcs --b {b}"),
            Command::Validate { .. } => "validate".to_string(),
            Command::Report { .. } => "report".to_string(),
        }
    }

    fn out_file(&self) -> Option<&Path> {
        match self {
            Command::Table { out, .. }
            | Command::Joint { out, .. }
            | Command::Equidist { out, .. }
            | Command::Asympt { out, .. }
            | Command::Jensen { out, .. }
            | Command::Turan { out, .. }
            | Command::Arcs { out, .. }
            | Command::Validate { out } => out.out.as_deref(),
            Command::Report { .. } => None,
        }
    }
}

/// Runs one experiment (anything but `report`).
pub fn run_command(cmd: &Command, ctx: &Context) -> Result<RunReport> {
    let start = Instant::now();
    let echo = cmd.echo();
    let mut report = match cmd {
        Command::Table { stat, j, a, b, n_max, .. } => {
            let params = StatParams { j: Some(*j), a: *a, b: *b };
            commands::table(ctx, (*stat).into(), params, *n_max, echo)?
        }
        Command::Joint { j, n_max, .. } => commands::joint(*j, *n_max, echo)?,
        Command::Equidist { j, b, n, .. } => commands::equidist(*j, *b, *n, echo)?,
        Command::Asympt { n_list, b, .. } => commands::asympt(ctx, n_list, *b, echo)?,
        Command::Jensen { d, n, renormalized, .. } => commands::jensen(ctx, *d, *n, *renormalized, echo)?,
        Command::Turan { order, range, .. } => commands::turan(ctx, (*order).into(), range.0, range.1, echo)?,
        Command::Arcs { b, .. } => commands::arcs(*b, echo)?,
        Command::Validate { .. } => commands::validate(echo)?,
        Command::Report { out } => return run_report(ctx, out, OutputFormat::Csv),
    };
    report.wall_time = start.elapsed();
    Ok(report)
}

/// The fixed experiment list behind `report`, as argument vectors.
pub const REPORT_EXPERIMENTS: &[(&str, &[&str])] = &[
    ("table_p", &["table", "--stat", "p", "--n-max", "1000"]),
    ("table_p2", &["table", "--stat", "p2", "--n-max", "1000"]),
    ("table_pbar_j0", &["table", "--stat", "pbar", "--j", "0", "--n-max", "1000"]),
    ("table_pbar_ab_j0_a0_b5", &["table", "--stat", "pbar-ab", "--j", "0", "--a", "0", "--b", "5", "--n-max", "200"]),
    ("joint_j0", &["joint", "--j", "0", "--n-max", "30"]),
    ("equidist_j0_b5_n500", &["equidist", "--j", "0", "--b", "5", "--n", "500"]),
    ("asympt", &["asympt", "--n-list", "1000,2000,4000,8000"]),
    ("jensen_d4_n1000", &["jensen", "--d", "4", "--n", "1000"]),
    ("jensen_d2_n1000_renormalized", &["jensen", "--d", "2", "--n", "1000", "--renormalized"]),
    ("turan_order2", &["turan", "--order", "2", "--range", "1:500"]),
    ("turan_order3", &["turan", "--order", "3", "--range", "0:200"]),
    ("turan_convexity", &["turan", "--order", "convexity", "--range", "1:100"]),
    ("arcs_b5", &["arcs", "--b", "5"]),
    ("validate", &["validate"]),
];

fn run_report(ctx: &Context, dir: &Path, format: OutputFormat) -> Result<RunReport> {
    let start = Instant::now();
    fs::create_dir_all(dir)?;
    let mut summary = RunReport::new("report", &["experiment", "file", "passed"]);
    for (name, argv) in REPORT_EXPERIMENTS {
        let args = std::iter::once("bgrank").chain(argv.iter().copied());
        let cli = Cli::try_parse_from(args).expect("built-in experiment parses");
        let r = run_command(&cli.command, ctx)?;
        let file = format!("{name}.{}", format.extension());
        cache::write_atomic(&dir.join(&file), &r.render(format))?;
        summary.row(vec![Cell::text(*name), Cell::text(&file), Cell::Bool(r.passed())]);
        for c in &r.checks {
            summary.check(format!("{name}/{}", c.name), c.passed, c.detail.clone());
        }
    }
    summary.param("experiments", REPORT_EXPERIMENTS.len());
    cache::write_atomic(&dir.join(format!("summary.{}", format.extension())), &summary.render(format))?;
    summary.wall_time = start.elapsed();
    Ok(summary)
}

/// Exit status and, when the command ran, its report.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub report: Option<RunReport>,
}

fn error_code(e: &Error) -> i32 {
    match e {
        Error::Divisibility { .. } => 1,
        _ => 2,
    }
}

fn build_pool(threads: Option<usize>) -> std::result::Result<Option<rayon::ThreadPool>, String> {
    match threads {
        None => Ok(None),
        Some(0) => Err("--threads must be positive".into()),
        Some(k) => rayon::ThreadPoolBuilder::new().num_threads(k).build().map(Some).map_err(|e| e.to_string()),
    }
}

/// Parses `argv` (program name first), runs the command and writes its
/// output. Diagnostics go to standard error.
pub fn execute<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return Outcome { code, report: None };
        }
    };
    let cache = if cli.no_cache {
        Cache::disabled()
    } else {
        Cache::new(cli.cache_dir.clone().or_else(cache::default_cache_dir))
    };
    let ctx = Context::new(cache);
    let pool = match build_pool(cli.threads) {
        Ok(p) => p,
        Err(msg) => {
            eprintln!("error: {msg}");
            return Outcome { code: 2, report: None };
        }
    };
    let run = || -> Result<RunReport> {
        match &cli.command {
            Command::Report { out } => run_report(&ctx, out, cli.format),
            cmd => {
                let r = run_command(cmd, &ctx)?;
                let text = r.render(cli.format);
                match cmd.out_file() {
                    Some(path) => cache::write_atomic(path, &text)?,
                    None => {
                        let mut stdout = std::io::stdout().lock();
                        stdout.write_all(text.as_bytes())?;
                        stdout.flush()?;
                    }
                }
                Ok(r)
            }
        }
    };
    let result = match &pool {
        Some(pool) => pool.install(run),
        None => run(),
    };
    match result {
        Ok(r) => {
            for c in r.checks.iter().filter(|c| !c.passed) {
                eprintln!("check failed: {}: {}", c.name, c.detail);
            }
            eprintln!("{} finished in {:.3}s", r.command, r.wall_time.as_secs_f64());
            Outcome { code: if r.passed() { 0 } else { 1 }, report: Some(r) }
        }
        Err(e) => {
            eprintln!("error: {e}");
            Outcome { code: error_code(&e), report: None }
        }
    }
}

pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    execute(argv).code
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("bgrank").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn echo_is_canonical() {
        let c = parse(&["--format", "json", "table", "--n-max", "12", "--stat", "pbar", "--out", "x.csv"]);
        assert_eq!(c.command.echo(), "table --stat pbar --j 0 --n-max 12");
        let c = parse(&["turan", "--order", "convexity", "--range", "2:10"]);
        assert_eq!(c.command.echo(), "turan --order convexity --range 2:10");
        let c = parse(&["asympt", "--n-list", "10,20", "--b", "5"]);
        assert_eq!(c.command.echo(), "asympt --n-list 10,20 --b 5");
        let c = parse(&["table", "--stat", "pbar", "--j", "-2", "--n-max", "3"]);
        assert_eq!(c.command.echo(), "table --stat pbar --j -2 --n-max 3");
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("2:10"), Ok((2, 10)));
        assert!(parse_range("10:2").is_err());
        assert!(parse_range("10").is_err());
    }

    #[test]
    fn built_in_experiments_parse() {
        for (_, argv) in REPORT_EXPERIMENTS {
            parse(argv);
        }
    }

    #[test]
    fn argument_errors_exit_two() {
        assert_eq!(execute(["bgrank", "table", "--bogus"]).code, 2);
        assert_eq!(execute(["bgrank", "nonsense"]).code, 2);
        assert_eq!(execute(["bgrank", "--no-cache", "equidist", "--b", "5", "--n", "3"]).code, 2);
        assert_eq!(execute(["bgrank", "--no-cache", "--threads", "0", "validate"]).code, 2);
    }
}
