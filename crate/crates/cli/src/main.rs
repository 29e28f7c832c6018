//! `shadowsum` — state-sum polynomials of knot shadows from the command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error, 3 crossing
//! guard violation. The brute-force guard defaults to 30 crossings and can be
//! overridden by `--max-crossings` or the `SHADOWSUM_MAX_CROSSINGS`
//! environment variable, hard-capped at 34.

use clap::{Args, Parser, Subcommand, ValueEnum};
use shadowsum::diagram::{DiagramError, DEFAULT_CROSSING_GUARD, MAX_CROSSING_GUARD};
use shadowsum::expr::{self, EvalMethod, ExprError};
use shadowsum::families::{build, crossing_count, Family, FamilySpec};
use shadowsum::formulas::{family_gf, family_poly_closed, family_poly_recurrence};
use shadowsum::tables::{compare_with_reference, export, triangle, ExportFormat, TableId};
use std::process::ExitCode;

const GUARD_ENV: &str = "SHADOWSUM_MAX_CROSSINGS";

#[derive(Parser)]
#[command(
    name = "shadowsum",
    about = "State-diagram generating polynomials of knot shadows",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the generating polynomial of one family member
    Poly(PolyArgs),
    /// Print a coefficient triangle
    Table(TableArgs),
    /// Verify state sum = closed form = recurrence for family members
    Check(CheckArgs),
    /// Print generating-function terms
    Series(SeriesArgs),
    /// Evaluate a knot expression
    Eval(EvalArgs),
    /// Export triangle rows to a file format
    Export(ExportArgs),
    /// Work with the embedded reference tables
    Fixtures(FixturesArgs),
}

#[derive(Args)]
struct PolyArgs {
    #[arg(long)]
    family: String,
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value_t = PolyMethod::Closed)]
    method: PolyMethod,
    #[arg(long)]
    max_crossings: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolyMethod {
    Brute,
    Closed,
    Recurrence,
}

#[derive(Args)]
struct TableArgs {
    #[arg(long)]
    family: String,
    #[arg(long)]
    rows: usize,
    #[arg(long, value_enum, default_value_t = TableFormat::Md)]
    format: TableFormat,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
    Md,
}

#[derive(Args)]
struct CheckArgs {
    /// Family name, or `all`
    #[arg(long, default_value = "all")]
    family: String,
    /// Crossing budget per family member
    #[arg(long)]
    max_crossings: Option<usize>,
}

#[derive(Args)]
struct SeriesArgs {
    #[arg(long)]
    family: String,
    #[arg(long)]
    order: usize,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    expr: String,
    #[arg(long, value_enum, default_value_t = EvalMode::Brute)]
    method: EvalMode,
    #[arg(long)]
    max_crossings: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum EvalMode {
    Brute,
    Laws,
}

#[derive(Args)]
struct ExportArgs {
    #[arg(long)]
    family: String,
    /// Export rows 0..=ROWS
    #[arg(long, conflicts_with = "row")]
    rows: Option<usize>,
    /// Export a single row
    #[arg(long)]
    row: Option<usize>,
    #[arg(long)]
    format: String,
    /// Write to a file instead of stdout (byte-identical content)
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Args)]
struct FixturesArgs {
    /// Compare every embedded table against derived values
    #[arg(long)]
    verify: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => err.report(),
    }
}

/// Failure cases mapped to exit codes.
enum Failure {
    Usage(String),
    Verification(String),
    Guard(String),
}

impl Failure {
    fn report(self) -> ExitCode {
        let (message, code) = match self {
            Failure::Usage(m) => (m, 2),
            Failure::Verification(m) => (m, 1),
            Failure::Guard(m) => (m, 3),
        };
        eprintln!("error: {message}");
        ExitCode::from(code)
    }
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Poly(args) => cmd_poly(args),
        Command::Table(args) => cmd_table(args),
        Command::Check(args) => cmd_check(args),
        Command::Series(args) => cmd_series(args),
        Command::Eval(args) => cmd_eval(args),
        Command::Export(args) => cmd_export(args),
        Command::Fixtures(args) => cmd_fixtures(args),
    }
}

fn parse_family(name: &str) -> Result<Family, Failure> {
    Family::parse(name).map_err(|e| Failure::Usage(e.to_string()))
}

/// Effective crossing guard: flag, then environment, then the default.
fn resolve_guard(flag: Option<usize>) -> Result<usize, Failure> {
    let guard = match flag {
        Some(g) => g,
        None => match std::env::var(GUARD_ENV) {
            Ok(v) => v
                .parse()
                .map_err(|_| Failure::Usage(format!("{GUARD_ENV} must be an integer")))?,
            Err(_) => DEFAULT_CROSSING_GUARD,
        },
    };
    if guard > MAX_CROSSING_GUARD {
        return Err(Failure::Usage(format!(
            "crossing guard {guard} exceeds the hard cap of {MAX_CROSSING_GUARD}"
        )));
    }
    Ok(guard)
}

fn guard_failure(err: DiagramError) -> Failure {
    match err {
        DiagramError::TooManyCrossings { .. } => Failure::Guard(err.to_string()),
        other => Failure::Usage(other.to_string()),
    }
}

fn cmd_poly(args: PolyArgs) -> Result<ExitCode, Failure> {
    let family = parse_family(&args.family)?;
    let spec = FamilySpec::new(family, args.n);
    let poly = match args.method {
        PolyMethod::Closed => family_poly_closed(spec),
        PolyMethod::Recurrence => family_poly_recurrence(spec),
        PolyMethod::Brute => {
            let guard = resolve_guard(args.max_crossings)?;
            let shadow = build(spec).map_err(|e| Failure::Usage(e.to_string()))?;
            shadow.state_sum_guarded(guard).map_err(guard_failure)?
        }
    };
    println!("{poly}");
    Ok(ExitCode::SUCCESS)
}

fn cmd_table(args: TableArgs) -> Result<ExitCode, Failure> {
    let family = parse_family(&args.family)?;
    let t = triangle(family, args.rows).map_err(|e| Failure::Verification(e.to_string()))?;
    match args.format {
        TableFormat::Csv => print!("{}", export(&t.rows, ExportFormat::Csv)),
        TableFormat::Json => print!("{}", export(&t.rows, ExportFormat::Json)),
        TableFormat::Md => {
            let width = t.rows.iter().map(Vec::len).max().unwrap_or(1);
            let header: Vec<String> = (0..width).map(|k| format!("x^{k}")).collect();
            println!("| n | {} |", header.join(" | "));
            println!("|---|{}", "---|".repeat(width));
            for (n, row) in t.rows.iter().enumerate() {
                let cells: Vec<String> = (0..width)
                    .map(|k| row.get(k).map(|v| v.to_string()).unwrap_or_default())
                    .collect();
                println!("| {n} | {} |", cells.join(" | "));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// Largest index whose diagram fits the crossing budget.
fn budget_for(family: Family, max_crossings: usize) -> usize {
    let mut n = 0;
    while crossing_count(FamilySpec::new(family, n + 1)) <= max_crossings {
        n += 1;
        if family == Family::Unknot && n >= 3 {
            break;
        }
    }
    n
}

fn cmd_check(args: CheckArgs) -> Result<ExitCode, Failure> {
    let max_crossings = match args.max_crossings {
        Some(m) if m > MAX_CROSSING_GUARD => {
            return Err(Failure::Usage(format!(
                "crossing budget {m} exceeds the hard cap of {MAX_CROSSING_GUARD}"
            )));
        }
        Some(m) => m,
        None => 12,
    };
    let families: Vec<Family> = if args.family == "all" {
        Family::ALL.to_vec()
    } else {
        vec![parse_family(&args.family)?]
    };
    let mut all_ok = true;
    for family in families {
        let max_n = budget_for(family, max_crossings);
        let mut failed = None;
        for n in 0..=max_n {
            let spec = FamilySpec::new(family, n);
            let closed = family_poly_closed(spec);
            let recurrence = family_poly_recurrence(spec);
            let brute = build(spec)
                .map_err(|e| Failure::Usage(e.to_string()))?
                .state_sum_guarded(max_crossings)
                .map_err(guard_failure)?;
            if brute != closed || recurrence != closed {
                failed = Some(n);
                break;
            }
        }
        match failed {
            None => println!("{family}: n=0..{max_n} state sum = closed form = recurrence"),
            Some(n) => {
                all_ok = false;
                println!("{family}: MISMATCH at n={n}");
            }
        }
    }
    if all_ok {
        Ok(ExitCode::SUCCESS)
    } else {
        Err(Failure::Verification("three-way check failed".into()))
    }
}

fn cmd_series(args: SeriesArgs) -> Result<ExitCode, Failure> {
    let family = parse_family(&args.family)?;
    let series = family_gf(family, args.order).map_err(|e| Failure::Usage(e.to_string()))?;
    for (n, term) in series.terms().iter().enumerate() {
        println!("y^{n}: {term}");
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_eval(args: EvalArgs) -> Result<ExitCode, Failure> {
    let guard = resolve_guard(args.max_crossings)?;
    let parsed = expr::parse(&args.expr).map_err(|e| Failure::Usage(e.to_string()))?;
    let method = match args.method {
        EvalMode::Brute => EvalMethod::Brute,
        EvalMode::Laws => EvalMethod::Laws,
    };
    let poly = expr::eval_poly(&parsed, method, guard).map_err(|e| match e {
        ExprError::Diagram(d @ DiagramError::TooManyCrossings { .. }) => {
            Failure::Guard(d.to_string())
        }
        other => Failure::Usage(other.to_string()),
    })?;
    println!("{poly}");
    Ok(ExitCode::SUCCESS)
}

fn cmd_export(args: ExportArgs) -> Result<ExitCode, Failure> {
    let family = parse_family(&args.family)?;
    let format = ExportFormat::parse(&args.format)
        .ok_or_else(|| Failure::Usage(format!("unknown export format `{}`", args.format)))?;
    let (max_n, first) = match (args.rows, args.row) {
        (Some(rows), None) => (rows, 0),
        (None, Some(row)) => (row, row),
        (None, None) => return Err(Failure::Usage("pass --rows R or --row N".into())),
        _ => unreachable!("clap enforces the conflict"),
    };
    let t = triangle(family, max_n).map_err(|e| Failure::Verification(e.to_string()))?;
    let content = export(&t.rows[first..=max_n], format);
    match args.out {
        Some(path) => std::fs::write(&path, &content)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{content}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_fixtures(args: FixturesArgs) -> Result<ExitCode, Failure> {
    if !args.verify {
        return Err(Failure::Usage("fixtures requires --verify".into()));
    }
    let mut all_ok = true;
    for table in TableId::ALL {
        let report = compare_with_reference(table);
        if report.pass {
            let registered = report.mismatches.len();
            if registered == 0 {
                println!("{table}: OK ({} entries, exact)", report.entries_checked);
            } else {
                println!(
                    "{table}: OK ({} entries, {registered} registered typo(s))",
                    report.entries_checked
                );
            }
        } else {
            all_ok = false;
            println!(
                "{table}: FAIL (unregistered {:?}, stale {:?})",
                report.unregistered, report.stale_registry
            );
        }
    }
    if all_ok {
        Ok(ExitCode::SUCCESS)
    } else {
        Err(Failure::Verification(
            "fixture comparison does not match the typo registry".into(),
        ))
    }
}
