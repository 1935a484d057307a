//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::catalog::{standard_catalog, standard_records, Catalog, SCHEMA_VERSION};
use crate::error::{Error, Result};
use crate::lattice::{parse_rational, Rational};
use crate::synthesis::{synthesize, ExampleRecord, Kind, SynthesisRequest};
use crate::table::{build_table, Family, IntRange, Table, TableParams};
use crate::verification::{
    check_records, sweep_oracle, sweep_synthesis, AggregateReport, OracleGrid, Outcome,
    SynthesisGrid,
};

/// Largest dimension accepted by `synth`.
pub const MAX_DIM: u32 = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Parser)]
#[command(
    name = "folia",
    version,
    about = "Exact invariants of Fano foliations on bundles, cones and weighted projective spaces"
)]
struct Cli {
    /// Output format [default: json for synth and catalog, table otherwise]
    #[arg(long, global = true, env = "FOLIA_OUT", value_enum)]
    out: Option<OutFormat>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build an example whose requested invariant equals c.
    Synth(SynthArgs),
    /// Re-check a catalog file or a generated grid.
    Verify(VerifyArgs),
    /// Tabulate invariants of an example family.
    Table(TableArgs),
    /// Print version and supported families.
    Info,
    /// Export or re-import the standard catalog.
    #[command(subcommand)]
    Catalog(CatalogCommand),
}

#[derive(Debug, Args)]
struct SynthArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..=MAX_DIM as i64))]
    n: u32,
    #[arg(long)]
    r: u32,
    /// Exact target, "p/q" or an integer.
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
    c: Rational,
}

fn rational_arg(s: &str) -> std::result::Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GridName {
    Standard,
    Oracle,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("source").required(true).args(["catalog", "grid"]))]
struct VerifyArgs {
    #[arg(long)]
    catalog: Option<PathBuf>,
    #[arg(long, value_enum)]
    grid: Option<GridName>,
    #[arg(long, default_value_t = 4)]
    m_max: u32,
    #[arg(long, default_value_t = 3)]
    b1_max: u32,
    #[arg(long, default_value_t = 3)]
    rprime_max: u32,
    #[arg(long, default_value_t = 3)]
    k_max: u32,
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(i64).range(1..=1000))]
    coeff_max: i64,
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(i64).range(1..=1000))]
    d_max: i64,
    #[arg(long, default_value_t = 40, value_parser = clap::value_parser!(i64).range(1..=100000))]
    c_max: i64,
    /// Only sweep classes that are big but not ample.
    #[arg(long)]
    big_not_ample: bool,
}

#[derive(Debug, Args)]
struct TableArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long)]
    a: Option<IntRange>,
    #[arg(long)]
    n: Option<IntRange>,
    #[arg(long)]
    r: Option<IntRange>,
    #[arg(long)]
    m: Option<IntRange>,
    #[arg(long)]
    mprime: Option<IntRange>,
    #[arg(long)]
    a1: Option<IntRange>,
    #[arg(long)]
    a2: Option<IntRange>,
    #[arg(long)]
    k: Option<IntRange>,
    #[arg(long)]
    rprime: Option<IntRange>,
    #[arg(long, allow_hyphen_values = true)]
    d: Option<IntRange>,
    #[arg(long)]
    q: Option<IntRange>,
}

#[derive(Debug, Subcommand)]
enum CatalogCommand {
    /// Write the standard catalog as JSON.
    Export {
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Read a catalog, validate it and write it back out.
    Import {
        path: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_UNSUPPORTED: i32 = 2;
pub const EXIT_VERIFY_FAILED: i32 = 3;

enum Status {
    Done,
    VerifyFailed,
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli, stdout) {
        Ok(Status::Done) => EXIT_OK,
        Ok(Status::VerifyFailed) => EXIT_VERIFY_FAILED,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            match e {
                Error::Unsupported(_) => EXIT_UNSUPPORTED,
                _ => EXIT_INPUT,
            }
        }
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::Internal(e.to_string())
}

fn emit(stdout: &mut dyn Write, text: &str) -> Result<()> {
    stdout.write_all(text.as_bytes()).map_err(io_err)
}

fn dispatch(cli: Cli, stdout: &mut dyn Write) -> Result<Status> {
    match cli.command {
        Command::Synth(a) => {
            let req = SynthesisRequest::new(a.kind, a.n, a.r, a.c)?;
            let rec = synthesize(&req)?;
            emit(
                stdout,
                &render_record(&rec, cli.out.unwrap_or(OutFormat::Json))?,
            )?;
            Ok(Status::Done)
        }
        Command::Verify(a) => {
            let report = verify(&a)?;
            emit(
                stdout,
                &render_report(&report, cli.out.unwrap_or(OutFormat::Table))?,
            )?;
            Ok(if report.is_clean() {
                Status::Done
            } else {
                Status::VerifyFailed
            })
        }
        Command::Table(a) => {
            let params = TableParams {
                a: a.a,
                n: a.n,
                r: a.r,
                m: a.m,
                mprime: a.mprime,
                a1: a.a1,
                a2: a.a2,
                k: a.k,
                rprime: a.rprime,
                d: a.d,
                q: a.q,
            };
            let table = build_table(a.family, &params)?;
            emit(
                stdout,
                &render_table(&table, cli.out.unwrap_or(OutFormat::Table))?,
            )?;
            Ok(Status::Done)
        }
        Command::Info => {
            emit(stdout, &render_info(cli.out.unwrap_or(OutFormat::Table))?)?;
            Ok(Status::Done)
        }
        Command::Catalog(CatalogCommand::Export { output }) => {
            write_catalog(&standard_catalog()?, output, stdout)?;
            Ok(Status::Done)
        }
        Command::Catalog(CatalogCommand::Import { path, output }) => {
            let cat = read_catalog(&path)?;
            write_catalog(&cat, output, stdout)?;
            Ok(Status::Done)
        }
    }
}

fn read_catalog(path: &PathBuf) -> Result<Catalog> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    Catalog::from_json(&text)
}

fn write_catalog(cat: &Catalog, output: Option<PathBuf>, stdout: &mut dyn Write) -> Result<()> {
    let text = cat.to_json()?;
    match output {
        Some(path) => std::fs::write(&path, text)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display()))),
        None => emit(stdout, &text),
    }
}

fn verify(a: &VerifyArgs) -> Result<AggregateReport> {
    if let Some(path) = &a.catalog {
        let cat = read_catalog(path)?;
        return Ok(AggregateReport::from_reports(&check_records(&cat.records)));
    }
    match a.grid {
        Some(GridName::Standard) => {
            let records = standard_records()?;
            let mut report = AggregateReport::from_reports(&check_records(&records));
            let (_, sweep) = sweep_synthesis(&SynthesisGrid::default());
            report.merge(sweep);
            Ok(report)
        }
        Some(GridName::Oracle) => {
            let grid = OracleGrid {
                m_max: a.m_max,
                b1_max: a.b1_max,
                rprime_max: a.rprime_max,
                k_max: a.k_max,
                coeff_max: a.coeff_max,
                d_max: a.d_max,
                c_max: a.c_max,
                big_not_ample_only: a.big_not_ample,
            };
            if grid.m_max == 0 || grid.rprime_max == 0 || grid.k_max == 0 {
                return Err(Error::domain(
                    "--m-max, --rprime-max and --k-max must be positive",
                ));
            }
            if grid.c_max < grid.b1_max as i64 * grid.d_max + 1 {
                return Err(Error::domain("--c-max must be at least b1-max * d-max + 1"));
            }
            Ok(sweep_oracle(&grid))
        }
        None => Err(Error::domain("verify needs --catalog or --grid")),
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| Error::Internal(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn render_table(t: &Table, out: OutFormat) -> Result<String> {
    match out {
        OutFormat::Json => t.to_json(),
        OutFormat::Csv => t.to_csv(),
        OutFormat::Table => Ok(t.to_text()),
    }
}

fn opt(v: &Option<Rational>) -> String {
    v.as_ref()
        .map_or_else(|| "-".to_string(), ToString::to_string)
}

fn record_table(rec: &ExampleRecord) -> Table {
    let failed = rec
        .checks
        .iter()
        .filter(|c| c.outcome == Outcome::Fail)
        .count();
    let pairs = [
        ("id", rec.id.clone()),
        ("branch", rec.branch.clone()),
        ("variety", rec.variety.to_string()),
        ("recipe", rec.foliation.recipe.name().to_string()),
        ("rank", rec.foliation.rank.to_string()),
        ("r_a", rec.foliation.algebraic_rank.to_string()),
        ("-K_F", rec.foliation.minus_canonical().to_string()),
        ("gen_index", opt(&rec.invariants.gen_index)),
        ("fano_index", opt(&rec.invariants.fano_index)),
        ("seshadri", opt(&rec.invariants.seshadri_antican)),
        ("checks_failed", failed.to_string()),
    ];
    Table {
        columns: pairs.iter().map(|(k, _)| k.to_string()).collect(),
        rows: vec![pairs.into_iter().map(|(_, v)| v).collect()],
    }
}

fn render_record(rec: &ExampleRecord, out: OutFormat) -> Result<String> {
    match out {
        OutFormat::Json => to_json(rec),
        OutFormat::Csv => record_table(rec).to_csv(),
        OutFormat::Table => {
            let t = record_table(rec);
            let width = t.columns.iter().map(String::len).max().unwrap_or(0);
            let mut s = String::new();
            for (k, v) in t.columns.iter().zip(&t.rows[0]) {
                s.push_str(&format!("{k:<width$}  {v}\n"));
            }
            Ok(s)
        }
    }
}

fn render_report(r: &AggregateReport, out: OutFormat) -> Result<String> {
    match out {
        OutFormat::Json => to_json(r),
        OutFormat::Csv => {
            let counts = [r.total, r.passed, r.failed, r.skipped].map(|v| v.to_string());
            let mut t = Table {
                columns: [
                    "total", "passed", "failed", "skipped", "record", "check", "detail",
                ]
                .map(String::from)
                .to_vec(),
                rows: Vec::new(),
            };
            for f in &r.failures {
                let mut row = counts.to_vec();
                row.extend([f.record.clone(), f.check.clone(), f.detail.clone()]);
                t.rows.push(row);
            }
            if t.rows.is_empty() {
                let mut row = counts.to_vec();
                row.extend([String::new(), String::new(), String::new()]);
                t.rows.push(row);
            }
            t.to_csv()
        }
        OutFormat::Table => {
            let mut s = format!(
                "total    {}\npassed   {}\nfailed   {}\nskipped  {}\n",
                r.total, r.passed, r.failed, r.skipped
            );
            for f in &r.failures {
                s.push_str(&format!("FAIL {} {}: {}\n", f.record, f.check, f.detail));
            }
            Ok(s)
        }
    }
}

fn render_info(out: OutFormat) -> Result<String> {
    let families = Family::value_variants()
        .iter()
        .filter_map(|f| f.to_possible_value().map(|v| v.get_name().to_string()))
        .collect::<Vec<_>>()
        .join(" ");
    let kinds = Kind::value_variants()
        .iter()
        .filter_map(|k| k.to_possible_value().map(|v| v.get_name().to_string()))
        .collect::<Vec<_>>()
        .join(" ");
    let t = Table {
        columns: ["version", "schema", "kinds", "families"]
            .map(String::from)
            .to_vec(),
        rows: vec![vec![
            env!("CARGO_PKG_VERSION").to_string(),
            SCHEMA_VERSION.to_string(),
            kinds,
            families,
        ]],
    };
    match out {
        OutFormat::Json => {
            let v = serde_json::json!({
                "version": t.rows[0][0],
                "schema": t.rows[0][1],
                "kinds": t.rows[0][2].split(' ').collect::<Vec<_>>(),
                "families": t.rows[0][3].split(' ').collect::<Vec<_>>(),
            });
            to_json(&v)
        }
        OutFormat::Csv => t.to_csv(),
        OutFormat::Table => Ok(t
            .columns
            .iter()
            .zip(&t.rows[0])
            .map(|(k, v)| format!("{k:<9} {v}\n"))
            .collect()),
    }
}
