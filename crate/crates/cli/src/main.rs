use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use curvelab::catalog::{build, prime_power, CurveId, CurveParams};
use curvelab::geometry::{timed_count, PointCount};
use curvelab::{run_suite, Field, LambdaSpec, Report, SuiteId, SuiteParams};

#[derive(Parser)]
#[command(name = "curvelab", version, about = "Exact checks on plane curves over finite fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and write report.json, checks.csv and points.csv.
    Run {
        suite: SuiteId,
        #[arg(long)]
        q: u64,
        /// Hermitian parameter for the unitary suites; q must be n or n^2.
        #[arg(long)]
        n: Option<u64>,
        /// symbolic, scan, an integer, or g^j.
        #[arg(long)]
        lambda: Option<LambdaSpec>,
        /// Largest extension degree m scanned.
        #[arg(long)]
        ext: Option<u32>,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Catalog queries.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Count GF(q^m)-points of a catalog curve for m = 1..=ext, printed as CSV.
    ///
    /// For the Hermitian curve and the unitary pencil, q is the field order n^2.
    Count {
        #[arg(long)]
        curve: CurveId,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        ext: u32,
        /// Pencil parameter, required for pencils: an integer or g^j in GF(q^m).
        #[arg(long)]
        lambda: Option<LambdaSpec>,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    /// List the curve ids with their equations.
    List,
}

fn main() -> ExitCode {
    match real_main() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) if e.downcast_ref::<io::Error>().is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe) => {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn real_main() -> Result<bool> {
    match Cli::parse().command {
        Command::Run { suite, q, n, lambda, ext, jobs, out } => {
            let params = SuiteParams { q, n, lambda, ext, jobs };
            let report = run_suite(suite, &params)?;
            write_outputs(&report, &out)?;
            for c in &report.checks {
                println!("{} {}", if c.passed { "PASS" } else { "FAIL" }, c.name);
            }
            for n in &report.notes {
                println!("note: {n}");
            }
            let failed = report.failures().len();
            println!("{}: {} checks, {failed} failed; report in {}", report.suite, report.checks.len(), out.display());
            Ok(report.passed())
        }
        Command::Catalog { action: CatalogAction::List } => {
            let mut out = io::stdout().lock();
            for id in CurveId::NAMED {
                writeln!(out, "{:<16} {}", id.to_string(), id.description())?;
            }
            Ok(true)
        }
        Command::Count { curve, q, ext, lambda } => {
            let mut w = csv::Writer::from_writer(std::io::stdout());
            for m in 1..=ext {
                w.serialize(count_one(curve, q, m, lambda)?)?;
                w.flush()?;
            }
            Ok(true)
        }
    }
}

fn count_one(curve: CurveId, q: u64, m: u32, lambda: Option<LambdaSpec>) -> Result<PointCount> {
    let (p, h) = prime_power(q)?;
    let field = Field::new(p as u32, h * m)?;
    // curves sized by n live over GF(n^2), so --q names that field
    let size = if curve.uses_n() {
        let n = (1..=q).find(|n| n * n >= q).unwrap_or(q);
        if n * n != q {
            bail!("{curve} is defined over GF(n^2); --q must be a square");
        }
        n
    } else {
        q
    };
    let spec = build(&field, curve, &CurveParams::new(size))?;
    let lam = match (curve.is_pencil(), lambda) {
        (false, _) => None,
        (true, Some(LambdaSpec::Value(v))) => Some(v.resolve(&field, field.degree())?),
        (true, _) => bail!("{curve} is a pencil; pass --lambda with an integer or g^j"),
    };
    Ok(timed_count(&curve.to_string(), &spec.poly, q, m, lam)?)
}

fn write_outputs(report: &Report, out: &Path) -> Result<()> {
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    fs::write(out.join("report.json"), serde_json::to_string_pretty(report)? + "\n")?;

    let mut checks = csv::Writer::from_path(out.join("checks.csv"))?;
    checks.write_record(["name", "passed", "elapsed_ms", "detail"])?;
    for c in &report.checks {
        checks.write_record([
            c.name.clone(),
            c.passed.to_string(),
            c.elapsed_ms.to_string(),
            serde_json::to_string(&c.detail)?,
        ])?;
    }
    checks.flush()?;

    let mut points = csv::Writer::from_path(out.join("points.csv"))?;
    points.write_record(["curve_id", "q", "m", "count", "elapsed_ms"])?;
    for r in &report.point_counts {
        points.write_record([r.curve_id.clone(), r.q.to_string(), r.m.to_string(), r.count.to_string(), r.elapsed_ms.to_string()])?;
    }
    points.flush()?;
    Ok(())
}
