//! `nfmertens` command-line front end.
//!
//! Exit status: 0 when every checked bound holds, 1 when any bound row
//! fails, 2 on a usage or configuration error. Data goes to stdout (or the
//! `--out` file); diagnostics go to stderr.
//!
//! # Catalog format
//!
//! One field per line as whitespace-separated `key=value` pairs. Blank lines
//! and lines starting with `#` are ignored; values containing spaces may be
//! double-quoted.
//!
//! ```text
//! kind=rational
//! kind=quadratic d=-1 label="Q(i)"
//! kind=cyclotomic m=5 kappa=0.3398372782405235 kappa_error=1e-15
//! kind=monogenic poly=1,0,0,-2 disc=-108 kappa=... kappa_error=...
//! ```
//!
//! | key            | meaning                                                   |
//! |----------------|-----------------------------------------------------------|
//! | `kind`         | `rational`, `quadratic`, `cyclotomic` or `monogenic`      |
//! | `d`            | squarefree integer ≠ 0, 1 (quadratic fields)              |
//! | `m`            | integer ≥ 3, m ≢ 2 mod 4 (cyclotomic fields)              |
//! | `poly`         | monic integer coefficients, leading term first            |
//! | `disc`         | field discriminant (monogenic fields)                     |
//! | `label`        | display label (optional)                                  |
//! | `kappa`        | residue of the Dedekind zeta function at s = 1 (optional) |
//! | `kappa_error`  | absolute error of `kappa` (optional, default 0)           |
//! | `kappa_source` | provenance note for `kappa` (optional)                    |
//!
//! Residues of ℚ and of quadratic fields are computed internally; other
//! fields need `kappa`, either in the catalog or in a `--residues` table with
//! records `label=... kappa=... error=... source="..."`.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nfmertens::bounds::BoundConstants;
use nfmertens::catalog::Catalog;
use nfmertens::field::is_fundamental_discriminant;
use nfmertens::harness::{
    default_grid, parse_grid, summarize_field, verify_catalog, verify_chebotarev, BoundReport,
    VerifyOptions, CSV_HEADER, DEFAULT_GRID_CEILING,
};
use nfmertens::idealsieve::SieveConfig;
use nfmertens::mertens::accumulate_with;
use nfmertens::residue::{kappa, ResidueTable, SuppliedResidue};
use nfmertens::splitting::splitting_type;
use nfmertens::{Error, FieldKind, FieldSpec};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "nfmertens", version, about = "Mertens sums over prime ideals and their explicit error bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Show a field's invariants and the splitting of small primes.
    Inspect {
        #[command(flatten)]
        field: FieldArgs,
        /// Show splitting types for primes up to this bound.
        #[arg(long, default_value_t = 30)]
        primes: u64,
        /// Print one JSON object instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Compute S1, S2, the Mertens product and the prime ideal count at x.
    Mertens {
        #[command(flatten)]
        field: FieldArgs,
        /// Threshold on the ideal norm.
        #[arg(long)]
        x: f64,
        /// Largest admissible x.
        #[arg(long, default_value_t = DEFAULT_GRID_CEILING)]
        ceiling: f64,
        #[arg(long)]
        json: bool,
    },
    /// Compute the residue κ of the Dedekind zeta function at s = 1.
    Residue {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        kappa: KappaArgs,
        #[arg(long)]
        json: bool,
    },
    /// Check every bound for each catalog field on a grid of x values.
    Verify {
        /// Field catalog file (format in the crate documentation).
        #[arg(long)]
        catalog: PathBuf,
        /// Residue table for fields whose κ is not computed internally.
        #[arg(long)]
        residues: Option<PathBuf>,
        #[command(flatten)]
        run: RunArgs,
        /// Truncation point for the Meissel–Mertens constant
        /// [default: max(largest grid point, 1e4)].
        #[arg(long)]
        truncation: Option<f64>,
    },
    /// Check the residue-class bounds for the cyclotomic field ℚ(ζ_m).
    Chebotarev {
        /// Modulus m (≥ 3, not ≡ 2 mod 4).
        #[arg(long = "mod")]
        modulus: u64,
        /// Residue class a (coprime to m); repeat for several. Default: all.
        #[arg(long = "res")]
        residues: Vec<u64>,
        /// Residue κ of ℚ(ζ_m); enables the product (C_L) rows.
        #[arg(long)]
        kappa: Option<f64>,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct FieldArgs {
    /// Quadratic field, given by a squarefree d or a fundamental
    /// discriminant (e.g. -1 and -4 both give ℚ(i)).
    #[arg(long, allow_negative_numbers = true)]
    quadratic: Option<i64>,
    /// Cyclotomic field ℚ(ζ_M).
    #[arg(long)]
    cyclotomic: Option<u64>,
    /// Field label: Q, Q(i), Q(sqrt(d)) or Q(zeta_m).
    #[arg(long)]
    field: Option<String>,
}

impl FieldArgs {
    fn build(&self) -> nfmertens::Result<FieldSpec> {
        if let Some(v) = self.quadratic {
            if is_fundamental_discriminant(v) {
                FieldSpec::from_fundamental_discriminant(v)
            } else {
                FieldSpec::quadratic(v)
            }
        } else if let Some(m) = self.cyclotomic {
            FieldSpec::cyclotomic(m)
        } else {
            FieldSpec::from_label(self.field.as_deref().unwrap_or_default())
        }
    }
}

#[derive(Args, Debug)]
struct KappaArgs {
    /// Supply κ instead of computing it (required beyond ℚ and quadratics).
    #[arg(long)]
    kappa: Option<f64>,
    /// Absolute error of the supplied κ.
    #[arg(long, default_value_t = 0.0, requires = "kappa")]
    kappa_error: f64,
}

impl KappaArgs {
    fn supplied(&self) -> Option<SuppliedResidue> {
        self.kappa.map(|k| SuppliedResidue {
            kappa: k,
            error: self.kappa_error,
            source: Some("command line".into()),
        })
    }
}

#[derive(Args, Debug)]
struct RunArgs {
    /// x grid: comma list (1e2,1e3) or geometric lo:hi:factor
    /// [default: 1e2:1e7:10].
    #[arg(long)]
    grid: Option<String>,
    /// Largest admissible grid point.
    #[arg(long, default_value_t = DEFAULT_GRID_CEILING)]
    ceiling: f64,
    /// Worker threads (0 = all cores). Results do not depend on this.
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Write the CSV here (and a summary to <OUT>.summary.txt) instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Use the sharpened constants instead of the rounded published ones.
    #[arg(long)]
    tight: bool,
    /// Print a JSON summary object instead of CSV on stdout.
    #[arg(long)]
    json: bool,
}

impl RunArgs {
    fn grid(&self) -> nfmertens::Result<Vec<f64>> {
        let grid = match &self.grid {
            Some(spec) => parse_grid(spec)?,
            None => default_grid(),
        };
        let max = *grid.last().expect("grid is non-empty");
        if max > self.ceiling {
            return Err(Error::Resource {
                requested: max as u64,
                ceiling: self.ceiling as u64,
            });
        }
        Ok(grid)
    }

    fn options(&self) -> VerifyOptions {
        VerifyOptions {
            constants: BoundConstants::select(self.tight),
            ceiling: self.ceiling,
            sieve: SieveConfig::default(),
            workers: self.workers,
            ..VerifyOptions::default()
        }
    }
}

/// Failure of a subcommand, mapped onto the exit status.
enum Failure {
    Config(String),
    Bounds,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self::Config(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self::Config(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Inspect { field, primes, json } => inspect(field, *primes, *json),
        Command::Mertens {
            field,
            x,
            ceiling,
            json,
        } => mertens(field, *x, *ceiling, *json),
        Command::Residue { field, kappa, json } => residue(field, kappa, *json),
        Command::Verify {
            catalog,
            residues,
            run,
            truncation,
        } => verify(catalog, residues.as_ref(), run, *truncation),
        Command::Chebotarev {
            modulus,
            residues,
            kappa,
            run,
        } => chebotarev(*modulus, residues, *kappa, run),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Bounds) => ExitCode::from(1),
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn print_json(value: &Value) -> Outcome {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| Failure::Config(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

/// A JSON number when it fits in i64, otherwise a decimal string.
fn integer_json(v: &impl std::fmt::Display) -> Value {
    let text = v.to_string();
    text.parse::<i64>().map(Value::from).unwrap_or(Value::from(text))
}

fn kind_json(kind: FieldKind) -> Value {
    match kind {
        FieldKind::Rational => json!({"type": "rational"}),
        FieldKind::Quadratic { d } => json!({"type": "quadratic", "d": d}),
        FieldKind::Cyclotomic { m } => json!({"type": "cyclotomic", "m": m}),
        FieldKind::Monogenic => json!({"type": "monogenic"}),
    }
}

fn inspect(args: &FieldArgs, primes: u64, as_json: bool) -> Outcome {
    let field = args.build()?;
    let splits: Vec<_> = nfmertens::idealsieve::sieve_primes(2, primes)?
        .map(|p| splitting_type(&field, p))
        .collect();
    if as_json {
        let sig = field.signature();
        let splitting: Vec<Value> = splits
            .iter()
            .map(|s| {
                json!({
                    "p": s.p,
                    "verified": s.verified,
                    "factors": s.factors.iter().map(|f| json!({"f": f.f, "e": f.e, "count": f.count})).collect::<Vec<_>>(),
                })
            })
            .collect();
        return print_json(&json!({
            "label": field.label(),
            "kind": kind_json(field.kind()),
            "degree": field.degree(),
            "discriminant": integer_json(field.discriminant()),
            "signature": [sig.r1, sig.r2],
            "polynomial": field.polynomial(),
            "index_warning": field.index_warning(),
            "splitting": splitting,
        }));
    }
    let sig = field.signature();
    println!("field          {}", field.label());
    println!("degree         {}", field.degree());
    println!("discriminant   {}", field.discriminant());
    println!("signature      ({}, {})", sig.r1, sig.r2);
    println!("polynomial     {:?} (ascending)", field.polynomial());
    println!("index warning  {}", field.index_warning());
    for s in &splits {
        let parts: Vec<String> = s
            .factors
            .iter()
            .map(|f| format!("{}x(f={},e={})", f.count, f.f, f.e))
            .collect();
        let flag = if s.verified { "" } else { "  (unverified)" };
        println!("p = {:<5} {}{flag}", s.p, parts.join(" "));
    }
    Ok(())
}

fn mertens(args: &FieldArgs, x: f64, ceiling: f64, as_json: bool) -> Outcome {
    let field = args.build()?;
    if x.is_nan() || x < 2.0 {
        return Err(Failure::Config(format!("x must be at least 2, got {x}")));
    }
    let config = SieveConfig {
        ceiling: ceiling.min(u64::MAX as f64) as u64,
        ..SieveConfig::default()
    };
    let acc = accumulate_with(&field, &[x], config)?;
    let cp = acc.checkpoints[0];
    if acc.unverified_primes > 0 {
        eprintln!(
            "warning: {} prime(s) with unverified splitting data",
            acc.unverified_primes
        );
    }
    if as_json {
        return print_json(&json!({
            "field": field.label(),
            "x": x,
            "s1": cp.s1,
            "s2": cp.s2,
            "log_product": cp.log_product,
            "product": cp.product(),
            "prime_ideal_count": cp.prime_ideal_count,
            "unverified_primes": acc.unverified_primes,
        }));
    }
    println!("field              {}", field.label());
    println!("x                  {x:e}");
    println!("S1                 {:.15e}", cp.s1);
    println!("S2                 {:.15e}", cp.s2);
    println!("product            {:.15e}", cp.product());
    println!("prime ideal count  {}", cp.prime_ideal_count);
    Ok(())
}

fn residue(args: &FieldArgs, kappa_args: &KappaArgs, as_json: bool) -> Outcome {
    let field = args.build()?;
    let supplied = kappa_args.supplied();
    let value = kappa::<f64>(&field, supplied.as_ref())?;
    if as_json {
        let mut obj = serde_json::to_value(&value).map_err(|e| Failure::Config(e.to_string()))?;
        obj["field"] = Value::from(field.label());
        return print_json(&obj);
    }
    println!("field   {}", field.label());
    println!("kappa   {:.16e}", value.kappa);
    println!("method  {}", value.method.as_str());
    println!("error   {:.3e}", value.error);
    if let Some(c) = value.components {
        println!(
            "h = {}  R = {:.16e}  w = {}",
            c.class_number, c.regulator, c.roots_of_unity
        );
    }
    Ok(())
}

fn emit_rows(run: &RunArgs, csv: &str, summary: &str, extra: Value) -> Outcome {
    match &run.out {
        Some(path) => {
            std::fs::write(path, csv)?;
            std::fs::write(nfmertens::harness::summary_path_for(path), summary)?;
        }
        None if !run.json => std::io::stdout().lock().write_all(csv.as_bytes())?,
        None => {}
    }
    if run.json {
        print_json(&extra)?;
    } else {
        eprint!("{summary}");
    }
    Ok(())
}

fn verify(
    catalog_path: &PathBuf,
    residues: Option<&PathBuf>,
    run: &RunArgs,
    truncation: Option<f64>,
) -> Outcome {
    let grid = run.grid()?;
    if let Some(t) = truncation {
        if t.is_nan() || t < 2.0 || t > run.ceiling {
            return Err(Failure::Config(format!(
                "truncation must lie in [2, ceiling], got {t}"
            )));
        }
    }
    let mut opts = run.options();
    opts.truncation = truncation;
    if let Some(path) = residues {
        opts.residues = ResidueTable::load(path)?;
    }
    let catalog = Catalog::load(catalog_path)?;
    let result = verify_catalog(&catalog, &grid, &opts)?;
    emit_rows(
        run,
        &result.csv,
        &result.summary_text,
        json!({
            "rows": result.rows,
            "failed_rows": result.failed_rows,
            "errors": result.errors,
            "out": run.out,
        }),
    )?;
    if !result.errors.is_empty() {
        Err(Failure::Config(format!(
            "{} catalog entr{} could not be verified",
            result.errors.len(),
            if result.errors.len() == 1 { "y" } else { "ies" }
        )))
    } else if result.failed_rows > 0 {
        Err(Failure::Bounds)
    } else {
        Ok(())
    }
}

fn chebotarev(modulus: u64, residues: &[u64], kappa_l: Option<f64>, run: &RunArgs) -> Outcome {
    let grid = match &run.grid {
        Some(_) => run.grid()?,
        None => (3..=7).map(|k| 10f64.powi(k)).collect(),
    };
    let opts = run.options();
    let classes = (!residues.is_empty()).then_some(residues);
    let rows: Vec<BoundReport<f64>> = rayon_pool(run.workers)?
        .install(|| verify_chebotarev(modulus, classes, &grid, kappa_l, &opts))?;
    let mut csv = format!("{CSV_HEADER}\n");
    for r in &rows {
        csv.push_str(&r.csv_row());
        csv.push('\n');
    }
    let failed = rows.iter().filter(|r| !r.pass).count();
    let summary = format!("{}\n", summarize_field(&format!("Q(zeta_{modulus})"), &rows));
    emit_rows(
        run,
        &csv,
        &summary,
        json!({"rows": rows.len(), "failed_rows": failed, "out": run.out}),
    )?;
    if failed > 0 {
        Err(Failure::Bounds)
    } else {
        Ok(())
    }
}

fn rayon_pool(workers: usize) -> Result<rayon::ThreadPool, Failure> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Failure::Config(e.to_string()))
}
