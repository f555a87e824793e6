//! Verification runs: residuals against their explicit bounds, tabulated as
//! [`BoundReport`] rows and written as CSV plus a plain-text summary.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::bounds::{a_bound, b_bound, e_and_c_bounds, gm_bound, li, m_interval, BoundConstants, BoundInputs};
use crate::catalog::Catalog;
use crate::chebotarev::{ap_mertens_all_with, cauchy_difference, class_product_residual, class_residuals, FrobeniusClassSpec};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::idealsieve::SieveConfig;
use crate::mertens::{accumulate_with, residuals, MertensConstants, MIN_TRUNCATION};
use crate::residue::{kappa, ResidueTable, ResidueValue};
use crate::scalar::Real;

pub const CSV_HEADER: &str = "field_label,quantity,x,residual,bound,margin,pass,unverified_primes";
/// Default largest grid point.
pub const DEFAULT_GRID_CEILING: f64 = 1e8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantity {
    A,
    B,
    C,
    E,
    Pit,
    MInterval,
    /// A_L for one Frobenius class
    ClassA,
    /// Cauchy difference of B_L between consecutive grid points
    ClassBCauchy,
    /// C_L, only with a supplied κ_L
    ClassC,
}

impl Quantity {
    pub fn tag(&self) -> &'static str {
        match self {
            Self::A => "A",
            Self::B => "B",
            Self::C => "C",
            Self::E => "E",
            Self::Pit => "PIT",
            Self::MInterval => "M-interval",
            Self::ClassA => "A_L",
            Self::ClassBCauchy => "B_L-cauchy",
            Self::ClassC => "C_L",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport<T> {
    pub field_label: String,
    pub quantity: Quantity,
    pub x: T,
    pub residual: T,
    pub bound: T,
    /// bound − |residual|
    pub margin: T,
    pub pass: bool,
    pub unverified_primes: u64,
}

impl<T: Real> BoundReport<T> {
    /// A row passes when margin ≥ −tolerance.
    pub fn new(
        field_label: &str,
        quantity: Quantity,
        x: T,
        residual: T,
        bound: T,
        tolerance: T,
        unverified_primes: u64,
    ) -> Self {
        let margin = bound - residual.abs();
        Self {
            field_label: field_label.to_string(),
            quantity,
            x,
            residual,
            bound,
            margin,
            pass: margin >= -tolerance,
            unverified_primes,
        }
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            csv_escape(&self.field_label),
            self.quantity.tag(),
            fmt_real(self.x),
            fmt_real(self.residual),
            fmt_real(self.bound),
            fmt_real(self.margin),
            self.pass,
            self.unverified_primes
        )
    }
}

/// 17 significant digits.
pub fn fmt_real<T: Real>(v: T) -> String {
    format!("{:.16e}", v.as_f64())
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub constants: BoundConstants,
    /// Truncation point for M_K; defaults to max(grid max, 10^4).
    pub truncation: Option<f64>,
    /// Largest admissible grid point.
    pub ceiling: f64,
    pub sieve: SieveConfig,
    /// Threads for [`run_catalog`]; 0 means rayon's default.
    pub workers: usize,
    pub residues: ResidueTable,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            constants: BoundConstants::STATED,
            truncation: None,
            ceiling: DEFAULT_GRID_CEILING,
            sieve: SieveConfig::default(),
            workers: 0,
            residues: ResidueTable::default(),
        }
    }
}

/// Parses `lo:hi:factor` (geometric) or a comma-separated list.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let bad = |msg: &str| Error::InvalidInput(format!("grid `{spec}`: {msg}"));
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad("not a number"));
    let grid = if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("expected lo:hi:factor"));
        }
        let (lo, hi, factor) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
        if !(factor > 1.0) || !(lo >= 2.0) || !(hi >= lo) {
            return Err(bad("need 2 <= lo <= hi and factor > 1"));
        }
        let mut out = Vec::new();
        let mut k = 0;
        loop {
            let x = lo * factor.powi(k);
            if x > hi * (1.0 + 1e-12) {
                break;
            }
            out.push(x);
            k += 1;
        }
        out
    } else {
        spec.split(',').map(num).collect::<Result<Vec<_>>>()?
    };
    if grid.is_empty() {
        return Err(bad("empty"));
    }
    if grid.iter().any(|&x| !(x >= 2.0)) {
        return Err(bad("every point must be >= 2"));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(bad("points must be strictly ascending"));
    }
    Ok(grid)
}

pub fn default_grid() -> Vec<f64> {
    (2..=7).map(|k| 10f64.powi(k)).collect()
}

fn check_ceiling<T: Real>(points: &[T], ceiling: f64) -> Result<()> {
    match points.iter().copied().fold(None, |m: Option<T>, x| Some(m.map_or(x, |m| m.max(x)))) {
        Some(max) if max.as_f64() > ceiling => Err(Error::Resource {
            requested: max.as_f64() as u64,
            ceiling: ceiling as u64,
        }),
        _ => Ok(()),
    }
}

/// A, B, C, E and PIT rows at every grid point, followed by one M-interval row.
pub fn verify_field<T: Real>(
    field: &FieldSpec,
    kappa: &ResidueValue<T>,
    grid: &[T],
    opts: &VerifyOptions,
) -> Result<Vec<BoundReport<T>>> {
    if grid.is_empty() {
        return Err(Error::InvalidInput("empty grid".into()));
    }
    let grid_max = *grid.last().unwrap();
    let truncation = opts
        .truncation
        .map(T::lit)
        .unwrap_or_else(|| grid_max.max(T::lit(MIN_TRUNCATION)));
    let mut points: Vec<T> = grid.to_vec();
    points.push(truncation);
    points.sort_by(|a, b| a.partial_cmp(b).expect("finite grid"));
    points.dedup();
    check_ceiling(&points, opts.ceiling)?;

    let acc = accumulate_with(field, &points, opts.sieve)?;
    let at = |x: T| {
        acc.checkpoints
            .iter()
            .find(|cp| cp.x == x)
            .expect("grid point accumulated")
    };
    let consts = MertensConstants::from_checkpoint(at(truncation), kappa, field.degree())?;
    let label = field.label();
    let unverified = acc.unverified_primes;
    let log_disc = field.log_abs_disc::<T>();
    let zero = T::zero();
    let mk_tol = consts.meissel_mertens_error;

    let mut rows = Vec::with_capacity(5 * grid.len() + 1);
    for &x in grid {
        let cp = at(x);
        let r = residuals(cp, &consts);
        let b = BoundInputs::new(x, log_disc, field.degree());
        let (e_bound, c_bound) = e_and_c_bounds(&b, &opts.constants);
        let pit = T::from_u64_lossy(cp.prime_ideal_count) - li(x);
        rows.push(BoundReport::new(label, Quantity::A, x, r.a, a_bound(&b, &opts.constants), zero, unverified));
        rows.push(BoundReport::new(label, Quantity::B, x, r.b, b_bound(&b, &opts.constants), mk_tol, unverified));
        rows.push(BoundReport::new(label, Quantity::C, x, r.c, c_bound, zero, unverified));
        rows.push(BoundReport::new(label, Quantity::E, x, r.e, e_bound, zero, unverified));
        rows.push(BoundReport::new(label, Quantity::Pit, x, pit, gm_bound(&b), zero, unverified));
    }
    // M row: residual is the offset from the interval midpoint, bound the
    // half-width, so the margin is the distance to the nearer endpoint.
    let (lo, hi) = m_interval(kappa.kappa, field.degree())?;
    let half = (hi - lo) * T::lit(0.5);
    rows.push(BoundReport::new(
        label,
        Quantity::MInterval,
        consts.truncation_x,
        consts.meissel_mertens - (lo + half),
        half,
        mk_tol,
        unverified,
    ));
    Ok(rows)
}

/// Rows for the Frobenius classes of ℚ(ζ_m): an A_L row per class and
/// grid point, a B_L Cauchy-difference row per consecutive pair, and C_L rows
/// when κ_L is supplied.
pub fn verify_chebotarev<T: Real>(
    m: u64,
    residues: Option<&[u64]>,
    grid: &[T],
    kappa_l: Option<T>,
    opts: &VerifyOptions,
) -> Result<Vec<BoundReport<T>>> {
    check_ceiling(grid, opts.ceiling)?;
    let field = FieldSpec::cyclotomic(m)?;
    let sums = ap_mertens_all_with(m, grid, opts.sieve)?;
    let classes: Vec<FrobeniusClassSpec> = match residues {
        Some(list) => list
            .iter()
            .map(|&a| FrobeniusClassSpec::new(m, a))
            .collect::<Result<_>>()?,
        None => FrobeniusClassSpec::all(m)?,
    };
    let log_disc = field.log_abs_disc::<T>();
    let zero = T::zero();
    let mut rows = Vec::new();
    for spec in &classes {
        let cps = &sums.by_class[&spec.a];
        let label = spec.label();
        for cp in cps {
            let r = class_residuals(spec, cp, &field)?;
            let b = BoundInputs::new(cp.x, log_disc, field.degree());
            rows.push(BoundReport::new(&label, Quantity::ClassA, cp.x, r.a, a_bound(&b, &opts.constants), zero, 0));
        }
        for w in cps.windows(2) {
            let (diff, bound) = cauchy_difference(spec, &w[0], &w[1], &field, &opts.constants)?;
            rows.push(BoundReport::new(&label, Quantity::ClassBCauchy, w[1].x, diff, bound, zero, 0));
        }
        if let Some(kl) = kappa_l {
            for cp in cps {
                let c = class_product_residual(spec, cp, kl)?;
                let b = BoundInputs::new(cp.x, log_disc, field.degree());
                let (_, c_bound) = e_and_c_bounds(&b, &opts.constants);
                rows.push(BoundReport::new(&label, Quantity::ClassC, cp.x, c, c_bound, zero, 0));
            }
        }
    }
    Ok(rows)
}

#[derive(Debug, Default)]
pub struct RunSummary {
    pub rows: usize,
    pub failed_rows: usize,
    /// Catalog lines or fields that produced no rows, with the reason.
    pub errors: Vec<String>,
    pub csv_path: PathBuf,
    pub summary_path: PathBuf,
}

impl RunSummary {
    pub fn all_passed(&self) -> bool {
        self.failed_rows == 0 && self.errors.is_empty()
    }
}

pub fn summary_path_for(csv_path: &Path) -> PathBuf {
    let mut name = csv_path.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".summary.txt");
    csv_path.with_file_name(name)
}

type FieldOutcome = (String, Result<Vec<BoundReport<f64>>>);

fn verify_entries(catalog: &Catalog, grid: &[f64], opts: &VerifyOptions) -> Vec<FieldOutcome> {
    catalog
        .entries
        .par_iter()
        .map(|entry| {
            let supplied = entry
                .residue
                .as_ref()
                .or_else(|| opts.residues.get(entry.field.label()));
            let rows = kappa::<f64>(&entry.field, supplied)
                .and_then(|k| verify_field(&entry.field, &k, grid, opts));
            (format!("{} (line {})", entry.field.label(), entry.line), rows)
        })
        .collect()
}

/// Rendered output of a catalog run.
#[derive(Debug, Default)]
pub struct CatalogRun {
    pub csv: String,
    pub summary_text: String,
    pub rows: usize,
    pub failed_rows: usize,
    /// Catalog lines or fields that produced no rows, with the reason.
    pub errors: Vec<String>,
}

impl CatalogRun {
    pub fn all_passed(&self) -> bool {
        self.failed_rows == 0 && self.errors.is_empty()
    }
}

/// Verifies every catalog field on `grid` using `opts.workers` threads.
/// Fields that fail (e.g. no residue available) are reported in `errors`
/// and the remaining fields still produce rows. Output does not depend on
/// the worker count.
pub fn verify_catalog(catalog: &Catalog, grid: &[f64], opts: &VerifyOptions) -> Result<CatalogRun> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers)
        .build()
        .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
    let outcomes = pool.install(|| verify_entries(catalog, grid, opts));

    let mut run = CatalogRun::default();
    run.errors.extend(catalog.errors.iter().map(|e| e.to_string()));
    writeln!(run.csv, "{CSV_HEADER}").unwrap();
    for (name, outcome) in &outcomes {
        match outcome {
            Ok(rows) => {
                for row in rows {
                    writeln!(run.csv, "{}", row.csv_row()).unwrap();
                }
                run.rows += rows.len();
                run.failed_rows += rows.iter().filter(|r| !r.pass).count();
                writeln!(run.summary_text, "{}", summarize_field(name, rows)).unwrap();
            }
            Err(e) => run.errors.push(format!("{name}: {e}")),
        }
    }
    for e in &run.errors {
        writeln!(run.summary_text, "ERROR {e}").unwrap();
    }
    writeln!(
        run.summary_text,
        "total rows={} failed={} errors={}",
        run.rows,
        run.failed_rows,
        run.errors.len()
    )
    .unwrap();
    Ok(run)
}

/// Loads the catalog, verifies it and writes the CSV to `output_path` and
/// the summary to [`summary_path_for`]`(output_path)`.
pub fn run_catalog(
    catalog_path: impl AsRef<Path>,
    grid: &[f64],
    output_path: impl AsRef<Path>,
    opts: &VerifyOptions,
) -> Result<RunSummary> {
    let catalog = Catalog::load(catalog_path)?;
    let run = verify_catalog(&catalog, grid, opts)?;
    let csv_path = output_path.as_ref().to_path_buf();
    let summary_path = summary_path_for(&csv_path);
    std::fs::File::create(&csv_path)?.write_all(run.csv.as_bytes())?;
    std::fs::File::create(&summary_path)?.write_all(run.summary_text.as_bytes())?;
    Ok(RunSummary {
        rows: run.rows,
        failed_rows: run.failed_rows,
        errors: run.errors,
        csv_path,
        summary_path,
    })
}

/// `<field>: rows=N failed=F min_margin=M (<quantity> at x=X)`.
pub fn summarize_field<T: Real>(name: &str, rows: &[BoundReport<T>]) -> String {
    let failed = rows.iter().filter(|r| !r.pass).count();
    match rows
        .iter()
        .min_by(|a, b| a.margin.partial_cmp(&b.margin).unwrap_or(std::cmp::Ordering::Equal))
    {
        Some(worst) => format!(
            "{name}: rows={} failed={failed} min_margin={} ({} at x={})",
            rows.len(),
            fmt_real(worst.margin),
            worst.quantity.tag(),
            fmt_real(worst.x)
        ),
        None => format!("{name}: rows=0"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::residue::kappa;

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_grid("1e2:1e6:10").unwrap(), vec![1e2, 1e3, 1e4, 1e5, 1e6]);
        assert_eq!(parse_grid("100,1000").unwrap(), vec![100.0, 1000.0]);
        assert_eq!(parse_grid("2:20:3").unwrap(), vec![2.0, 6.0, 18.0]);
        assert!(parse_grid("1000,100").is_err());
        assert!(parse_grid("1:100:10").is_err());
        assert!(parse_grid("10:100:1").is_err());
        assert!(parse_grid("a,b").is_err());
        assert_eq!(default_grid(), vec![1e2, 1e3, 1e4, 1e5, 1e6, 1e7]);
    }

    #[test]
    fn pass_respects_tolerance() {
        let r = BoundReport::new("K", Quantity::B, 10.0_f64, -1.05, 1.0, 0.1, 0);
        assert!(r.pass);
        assert!((r.margin + 0.05).abs() < 1e-15);
        let r = BoundReport::new("K", Quantity::A, 10.0, -1.05, 1.0, 0.0, 0);
        assert!(!r.pass);
    }

    #[test]
    fn csv_row_format() {
        let r = BoundReport::new("poly[1,0,1]", Quantity::Pit, 100.0, -4.0, 15.0, 0.0, 3);
        assert_eq!(
            r.csv_row(),
            "\"poly[1,0,1]\",PIT,1.0000000000000000e2,-4.0000000000000000e0,\
             1.5000000000000000e1,1.1000000000000000e1,true,3"
        );
    }

    #[test]
    fn rational_rows_and_c_bound() {
        let q = FieldSpec::rational();
        let k = kappa::<f64>(&q, None).unwrap();
        let rows = verify_field(&q, &k, &[100.0, 1000.0], &VerifyOptions::default()).unwrap();
        assert_eq!(rows.len(), 11);
        assert!(rows.iter().all(|r| r.pass), "{rows:#?}");
        for r in rows.iter().filter(|r| r.quantity == Quantity::C) {
            let b = BoundInputs::new(r.x, 0.0, 1);
            let (e, _) = e_and_c_bounds(&b, &BoundConstants::STATED);
            assert_eq!(r.bound, e * e.exp());
        }
        let m = rows.last().unwrap();
        assert_eq!(m.quantity, Quantity::MInterval);
        assert_eq!(m.x, 1e4);
    }

    #[test]
    fn grid_ceiling_enforced() {
        let q = FieldSpec::rational();
        let k = kappa::<f64>(&q, None).unwrap();
        let opts = VerifyOptions {
            ceiling: 1e5,
            ..VerifyOptions::default()
        };
        assert!(matches!(
            verify_field(&q, &k, &[1e6], &opts),
            Err(Error::Resource { .. })
        ));
    }

    #[test]
    fn summary_path_naming() {
        assert_eq!(
            summary_path_for(Path::new("/tmp/out.csv")),
            PathBuf::from("/tmp/out.csv.summary.txt")
        );
    }
}
