//! Field catalog files: one field per line as `key=value` pairs.
//!
//! ```text
//! kind=rational
//! kind=quadratic d=-1 label="Q(i)"
//! kind=cyclotomic m=5
//! kind=monogenic poly=1,0,0,-2 disc=-108 kappa=0.6 kappa_error=1e-6
//! ```
//!
//! `poly` lists coefficients from the leading term down. `label` is
//! optional; `kappa`, `kappa_error` and `kappa_source` supply a residue for
//! fields whose residue is not computed internally.

use std::path::Path;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::records::{parse_records, Record};
use crate::residue::SuppliedResidue;

#[derive(Clone, Debug, PartialEq)]
pub struct CatalogEntry {
    pub line: usize,
    pub field: FieldSpec,
    pub residue: Option<SuppliedResidue>,
}

#[derive(Debug, Default)]
pub struct Catalog {
    pub entries: Vec<CatalogEntry>,
    /// Records that failed to parse; the remaining entries are still usable.
    pub errors: Vec<Error>,
}

impl Catalog {
    pub fn parse(text: &str) -> Self {
        let mut catalog = Self::default();
        for rec in parse_records(text) {
            match rec.and_then(|r| entry_from_record(&r)) {
                Ok(entry) => catalog.entries.push(entry),
                Err(e) => catalog.errors.push(e),
            }
        }
        catalog
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Ok(Self::parse(&std::fs::read_to_string(path)?))
    }
}

fn entry_from_record(rec: &Record) -> Result<CatalogEntry> {
    let wrap = |e: Error| match e {
        Error::Parse { .. } => e,
        other => rec.error(other.to_string()),
    };
    let field = match rec.require("kind")? {
        "rational" => FieldSpec::rational(),
        "quadratic" => {
            let d = rec
                .parse_value::<i64>("d")?
                .ok_or_else(|| rec.error("missing key `d`"))?;
            FieldSpec::quadratic(d).map_err(wrap)?
        }
        "cyclotomic" => {
            let m = rec
                .parse_value::<u64>("m")?
                .ok_or_else(|| rec.error("missing key `m`"))?;
            FieldSpec::cyclotomic(m).map_err(wrap)?
        }
        "monogenic" => {
            let mut coeffs = rec
                .require("poly")?
                .split(',')
                .map(|c| c.trim().parse::<i64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| rec.error("cannot parse `poly` coefficients"))?;
            coeffs.reverse();
            let disc: BigInt = rec
                .parse_value("disc")?
                .ok_or_else(|| rec.error("missing key `disc`"))?;
            FieldSpec::monogenic(coeffs, disc).map_err(wrap)?
        }
        other => return Err(rec.error(format!("unknown field kind `{other}`"))),
    };
    let field = match rec.get("label") {
        Some(label) => field.with_label(label),
        None => field,
    };
    let residue = match rec.parse_value::<f64>("kappa")? {
        Some(kappa) => Some(SuppliedResidue {
            kappa,
            error: rec.parse_value("kappa_error")?.unwrap_or(0.0),
            source: rec.get("kappa_source").map(str::to_string),
        }),
        None => None,
    };
    Ok(CatalogEntry {
        line: rec.line,
        field,
        residue,
    })
}
