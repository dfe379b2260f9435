use serde::{Deserialize, Serialize};
use std::io::Write;

use super::records::CriticalValueRecord;
use crate::error::{Error, Result};

pub const CATALOG_SCHEMA: &str = "convsq.catalog";
pub const CATALOG_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogDocument {
    pub schema: String,
    pub schema_version: u32,
    pub records: Vec<CriticalValueRecord>,
}

impl CatalogDocument {
    pub fn new(records: Vec<CriticalValueRecord>) -> Self {
        Self { schema: CATALOG_SCHEMA.into(), schema_version: CATALOG_SCHEMA_VERSION, records }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Rejects documents with another schema name or a newer version.
    pub fn from_json(src: &str) -> Result<Self> {
        let doc: Self = serde_json::from_str(src).map_err(|e| Error::Parse(e.to_string()))?;
        if doc.schema != CATALOG_SCHEMA || doc.schema_version > CATALOG_SCHEMA_VERSION {
            return Err(Error::Parse(format!("unsupported catalog schema {} v{}", doc.schema, doc.schema_version)));
        }
        Ok(doc)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub d: u64,
    pub lambda_re: f64,
    pub lambda_im: f64,
    pub value: String,
    pub classes: String,
    pub construction: String,
    pub source: String,
    pub status: String,
}

/// One row per value; algebraic records expand into all their roots.
pub fn csv_rows(records: &[CriticalValueRecord]) -> Result<Vec<CsvRow>> {
    let mut rows = Vec::new();
    for r in records {
        let source = serde_json::to_value(r.source).map_err(|e| Error::Parse(e.to_string()))?;
        for l in r.lambdas()? {
            rows.push(CsvRow {
                d: r.modulus,
                lambda_re: l.re,
                lambda_im: l.im,
                value: r.value_label(),
                classes: r.class_label(),
                construction: r.construction.label().into(),
                source: source.as_str().unwrap_or_default().into(),
                status: r.cached_status.label().into(),
            });
        }
    }
    Ok(rows)
}

pub fn write_csv<W: Write>(records: &[CriticalValueRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in csv_rows(records)? {
        w.serialize(row).map_err(|e| Error::Parse(e.to_string()))?;
    }
    w.flush().map_err(|e| Error::Parse(e.to_string()))
}
