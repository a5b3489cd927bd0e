//! Row serialization for experiments: CSV (header + one record per row) and
//! JSON (array of row objects), plus the run metadata that makes every row
//! reproducible: parameter echo, seed, generator description, crate version,
//! and precision mode.

use serde::Serialize;

use crate::error::{Error, Result};

/// Human-readable description of the generator behind every sampler:
/// one independent stream per trial, so trial `k` of a batch is
/// reproducible in isolation.
pub const RNG_DESCRIPTION: &str = "ChaCha8 (rand_chacha 0.3), seed_from_u64(seed), set_stream(trial+1)";

/// Crate version baked into output metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Output format selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::InvalidParam(format!("unknown format '{other}' (csv|json)"))),
        }
    }
}

/// Arithmetic mode a row was computed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Precision {
    Exact,
    Float,
}

/// Metadata attached to every run so rows are bit-reproducible.
#[derive(Debug, Clone, Serialize)]
pub struct RunMeta {
    pub version: &'static str,
    pub rng: &'static str,
    pub precision: Precision,
    pub seed: Option<u64>,
}

impl RunMeta {
    pub fn new(precision: Precision, seed: Option<u64>) -> Self {
        RunMeta { version: VERSION, rng: RNG_DESCRIPTION, precision, seed }
    }
}

/// A row together with its run metadata, flattened so both CSV and JSON
/// carry the full echo.
#[derive(Debug, Clone, Serialize)]
pub struct MetaRow<T: Serialize> {
    #[serde(flatten)]
    pub row: T,
    pub version: &'static str,
    pub rng: &'static str,
    pub precision: Precision,
    pub seed: Option<u64>,
}

/// Attach metadata to each row.
pub fn with_meta<T: Serialize>(rows: Vec<T>, meta: &RunMeta) -> Vec<MetaRow<T>> {
    rows.into_iter()
        .map(|row| MetaRow {
            row,
            version: meta.version,
            rng: meta.rng,
            precision: meta.precision,
            seed: meta.seed,
        })
        .collect()
}

/// Write rows in the requested format. CSV gets a header row derived from
/// the field names; JSON is a pretty-printed array of row objects.
pub fn write_rows<T: Serialize, W: std::io::Write>(
    rows: &[T],
    format: Format,
    out: &mut W,
) -> Result<()> {
    match format {
        Format::Json => {
            let text = serde_json::to_string_pretty(rows)
                .map_err(|e| Error::InvalidParam(format!("json serialization: {e}")))?;
            writeln!(out, "{text}")?;
        }
        Format::Csv => {
            // CSV needs flat records; serde_json::Value flattening keeps
            // nested structs (e.g. breakdown vectors) as JSON-encoded cells
            let values: Vec<serde_json::Value> = rows
                .iter()
                .map(|r| {
                    serde_json::to_value(r)
                        .map_err(|e| Error::InvalidParam(format!("csv serialization: {e}")))
                })
                .collect::<Result<_>>()?;
            let mut keys: Vec<String> = Vec::new();
            for v in &values {
                if let serde_json::Value::Object(map) = v {
                    for k in map.keys() {
                        if !keys.contains(k) {
                            keys.push(k.clone());
                        }
                    }
                } else {
                    return Err(Error::InvalidParam(
                        "csv rows must serialize to objects".into(),
                    ));
                }
            }
            let mut w = csv::Writer::from_writer(out);
            w.write_record(&keys)?;
            for v in &values {
                let map = v.as_object().unwrap();
                let record: Vec<String> = keys
                    .iter()
                    .map(|k| match map.get(k) {
                        None | Some(serde_json::Value::Null) => String::new(),
                        Some(serde_json::Value::String(s)) => s.clone(),
                        Some(other) => other.to_string(),
                    })
                    .collect();
                w.write_record(&record)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

/// Render rows to a `String` (convenience for tests and the CLI).
pub fn render_rows<T: Serialize>(rows: &[T], format: Format) -> Result<String> {
    let mut buf = Vec::new();
    write_rows(rows, format, &mut buf)?;
    String::from_utf8(buf).map_err(|e| Error::InvalidParam(format!("non-utf8 output: {e}")))
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::InvalidParam(format!("csv: {e}"))
    }
}
