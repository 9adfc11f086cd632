//! Run records (JSON) and Padé existence tables (CSV).

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::constructive::Certificate;
use crate::error::{Error, Result};
use crate::pade::hankel_determinant;
use crate::series::{FormalPowerSeries, Polynomial, ToleranceConfig};

pub const SCHEMA: &str = "pade-universal/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub version: String,
    pub tolerances: ToleranceConfig,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

impl Environment {
    pub fn current(tolerances: ToleranceConfig) -> Self {
        let timestamp = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map_or(0, |d| d.as_secs());
        Self {
            version: env!("CARGO_PKG_VERSION").to_string(),
            tolerances,
            timestamp,
        }
    }
}

/// Everything needed to audit or re-verify one run. Unknown top-level fields
/// are kept in `extra` and written back unchanged.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub schema: String,
    pub scenario: Value,
    pub certificates: Vec<Certificate>,
    pub environment: Environment,
    #[serde(default)]
    pub tables: BTreeMap<String, String>,
    #[serde(default)]
    pub polynomials: BTreeMap<String, Polynomial>,
    #[serde(flatten)]
    pub extra: Map<String, Value>,
}

impl RunRecord {
    pub fn new(scenario: Value, certificates: Vec<Certificate>, environment: Environment) -> Self {
        Self {
            schema: SCHEMA.to_string(),
            scenario,
            certificates,
            environment,
            tables: BTreeMap::new(),
            polynomials: BTreeMap::new(),
            extra: Map::new(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text).map_err(|e| Error::Schema(format!("not valid JSON: {e}")))?;
        match value.get("schema").and_then(Value::as_str) {
            Some(SCHEMA) => {}
            Some(other) => {
                return Err(Error::Schema(format!(
                    "unsupported schema {other:?}, expected {SCHEMA:?}"
                )))
            }
            None => return Err(Error::Schema("missing schema field".into())),
        }
        serde_json::from_value(value).map_err(|e| Error::Schema(e.to_string()))
    }
}

pub fn save_run(record: &RunRecord, path: &Path) -> Result<()> {
    std::fs::write(path, record.to_json()?)?;
    Ok(())
}

pub fn load_run(path: &Path) -> Result<RunRecord> {
    RunRecord::from_json(&std::fs::read_to_string(path)?)
}

/// One cell of a Padé existence table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub p: usize,
    pub q: usize,
    pub det_re: f64,
    pub det_im: f64,
    pub det_abs: f64,
    pub exists: bool,
}

fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

/// `|D_{p,q}|` and existence for `0 <= p <= p_max`, `0 <= q <= q_max`, as
/// CSV with a header row and LF line endings.
pub fn emit_pade_table(f: &FormalPowerSeries, p_max: usize, q_max: usize, tol: &ToleranceConfig) -> Result<String> {
    f.require(p_max + q_max + 1)?;
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(["p", "q", "det_re", "det_im", "det_abs", "exists"])?;
    for q in 0..=q_max {
        for p in 0..=p_max {
            let r = hankel_determinant(f, p, q, tol)?;
            w.write_record([
                p.to_string(),
                q.to_string(),
                sci(r.value.re),
                sci(r.value.im),
                sci(r.value.norm()),
                r.nonvanishing.to_string(),
            ])?;
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    String::from_utf8(bytes).map_err(|e| Error::Schema(e.to_string()))
}

pub fn parse_pade_table(text: &str) -> Result<Vec<TableRow>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.deserialize().map(|row| row.map_err(Error::from)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_table() {
        let f = FormalPowerSeries::geometric(8).unwrap();
        let csv = emit_pade_table(&f, 2, 2, &ToleranceConfig::default()).unwrap();
        assert!(csv.starts_with("p,q,det_re,det_im,det_abs,exists\n"));
        assert!(!csv.contains('\r'));
        for row in parse_pade_table(&csv).unwrap() {
            let expected = row.q <= 1 || row.p == 0;
            assert_eq!(row.exists, expected, "{row:?}");
        }
    }

    #[test]
    fn truncation_is_checked() {
        let f = FormalPowerSeries::geometric(4).unwrap();
        assert!(matches!(
            emit_pade_table(&f, 2, 2, &ToleranceConfig::default()),
            Err(Error::TruncationExceeded { .. })
        ));
    }

    #[test]
    fn schema_checks() {
        assert!(matches!(RunRecord::from_json("{not json"), Err(Error::Schema(_))));
        assert!(matches!(
            RunRecord::from_json(r#"{"schema":"pade-universal/0"}"#),
            Err(Error::Schema(_))
        ));
    }
}
