use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

/// Outcome attached to every record.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// Reported value without a tolerance.
    Info,
    /// The computation itself failed.
    Error,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Pass => "pass",
            Self::Fail => "fail",
            Self::Info => "info",
            Self::Error => "error",
        }
    }

    pub fn from_check(ok: bool) -> Self {
        if ok {
            Self::Pass
        } else {
            Self::Fail
        }
    }
}

/// One row of study output.
#[derive(Clone, Debug, PartialEq)]
pub struct ResultRecord {
    pub study: String,
    pub quantity: String,
    pub params: Vec<(String, f64)>,
    pub value: f64,
    pub aux: Vec<(String, f64)>,
    pub verdict: Verdict,
    pub note: String,
    pub timestamp: i64,
    pub config_hash: String,
}

/// CSV header, in output order.
pub const CSV_COLUMNS: [&str; 9] = [
    "study",
    "quantity",
    "params",
    "value",
    "aux",
    "verdict",
    "note",
    "timestamp",
    "config_hash",
];

/// 17 significant digits, enough to round-trip any `f64`.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.16e}")
    }
}

fn format_pairs(pairs: &[(String, f64)]) -> String {
    pairs
        .iter()
        .map(|(k, v)| format!("{k}={}", format_float(*v)))
        .collect::<Vec<_>>()
        .join(";")
}

fn json_float(v: f64) -> Value {
    serde_json::Number::from_f64(v).map(Value::Number).unwrap_or(Value::Null)
}

fn json_pairs(pairs: &[(String, f64)]) -> Value {
    let mut m = Map::new();
    for (k, v) in pairs {
        m.insert(k.clone(), json_float(*v));
    }
    Value::Object(m)
}

impl ResultRecord {
    pub fn new(study: &str, quantity: &str, params: &[(&str, f64)], value: f64) -> Self {
        Self {
            study: study.into(),
            quantity: quantity.into(),
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            value,
            aux: Vec::new(),
            verdict: Verdict::Info,
            note: String::new(),
            timestamp: 0,
            config_hash: String::new(),
        }
    }

    pub fn failed(study: &str, quantity: &str, params: &[(&str, f64)], err: impl std::fmt::Display) -> Self {
        let mut r = Self::new(study, quantity, params, f64::NAN);
        r.verdict = Verdict::Error;
        r.note = err.to_string();
        r
    }

    pub fn with_aux(mut self, key: &str, v: f64) -> Self {
        self.aux.push((key.into(), v));
        self
    }

    pub fn with_verdict(mut self, v: Verdict) -> Self {
        self.verdict = v;
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    pub fn aux_value(&self, key: &str) -> Option<f64> {
        self.aux.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
    }

    pub fn param(&self, key: &str) -> Option<f64> {
        self.params.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
    }

    fn csv_row(&self) -> [String; 9] {
        [
            self.study.clone(),
            self.quantity.clone(),
            format_pairs(&self.params),
            format_float(self.value),
            format_pairs(&self.aux),
            self.verdict.as_str().into(),
            self.note.clone(),
            self.timestamp.to_string(),
            self.config_hash.clone(),
        ]
    }

    pub fn to_json(&self) -> Value {
        json!({
            "study": self.study,
            "quantity": self.quantity,
            "params": json_pairs(&self.params),
            "value": json_float(self.value),
            "aux": json_pairs(&self.aux),
            "verdict": self.verdict.as_str(),
            "note": self.note,
            "timestamp": self.timestamp,
            "config_hash": self.config_hash,
        })
    }
}

/// Deterministic order: study, quantity, then parameter values.
pub fn sort_records(records: &mut [ResultRecord]) {
    records.sort_by(|a, b| {
        a.study
            .cmp(&b.study)
            .then_with(|| a.quantity.cmp(&b.quantity))
            .then_with(|| {
                let ka: Vec<&String> = a.params.iter().map(|(k, _)| k).collect();
                let kb: Vec<&String> = b.params.iter().map(|(k, _)| k).collect();
                ka.cmp(&kb)
            })
            .then_with(|| {
                for ((_, x), (_, y)) in a.params.iter().zip(&b.params) {
                    let o = x.total_cmp(y);
                    if o.is_ne() {
                        return o;
                    }
                }
                a.params.len().cmp(&b.params.len())
            })
    });
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(&self) -> &'static str {
        match self {
            Self::Csv => "csv",
            Self::Json => "json",
        }
    }
}

pub fn to_csv_string(records: &[ResultRecord]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_COLUMNS).expect("in-memory write");
    for r in records {
        w.write_record(r.csv_row()).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("CSV is UTF-8")
}

pub fn to_json_string(records: &[ResultRecord]) -> String {
    let arr = Value::Array(records.iter().map(ResultRecord::to_json).collect());
    let mut s = serde_json::to_string_pretty(&arr).expect("JSON serialises");
    s.push('\n');
    s
}

/// Writes records to `path` in the given format.
pub fn emit(records: &[ResultRecord], format: OutputFormat, path: &Path) -> std::io::Result<()> {
    let text = match format {
        OutputFormat::Csv => to_csv_string(records),
        OutputFormat::Json => to_json_string(records),
    };
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    let mut f = std::fs::File::create(path)?;
    f.write_all(text.as_bytes())?;
    f.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_csv_is_header_only() {
        assert_eq!(to_csv_string(&[]), CSV_COLUMNS.join(",") + "\n");
        assert_eq!(to_json_string(&[]), "[]\n");
    }

    #[test]
    fn floats_round_trip() {
        for v in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, f64::MIN_POSITIVE] {
            assert_eq!(format_float(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn sorting_is_by_parameters() {
        let mut rs = vec![
            ResultRecord::new("a", "x", &[("n", 32.0)], 1.0),
            ResultRecord::new("a", "x", &[("n", 16.0)], 2.0),
        ];
        sort_records(&mut rs);
        assert_eq!(rs[0].param("n"), Some(16.0));
    }

    #[test]
    fn nan_becomes_null_in_json() {
        let r = ResultRecord::failed("a", "x", &[], "boom");
        assert_eq!(r.to_json()["value"], Value::Null);
        assert_eq!(r.verdict, Verdict::Error);
    }
}
