//! Tabular results with JSON and CSV encodings.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::SCHEMA_VERSION;

/// A cell value: integers stay exact, reals are written so they round-trip.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Int(u64),
    Real(f64),
}

impl Value {
    pub fn as_f64(&self) -> f64 {
        match *self {
            Value::Int(v) => v as f64,
            Value::Real(v) => v,
        }
    }

    fn to_csv_field(self) -> String {
        match self {
            Value::Int(v) => v.to_string(),
            Value::Real(v) => format!("{v:?}"),
        }
    }

    fn parse(s: &str) -> Result<Self> {
        if !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()) {
            return s.parse().map(Value::Int).map_err(|e| Error::Config(format!("bad integer {s:?}: {e}")));
        }
        s.parse().map(Value::Real).map_err(|e| Error::Config(format!("bad number {s:?}: {e}")))
    }
}

impl Display for Value {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_csv_field())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SumRow {
    pub name: String,
    pub keys: Vec<(String, String)>,
    pub value: Value,
    pub envelope: Option<f64>,
    /// value / envelope
    pub ratio: Option<f64>,
}

impl SumRow {
    pub fn int(name: impl Into<String>, v: u64) -> Self {
        SumRow { name: name.into(), keys: Vec::new(), value: Value::Int(v), envelope: None, ratio: None }
    }

    pub fn real(name: impl Into<String>, v: f64) -> Self {
        SumRow { name: name.into(), keys: Vec::new(), value: Value::Real(v), envelope: None, ratio: None }
    }

    pub fn key(mut self, k: impl Into<String>, v: impl Display) -> Self {
        self.keys.push((k.into(), v.to_string()));
        self
    }

    pub fn with_envelope(mut self, envelope: f64) -> Self {
        self.envelope = Some(envelope);
        self.ratio = Some(self.value.as_f64() / envelope);
        self
    }

    pub fn get_key(&self, k: &str) -> Option<&str> {
        self.keys.iter().find(|(kk, _)| kk == k).map(|(_, v)| v.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub version: String,
    pub params: BTreeMap<String, String>,
    /// seconds since the Unix epoch
    pub timestamp: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SumReport {
    pub label: String,
    pub rows: Vec<SumRow>,
    pub metadata: Metadata,
}

const CSV_HEADER: [&str; 6] = ["name", "keys", "value", "envelope", "ratio", "label"];

impl SumReport {
    pub fn new<K: Into<String>>(label: impl Into<String>, params: impl IntoIterator<Item = (K, String)>) -> Self {
        let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        SumReport {
            label: label.into(),
            rows: Vec::new(),
            metadata: Metadata {
                version: SCHEMA_VERSION.to_string(),
                params: params.into_iter().map(|(k, v)| (k.into(), v)).collect(),
                timestamp,
            },
        }
    }

    pub fn push(&mut self, row: SumRow) {
        self.rows.push(row);
    }

    pub fn row(&self, name: &str) -> Option<&SumRow> {
        self.rows.iter().find(|r| r.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Config(format!("invalid report JSON: {e}")))
    }

    /// One line per row; keys are packed as `k=v;k=v`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(CSV_HEADER).expect("in-memory write");
        for r in &self.rows {
            let keys = r.keys.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";");
            let opt = |v: Option<f64>| v.map(|x| format!("{x:?}")).unwrap_or_default();
            w.write_record([
                r.name.clone(),
                keys,
                r.value.to_csv_field(),
                opt(r.envelope),
                opt(r.ratio),
                self.label.clone(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
    }

    /// Parses rows written by [`SumReport::to_csv`]; metadata is not part of
    /// the CSV form and comes back empty.
    pub fn from_csv(s: &str) -> Result<Self> {
        let bad = |e: csv::Error| Error::Config(format!("invalid report CSV: {e}"));
        let mut rd = csv::Reader::from_reader(s.as_bytes());
        let header = rd.headers().map_err(bad)?.clone();
        if header.iter().ne(CSV_HEADER) {
            return Err(Error::Config(format!("unexpected CSV header {header:?}")));
        }
        let mut label = String::new();
        let mut rows = Vec::new();
        for rec in rd.records() {
            let rec = rec.map_err(bad)?;
            let keys = if rec[1].is_empty() {
                Vec::new()
            } else {
                rec[1]
                    .split(';')
                    .map(|kv| {
                        kv.split_once('=')
                            .map(|(k, v)| (k.to_string(), v.to_string()))
                            .ok_or_else(|| Error::Config(format!("bad key field {kv:?}")))
                    })
                    .collect::<Result<_>>()?
            };
            let opt = |s: &str| -> Result<Option<f64>> {
                if s.is_empty() {
                    Ok(None)
                } else {
                    s.parse().map(Some).map_err(|e| Error::Config(format!("bad number {s:?}: {e}")))
                }
            };
            label = rec[5].to_string();
            rows.push(SumRow {
                name: rec[0].to_string(),
                keys,
                value: Value::parse(&rec[2])?,
                envelope: opt(&rec[3])?,
                ratio: opt(&rec[4])?,
            });
        }
        Ok(SumReport {
            label,
            rows,
            metadata: Metadata { version: SCHEMA_VERSION.to_string(), params: BTreeMap::new(), timestamp: 0 },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample() -> SumReport {
        let mut r = SumReport::new("demo", [("x", "1000".to_string())]);
        r.push(SumRow::int("count", u64::MAX).key("k", 16));
        r.push(SumRow::real("ratio", 0.1 + 0.2).with_envelope(3.0).key("i", -1).key("j", 2));
        r.push(SumRow::real("whole", 2.0));
        r
    }

    #[test]
    fn json_round_trip() {
        let r = sample();
        assert_eq!(SumReport::from_json(&r.to_json()).unwrap(), r);
    }

    #[test]
    fn csv_round_trip_keeps_rows() {
        let r = sample();
        let csv = r.to_csv();
        assert!(csv.starts_with("name,keys,value,envelope,ratio,label\n"));
        assert!(!csv.contains('\r'));
        let back = SumReport::from_csv(&csv).unwrap();
        assert_eq!(back.rows, r.rows);
        assert_eq!(back.label, "demo");
        assert_eq!(back.rows[2].value, Value::Real(2.0));
    }

    #[test]
    fn rejects_foreign_csv() {
        assert!(SumReport::from_csv("a,b\n1,2\n").is_err());
    }

    proptest! {
        #[test]
        fn values_round_trip(i in any::<u64>(), f in any::<f64>().prop_filter("finite", |v| v.is_finite())) {
            let mut r = SumReport::new("p", Vec::<(&str, String)>::new());
            r.push(SumRow::int("i", i));
            r.push(SumRow::real("f", f));
            let back = SumReport::from_csv(&r.to_csv()).unwrap();
            prop_assert_eq!(&back.rows, &r.rows);
            let j = SumReport::from_json(&r.to_json()).unwrap();
            prop_assert_eq!(j.rows, r.rows);
        }
    }
}
