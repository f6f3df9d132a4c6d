//! Run records and their JSON / CSV encodings.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

pub const SCHEMA_VERSION: &str = "1";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// A parameter value: integer, real or text.
#[derive(Debug, Clone, PartialEq)]
pub enum Param {
    Int(u64),
    Real(f64),
    Text(String),
}

impl From<usize> for Param {
    fn from(v: usize) -> Self {
        Param::Int(v as u64)
    }
}

impl From<u64> for Param {
    fn from(v: u64) -> Self {
        Param::Int(v)
    }
}

impl From<f64> for Param {
    fn from(v: f64) -> Self {
        Param::Real(v)
    }
}

impl From<&str> for Param {
    fn from(v: &str) -> Self {
        Param::Text(v.to_string())
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Param::Int(v) => write!(f, "{v}"),
            Param::Real(v) => f.write_str(&format_real(*v)),
            Param::Text(s) => f.write_str(s),
        }
    }
}

/// Scientific notation with 17 significant digits, which round-trips every
/// finite `f64`.
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn raw_real(x: f64) -> Result<Box<RawValue>, serde_json::Error> {
    if !x.is_finite() {
        return Err(serde::ser::Error::custom(format!("non-finite number {x}")));
    }
    RawValue::from_string(format_real(x))
}

struct Real(f64);

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        raw_real(self.0).map_err(serde::ser::Error::custom)?.serialize(s)
    }
}

impl Serialize for Param {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Param::Int(v) => s.serialize_u64(*v),
            Param::Real(v) => Real(*v).serialize(s),
            Param::Text(t) => s.serialize_str(t),
        }
    }
}

impl<'de> Deserialize<'de> for Param {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct ParamVisitor;
        impl Visitor<'_> for ParamVisitor {
            type Value = Param;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number or a string")
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Param, E> {
                Ok(Param::Int(v))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Param, E> {
                u64::try_from(v).map(Param::Int).map_err(|_| E::custom("negative integer parameter"))
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Param, E> {
                Ok(Param::Real(v))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Param, E> {
                Ok(Param::Text(v.to_string()))
            }
        }
        d.deserialize_any(ParamVisitor)
    }
}

fn serialize_results<S: Serializer>(map: &BTreeMap<String, f64>, s: S) -> Result<S::Ok, S::Error> {
    let mut m = s.serialize_map(Some(map.len()))?;
    for (k, v) in map {
        m.serialize_entry(k, &Real(*v))?;
    }
    m.end()
}

fn serialize_real<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    Real(*x).serialize(s)
}

/// One CLI run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentRecord {
    pub schema_version: String,
    pub task: String,
    pub params: BTreeMap<String, Param>,
    #[serde(serialize_with = "serialize_results")]
    pub results: BTreeMap<String, f64>,
    pub seed: u64,
    #[serde(serialize_with = "serialize_real")]
    pub elapsed_ms: f64,
    pub tool_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl ExperimentRecord {
    pub fn new(task: &str, seed: u64) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            task: task.to_string(),
            params: BTreeMap::new(),
            results: BTreeMap::new(),
            seed,
            elapsed_ms: 0.0,
            tool_version: TOOL_VERSION.to_string(),
            error: None,
        }
    }

    pub fn param(&mut self, key: &str, value: impl Into<Param>) {
        self.params.insert(key.to_string(), value.into());
    }

    pub fn result(&mut self, key: &str, value: f64) {
        self.results.insert(key.to_string(), value);
    }

    /// Names of results that are NaN or infinite.
    pub fn non_finite(&self) -> Vec<&str> {
        self.results.iter().filter(|(_, v)| !v.is_finite()).map(|(k, _)| k.as_str()).collect()
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }

    /// Header line and one data line with flattened dotted keys.
    pub fn to_csv(&self) -> String {
        let mut header = vec!["schema_version".to_string(), "task".to_string()];
        let mut row = vec![self.schema_version.clone(), self.task.clone()];
        for (k, v) in &self.params {
            header.push(format!("params.{k}"));
            row.push(v.to_string());
        }
        for (k, v) in &self.results {
            header.push(format!("results.{k}"));
            row.push(format_real(*v));
        }
        header.extend(["seed", "elapsed_ms", "tool_version", "error"].map(String::from));
        row.push(self.seed.to_string());
        row.push(format_real(self.elapsed_ms));
        row.push(self.tool_version.clone());
        row.push(self.error.clone().unwrap_or_default());
        let line = |cells: Vec<String>| cells.into_iter().map(|c| csv_cell(&c)).collect::<Vec<_>>().join(",");
        format!("{}\n{}\n", line(header), line(row))
    }
}

fn csv_cell(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ExperimentRecord {
        let mut r = ExperimentRecord::new("estimate", 7);
        r.param("n", 3usize);
        r.param("tol", 1e-10);
        r.param("case", "known");
        r.result("closed", 2.0 / 3.0);
        r.result("tiny", 1e-300);
        r.elapsed_ms = 1.25;
        r
    }

    #[test]
    fn json_round_trips() {
        let r = sample();
        let back: ExperimentRecord = serde_json::from_str(&r.to_json().unwrap()).unwrap();
        assert_eq!(back, r);
        let mut failed = r.clone();
        failed.error = Some("boom".into());
        let back: ExperimentRecord = serde_json::from_str(&failed.to_json().unwrap()).unwrap();
        assert_eq!(back, failed);
    }

    #[test]
    fn reals_use_seventeen_digits() {
        let json = sample().to_json().unwrap();
        assert!(json.contains("6.6666666666666663e-1"), "{json}");
        for x in [0.1, 1.0 / 3.0, std::f64::consts::PI, 5e-324, f64::MAX, -2.5e-7] {
            let s = format_real(x);
            assert_eq!(s.split('e').next().unwrap().replace(['-', '.'], "").len(), 17);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
    }

    #[test]
    fn non_finite_results_fail_to_serialize() {
        let mut r = sample();
        r.result("bad", f64::NAN);
        assert_eq!(r.non_finite(), vec!["bad"]);
        assert!(r.to_json().is_err());
    }

    #[test]
    fn csv_layout() {
        let csv = sample().to_csv();
        let mut lines = csv.lines();
        let header = lines.next().unwrap();
        assert!(header.starts_with("schema_version,task,"));
        assert!(header.contains("params.n,params.tol"));
        assert!(header.contains("results.closed"));
        let row = lines.next().unwrap();
        assert_eq!(header.split(',').count(), row.split(',').count());
        assert!(lines.next().is_none());
        assert_eq!(csv_cell("a,b"), "\"a,b\"");
    }
}
