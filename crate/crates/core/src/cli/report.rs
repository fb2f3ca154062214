use std::collections::BTreeMap;
use std::time::Duration;

use num_bigint::BigInt;
use serde::ser::{Serialize, SerializeStruct, Serializer};
use serde_json::json;

/// A CSV/JSON cell. Integers and floats are written as text so that no
/// precision is lost and the byte layout never depends on the serializer.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(BigInt),
    Float(f64),
    Text(String),
    Bool(bool),
    Empty,
}

impl Cell {
    pub fn int(v: impl Into<BigInt>) -> Self {
        Cell::Int(v.into())
    }

    pub fn text(v: impl Into<String>) -> Self {
        Cell::Text(v.into())
    }

    pub fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format_float(*v),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Cell::Bool(b) => s.serialize_bool(*b),
            Cell::Empty => s.serialize_none(),
            other => s.serialize_str(&other.render()),
        }
    }
}

/// 17 significant digits, lowercase exponent: `2.6084743001221455e-1`.
pub fn format_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string().to_lowercase()
    }
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), passed, detail: detail.into() }
    }
}

/// Result of one subcommand. The wall time is kept for the diagnostic
/// stream only and never serialized.
#[derive(Clone, Debug, PartialEq)]
pub struct RunReport {
    pub command: String,
    pub params: BTreeMap<String, String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub checks: Vec<Check>,
    pub wall_time: Duration,
}

impl RunReport {
    pub fn new(command: impl Into<String>, columns: &[&str]) -> Self {
        Self {
            command: command.into(),
            params: BTreeMap::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            checks: Vec::new(),
            wall_time: Duration::ZERO,
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn row(&mut self, cells: Vec<Cell>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check::new(name, passed, detail));
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r.iter().map(Cell::render)).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells")
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => self.to_json(),
        }
    }
}

impl Serialize for RunReport {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|r| {
                let obj: serde_json::Map<String, serde_json::Value> = self
                    .columns
                    .iter()
                    .zip(r)
                    .map(|(c, v)| (c.clone(), serde_json::to_value(v).expect("cell")))
                    .collect();
                json!(obj)
            })
            .collect();
        let mut st = s.serialize_struct("RunReport", 6)?;
        st.serialize_field("command", &self.command)?;
        st.serialize_field("params", &self.params)?;
        st.serialize_field("columns", &self.columns)?;
        st.serialize_field("rows", &rows)?;
        st.serialize_field("checks", &self.checks)?;
        st.serialize_field("passed", &self.passed())?;
        st.end()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format() {
        assert_eq!(format_float(0.260_847_430_012_214_55), "2.6084743001221455e-1");
        assert_eq!(format_float(1.0), "1.0000000000000000e0");
        assert_eq!(format_float(-1.5 * 2f64.powi(100)), "-1.9014759003423441e30");
        assert_eq!(format_float(f64::NAN), "nan");
    }

    #[test]
    fn csv_and_json() {
        let mut r = RunReport::new("table --stat p --n-max 1", &["n", "value"]);
        r.row(vec![Cell::int(0), Cell::int(1)]);
        r.row(vec![Cell::int(1), Cell::Float(0.5)]);
        r.param("z", 1).param("a", "x");
        r.check("ok", true, "");
        assert_eq!(r.to_csv(), "n,value\n0,1\n1,5.0000000000000000e-1\n");
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["rows"][1]["value"], "5.0000000000000000e-1");
        assert_eq!(v["passed"], true);
        let keys: Vec<&String> = v["params"].as_object().unwrap().keys().collect();
        assert_eq!(keys, ["a", "z"]);
    }
}
