use std::collections::BTreeMap;
use std::io::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{Map, Value};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// One table cell. Exact values are strings so they survive any reader.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Exact(String),
    Decimal(f64),
    Text(String),
    Flag(bool),
    Int(u64),
    Empty,
}

impl Cell {
    pub fn int(v: &BigInt) -> Cell {
        Cell::Exact(v.to_string())
    }

    /// `num/den`, or just `num` for integers.
    pub fn rational(v: &BigRational) -> Cell {
        Cell::Exact(render_rational(v))
    }

    pub fn text(v: impl ToString) -> Cell {
        Cell::Text(v.to_string())
    }

    fn csv(&self) -> String {
        match self {
            Cell::Exact(s) | Cell::Text(s) => s.clone(),
            Cell::Decimal(v) => render_decimal(*v),
            Cell::Flag(b) => b.to_string(),
            Cell::Int(v) => v.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Exact(s) | Cell::Text(s) => Value::String(s.clone()),
            Cell::Decimal(v) if v.is_finite() => Value::from(*v),
            Cell::Decimal(v) => Value::String(render_decimal(*v)),
            Cell::Flag(b) => Value::Bool(*b),
            Cell::Int(v) => Value::from(*v),
            Cell::Empty => Value::Null,
        }
    }
}

pub fn render_rational(v: &BigRational) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// Shortest round-trip form; infinities print as `inf` / `-inf`.
pub fn render_decimal(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:?}")
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Metadata {
    pub rng_algorithm: Option<String>,
    pub seed: Option<u64>,
    pub tolerances: BTreeMap<String, f64>,
    pub timing: Timing,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Timing {
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone)]
pub struct OutputRecord {
    pub command: String,
    pub parameters: Vec<(String, Value)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// JSON-only extras such as run-level summaries.
    pub summary: Vec<(String, Value)>,
    pub metadata: Metadata,
}

impl OutputRecord {
    pub fn new(command: &str, columns: &[&str]) -> Self {
        OutputRecord {
            command: command.into(),
            parameters: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            summary: Vec::new(),
            metadata: Metadata::default(),
        }
    }

    pub fn with_columns(command: &str, columns: Vec<String>) -> Self {
        let mut r = OutputRecord::new(command, &[]);
        r.columns = columns;
        r
    }

    pub fn param(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.parameters.push((key.into(), value.into()));
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn tolerance(&mut self, key: &str, value: f64) {
        self.metadata.tolerances.insert(key.into(), value);
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, &self.to_json())?;
                writeln!(out)
            }
        }
    }

    fn write_csv(&self, out: &mut dyn Write) -> std::io::Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .quote_style(csv::QuoteStyle::Necessary)
            .from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv))?;
        }
        w.flush()
    }

    pub fn to_json(&self) -> Value {
        let mut root = Map::new();
        root.insert("schema_version".into(), SCHEMA_VERSION.into());
        root.insert("command".into(), self.command.clone().into());
        root.insert("parameters".into(), Value::Object(self.parameters.iter().cloned().collect()));
        root.insert("columns".into(), self.columns.clone().into());
        let rows = self
            .rows
            .iter()
            .map(|row| {
                Value::Object(
                    self.columns
                        .iter()
                        .cloned()
                        .zip(row.iter().map(Cell::json))
                        .collect(),
                )
            })
            .collect();
        root.insert("rows".into(), Value::Array(rows));
        if !self.summary.is_empty() {
            root.insert("summary".into(), Value::Object(self.summary.iter().cloned().collect()));
        }
        root.insert(
            "metadata".into(),
            serde_json::to_value(&self.metadata).expect("metadata serializes"),
        );
        Value::Object(root)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_render_reduced() {
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(render_rational(&r(66, 2)), "33");
        assert_eq!(render_rational(&r(9, 45)), "1/5");
        assert_eq!(render_rational(&r(-3, 6)), "-1/2");
    }

    #[test]
    fn decimals_round_trip() {
        for v in [0.1, 1.0 / 3.0, 1e-300, 2.0] {
            assert_eq!(render_decimal(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(render_decimal(f64::INFINITY), "inf");
    }

    #[test]
    fn csv_layout() {
        let mut rec = OutputRecord::new("t", &["a", "b"]);
        rec.push(vec![Cell::Exact("1".into()), Cell::Empty]);
        let mut buf = Vec::new();
        rec.write(Format::Csv, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "a,b\n1,\n");
    }

    #[test]
    fn json_keeps_column_order() {
        let mut rec = OutputRecord::new("t", &["z", "a"]);
        rec.push(vec![Cell::Decimal(f64::INFINITY), Cell::Flag(true)]);
        let v = rec.to_json();
        assert_eq!(v["schema_version"], "1");
        assert_eq!(v["rows"][0]["z"], "inf");
        let keys: Vec<_> = v["rows"][0].as_object().unwrap().keys().cloned().collect();
        assert_eq!(keys, ["z", "a"]);
    }
}
