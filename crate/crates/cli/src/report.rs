//! Tabular reports and their CSV / JSON renderings.
//!
//! Every numeric column appears twice in CSV: a rounded display column and a
//! `_full` column holding the shortest string that round-trips the `f64`.
//! JSON carries only the full values.

use serde_json::{json, Map, Value};

use crate::args::Format;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    /// Unsharpness-like quantity, 4 decimals.
    Eta,
    /// Inequality value, 2 decimals.
    Score,
    /// Generic real, 6 decimals.
    Real,
    /// Tiny residuals, scientific notation.
    Sci,
    Int,
    Text,
    Flag,
}

impl Kind {
    fn is_real(self) -> bool {
        matches!(self, Kind::Eta | Kind::Score | Kind::Real | Kind::Sci)
    }

    fn display(self, x: f64) -> String {
        match self {
            Kind::Eta => format!("{x:.4}"),
            Kind::Score => format!("{x:.2}"),
            Kind::Sci => format!("{x:.3e}"),
            _ => format!("{x:.6}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Real(f64),
    Int(u64),
    Text(String),
    Flag(bool),
    Missing,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Real(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Missing, Cell::Real)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as u64)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Flag(x)
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_owned())
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    columns: Vec<(&'static str, Kind)>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[(&'static str, Kind)]) -> Self {
        Self { columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    fn check_finite(&self) -> Result<(), CliError> {
        for row in &self.rows {
            for ((name, _), cell) in self.columns.iter().zip(row) {
                if let Cell::Real(x) = cell {
                    if !x.is_finite() {
                        return Err(CliError::new("non_finite", format!("column {name} holds {x}")));
                    }
                }
            }
        }
        Ok(())
    }

    fn json_rows(&self) -> Vec<Value> {
        self.rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for ((name, _), cell) in self.columns.iter().zip(row) {
                    let v = match cell {
                        Cell::Real(x) => json!(x),
                        Cell::Int(i) => json!(i),
                        Cell::Text(s) => json!(s),
                        Cell::Flag(b) => json!(b),
                        Cell::Missing => Value::Null,
                    };
                    obj.insert((*name).to_owned(), v);
                }
                Value::Object(obj)
            })
            .collect()
    }

    fn write_csv(&self, out: &mut Vec<u8>) -> Result<(), CliError> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = Vec::new();
        for (name, kind) in &self.columns {
            header.push((*name).to_owned());
            if kind.is_real() {
                header.push(format!("{name}_full"));
            }
        }
        w.write_record(&header).map_err(CliError::csv)?;
        for row in &self.rows {
            let mut rec = Vec::new();
            for ((_, kind), cell) in self.columns.iter().zip(row) {
                match cell {
                    Cell::Real(x) if kind.is_real() => {
                        rec.push(kind.display(*x));
                        rec.push(format!("{x}"));
                    }
                    Cell::Real(x) => rec.push(format!("{x}")),
                    Cell::Int(i) => rec.push(i.to_string()),
                    Cell::Text(s) => rec.push(s.clone()),
                    Cell::Flag(b) => rec.push(b.to_string()),
                    Cell::Missing => {
                        rec.push(String::new());
                        if kind.is_real() {
                            rec.push(String::new());
                        }
                    }
                }
            }
            w.write_record(&rec).map_err(CliError::csv)?;
        }
        w.flush().map_err(|e| CliError::new("io", e.to_string()))?;
        Ok(())
    }
}

/// Envelope around one command's output.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub seed: Option<u64>,
    pub timestamp: Option<u64>,
    /// Echo of the resolved configuration, in insertion order.
    pub config: Vec<(&'static str, Value)>,
    pub table: Table,
    /// Full report structure for JSON consumers, when richer than the rows.
    pub detail: Option<Value>,
}

impl Report {
    pub fn new(command: &'static str, table: Table) -> Self {
        Self { command, seed: None, timestamp: None, config: Vec::new(), table, detail: None }
    }

    pub fn with(mut self, key: &'static str, value: impl Into<Value>) -> Self {
        self.config.push((key, value.into()));
        self
    }

    pub fn seeded(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn detail(mut self, detail: Value) -> Self {
        self.detail = Some(detail);
        self
    }

    pub fn render(&self, format: Format) -> Result<Vec<u8>, CliError> {
        self.table.check_finite()?;
        match format {
            Format::Json => self.render_json(),
            Format::Csv => self.render_csv(),
        }
    }

    fn render_json(&self) -> Result<Vec<u8>, CliError> {
        let config: Map<String, Value> = self.config.iter().map(|(k, v)| ((*k).to_owned(), v.clone())).collect();
        let mut payload = Map::new();
        payload.insert("rows".into(), Value::Array(self.table.json_rows()));
        if let Some(d) = &self.detail {
            payload.insert("detail".into(), d.clone());
        }
        let doc = json!({
            "tool": "qpl",
            "tool_version": env!("CARGO_PKG_VERSION"),
            "timestamp": self.timestamp,
            "command": self.command,
            "seed": self.seed,
            "config": config,
            "payload": payload,
        });
        let mut out = serde_json::to_vec_pretty(&doc).map_err(|e| CliError::new("serialize", e.to_string()))?;
        out.push(b'\n');
        Ok(out)
    }

    fn render_csv(&self) -> Result<Vec<u8>, CliError> {
        let mut out = Vec::new();
        let mut comment = |k: &str, v: String| out.extend_from_slice(format!("# {k}={v}\n").as_bytes());
        comment("tool", format!("qpl {}", env!("CARGO_PKG_VERSION")));
        comment("command", self.command.to_owned());
        if let Some(seed) = self.seed {
            comment("seed", seed.to_string());
        }
        if let Some(ts) = self.timestamp {
            comment("timestamp", ts.to_string());
        }
        for (k, v) in &self.config {
            let text = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            comment(k, text);
        }
        self.table.write_csv(&mut out)?;
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut t = Table::new(&[("n", Kind::Int), ("eta", Kind::Eta), ("s", Kind::Score), ("note", Kind::Text)]);
        t.push(vec![3usize.into(), (2.0f64 / 3.0).into(), 1.5.into(), "a,b".into()]);
        t.push(vec![4usize.into(), Cell::Missing, 2.8284271247461903.into(), "x".into()]);
        Report::new("demo", t).with("n", "3,4").seeded(7)
    }

    #[test]
    fn csv_has_display_and_full_columns() {
        let text = String::from_utf8(sample().render(Format::Csv).unwrap()).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# tool=qpl 0.1.0");
        assert_eq!(lines[2], "# seed=7");
        assert_eq!(lines[4], "n,eta,eta_full,s,s_full,note");
        assert_eq!(lines[5], "3,0.6667,0.6666666666666666,1.50,1.5,\"a,b\"");
        assert_eq!(lines[6], "4,,,2.83,2.8284271247461903,x");
    }

    #[test]
    fn json_round_trips_values() {
        let v: Value = serde_json::from_slice(&sample().render(Format::Json).unwrap()).unwrap();
        assert_eq!(v["seed"], 7);
        assert_eq!(v["timestamp"], Value::Null);
        assert_eq!(v["payload"]["rows"][0]["eta"].as_f64().unwrap(), 2.0 / 3.0);
        assert_eq!(v["payload"]["rows"][1]["eta"], Value::Null);
    }

    #[test]
    fn non_finite_is_rejected() {
        let mut t = Table::new(&[("x", Kind::Real)]);
        t.push(vec![f64::NAN.into()]);
        let err = Report::new("demo", t).render(Format::Json).unwrap_err();
        assert_eq!(err.kind, "non_finite");
    }
}
