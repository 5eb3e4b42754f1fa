//! Report rendering. Angles carry 9 significant digits and probabilities 6.

use std::fmt::Write as _;

use serde_json::{Map, Value};

use dirbreak_core::{Direction, Space};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Text,
    Csv,
}

fn round_sig(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return 0.0_f64.max(x); // also folds −0 to 0
    }
    format!("{:.*e}", digits - 1, x)
        .parse()
        .expect("formatted float")
}

pub fn prob(x: f64) -> Value {
    Value::from(round_sig(x, 6))
}

/// A real parameter such as κ.
pub fn real(x: f64) -> Value {
    Value::from(round_sig(x, 9))
}

pub fn angle_value(x: f64, degrees: bool) -> Value {
    Value::from(round_sig(if degrees { x.to_degrees() } else { x }, 9))
}

/// An angle on the circle, a 3-vector on the sphere.
pub fn direction(d: &Direction, degrees: bool) -> Value {
    match d.space() {
        Space::Circle => angle_value(d.angle().unwrap(), degrees),
        Space::Sphere => Value::Array(
            d.vector()
                .iter()
                .map(|&c| Value::from(round_sig(c, 9)))
                .collect(),
        ),
    }
}

pub fn opt(v: Option<Value>) -> Value {
    v.unwrap_or(Value::Null)
}

#[derive(Debug, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

#[derive(Debug)]
pub struct Report {
    pub command: &'static str,
    pub config: Map<String, Value>,
    pub fields: Map<String, Value>,
    pub table: Option<Table>,
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(scalar).collect::<Vec<_>>().join(";"),
        other => other.to_string(),
    }
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.json(),
            Format::Text => self.text(),
            Format::Csv => self.csv(),
        }
    }

    fn json(&self) -> String {
        let mut result = self.fields.clone();
        if let Some(t) = &self.table {
            let rows = t
                .rows
                .iter()
                .map(|r| {
                    Value::Object(
                        t.columns
                            .iter()
                            .map(|c| c.to_string())
                            .zip(r.iter().cloned())
                            .collect(),
                    )
                })
                .collect();
            result.insert("rows".into(), Value::Array(rows));
        }
        let mut top = Map::new();
        top.insert("command".into(), Value::from(self.command));
        top.insert("config".into(), Value::Object(self.config.clone()));
        top.insert("result".into(), Value::Object(result));
        let mut s = serde_json::to_string_pretty(&Value::Object(top)).expect("json");
        s.push('\n');
        s
    }

    fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{}", self.command);
        for (k, v) in &self.fields {
            let shown = if v.is_null() {
                "none".to_string()
            } else {
                scalar(v)
            };
            let _ = writeln!(s, "  {k}: {shown}");
        }
        if let Some(t) = &self.table {
            let cells: Vec<Vec<String>> =
                std::iter::once(t.columns.iter().map(|c| c.to_string()).collect())
                    .chain(t.rows.iter().map(|r| r.iter().map(scalar).collect()))
                    .collect();
            let widths: Vec<usize> = (0..t.columns.len())
                .map(|j| cells.iter().map(|r| r[j].len()).max().unwrap_or(0))
                .collect();
            for row in cells {
                let line: Vec<String> = row
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:>w$}"))
                    .collect();
                let _ = writeln!(s, "  {}", line.join("  ").trim_end());
            }
        }
        s
    }

    fn csv(&self) -> String {
        let (columns, rows): (Vec<String>, Vec<Vec<String>>) = match &self.table {
            Some(t) => (
                t.columns.iter().map(|c| c.to_string()).collect(),
                t.rows
                    .iter()
                    .map(|r| r.iter().map(scalar).collect())
                    .collect(),
            ),
            None => (
                self.fields.keys().cloned().collect(),
                vec![self.fields.values().map(scalar).collect()],
            ),
        };
        let mut s = columns.join(",");
        s.push('\n');
        for r in rows {
            s.push_str(&r.join(","));
            s.push('\n');
        }
        s
    }
}
