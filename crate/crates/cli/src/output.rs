//! Table rendering. CSV carries a `#`-prefixed metadata header; JSON holds
//! the same metadata, columns and rows.

use std::io::Write;

use serde_json::{Map, Value};

use crate::config::Format;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Flag(bool),
    Text(String),
}

impl Cell {
    fn csv(&self, precision: usize) -> String {
        match self {
            Cell::Num(x) => fmt_num(*x, precision),
            Cell::Int(n) => n.to_string(),
            Cell::Flag(b) => u8::from(*b).to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self, precision: usize) -> Value {
        match self {
            // round-trip through the CSV text so both formats hold the same value
            Cell::Num(x) => fmt_num(*x, precision)
                .parse::<f64>()
                .ok()
                .and_then(serde_json::Number::from_f64)
                .map_or(Value::Null, Value::Number),
            Cell::Int(n) => Value::from(*n),
            Cell::Flag(b) => Value::from(*b),
            Cell::Text(s) => Value::from(s.as_str()),
        }
    }
}

/// Scientific notation with `precision` digits after the point.
pub fn fmt_num(x: f64, precision: usize) -> String {
    if x.is_nan() {
        "NaN".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        // -0 prints as 0 so sign noise never shows up in diffs
        let x = if x == 0.0 { 0.0 } else { x };
        format!("{x:.precision$e}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: &'static str,
    pub description: &'static str,
}

pub const fn col(name: &'static str, description: &'static str) -> Column {
    Column { name, description }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    /// Ordered `(key, value)` pairs.
    pub metadata: Vec<(String, String)>,
    /// The run document, verbatim TOML.
    pub config_echo: String,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn meta(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.metadata.push((key.into(), value.into()));
    }

    pub fn render(&self, format: Format, precision: usize) -> String {
        match format {
            Format::Csv => self.csv(precision),
            Format::Json => self.json(precision),
        }
    }

    pub fn csv(&self, precision: usize) -> String {
        let mut out = Vec::new();
        for (k, v) in &self.metadata {
            writeln!(out, "# {k}: {v}").unwrap();
        }
        if !self.config_echo.is_empty() {
            writeln!(out, "# config:").unwrap();
            for line in self.config_echo.lines() {
                writeln!(out, "#   {line}").unwrap();
            }
        }
        for c in &self.columns {
            writeln!(out, "# column {}: {}", c.name, c.description).unwrap();
        }
        let names: Vec<&str> = self.columns.iter().map(|c| c.name).collect();
        writeln!(out, "{}", names.join(",")).unwrap();
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| c.csv(precision)).collect();
            writeln!(out, "{}", cells.join(",")).unwrap();
        }
        String::from_utf8(out).expect("ascii output")
    }

    pub fn json(&self, precision: usize) -> String {
        let mut meta = Map::new();
        for (k, v) in &self.metadata {
            meta.insert(k.clone(), Value::from(v.as_str()));
        }
        let columns: Vec<Value> = self
            .columns
            .iter()
            .map(|c| serde_json::json!({ "name": c.name, "description": c.description }))
            .collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let mut m = Map::new();
                for (c, cell) in self.columns.iter().zip(r) {
                    m.insert(c.name.to_string(), cell.json(precision));
                }
                Value::Object(m)
            })
            .collect();
        let doc = serde_json::json!({
            "metadata": meta,
            "config": self.config_echo,
            "columns": columns,
            "rows": rows,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("json values are serialisable");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        let mut t = Table {
            config_echo: "[beam]\npreset = \"x\"\n".into(),
            columns: vec![col("a", "first"), col("ok", "flag"), col("s", "label")],
            rows: vec![
                vec![Cell::Num(0.1), Cell::Flag(true), Cell::Text("coherent".into())],
                vec![Cell::Num(f64::NAN), Cell::Flag(false), Cell::Text("partial".into())],
            ],
            ..Default::default()
        };
        t.meta("version", "1");
        t
    }

    #[test]
    fn numbers() {
        assert_eq!(fmt_num(0.1, 3), "1.000e-1");
        assert_eq!(fmt_num(-0.0, 2), "0.00e0");
        assert_eq!(fmt_num(f64::NAN, 2), "NaN");
        assert_eq!(fmt_num(-1.0 / 0.0, 2), "-inf");
        assert_eq!(fmt_num(1234.5, 12), "1.234500000000e3");
    }

    #[test]
    fn csv_layout() {
        let s = sample().csv(4);
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "# version: 1");
        assert_eq!(lines[1], "# config:");
        assert_eq!(lines[2], "#   [beam]");
        assert_eq!(lines[4], "# column a: first");
        assert_eq!(lines[7], "a,ok,s");
        assert_eq!(lines[8], "1.0000e-1,1,coherent");
        assert_eq!(lines[9], "NaN,0,partial");
    }

    #[test]
    fn json_mirrors_csv() {
        let v: Value = serde_json::from_str(&sample().json(4)).unwrap();
        assert_eq!(v["metadata"]["version"], "1");
        assert_eq!(v["rows"][0]["a"], 0.1);
        assert_eq!(v["rows"][0]["ok"], true);
        assert!(v["rows"][1]["a"].is_null());
        assert_eq!(v["columns"][2]["name"], "s");
    }
}
