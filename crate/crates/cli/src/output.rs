//! Tabular and key/value reports rendered as CSV or JSON.
//!
//! Numbers are rounded to 6 significant digits in both formats, so CSV and
//! JSON carry identical values.

use std::io::Write;

use clap::ValueEnum;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(usize),
    Bool(bool),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => significant(*v, 6),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            // NaN and infinities have no JSON form.
            Cell::Num(v) if v.is_finite() => json!(significant(*v, 6).parse::<f64>().unwrap_or(*v)),
            Cell::Num(_) | Cell::Empty => Value::Null,
            Cell::Int(v) => json!(v),
            Cell::Bool(v) => json!(v),
            Cell::Text(s) => json!(s),
        }
    }
}

/// `v` rounded to `digits` significant digits, in scientific notation
/// outside `[1e-4, 1e6)`.
pub fn significant(v: f64, digits: usize) -> String {
    if !v.is_finite() {
        return format!("{v}");
    }
    if v == 0.0 {
        return "0".into();
    }
    let mut exp = v.abs().log10().floor() as i32;
    // Rounding can carry into a new leading digit (9.9999999 -> 10.0000).
    let scale = 10f64.powi(digits as i32 - 1 - exp);
    if (v.abs() * scale).round() >= 10f64.powi(digits as i32) {
        exp += 1;
    }
    if !(-4..6).contains(&exp) {
        return format!("{:.*e}", digits - 1, v);
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    format!("{v:.decimals$}")
}

pub enum Report {
    /// Named scalars and vectors. CSV rows are `quantity,index,value`.
    Record(Vec<(String, Vec<Cell>, bool)>),
    Table { columns: Vec<String>, rows: Vec<Vec<Cell>> },
}

impl Report {
    pub fn record() -> Self {
        Report::Record(Vec::new())
    }

    pub fn scalar(mut self, name: &str, value: impl Into<Cell>) -> Self {
        if let Report::Record(items) = &mut self {
            items.push((name.into(), vec![value.into()], false));
        }
        self
    }

    pub fn vector<T: Into<Cell>>(mut self, name: &str, values: impl IntoIterator<Item = T>) -> Self {
        if let Report::Record(items) = &mut self {
            items.push((name.into(), values.into_iter().map(Into::into).collect(), true));
        }
        self
    }

    pub fn table(columns: &[&str]) -> Self {
        Report::Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn row(&mut self, cells: Vec<Cell>) {
        if let Report::Table { columns, rows } = self {
            debug_assert_eq!(cells.len(), columns.len());
            rows.push(cells);
        }
    }

    pub fn write(&self, format: Format, out: &mut impl Write) -> std::io::Result<()> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, &self.to_json())?;
                writeln!(out)
            }
        }
    }

    fn write_csv(&self, out: &mut impl Write) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        match self {
            Report::Record(items) => {
                w.write_record(["quantity", "index", "value"])?;
                for (name, values, is_vector) in items {
                    for (i, v) in values.iter().enumerate() {
                        let index = if *is_vector { (i + 1).to_string() } else { String::new() };
                        w.write_record([name.as_str(), &index, &v.csv()])?;
                    }
                }
            }
            Report::Table { columns, rows } => {
                w.write_record(columns)?;
                for row in rows {
                    w.write_record(row.iter().map(Cell::csv))?;
                }
            }
        }
        w.flush()
    }

    fn to_json(&self) -> Value {
        match self {
            Report::Record(items) => {
                let mut map = Map::new();
                for (name, values, is_vector) in items {
                    let v = if *is_vector {
                        Value::Array(values.iter().map(Cell::json).collect())
                    } else {
                        values[0].json()
                    };
                    map.insert(name.clone(), v);
                }
                Value::Object(map)
            }
            Report::Table { columns, rows } => Value::Array(
                rows.iter()
                    .map(|row| {
                        Value::Object(columns.iter().cloned().zip(row.iter().map(Cell::json)).collect())
                    })
                    .collect(),
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(significant(2.347114, 6), "2.34711");
        assert_eq!(significant(17.60553, 6), "17.6055");
        assert_eq!(significant(0.2240968, 6), "0.224097");
        assert_eq!(significant(38.37141, 6), "38.3714");
        assert_eq!(significant(2.0199e-12, 6), "2.01990e-12");
        assert_eq!(significant(-0.5, 6), "-0.500000");
        assert_eq!(significant(0.0, 6), "0");
        assert_eq!(significant(9.999999999, 6), "10.0000");
        assert_eq!(significant(10.5, 6), "10.5000");
        assert_eq!(significant(999999.7, 6), "1.00000e6");
        assert_eq!(significant(1234567.0, 6), "1.23457e6");
    }

    #[test]
    fn record_layouts() {
        let r = Report::record().scalar("rho", 2.5).vector("c", [1.0, 2.0 / 3.0]).scalar("ok", true);
        let mut csv = Vec::new();
        r.write(Format::Csv, &mut csv).unwrap();
        assert_eq!(
            String::from_utf8(csv).unwrap(),
            "quantity,index,value\nrho,,2.50000\nc,1,1.00000\nc,2,0.666667\nok,,true\n"
        );
        assert_eq!(r.to_json(), json!({"rho": 2.5, "c": [1.0, 0.666667], "ok": true}));
    }

    #[test]
    fn table_layouts() {
        let mut t = Report::table(&["i", "score", "note"]);
        t.row(vec![1usize.into(), f64::NAN.into(), Cell::Empty]);
        let mut csv = Vec::new();
        t.write(Format::Csv, &mut csv).unwrap();
        assert_eq!(String::from_utf8(csv).unwrap(), "i,score,note\n1,NaN,\n");
        assert_eq!(t.to_json(), json!([{"i": 1, "score": null, "note": null}]));
    }
}
