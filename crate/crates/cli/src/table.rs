//! Row-major result tables and their CSV/JSON encodings.

use std::io::Write;

use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

use crate::config::Format;
use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(u64),
    /// Not applicable for this row, written as an empty CSV field or `null`.
    Missing,
}

impl Cell {
    pub fn opt(v: Option<f64>) -> Self {
        v.map_or(Cell::Missing, Cell::Float)
    }

    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            Cell::Float(v) => Some(v),
            Cell::Int(v) => Some(v as f64),
            Cell::Missing => None,
        }
    }

    fn csv(&self) -> String {
        match self {
            Cell::Float(v) => format!("{v:.16e}"),
            Cell::Int(v) => v.to_string(),
            Cell::Missing => String::new(),
        }
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match *self {
            Cell::Float(v) => s.serialize_f64(v),
            Cell::Int(v) => s.serialize_u64(v),
            Cell::Missing => s.serialize_none(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    #[serde(serialize_with = "rows")]
    pub rows: Vec<Vec<Cell>>,
}

fn rows<S: Serializer>(rows: &[Vec<Cell>], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(rows.len()))?;
    for r in rows {
        seq.serialize_element(r)?;
    }
    seq.end()
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Rejects NaN and infinities before anything is written.
    pub fn check_finite(&self) -> Result<(), CliError> {
        for (i, row) in self.rows.iter().enumerate() {
            if row.len() != self.columns.len() {
                return Err(CliError::Consistency(format!("row {i} has {} cells", row.len())));
            }
            for (j, cell) in row.iter().enumerate() {
                if let Cell::Float(v) = cell {
                    if !v.is_finite() {
                        return Err(CliError::Consistency(format!(
                            "non-finite {} = {v} in row {i}",
                            self.columns[j]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn write<W: Write>(&self, format: Format, out: W) -> Result<(), CliError> {
        self.check_finite()?;
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => {
                let mut out = out;
                serde_json::to_writer(&mut out, self).map_err(|e| CliError::Io(e.into()))?;
                out.write_all(b"\n")?;
                Ok(())
            }
        }
    }

    fn write_csv<W: Write>(&self, out: W) -> Result<(), CliError> {
        let mut w = csv::Writer::from_writer(out);
        let csv_err = |e: csv::Error| CliError::Io(std::io::Error::other(e));
        w.write_record(&self.columns).map_err(csv_err)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv)).map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_bytes(&self, format: Format) -> Result<Vec<u8>, CliError> {
        let mut buf = Vec::new();
        self.write(format, &mut buf)?;
        Ok(buf)
    }

    /// Parses a table written by [`Table::write`] in CSV format.
    pub fn read_csv(bytes: &[u8]) -> Result<Self, CliError> {
        let bad = |e: csv::Error| CliError::Config(format!("malformed table: {e}"));
        let mut r = csv::Reader::from_reader(bytes);
        let columns = r.headers().map_err(bad)?.iter().map(str::to_string).collect();
        let mut rows = Vec::new();
        for record in r.records() {
            let record = record.map_err(bad)?;
            let row = record
                .iter()
                .map(|field| {
                    if field.is_empty() {
                        Ok(Cell::Missing)
                    } else if field.contains(['e', '.', 'E']) {
                        field.parse().map(Cell::Float).map_err(|_| field.to_string())
                    } else {
                        field.parse().map(Cell::Int).map_err(|_| field.to_string())
                    }
                })
                .collect::<Result<Vec<_>, _>>()
                .map_err(|f| CliError::Config(format!("malformed table cell {f:?}")))?;
            rows.push(row);
        }
        Ok(Self { columns, rows })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        let mut t = Table::new(&["a", "n", "b"]);
        t.rows.push(vec![Cell::Float(0.1), Cell::Int(3), Cell::Missing]);
        t.rows.push(vec![Cell::Float(-1.0 / 3.0), Cell::Int(0), Cell::Float(6.02e23)]);
        t
    }

    #[test]
    fn csv_layout() {
        let text = String::from_utf8(sample().to_bytes(Format::Csv).unwrap()).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "a,n,b");
        assert_eq!(lines[1], "1.0000000000000001e-1,3,");
        assert_eq!(lines[2], "-3.3333333333333331e-1,0,6.0200000000000000e23");
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let t = sample();
        let bytes = t.to_bytes(Format::Csv).unwrap();
        let back = Table::read_csv(&bytes).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.to_bytes(Format::Csv).unwrap(), bytes);
    }

    #[test]
    fn json_uses_null_for_missing() {
        let text = String::from_utf8(sample().to_bytes(Format::Json).unwrap()).unwrap();
        assert!(text.starts_with(r#"{"columns":["a","n","b"],"rows":[[0.1,3,null]"#));
    }

    #[test]
    fn rejects_non_finite() {
        let mut t = sample();
        t.rows[0][0] = Cell::Float(f64::NAN);
        assert!(matches!(t.to_bytes(Format::Csv), Err(CliError::Consistency(_))));
    }
}
