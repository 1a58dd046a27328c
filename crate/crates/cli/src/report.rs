//! Output files. Every JSON document carries a `header` object and every CSV
//! file starts with `# key: value` header lines, followed by one column-name
//! line. Floats in CSV use scientific notation with 17 significant digits.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::CliError;

pub const TOOL: &str = "opq";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Header {
    pub tool: &'static str,
    pub version: &'static str,
    pub config_hash: String,
    pub command: &'static str,
    pub seed: u64,
}

impl Header {
    pub fn new(config_hash: String, command: &'static str, seed: u64) -> Self {
        Header {
            tool: TOOL,
            version: env!("CARGO_PKG_VERSION"),
            config_hash,
            command,
            seed,
        }
    }
}

#[derive(Serialize)]
struct Document<'a, T: Serialize> {
    header: &'a Header,
    #[serde(flatten)]
    body: &'a T,
}

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl From<&DMatrix<f64>> for MatrixJson {
    fn from(m: &DMatrix<f64>) -> Self {
        MatrixJson {
            rows: m.nrows(),
            cols: m.ncols(),
            data: m.transpose().as_slice().to_vec(),
        }
    }
}

/// `[re, im]`.
pub fn complex_pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, Copy)]
pub enum Cell {
    Int(i64),
    Float(f64),
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, header: &Header) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# tool: {}", header.tool);
        let _ = writeln!(out, "# version: {}", header.version);
        let _ = writeln!(out, "# config_hash: {}", header.config_hash);
        let _ = writeln!(out, "# command: {}", header.command);
        let _ = writeln!(out, "# seed: {}", header.seed);
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Int(v) => v.to_string(),
                    Cell::Float(v) => format_float(*v),
                })
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// Collects files for one run and writes them to the output directory.
pub struct Report {
    header: Header,
    files: Vec<(String, String)>,
}

impl Report {
    pub fn new(header: Header) -> Self {
        Report {
            header,
            files: Vec::new(),
        }
    }

    pub fn json<T: Serialize>(&mut self, name: &str, body: &T) -> Result<(), CliError> {
        let doc = Document {
            header: &self.header,
            body,
        };
        let mut text = serde_json::to_string_pretty(&doc)
            .map_err(|e| CliError::Numerical(format!("serializing {name}: {e}")))?;
        text.push('\n');
        self.files.push((name.to_string(), text));
        Ok(())
    }

    pub fn csv(&mut self, name: &str, table: &Table) {
        self.files
            .push((name.to_string(), table.render(&self.header)));
    }

    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
        fs::create_dir_all(dir).map_err(|e| {
            CliError::Config(format!(
                "cannot create output directory {}: {e}",
                dir.display()
            ))
        })?;
        self.files
            .iter()
            .map(|(name, text)| {
                let path = dir.join(name);
                fs::write(&path, text).map_err(|e| {
                    CliError::Config(format!("cannot write {}: {e}", path.display()))
                })?;
                Ok(path)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_with_seventeen_digits() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0] {
            let s = format_float(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
            let mantissa = s.split('e').next().unwrap().trim_start_matches('-');
            assert_eq!(
                mantissa.chars().filter(char::is_ascii_digit).count(),
                17,
                "{s}"
            );
        }
    }

    #[test]
    fn matrices_are_row_major() {
        let m = DMatrix::from_row_slice(2, 3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let j = MatrixJson::from(&m);
        assert_eq!(j.data, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
    }

    #[test]
    fn csv_header_block() {
        let mut t = Table::new(&["M", "abs_overlap"]);
        t.push(vec![1usize.into(), 0.5.into()]);
        let text = t.render(&Header::new("abc".into(), "overlap-decay", 7));
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# tool: opq");
        assert_eq!(lines[5], "M,abs_overlap");
        assert_eq!(lines[6], "1,5.0000000000000000e-1");
    }
}
