//! Minimal CSV reading and writing for the harness's artifacts.
//!
//! Files are plain comma-separated text: optional `#` comment lines, one
//! header line, then data rows. Cells never contain commas or quotes, so no
//! quoting dialect is needed. Reals are written in scientific notation with
//! 17 significant digits, enough to reproduce the f64 bit pattern on read.

use std::fmt;
use std::fs;
use std::io;
use std::path::Path;

use thiserror::Error;

use crate::analysis::{ReferenceSeries, SeriesKind};

/// An in-memory CSV: comments, header, raw string cells.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Csv {
    /// Comment lines written before the header, without the leading `#`.
    pub comments: Vec<String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Debug, Error)]
pub enum CsvError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Malformed { path: String, line: usize, message: String },
}

impl fmt::Display for Csv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for comment in &self.comments {
            writeln!(f, "# {comment}")?;
        }
        writeln!(f, "{}", self.header.join(","))?;
        for row in &self.rows {
            writeln!(f, "{}", row.join(","))?;
        }
        Ok(())
    }
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Self {
            comments: Vec::new(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.header.len());
        self.rows.push(cells);
    }

    /// Index of a named column.
    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn write_to(&self, path: &Path) -> Result<(), CsvError> {
        fs::write(path, self.to_string())
            .map_err(|source| CsvError::Io { path: path.display().to_string(), source })
    }

    pub fn read_from(path: &Path) -> Result<Self, CsvError> {
        let text = fs::read_to_string(path)
            .map_err(|source| CsvError::Io { path: path.display().to_string(), source })?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn parse(text: &str, path: &str) -> Result<Self, CsvError> {
        let mut comments = Vec::new();
        let mut header: Option<Vec<String>> = None;
        let mut rows = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            if let Some(comment) = trimmed.strip_prefix('#') {
                comments.push(comment.trim().to_string());
                continue;
            }
            let cells: Vec<String> = trimmed.split(',').map(|c| c.trim().to_string()).collect();
            match &header {
                None => header = Some(cells),
                Some(h) => {
                    if cells.len() != h.len() {
                        return Err(CsvError::Malformed {
                            path: path.to_string(),
                            line: line_no,
                            message: format!(
                                "expected {} cells, found {}",
                                h.len(),
                                cells.len()
                            ),
                        });
                    }
                    rows.push(cells);
                }
            }
        }
        let header = header.ok_or_else(|| CsvError::Malformed {
            path: path.to_string(),
            line: 1,
            message: "missing header line".to_string(),
        })?;
        Ok(Self { comments, header, rows })
    }
}

/// Formats a real with 17 significant digits; empty cells stay empty.
pub fn format_real(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn format_opt_real(v: Option<f64>) -> String {
    v.map(format_real).unwrap_or_default()
}

/// Reads a `t,value` reference series CSV. Comment lines are allowed before
/// the header.
pub fn read_reference_csv(path: &Path, kind: SeriesKind) -> Result<ReferenceSeries, CsvError> {
    let csv = Csv::read_from(path)?;
    let display = path.display().to_string();
    if csv.header != ["t", "value"] {
        return Err(CsvError::Malformed {
            path: display,
            line: csv.comments.len() + 1,
            message: format!("expected header `t,value`, found `{}`", csv.header.join(",")),
        });
    }
    let mut points = Vec::with_capacity(csv.rows.len());
    for (i, row) in csv.rows.iter().enumerate() {
        let parse = |cell: &str, name: &str| {
            cell.parse::<f64>().map_err(|_| CsvError::Malformed {
                path: display.clone(),
                line: i + 2 + csv.comments.len(),
                message: format!("cannot parse {name} value `{cell}`"),
            })
        };
        points.push((parse(&row[0], "t")?, parse(&row[1], "value")?));
    }
    ReferenceSeries::new(kind, points).map_err(|e| CsvError::Malformed {
        path: display,
        line: 0,
        message: e.to_string(),
    })
}
