//! CSV ingestion: headered, UTF-8, comma-separated. Column lookups are by
//! name, parse failures carry 1-based line numbers.

use crate::CliError;
use std::path::Path;

pub struct Table {
    pub headers: Vec<String>,
    /// Raw cells, one vector per row.
    pub rows: Vec<Vec<String>>,
}

pub fn read_table(path: &Path) -> Result<Table, CliError> {
    let file = std::fs::File::open(path).map_err(|e| {
        if e.kind() == std::io::ErrorKind::NotFound {
            CliError::MissingInput(format!("cannot open {}: {e}", path.display()))
        } else {
            CliError::BadData(format!("cannot open {}: {e}", path.display()))
        }
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(file);
    let headers = reader
        .headers()
        .map_err(|e| CliError::BadData(format!("{}: {e}", path.display())))?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    let mut rows = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let record = record.map_err(|e| {
            CliError::BadData(format!("{}: line {}: {e}", path.display(), idx + 2))
        })?;
        rows.push(record.iter().map(|c| c.trim().to_string()).collect());
    }
    Ok(Table { headers, rows })
}

impl Table {
    pub fn column_index(&self, name: &str) -> Result<usize, CliError> {
        self.headers.iter().position(|h| h == name).ok_or_else(|| {
            CliError::BadData(format!(
                "column '{name}' not found; available columns: {}",
                self.headers.join(", ")
            ))
        })
    }

    fn parse_cell(&self, cell: &str, name: &str, line: usize) -> Result<f64, CliError> {
        let v: f64 = cell.parse().map_err(|_| {
            CliError::BadData(format!(
                "line {line}: cannot parse '{cell}' as a number in column '{name}'"
            ))
        })?;
        if !v.is_finite() {
            return Err(CliError::BadData(format!(
                "line {line}: non-finite value '{cell}' in column '{name}'"
            )));
        }
        Ok(v)
    }

    /// Numeric column; empty cells are skipped.
    pub fn numeric_column(&self, name: &str) -> Result<Vec<f64>, CliError> {
        let idx = self.column_index(name)?;
        let mut out = Vec::with_capacity(self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            let cell = row.get(idx).map(String::as_str).unwrap_or("");
            if cell.is_empty() {
                continue;
            }
            out.push(self.parse_cell(cell, name, r + 2)?);
        }
        if out.is_empty() {
            return Err(CliError::BadData(format!("column '{name}' has no values")));
        }
        Ok(out)
    }

    /// Two numeric columns read rowwise; every row must carry both cells.
    pub fn paired_columns(&self, x: &str, y: &str) -> Result<(Vec<f64>, Vec<f64>), CliError> {
        let ix = self.column_index(x)?;
        let iy = self.column_index(y)?;
        let mut xs = Vec::with_capacity(self.rows.len());
        let mut ys = Vec::with_capacity(self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            let cx = row.get(ix).map(String::as_str).unwrap_or("");
            let cy = row.get(iy).map(String::as_str).unwrap_or("");
            if cx.is_empty() && cy.is_empty() {
                continue;
            }
            if cx.is_empty() || cy.is_empty() {
                return Err(CliError::BadData(format!(
                    "line {}: paired columns '{x}' and '{y}' need both cells present",
                    r + 2
                )));
            }
            xs.push(self.parse_cell(cx, x, r + 2)?);
            ys.push(self.parse_cell(cy, y, r + 2)?);
        }
        if xs.is_empty() {
            return Err(CliError::BadData(format!(
                "columns '{x}'/'{y}' have no paired values"
            )));
        }
        Ok((xs, ys))
    }

    /// Split a value column by a two-level group column. Levels are ordered
    /// lexicographically; the first level becomes the x sample.
    pub fn grouped_column(
        &self,
        value: &str,
        group: &str,
    ) -> Result<(String, Vec<f64>, String, Vec<f64>), CliError> {
        let iv = self.column_index(value)?;
        let ig = self.column_index(group)?;
        let mut levels: Vec<String> = Vec::new();
        let mut data: Vec<(String, f64)> = Vec::with_capacity(self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            let cv = row.get(iv).map(String::as_str).unwrap_or("");
            let cg = row.get(ig).map(String::as_str).unwrap_or("");
            if cv.is_empty() && cg.is_empty() {
                continue;
            }
            if cv.is_empty() || cg.is_empty() {
                return Err(CliError::BadData(format!(
                    "line {}: both '{value}' and '{group}' must be present",
                    r + 2
                )));
            }
            if !levels.iter().any(|l| l == cg) {
                levels.push(cg.to_string());
            }
            data.push((cg.to_string(), self.parse_cell(cv, value, r + 2)?));
        }
        if levels.len() != 2 {
            return Err(CliError::BadData(format!(
                "group column '{group}' must have exactly 2 levels, found {}: {}",
                levels.len(),
                levels.join(", ")
            )));
        }
        levels.sort();
        let xs: Vec<f64> = data
            .iter()
            .filter(|(g, _)| *g == levels[0])
            .map(|(_, v)| *v)
            .collect();
        let ys: Vec<f64> = data
            .iter()
            .filter(|(g, _)| *g == levels[1])
            .map(|(_, v)| *v)
            .collect();
        Ok((levels[0].clone(), xs, levels[1].clone(), ys))
    }
}
