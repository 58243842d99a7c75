//! CSV ingestion and output.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use dpmreg::model::Dataset;
use nalgebra::{DMatrix, DVector};

use crate::error::{CliError, CliResult};

/// A numeric table with a header row.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.headers.iter().position(|h| h == name)
    }

    pub fn column(&self, c: usize) -> impl Iterator<Item = f64> + '_ {
        self.rows.iter().map(move |r| r[c])
    }
}

pub fn read_table(path: &Path) -> CliResult<Table> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::io(path, e))?;
    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| CliError::io(path, e))?
        .iter()
        .map(str::to_string)
        .collect();
    if headers.is_empty() || headers.iter().all(|h| h.is_empty()) {
        return Err(CliError::Data(format!("{}: missing header row", path.display())));
    }
    for (c, h) in headers.iter().enumerate() {
        if h.is_empty() {
            return Err(CliError::Data(format!("{}: column {} has an empty name", path.display(), c + 1)));
        }
        if headers[..c].contains(h) {
            return Err(CliError::Data(format!("{}: duplicate column '{h}'", path.display())));
        }
    }
    let mut rows = Vec::new();
    for (r, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::io(path, e))?;
        let line = r + 2;
        let row = record
            .iter()
            .enumerate()
            .map(|(c, cell)| {
                cell.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| {
                    CliError::Data(format!(
                        "{}: line {line}, column '{}': '{cell}' is not a finite number",
                        path.display(),
                        headers[c]
                    ))
                })
            })
            .collect::<CliResult<Vec<f64>>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(CliError::Data(format!("{}: no data rows", path.display())));
    }
    Ok(Table { headers, rows })
}

/// Response column `response` and every other column as a covariate, in
/// file order. With `log_response` the response is replaced by its log.
pub fn table_to_dataset(table: &Table, response: &str, log_response: bool) -> CliResult<Dataset> {
    let yc = table
        .column_index(response)
        .ok_or_else(|| CliError::Data(format!("response column '{response}' not found")))?;
    let mut y: Vec<f64> = table.column(yc).collect();
    if log_response {
        if let Some(i) = y.iter().position(|&v| v <= 0.0) {
            return Err(CliError::Data(format!(
                "log response needs positive values, row {} has {}",
                i + 1,
                y[i]
            )));
        }
        y.iter_mut().for_each(|v| *v = v.ln());
    }
    let cols: Vec<usize> = (0..table.headers.len()).filter(|&c| c != yc).collect();
    let names: Vec<String> = cols.iter().map(|&c| table.headers[c].clone()).collect();
    let x = DMatrix::from_fn(table.rows.len(), cols.len(), |i, l| table.rows[i][cols[l]]);
    let data = Dataset::new(DVector::from_vec(y), x)?.with_column_names(names)?;
    let constant = data.constant_columns();
    if !constant.is_empty() {
        let names: Vec<String> = constant.iter().map(|&l| data.column_name(l)).collect();
        return Err(CliError::Data(format!("constant covariate columns (sd = 0): {}", names.join(", "))));
    }
    Ok(data)
}

pub fn load_dataset(path: &Path, response: &str, log_response: bool) -> CliResult<Dataset> {
    table_to_dataset(&read_table(path)?, response, log_response)
}

/// Covariates named `names`, in that order; every missing name is reported.
pub fn select_columns(table: &Table, names: &[String]) -> CliResult<DMatrix<f64>> {
    let missing: Vec<&str> = names
        .iter()
        .filter(|n| table.column_index(n).is_none())
        .map(String::as_str)
        .collect();
    if !missing.is_empty() {
        return Err(CliError::Data(format!("input is missing covariate columns: {}", missing.join(", "))));
    }
    let idx: Vec<usize> = names.iter().map(|n| table.column_index(n).unwrap()).collect();
    Ok(DMatrix::from_fn(table.rows.len(), idx.len(), |i, l| table.rows[i][idx[l]]))
}

/// Shortest representation that parses back to the same value.
pub fn fmt_f64(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && a.is_finite() && !(1e-5..1e15).contains(&a) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

/// Buffered CSV writer that creates parent directories.
pub struct CsvOut {
    path: std::path::PathBuf,
    inner: csv::Writer<BufWriter<File>>,
}

impl CsvOut {
    pub fn create(path: &Path, header: &[&str]) -> CliResult<Self> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        }
        let file = File::create(path).map_err(|e| CliError::io(path, e))?;
        let mut out = Self { path: path.to_path_buf(), inner: csv::Writer::from_writer(BufWriter::new(file)) };
        out.row(header.iter().map(|s| s.to_string()))?;
        Ok(out)
    }

    pub fn row<I, S>(&mut self, fields: I) -> CliResult<()>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.inner.write_record(fields).map_err(|e| CliError::io(&self.path, e))
    }

    pub fn finish(mut self) -> CliResult<()> {
        self.inner.flush().map_err(|e| CliError::io(&self.path, e))
    }
}

/// Writes a numeric data table with the given header.
pub fn write_matrix(path: &Path, header: &[String], rows: &[Vec<f64>]) -> CliResult<()> {
    let h: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut out = CsvOut::create(path, &h)?;
    for r in rows {
        out.row(r.iter().map(|&v| fmt_f64(v)))?;
    }
    out.finish()
}

pub fn write_bytes(path: &Path, bytes: &[u8]) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    let mut f = File::create(path).map_err(|e| CliError::io(path, e))?;
    f.write_all(bytes).map_err(|e| CliError::io(path, e))
}
