//! File plumbing shared by the subcommands.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Writes `bytes` to a sibling temp file, then renames it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    if let Some(dir) = dir {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let name = path
        .file_name()
        .ok_or_else(|| Error::param(format!("not a file path: {}", path.display())))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(format!(".{}.tmp", std::process::id()));
    let tmp = match dir {
        Some(d) => d.join(tmp_name),
        None => PathBuf::from(tmp_name),
    };
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if let Err(e) = result {
        let _ = fs::remove_file(&tmp);
        return Err(Error::io(path, e));
    }
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::Numerical(format!("cannot serialize {}: {e}", path.display())))?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

/// Column-oriented table. Every column must have the same length.
pub struct Table<'a> {
    pub headers: Vec<&'a str>,
    pub columns: Vec<&'a [f64]>,
    /// Prepends an integer `index` column when set.
    pub index: bool,
}

impl Table<'_> {
    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let rows = self.columns.first().map_or(0, |c| c.len());
        if self.columns.iter().any(|c| c.len() != rows) {
            return Err(Error::input("table columns differ in length"));
        }
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let mut header: Vec<&str> = Vec::new();
        if self.index {
            header.push("index");
        }
        header.extend(&self.headers);
        let fail = |e: csv::Error| Error::Numerical(format!("csv encoding failed: {e}"));
        w.write_record(&header).map_err(fail)?;
        let mut record = Vec::with_capacity(header.len());
        for i in 0..rows {
            record.clear();
            if self.index {
                record.push(i.to_string());
            }
            record.extend(self.columns.iter().map(|c| c[i].to_string()));
            w.write_record(&record).map_err(fail)?;
        }
        w.into_inner()
            .map_err(|e| Error::Numerical(format!("csv encoding failed: {e}")))
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_atomic(path, &self.to_csv()?)
    }
}

/// A numeric CSV held column by column.
#[derive(Debug, Clone)]
pub struct CsvData {
    pub headers: Vec<String>,
    pub columns: Vec<Vec<f64>>,
    pub sha256: String,
}

impl CsvData {
    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.headers
            .iter()
            .position(|h| h == name)
            .map(|i| self.columns[i].as_slice())
    }

    /// Named column, or the only non-index column when the file has one.
    pub fn signal(&self, name: &str, path: &Path) -> Result<&[f64]> {
        if let Some(c) = self.column(name) {
            return Ok(c);
        }
        let data: Vec<usize> = (0..self.headers.len())
            .filter(|&i| self.headers[i] != "index")
            .collect();
        match data.as_slice() {
            [only] => Ok(&self.columns[*only]),
            _ => Err(Error::Format {
                path: path.to_path_buf(),
                message: format!(
                    "no column named '{name}' (found: {})",
                    self.headers.join(", ")
                ),
            }),
        }
    }
}

pub fn read_csv(path: &Path) -> Result<CsvData> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let sha256 = hex(&Sha256::digest(&bytes));
    let bad = |message: String| Error::Format {
        path: path.to_path_buf(),
        message,
    };
    let mut r = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(bytes.as_slice());
    let headers: Vec<String> = r
        .headers()
        .map_err(|e| bad(e.to_string()))?
        .iter()
        .map(str::to_owned)
        .collect();
    if headers.is_empty() {
        return Err(bad("missing header row".into()));
    }
    let mut columns = vec![Vec::new(); headers.len()];
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        for (col, field) in rec.iter().enumerate() {
            let v: f64 = field
                .parse()
                .map_err(|_| bad(format!("row {}: '{field}' is not a number", line + 1)))?;
            columns[col].push(v);
        }
    }
    Ok(CsvData {
        headers,
        columns,
        sha256,
    })
}

pub fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn unix_time() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map_or(0, |d| d.as_secs())
}
