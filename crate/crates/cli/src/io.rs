//! Error taxonomy, CSV input and all-or-nothing output sets.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use resent_core::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Usage,
    Data,
    Numerical,
}

#[derive(Debug)]
pub struct CmdError {
    pub kind: Exit,
    pub source: anyhow::Error,
}

impl CmdError {
    pub fn usage(e: impl Into<anyhow::Error>) -> Self {
        Self {
            kind: Exit::Usage,
            source: e.into(),
        }
    }

    pub fn data(e: impl Into<anyhow::Error>) -> Self {
        Self {
            kind: Exit::Data,
            source: e.into(),
        }
    }

    pub fn numerical(e: impl Into<anyhow::Error>) -> Self {
        Self {
            kind: Exit::Numerical,
            source: e.into(),
        }
    }
}

impl From<Error> for CmdError {
    fn from(e: Error) -> Self {
        let kind = if e.is_numerical() {
            Exit::Numerical
        } else {
            match e {
                Error::InvalidGrid(_) | Error::NonFinite { .. } => Exit::Data,
                _ => Exit::Usage,
            }
        };
        Self {
            kind,
            source: e.into(),
        }
    }
}

pub type CmdResult<T = ()> = Result<T, CmdError>;

/// Shortest representation that parses back to the same `f64`.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:?}")
}

/// Reads named numeric columns from a headed CSV file.
pub fn read_columns(path: &Path, names: &[&str]) -> CmdResult<Vec<Vec<f64>>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("cannot open {}", path.display()))
        .map_err(CmdError::data)?;
    let headers = reader
        .headers()
        .with_context(|| format!("{}: cannot read header", path.display()))
        .map_err(CmdError::data)?
        .clone();
    let idx: Vec<usize> = names
        .iter()
        .map(|name| {
            headers.iter().position(|h| h == *name).ok_or_else(|| {
                CmdError::data(anyhow!("{}: missing column '{name}'", path.display()))
            })
        })
        .collect::<CmdResult<_>>()?;

    let mut cols = vec![Vec::new(); names.len()];
    for record in reader.records() {
        let record = record
            .map_err(|e| {
                let line = e.position().map(|p| p.line()).unwrap_or(0);
                anyhow!("{}: line {line}: {e}", path.display())
            })
            .map_err(CmdError::data)?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        for (col, &i) in cols.iter_mut().zip(&idx) {
            let field = record.get(i).unwrap_or("");
            col.push(parse_number(field).ok_or_else(|| {
                CmdError::data(anyhow!(
                    "{}: line {line}: invalid number '{field}'",
                    path.display()
                ))
            })?);
        }
    }
    Ok(cols)
}

/// Reads a single-column file of numbers; a non-numeric first line is taken
/// as a header.
pub fn read_single_column(path: &Path) -> CmdResult<Vec<f64>> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))
        .map_err(CmdError::data)?;
    let mut values = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let field = raw.trim();
        if field.is_empty() {
            continue;
        }
        match parse_number(field) {
            Some(v) => values.push(v),
            None if i == 0 => {}
            None => {
                return Err(CmdError::data(anyhow!(
                    "{}: line {}: invalid number '{field}'",
                    path.display(),
                    i + 1
                )))
            }
        }
    }
    Ok(values)
}

fn parse_number(field: &str) -> Option<f64> {
    field.parse::<f64>().ok().filter(|v| v.is_finite())
}

/// CSV text built in memory with a fixed header.
pub struct CsvText {
    text: String,
}

impl CsvText {
    pub fn new<S: AsRef<str>>(header: impl IntoIterator<Item = S>) -> Self {
        let mut t = Self {
            text: String::new(),
        };
        t.push_fields(header);
        t
    }

    fn push_fields<S: AsRef<str>>(&mut self, fields: impl IntoIterator<Item = S>) {
        for (i, f) in fields.into_iter().enumerate() {
            if i > 0 {
                self.text.push(',');
            }
            self.text.push_str(f.as_ref());
        }
        self.text.push('\n');
    }

    pub fn row<S: AsRef<str>>(&mut self, fields: impl IntoIterator<Item = S>) {
        self.push_fields(fields);
    }

    pub fn labelled_row(&mut self, label: impl std::fmt::Display, values: &[f64]) {
        let _ = write!(self.text, "{label}");
        for v in values {
            self.text.push(',');
            self.text.push_str(&fmt_f64(*v));
        }
        self.text.push('\n');
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.text.into_bytes()
    }
}

/// Files produced by one command, written together after all computation is
/// done. If any write fails, the files already written are removed.
#[derive(Default)]
pub struct OutputSet {
    files: Vec<(String, Vec<u8>)>,
}

impl OutputSet {
    pub fn add(&mut self, name: &str, bytes: Vec<u8>) {
        self.files.push((name.to_string(), bytes));
    }

    pub fn add_json<T: serde::Serialize>(&mut self, name: &str, value: &T) {
        let mut bytes = serde_json::to_vec_pretty(value).expect("serializable output");
        bytes.push(b'\n');
        self.add(name, bytes);
    }

    pub fn names(&self) -> Vec<String> {
        self.files.iter().map(|(n, _)| n.clone()).collect()
    }

    pub fn commit(self, dir: &Path) -> CmdResult<Vec<PathBuf>> {
        fs::create_dir_all(dir)
            .with_context(|| format!("cannot create {}", dir.display()))
            .map_err(CmdError::data)?;
        let mut written = Vec::new();
        for (name, bytes) in &self.files {
            let path = dir.join(name);
            if let Err(e) = fs::write(&path, bytes) {
                for p in &written {
                    let _ = fs::remove_file(p);
                }
                return Err(CmdError::data(
                    anyhow::Error::new(e).context(format!("cannot write {}", path.display())),
                ));
            }
            written.push(path);
        }
        Ok(written)
    }
}
