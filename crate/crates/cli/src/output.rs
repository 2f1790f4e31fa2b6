//! CSV and manifest writers. Floats are printed with 17 significant digits
//! so reruns can be compared byte for byte.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{CliError, CliResult};

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// An in-memory CSV table.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub header: Vec<String>,
    text: String,
}

impl Table {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Self {
        let header: Vec<String> = header.iter().map(|h| h.as_ref().to_string()).collect();
        let mut text = header.join(",");
        text.push('\n');
        Self { header, text }
    }

    pub fn row<I, S>(&mut self, cells: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut first = true;
        for cell in cells {
            if !first {
                self.text.push(',');
            }
            first = false;
            self.text.push_str(cell.as_ref());
        }
        self.text.push('\n');
    }

    pub fn numeric_row(&mut self, cells: &[f64]) {
        self.row(cells.iter().map(|&x| fmt_f64(x)));
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }

    /// Appends the rows of another table with the same header.
    pub fn extend(&mut self, other: &Table) {
        debug_assert_eq!(self.header, other.header);
        let body = other.text.split_once('\n').map_or("", |(_, b)| b);
        let _ = write!(self.text, "{body}");
    }
}

pub fn write_file(dir: &Path, name: &str, contents: &str) -> CliResult<PathBuf> {
    fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.to_path_buf(), source })?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|source| CliError::Io { path: path.clone(), source })?;
    Ok(path)
}

pub fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> CliResult<PathBuf> {
    let mut text = serde_json::to_string_pretty(value).expect("manifest serializes");
    text.push('\n');
    write_file(dir, name, &text)
}
