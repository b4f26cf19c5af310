use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestRow {
    /// Resolved path (relative entries are taken relative to the manifest).
    pub path: PathBuf,
    /// The path as written in the manifest.
    pub raw_path: String,
    pub label: usize,
    pub subject: Option<String>,
}

/// Image list with class labels; classes are numbered in order of first
/// appearance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Manifest {
    pub classes: Vec<String>,
    pub rows: Vec<ManifestRow>,
}

#[derive(Deserialize)]
struct JsonRow {
    path: String,
    label: String,
    #[serde(default)]
    subject: Option<String>,
}

impl Manifest {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new(""));
        Self::parse(&text, base)
    }

    /// Parses CSV (`path,label[,subject]`, optional header) or a JSON array of
    /// `{"path", "label", "subject"?}` objects.
    pub fn parse(text: &str, base: &Path) -> Result<Self> {
        let entries: Vec<(String, String, Option<String>)> = if text.trim_start().starts_with('[') {
            let rows: Vec<JsonRow> = serde_json::from_str(text)?;
            rows.into_iter().map(|r| (r.path, r.label, r.subject)).collect()
        } else {
            let mut reader = csv::ReaderBuilder::new()
                .has_headers(false)
                .flexible(true)
                .trim(csv::Trim::All)
                .comment(Some(b'#'))
                .from_reader(text.as_bytes());
            let mut out = Vec::new();
            for (n, rec) in reader.records().enumerate() {
                let rec = rec?;
                if rec.iter().all(str::is_empty) {
                    continue;
                }
                if n == 0 && rec.get(0).is_some_and(|f| f.eq_ignore_ascii_case("path")) {
                    continue;
                }
                if !(2..=3).contains(&rec.len()) {
                    return Err(Error::Parse(format!(
                        "manifest line {}: expected path,label[,subject]",
                        n + 1
                    )));
                }
                let subject = rec.get(2).filter(|s| !s.is_empty()).map(str::to_string);
                out.push((rec[0].to_string(), rec[1].to_string(), subject));
            }
            out
        };
        if entries.is_empty() {
            return Err(Error::Empty("manifest"));
        }
        let mut classes: Vec<String> = Vec::new();
        let mut rows = Vec::with_capacity(entries.len());
        for (raw_path, label, subject) in entries {
            if raw_path.is_empty() || label.is_empty() {
                return Err(Error::Parse("manifest rows need a path and a label".into()));
            }
            let label = match classes.iter().position(|c| *c == label) {
                Some(i) => i,
                None => {
                    classes.push(label);
                    classes.len() - 1
                }
            };
            let p = PathBuf::from(&raw_path);
            let path = if p.is_absolute() { p } else { base.join(p) };
            rows.push(ManifestRow {
                path,
                raw_path,
                label,
                subject,
            });
        }
        Ok(Self { classes, rows })
    }
}
