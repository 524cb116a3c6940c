//! Input parsing and the identifier preprocessing pipeline.
//!
//! `calls.csv` carries a header row of class names (the first header cell is
//! a free label) followed by one row per class: the class name, then the
//! number of calls from that class to each column class. Blank cells count as
//! zero. Counts are taken as given; whether they are call sites or distinct
//! method pairs depends on the exporting tool.
//!
//! `tokens.csv` has a `class,words` header and one row per class whose second
//! column lists raw words separated by `;` or whitespace.

mod porter;
mod text;

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::path::Path;

use serde::Deserialize;

pub use porter::stem;
pub use text::{is_stopword, remove_stopwords, split_camel_case};

use crate::error::{Error, Result};
use crate::model::{CallMatrix, TokenCorpus, Warning};

/// Reads `calls.csv`, or the JSON form `{"classes": [...], "calls": [[...]]}`
/// when the extension is `.json`.
pub fn load_call_matrix(path: &Path) -> Result<(CallMatrix, Vec<Warning>)> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    let parsed = if is_json {
        parse_call_matrix_json(&text)
    } else {
        parse_call_matrix_csv(&text)
    };
    parsed.map_err(|e| match e {
        Error::Json(j) => Error::format(path, j.to_string()),
        Error::Format { message, .. } => Error::format(path, message),
        other => other,
    })
}

pub fn parse_call_matrix_csv(text: &str) -> Result<(CallMatrix, Vec<Warning>)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut records = reader.records();
    let header = match records.next() {
        Some(r) => r.map_err(|e| Error::format("calls", e.to_string()))?,
        None => return Err(Error::NoClasses),
    };
    let names: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
    if names.is_empty() {
        return Err(Error::NoClasses);
    }
    let mut rows = Vec::with_capacity(names.len());
    for (r, record) in records.enumerate() {
        let record = record.map_err(|e| Error::format("calls", e.to_string()))?;
        let line = r + 2;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let label = record.get(0).unwrap_or_default();
        match names.get(rows.len()) {
            Some(expected) if expected == label => {}
            Some(expected) => {
                return Err(Error::Cell {
                    row: line,
                    column: 1,
                    message: format!("row label `{label}` does not match column `{expected}`"),
                })
            }
            None => {
                return Err(Error::NonSquare {
                    rows: rows.len() + 1,
                    columns: names.len(),
                })
            }
        }
        if record.len() != names.len() + 1 {
            return Err(Error::NonSquare {
                rows: names.len(),
                columns: record.len() - 1,
            });
        }
        let row = record
            .iter()
            .enumerate()
            .skip(1)
            .map(|(c, cell)| parse_count(cell, line, c + 1))
            .collect::<Result<Vec<u64>>>()?;
        rows.push(row);
    }
    if rows.len() != names.len() {
        return Err(Error::NonSquare {
            rows: rows.len(),
            columns: names.len(),
        });
    }
    CallMatrix::new(names, rows)
}

fn parse_count(cell: &str, row: usize, column: usize) -> Result<u64> {
    if cell.is_empty() {
        return Ok(0);
    }
    let bad = |message: &str| Error::Cell {
        row,
        column,
        message: format!("`{cell}` {message}"),
    };
    match cell.parse::<i64>() {
        Ok(v) if v < 0 => Err(bad("is negative")),
        Ok(v) => Ok(v as u64),
        Err(_) => Err(bad("is not a non-negative integer")),
    }
}

#[derive(Deserialize)]
struct MatrixJson {
    classes: Vec<String>,
    calls: Vec<Vec<i64>>,
}

pub fn parse_call_matrix_json(text: &str) -> Result<(CallMatrix, Vec<Warning>)> {
    let raw: MatrixJson = serde_json::from_str(text)?;
    if raw.classes.is_empty() {
        return Err(Error::NoClasses);
    }
    let rows = raw
        .calls
        .iter()
        .enumerate()
        .map(|(r, row)| {
            row.iter()
                .enumerate()
                .map(|(c, &v)| {
                    u64::try_from(v).map_err(|_| Error::Cell {
                        row: r + 1,
                        column: c + 1,
                        message: format!("`{v}` is negative"),
                    })
                })
                .collect()
        })
        .collect::<Result<Vec<Vec<u64>>>>()?;
    CallMatrix::new(raw.classes, rows)
}

/// Raw per-class words as extracted from identifiers and comments.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RawTokenFile {
    pub rows: Vec<(String, Vec<String>)>,
}

pub fn load_token_file(path: &Path) -> Result<RawTokenFile> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_token_csv(&text).map_err(|e| match e {
        Error::Format { message, .. } => Error::format(path, message),
        other => other,
    })
}

pub fn parse_token_csv(text: &str) -> Result<RawTokenFile> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (r, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::format("tokens", e.to_string()))?;
        let class = record.get(0).unwrap_or_default();
        if class.is_empty() {
            if record.iter().all(str::is_empty) {
                continue;
            }
            return Err(Error::Cell {
                row: r + 2,
                column: 1,
                message: "empty class name".into(),
            });
        }
        let words = record
            .iter()
            .skip(1)
            .flat_map(|cell| cell.split(|c: char| c == ';' || c.is_whitespace()))
            .filter(|w| !w.is_empty())
            .map(str::to_string)
            .collect();
        rows.push((class.to_string(), words));
    }
    if rows.is_empty() {
        return Err(Error::NoClasses);
    }
    Ok(RawTokenFile { rows })
}

/// Split, filter, then stem a single raw word.
pub fn preprocess_word(word: &str) -> Vec<String> {
    let parts = split_camel_case(word);
    remove_stopwords(&parts).iter().map(|w| stem(w)).collect()
}

/// Runs the preprocessing pipeline over every class. Multiplicities are kept
/// because term frequency needs them.
pub fn build_corpus(raw: &RawTokenFile) -> Result<(TokenCorpus, Vec<Warning>)> {
    let mut seen = HashSet::new();
    let mut docs = BTreeMap::new();
    let mut warnings = Vec::new();
    for (class, words) in &raw.rows {
        if !seen.insert(class.as_str()) {
            return Err(Error::DuplicateClass(class.clone()));
        }
        let doc: Vec<String> = words.iter().flat_map(|w| preprocess_word(w)).collect();
        if doc.is_empty() {
            warnings.push(Warning::EmptyDocument(class.clone()));
        }
        docs.insert(class.clone(), doc);
    }
    if docs.is_empty() {
        return Err(Error::NoClasses);
    }
    Ok((TokenCorpus::from_docs(docs), warnings))
}

pub fn load_corpus_json(path: &Path) -> Result<TokenCorpus> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::format(path, e.to_string()))
}

pub fn corpus_to_json(corpus: &TokenCorpus) -> Result<String> {
    Ok(serde_json::to_string_pretty(corpus)?)
}
