//! Space file formats.
//!
//! JSON: `{"points": ["a", "b"], "dist": [["0", "1"], ["1", "0"]]}`. Every
//! entry is a string holding an unsigned integer, an unsigned decimal or
//! `p/q`; JSON numbers are rejected so no value passes through floating
//! point.
//!
//! CSV: a header row of point labels, then one row of entries per point in
//! the same order. Fields are trimmed.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::space::{UltrametricSpace, ValidationError};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed JSON space: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed CSV space: {0}")]
    Csv(#[from] csv::Error),
    #[error("CSV space has no header row")]
    MissingHeader,
    #[error(transparent)]
    Invalid(#[from] ValidationError),
}

impl FormatError {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            FormatError::Io { .. } => "io",
            FormatError::Json(_) => "malformed-json",
            FormatError::Csv(_) | FormatError::MissingHeader => "malformed-csv",
            FormatError::Invalid(ValidationError::Input(e)) => e.code(),
            FormatError::Invalid(ValidationError::Violations(_)) => "not-ultrametric",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceFile {
    pub points: Vec<String>,
    pub dist: Vec<Vec<String>>,
}

impl From<&UltrametricSpace> for SpaceFile {
    fn from(s: &UltrametricSpace) -> Self {
        let n = s.len();
        SpaceFile {
            points: s.points().to_vec(),
            dist: (0..n).map(|i| (0..n).map(|j| s.dist(i, j).to_string()).collect()).collect(),
        }
    }
}

impl SpaceFile {
    pub fn validate(&self) -> Result<UltrametricSpace, ValidationError> {
        UltrametricSpace::parse(self.points.clone(), &self.dist)
    }
}

pub fn parse_json_file(text: &str) -> Result<SpaceFile, FormatError> {
    Ok(serde_json::from_str(text)?)
}

pub fn parse_csv_file(text: &str) -> Result<SpaceFile, FormatError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows = reader.records();
    let header = rows.next().ok_or(FormatError::MissingHeader)??;
    let points = header.iter().map(str::to_string).collect();
    let dist = rows
        .map(|r| r.map(|rec| rec.iter().map(str::to_string).collect()))
        .collect::<Result<_, _>>()?;
    Ok(SpaceFile { points, dist })
}

/// Parses JSON when the first non-blank character is `{`, CSV otherwise.
pub fn parse_space_file(text: &str) -> Result<SpaceFile, FormatError> {
    if text.trim_start().starts_with('{') {
        parse_json_file(text)
    } else {
        parse_csv_file(text)
    }
}

pub fn parse_space(text: &str) -> Result<UltrametricSpace, FormatError> {
    Ok(parse_space_file(text)?.validate()?)
}

pub fn read_space_file(path: &Path) -> Result<SpaceFile, FormatError> {
    let text = std::fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_space_file(&text)
}

pub fn read_space(path: &Path) -> Result<UltrametricSpace, FormatError> {
    Ok(read_space_file(path)?.validate()?)
}

pub fn space_to_json(s: &UltrametricSpace) -> String {
    serde_json::to_string_pretty(&SpaceFile::from(s)).expect("strings always serialize")
}

pub fn space_to_csv(s: &UltrametricSpace) -> String {
    let file = SpaceFile::from(s);
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(&file.points).expect("in-memory write");
    for row in &file.dist {
        writer.write_record(row).expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate_random, GenConfig};
    use crate::scalar::Scalar;

    #[test]
    fn json_and_csv_agree() {
        let json = r#"{"points": ["a", "b"], "dist": [["0", "0.5"], ["1/2", "0"]]}"#;
        let csv = "a, b\n0, 1/2\n0.5, 0\n";
        let a = parse_space(json).unwrap();
        let b = parse_space(csv).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.dist(0, 1), &Scalar::from_ratio(1, 2));
    }

    #[test]
    fn numbers_and_unknown_fields_are_rejected() {
        let numbers = r#"{"points": ["a"], "dist": [[0]]}"#;
        assert_eq!(parse_space(numbers).unwrap_err().code(), "malformed-json");
        let extra = r#"{"points": ["a"], "dist": [["0"]], "x": 1}"#;
        assert_eq!(parse_space(extra).unwrap_err().code(), "malformed-json");
    }

    #[test]
    fn error_codes() {
        assert_eq!(parse_space("").unwrap_err().code(), "malformed-csv");
        assert_eq!(parse_space("a,a\n0,1\n1,0").unwrap_err().code(), "duplicate-label");
        assert_eq!(parse_space("a,b\n0,1\n1").unwrap_err().code(), "non-square-matrix");
        assert_eq!(parse_space("a,b\n0,x\n1,0").unwrap_err().code(), "unparsable-entry");
        assert_eq!(parse_space("a,b,c\n0,1,3\n1,0,1\n3,1,0").unwrap_err().code(), "not-ultrametric");
    }

    #[test]
    fn written_files_read_back() {
        let s = generate_random(&GenConfig::new(11, 9));
        assert_eq!(parse_space(&space_to_json(&s)).unwrap(), s);
        assert_eq!(parse_space(&space_to_csv(&s)).unwrap(), s);
    }
}
