//! Line-oriented record syntax shared by knowledge-base extension files and
//! scenario files:
//!
//! ```text
//! # comment
//! [dependency]
//! nfr = NFR6
//! rationale = "quoted values may contain # and leading spaces"
//! ```

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct RecordError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl RecordError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            column,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub line: usize,
    /// Column of the first character of the value.
    pub value_column: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Record {
    pub kind: String,
    pub line: usize,
    pub entries: Vec<Entry>,
}

impl Record {
    pub fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.key == key)
    }

    pub fn require(&self, key: &str) -> Result<&Entry, RecordError> {
        self.get(key).ok_or_else(|| {
            RecordError::new(
                self.line,
                1,
                format!("[{}] record is missing required key `{key}`", self.kind),
            )
        })
    }

    /// Rejects keys outside `allowed`.
    pub fn check_keys(&self, allowed: &[&str]) -> Result<(), RecordError> {
        match self.entries.iter().find(|e| !allowed.contains(&e.key.as_str())) {
            Some(e) => Err(RecordError::new(
                e.line,
                1,
                format!("unknown key `{}` in [{}] record", e.key, self.kind),
            )),
            None => Ok(()),
        }
    }
}

pub fn parse_records(text: &str) -> Result<Vec<Record>, RecordError> {
    let mut records: Vec<Record> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = strip_comment(raw, line_no)?;
        let indent = content.chars().take_while(|c| c.is_whitespace()).count();
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('[') {
            let Some(kind) = rest.strip_suffix(']') else {
                return Err(RecordError::new(
                    line_no,
                    indent + trimmed.chars().count() + 1,
                    "expected `]` to close record header",
                ));
            };
            let kind = kind.trim();
            if kind.is_empty() || !kind.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
                return Err(RecordError::new(line_no, indent + 2, "invalid record header"));
            }
            records.push(Record {
                kind: kind.to_string(),
                line: line_no,
                entries: Vec::new(),
            });
            continue;
        }
        let Some(eq) = content.find('=') else {
            return Err(RecordError::new(line_no, indent + 1, "expected `key = value`"));
        };
        let key = content[..eq].trim();
        if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(RecordError::new(line_no, indent + 1, "invalid key"));
        }
        let after = &content[eq + 1..];
        let lead = after.chars().take_while(|c| c.is_whitespace()).count();
        let value_column = content[..eq].chars().count() + 2 + lead;
        let value = unquote(after.trim(), line_no, value_column)?;
        let Some(record) = records.last_mut() else {
            return Err(RecordError::new(
                line_no,
                indent + 1,
                "entry appears before any record header",
            ));
        };
        if record.get(key).is_some() {
            return Err(RecordError::new(
                line_no,
                indent + 1,
                format!("duplicate key `{key}` in [{}] record", record.kind),
            ));
        }
        record.entries.push(Entry {
            key: key.to_string(),
            value,
            line: line_no,
            value_column,
        });
    }
    Ok(records)
}

/// Removes a trailing `#` comment, ignoring `#` inside double quotes.
fn strip_comment(line: &str, line_no: usize) -> Result<&str, RecordError> {
    let mut in_quotes = false;
    for (i, c) in line.char_indices() {
        match c {
            '"' => in_quotes = !in_quotes,
            '#' if !in_quotes => return Ok(&line[..i]),
            _ => {}
        }
    }
    if in_quotes {
        let col = line.find('"').map(|b| line[..b].chars().count() + 1).unwrap_or(1);
        return Err(RecordError::new(line_no, col, "unterminated string"));
    }
    Ok(line)
}

fn unquote(value: &str, line: usize, column: usize) -> Result<String, RecordError> {
    match value.strip_prefix('"') {
        None => Ok(value.to_string()),
        Some(rest) => match rest.strip_suffix('"') {
            Some(inner) if !inner.contains('"') => Ok(inner.to_string()),
            _ => Err(RecordError::new(line, column, "malformed quoted value")),
        },
    }
}

/// Splits a comma-separated list, trimming items and dropping empty ones.
pub fn split_list(value: &str) -> Vec<&str> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_and_comment_only() {
        assert!(parse_records("").unwrap().is_empty());
        assert!(parse_records("# nothing\n   \n").unwrap().is_empty());
    }

    #[test]
    fn records_and_entries() {
        let text = "[dependency]\nnfr = NFR6  # trailing\nrationale = \"a # b\"\n\n[pattern]\nname=X\n";
        let recs = parse_records(text).unwrap();
        assert_eq!(recs.len(), 2);
        assert_eq!(recs[0].kind, "dependency");
        assert_eq!(recs[0].get("nfr").unwrap().value, "NFR6");
        assert_eq!(recs[0].get("nfr").unwrap().value_column, 7);
        assert_eq!(recs[0].get("rationale").unwrap().value, "a # b");
        assert_eq!(recs[1].get("name").unwrap().value, "X");
        assert_eq!(recs[1].line, 5);
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_records("nfr = NFR1").unwrap_err();
        assert_eq!((e.line, e.column), (1, 1));
        let e = parse_records("[dependency]\n  oops\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 3));
        let e = parse_records("[dependency\n").unwrap_err();
        assert_eq!(e.line, 1);
        let e = parse_records("[a]\nk = \"open\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 5));
        let e = parse_records("[a]\nk = 1\nk = 2\n").unwrap_err();
        assert_eq!(e.line, 3);
    }

    #[test]
    fn list_splitting() {
        assert_eq!(split_list(" NFR1, NFR2 ,,NFR3 "), ["NFR1", "NFR2", "NFR3"]);
        assert!(split_list("").is_empty());
    }
}
