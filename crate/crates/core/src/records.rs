//! Line-oriented `key=value` records used by the field catalog and the
//! residue table. Blank lines and `#` comments are ignored; values holding
//! whitespace may be double-quoted.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Record {
    pub line: usize,
    pub fields: BTreeMap<String, String>,
}

impl Record {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields.get(key).map(String::as_str)
    }

    pub fn require(&self, key: &str) -> Result<&str> {
        self.get(key).ok_or_else(|| self.error(format!("missing key `{key}`")))
    }

    pub fn parse_value<V: std::str::FromStr>(&self, key: &str) -> Result<Option<V>> {
        match self.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse()
                .map(Some)
                .map_err(|_| self.error(format!("cannot parse `{key}` value `{raw}`"))),
        }
    }

    pub fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            message: message.into(),
        }
    }
}

/// Parses every non-empty line. Each record or error carries its 1-based
/// line number.
pub fn parse_records(text: &str) -> Vec<Result<Record>> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                None
            } else {
                Some(parse_line(line, i + 1))
            }
        })
        .collect()
}

fn parse_line(line: &str, number: usize) -> Result<Record> {
    let err = |message: String| Error::Parse {
        line: number,
        message,
    };
    let mut fields = BTreeMap::new();
    let mut chars = line.chars().peekable();
    loop {
        while chars.peek().is_some_and(|c| c.is_whitespace()) {
            chars.next();
        }
        if chars.peek().is_none() {
            break;
        }
        let mut key = String::new();
        let mut has_eq = false;
        for c in chars.by_ref() {
            if c == '=' {
                has_eq = true;
                break;
            }
            key.push(c);
        }
        if !has_eq || key.is_empty() || key.chars().any(char::is_whitespace) {
            return Err(err(format!("expected key=value, found `{key}`")));
        }
        let value = if chars.peek() == Some(&'"') {
            chars.next();
            let mut v = String::new();
            let mut closed = false;
            for c in chars.by_ref() {
                if c == '"' {
                    closed = true;
                    break;
                }
                v.push(c);
            }
            if !closed {
                return Err(err(format!("unterminated quote for key `{key}`")));
            }
            v
        } else {
            chars.by_ref().take_while(|c| !c.is_whitespace()).collect()
        };
        if fields.insert(key.clone(), value).is_some() {
            return Err(err(format!("duplicate key `{key}`")));
        }
    }
    Ok(Record {
        line: number,
        fields,
    })
}
