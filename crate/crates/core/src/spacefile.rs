//! The JSON file format for finite cover spaces.
//!
//! ```json
//! {
//!   "format": 1,
//!   "carrier": 3,
//!   "covers": [
//!     [[0, 1], [1, 2]]
//!   ]
//! }
//! ```
//!
//! `covers` is a subbase: the space is everything refined by the meet of the
//! listed covers. An empty list gives the indiscrete space.

use std::fmt::Write as _;

use serde::Deserialize;
use thiserror::Error;

use crate::coverspace::{close_subbase, SubbasePresentation};
use crate::error::SpaceError;
use crate::finkernel::{Carrier, Cover, FiniteCoverSpace, Subset};

pub const FORMAT_VERSION: u64 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceFileError {
    #[error("line {line}, column {column}: {msg}")]
    Syntax { line: usize, column: usize, msg: String },
    #[error("{path}: {msg}")]
    Invalid { path: String, msg: String },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    format: u64,
    carrier: usize,
    covers: Vec<Vec<Vec<usize>>>,
}

/// A parsed, validated space file. Index lists are sorted and covers
/// normalized on load.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceFile {
    carrier: usize,
    covers: Vec<Cover>,
}

fn invalid(path: impl Into<String>, msg: impl Into<String>) -> SpaceFileError {
    SpaceFileError::Invalid { path: path.into(), msg: msg.into() }
}

impl SpaceFile {
    pub fn new(carrier: usize, covers: Vec<Cover>) -> Result<SpaceFile, SpaceError> {
        SubbasePresentation::new(carrier, covers.clone())?;
        Ok(SpaceFile { carrier, covers })
    }

    /// A file whose single cover is the generator of `s`.
    pub fn of_space(s: &FiniteCoverSpace) -> SpaceFile {
        SpaceFile { carrier: s.n(), covers: vec![s.generator().clone()] }
    }

    pub fn parse(text: &str) -> Result<SpaceFile, SpaceFileError> {
        let raw: RawFile = serde_json::from_str(text).map_err(|e| SpaceFileError::Syntax {
            line: e.line(),
            column: e.column(),
            msg: strip_position(&e.to_string()),
        })?;
        if raw.format != FORMAT_VERSION {
            return Err(invalid("format", format!("unsupported version {}, expected {FORMAT_VERSION}", raw.format)));
        }
        let n = raw.carrier;
        Carrier::new(n).map_err(|e| invalid("carrier", e.to_string()))?;
        let mut covers = Vec::with_capacity(raw.covers.len());
        for (ci, c) in raw.covers.iter().enumerate() {
            let mut members = Vec::with_capacity(c.len());
            for (si, s) in c.iter().enumerate() {
                if let Some(&bad) = s.iter().find(|&&x| x >= n) {
                    return Err(invalid(
                        format!("covers[{ci}][{si}]"),
                        format!("element {bad} is out of range for a carrier of size {n}"),
                    ));
                }
                members.push(Subset::from_elements(n, s.iter().copied()).expect("range checked"));
            }
            covers.push(Cover::new(n, members).map_err(|e| invalid(format!("covers[{ci}]"), e.to_string()))?);
        }
        Ok(SpaceFile { carrier: n, covers })
    }

    pub fn carrier(&self) -> usize {
        self.carrier
    }

    pub fn covers(&self) -> &[Cover] {
        &self.covers
    }

    pub fn subbase(&self) -> SubbasePresentation {
        SubbasePresentation::new(self.carrier, self.covers.clone()).expect("validated on construction")
    }

    /// The precover structure generated by the listed covers.
    pub fn space(&self) -> FiniteCoverSpace {
        close_subbase(&self.subbase())
    }

    /// Canonical text: one cover per line, subsets in the library's order.
    pub fn emit(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{{");
        let _ = writeln!(out, "  \"format\": {FORMAT_VERSION},");
        let _ = writeln!(out, "  \"carrier\": {},", self.carrier);
        if self.covers.is_empty() {
            let _ = writeln!(out, "  \"covers\": []");
        } else {
            let _ = writeln!(out, "  \"covers\": [");
            for (i, c) in self.covers.iter().enumerate() {
                let sep = if i + 1 < self.covers.len() { "," } else { "" };
                let _ = writeln!(out, "    {}{sep}", cover_json(c));
            }
            let _ = writeln!(out, "  ]");
        }
        out.push_str("}\n");
        out
    }
}

/// `[[0, 1], [2]]`.
pub fn cover_json(c: &Cover) -> String {
    let parts: Vec<String> = c.members().iter().map(|s| subset_json(*s)).collect();
    format!("[{}]", parts.join(", "))
}

pub fn subset_json(s: Subset) -> String {
    let xs: Vec<String> = s.elements().map(|x| x.to_string()).collect();
    format!("[{}]", xs.join(", "))
}

// serde_json appends " at line L column C"; it is reported separately.
fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}
