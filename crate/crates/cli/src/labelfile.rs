//! The label file: a CSV table of labels preceded by a `#` header that pins
//! down the parameter table.
//!
//! ```text
//! # n_input=2 d=2 n_pow2=2 gamma_k=110 ancestry_bits=7 adjacency_bits=8
//! node,label,depth,adj_label
//! 1,15,1,28
//! 2,1,2,1
//! ```

use std::fmt::Write as _;
use std::io::{self, Write};

use anclab_core::decoder::{AdjLabel, DecodeError};
use anclab_core::marker::Labeling;
use anclab_core::params::{LabelValue, ParamError, ParamTable};
use num_bigint::BigUint;
use thiserror::Error;

const COLUMNS: &str = "node,label,depth,adj_label";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabelFileError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("header field `{0}` missing")]
    MissingField(&'static str),
    #[error("header `{field}` is {found}, the table for n={n}, d={d} has {expected}")]
    HeaderMismatch {
        field: &'static str,
        found: String,
        expected: String,
        n: u64,
        d: u64,
    },
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error("line {line}: {source}")]
    Row { line: usize, source: DecodeError },
    #[error(
        "line {line}: adjacency label {found} does not match label and depth (expected {expected})"
    )]
    AdjMismatch {
        line: usize,
        found: BigUint,
        expected: BigUint,
    },
    #[error("line {line}: node {found}, expected {expected}")]
    NodeOrder {
        line: usize,
        found: u64,
        expected: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelRow {
    /// 1-based node id.
    pub node: u64,
    pub label: LabelValue,
    pub depth: u64,
    pub adj: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelFile {
    pub params: ParamTable,
    pub rows: Vec<LabelRow>,
}

impl LabelFile {
    pub fn from_labeling(labeling: &Labeling<'_>) -> Self {
        let params = labeling.params().clone();
        let rows = (0..labeling.len())
            .map(|v| {
                let label = labeling.label(v).clone();
                let depth = u64::from(labeling.depth(v));
                let adj = AdjLabel {
                    nu: label.clone(),
                    depth,
                }
                .pack(&params);
                LabelRow {
                    node: v as u64 + 1,
                    label,
                    depth,
                    adj,
                }
            })
            .collect();
        Self { params, rows }
    }

    fn header(&self) -> String {
        let p = &self.params;
        format!(
            "# n_input={} d={} n_pow2={} gamma_k={} ancestry_bits={} adjacency_bits={}",
            p.n_input(),
            p.depth_bound(),
            p.n_pow2(),
            p.label_limit(),
            p.ancestry_bits(),
            p.adjacency_bits()
        )
    }

    pub fn write_to<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{}", self.header())?;
        writeln!(out, "{COLUMNS}")?;
        for r in &self.rows {
            writeln!(out, "{},{},{},{}", r.node, r.label, r.depth, r.adj)?;
        }
        out.flush()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "{}", self.header()).unwrap();
        writeln!(s, "{COLUMNS}").unwrap();
        for r in &self.rows {
            writeln!(s, "{},{},{},{}", r.node, r.label, r.depth, r.adj).unwrap();
        }
        s
    }

    /// Parses and re-validates a label file: the header must reproduce the
    /// parameter table and every row must decode under it.
    pub fn parse(text: &str) -> Result<Self, LabelFileError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());

        let (line, first) = lines.next().ok_or(LabelFileError::Malformed {
            line: 0,
            msg: "empty file".into(),
        })?;
        let header = first
            .strip_prefix('#')
            .ok_or_else(|| LabelFileError::Malformed {
                line,
                msg: "expected `#` header".into(),
            })?;
        let fields: Vec<(&str, &str)> = header
            .split_whitespace()
            .map(|kv| {
                kv.split_once('=').ok_or_else(|| LabelFileError::Malformed {
                    line,
                    msg: format!("bad header field `{kv}`"),
                })
            })
            .collect::<Result<_, _>>()?;
        let get = |key: &'static str| -> Result<&str, LabelFileError> {
            fields
                .iter()
                .find(|(k, _)| *k == key)
                .map(|(_, v)| *v)
                .ok_or(LabelFileError::MissingField(key))
        };
        let num = |key: &'static str| -> Result<u64, LabelFileError> {
            get(key)?.parse().map_err(|_| LabelFileError::Malformed {
                line,
                msg: format!("`{key}` is not an integer"),
            })
        };
        let (n, d) = (num("n_input")?, num("d")?);
        let params = ParamTable::new(n, d)?;
        let expected = [
            ("n_pow2", params.n_pow2().to_string()),
            ("gamma_k", params.label_limit().to_string()),
            ("ancestry_bits", params.ancestry_bits().to_string()),
            ("adjacency_bits", params.adjacency_bits().to_string()),
        ];
        for (field, want) in expected {
            let found = get(field)?;
            if found != want {
                return Err(LabelFileError::HeaderMismatch {
                    field,
                    found: found.to_owned(),
                    expected: want,
                    n,
                    d,
                });
            }
        }

        match lines.next() {
            Some((_, COLUMNS)) => {}
            Some((line, _)) => {
                return Err(LabelFileError::Malformed {
                    line,
                    msg: format!("expected column line `{COLUMNS}`"),
                })
            }
            None => {
                return Err(LabelFileError::Malformed {
                    line: line + 1,
                    msg: "missing column line".into(),
                })
            }
        }

        let mut rows = Vec::new();
        for (line, s) in lines {
            let bad = |msg: &str| LabelFileError::Malformed {
                line,
                msg: msg.to_owned(),
            };
            let cols: Vec<&str> = s.split(',').map(str::trim).collect();
            let [node, label, depth, adj] = cols[..] else {
                return Err(bad("expected 4 comma-separated fields"));
            };
            let node: u64 = node.parse().map_err(|_| bad("node id is not an integer"))?;
            let label: LabelValue = label.parse().map_err(|_| bad("label is not an integer"))?;
            let depth: u64 = depth.parse().map_err(|_| bad("depth is not an integer"))?;
            let adj: BigUint = adj
                .parse()
                .map_err(|_| bad("adjacency label is not an integer"))?;

            let expected_node = rows.len() as u64 + 1;
            if node != expected_node {
                return Err(LabelFileError::NodeOrder {
                    line,
                    found: node,
                    expected: expected_node,
                });
            }
            let packed = AdjLabel::new(&params, label.clone(), depth)
                .map_err(|source| LabelFileError::Row { line, source })?
                .pack(&params);
            if packed != adj {
                return Err(LabelFileError::AdjMismatch {
                    line,
                    found: adj,
                    expected: packed,
                });
            }
            rows.push(LabelRow {
                node,
                label,
                depth,
                adj,
            });
        }
        Ok(Self { params, rows })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use anclab_core::forest::validate_forest;
    use anclab_core::marker::label_forest;

    fn two_node() -> LabelFile {
        let p = ParamTable::new(2, 2).unwrap();
        let f = validate_forest(&[None, Some(0)], 2).unwrap();
        LabelFile::from_labeling(&label_forest(&p, &f).unwrap())
    }

    #[test]
    fn known_text() {
        let text = two_node().to_text();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(
            lines,
            vec![
                "# n_input=2 d=2 n_pow2=2 gamma_k=110 ancestry_bits=7 adjacency_bits=8",
                "node,label,depth,adj_label",
                "1,15,1,28",
                "2,1,2,1",
            ]
        );
        assert_eq!(LabelFile::parse(&text).unwrap(), two_node());
        let mut buf = Vec::new();
        two_node().write_to(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), text);
    }

    #[test]
    fn rejects_tampering() {
        let text = two_node().to_text();
        let gamma = text.replace("gamma_k=110", "gamma_k=111");
        assert!(matches!(
            LabelFile::parse(&gamma),
            Err(LabelFileError::HeaderMismatch {
                field: "gamma_k",
                ..
            })
        ));
        let adj = text.replace("1,15,1,28", "1,15,1,29");
        assert!(matches!(
            LabelFile::parse(&adj),
            Err(LabelFileError::AdjMismatch { line: 3, .. })
        ));
        let label = text.replace("1,15,1,28", "1,110,1,28");
        assert!(matches!(
            LabelFile::parse(&label),
            Err(LabelFileError::Row { line: 3, .. })
        ));
        let depth = text.replace("2,1,2,1", "2,1,3,1");
        assert!(matches!(
            LabelFile::parse(&depth),
            Err(LabelFileError::Row { line: 4, .. })
        ));
        let order = text.replace("2,1,2,1", "3,1,2,1");
        assert!(matches!(
            LabelFile::parse(&order),
            Err(LabelFileError::NodeOrder {
                found: 3,
                expected: 2,
                ..
            })
        ));
        let missing = text.replace(" adjacency_bits=8", "");
        assert_eq!(
            LabelFile::parse(&missing).unwrap_err(),
            LabelFileError::MissingField("adjacency_bits")
        );
        assert!(matches!(
            LabelFile::parse("1,2,3,4"),
            Err(LabelFileError::Malformed { line: 1, .. })
        ));
        assert!(matches!(
            LabelFile::parse(&text.replace("2,1,2,1", "2,1,2")),
            Err(LabelFileError::Malformed { .. })
        ));
    }
}
