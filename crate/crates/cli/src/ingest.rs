//! Forest ingestion from parent-list files and XML documents.

use anclab_core::forest::{validate_forest, Forest, ForestError, NodeId};
use thiserror::Error;

use crate::xml::{parse_element_tree, XmlError};

/// Validation errors with node ids translated back to the 1-based ids of the
/// input file.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IngestError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("line {line}: node {id} listed twice")]
    DuplicateId { line: usize, id: u64 },
    #[error("line {line}: id {id} outside 1..={n}")]
    IdOutOfRange { line: usize, id: u64, n: u64 },
    #[error("header declares {declared} nodes, found {found}")]
    CountMismatch { declared: u64, found: u64 },
    #[error("depth bound must be at least 1")]
    ZeroDepth,
    #[error("parent references of node {node} form a cycle")]
    CycleDetected { node: u64 },
    #[error("node {node} has depth {depth}, exceeding the bound {bound}")]
    DepthExceeded { node: u64, depth: u64, bound: u64 },
    #[error(transparent)]
    Xml(#[from] XmlError),
}

impl IngestError {
    fn from_forest(e: ForestError) -> Self {
        let ext = |v: NodeId| v as u64 + 1;
        match e {
            ForestError::CycleDetected { node } => IngestError::CycleDetected { node: ext(node) },
            ForestError::DepthExceeded { node, depth, bound } => IngestError::DepthExceeded {
                node: ext(node),
                depth,
                bound,
            },
            // Parents are range-checked while parsing.
            ForestError::UnknownParent { node, parent } => {
                unreachable!("parent {parent} of node {node} passed the range check")
            }
        }
    }
}

/// A validated forest together with the family depth bound it was declared
/// (or measured) against.
#[derive(Debug, Clone)]
pub struct Ingested {
    pub forest: Forest,
    pub d: u64,
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn two_ints(line: usize, s: &str) -> Result<(u64, u64), IngestError> {
    let bad = |msg: &str| IngestError::Malformed {
        line,
        msg: msg.to_owned(),
    };
    let mut it = s.split_whitespace();
    let mut next = || -> Result<u64, IngestError> {
        it.next()
            .ok_or_else(|| bad("expected two integers"))?
            .parse()
            .map_err(|_| bad("not a non-negative integer"))
    };
    let pair = (next()?, next()?);
    if it.next().is_some() {
        return Err(bad("trailing fields"));
    }
    Ok(pair)
}

/// Parses the `n d` header followed by `id parent` lines (`parent = 0` for a
/// root). Ids are `1..=n` in any order.
pub fn parse_parent_list(text: &str) -> Result<Ingested, IngestError> {
    let mut lines = data_lines(text);
    let (line, header) = lines.next().ok_or(IngestError::Malformed {
        line: 0,
        msg: "missing `n d` header".into(),
    })?;
    let (n, d) = two_ints(line, header)?;
    if d == 0 {
        return Err(IngestError::ZeroDepth);
    }
    let size = usize::try_from(n).map_err(|_| IngestError::Malformed {
        line,
        msg: "node count too large".into(),
    })?;

    let mut parent: Vec<Option<Option<NodeId>>> = vec![None; size];
    let mut found = 0u64;
    for (line, s) in lines {
        let (id, p) = two_ints(line, s)?;
        if id == 0 || id > n {
            return Err(IngestError::IdOutOfRange { line, id, n });
        }
        if p > n {
            return Err(IngestError::IdOutOfRange { line, id: p, n });
        }
        let slot = &mut parent[(id - 1) as usize];
        if slot.is_some() {
            return Err(IngestError::DuplicateId { line, id });
        }
        *slot = Some(p.checked_sub(1).map(|p| p as NodeId));
        found += 1;
    }
    if found != n {
        return Err(IngestError::CountMismatch { declared: n, found });
    }
    let parent: Vec<Option<NodeId>> = parent
        .into_iter()
        .map(|p| p.expect("every id seen"))
        .collect();
    let forest = validate_forest(&parent, d).map_err(IngestError::from_forest)?;
    Ok(Ingested { forest, d })
}

/// The element tree of an XML document, elements numbered in document order.
/// The depth bound is the measured depth.
pub fn ingest_xml(text: &str) -> Result<Ingested, IngestError> {
    let tree = parse_element_tree(text)?;
    let forest = Forest::from_parents(tree.parent).expect("element nesting is acyclic");
    let d = u64::from(forest.forest_depth());
    Ok(Ingested { forest, d })
}

/// Treats text whose first non-blank character is `<` as XML.
pub fn looks_like_xml(text: &str) -> bool {
    text.trim_start().starts_with('<')
}

pub fn ingest_any(text: &str) -> Result<Ingested, IngestError> {
    if looks_like_xml(text) {
        ingest_xml(text)
    } else {
        parse_parent_list(text)
    }
}
