//! Label-only queries. The decoder sees the family parameters and two labels,
//! never the forest.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::params::{LabelValue, ParamError, ParamTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecodeError {
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error("depth {depth} outside [1, {bound}]")]
    DepthOutOfRange { depth: u64, bound: u64 },
    #[error("packed adjacency label {0} outside the label space")]
    PackedOutOfRange(BigUint),
}

/// Whether the node labeled `u` is a strict ancestor of the node labeled `v`.
///
/// Ancestry is containment of the associated intervals. A spine node with a
/// one-slot interval can share its interval with the level-0 node at the
/// start of its slot; in that case the higher level is the ancestor.
pub fn is_ancestor(
    params: &ParamTable,
    u: &LabelValue,
    v: &LabelValue,
) -> Result<bool, ParamError> {
    let tu = params.decode_triplet(u)?;
    let tv = params.decode_triplet(v)?;
    if u == v {
        return Ok(false);
    }
    let iu = params.interval_unchecked(&tu);
    let iv = params.interval_unchecked(&tv);
    if iu == iv {
        return Ok(tu.level > tv.level);
    }
    Ok(iu.contains(&iv))
}

/// A label extended with the node depth, for adjacency queries.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AdjLabel {
    pub nu: LabelValue,
    pub depth: u64,
}

impl AdjLabel {
    pub fn new(params: &ParamTable, nu: LabelValue, depth: u64) -> Result<Self, DecodeError> {
        if depth == 0 || depth > params.depth_bound() {
            return Err(DecodeError::DepthOutOfRange {
                depth,
                bound: params.depth_bound(),
            });
        }
        params.decode_triplet(&nu)?;
        Ok(Self { nu, depth })
    }

    /// `(ν - 1)·d + (depth - 1)`.
    pub fn pack(&self, params: &ParamTable) -> BigUint {
        (&self.nu.0 - 1u32) * params.depth_bound() + (self.depth - 1)
    }

    pub fn unpack(params: &ParamTable, packed: &BigUint) -> Result<Self, DecodeError> {
        let (q, r) = packed.div_rem(&BigUint::from(params.depth_bound()));
        let nu = LabelValue(q + 1u32);
        if &nu.0 >= params.label_limit() {
            return Err(DecodeError::PackedOutOfRange(packed.clone()));
        }
        let depth = r.to_u64().expect("remainder below d") + 1;
        Ok(Self { nu, depth })
    }
}

/// Packed adjacency label for a node with label `nu` at depth `depth`.
pub fn make_adj_label(
    params: &ParamTable,
    nu: &LabelValue,
    depth: u64,
) -> Result<BigUint, DecodeError> {
    Ok(AdjLabel::new(params, nu.clone(), depth)?.pack(params))
}

/// Parent-child test: one is an ancestor of the other and exactly one level
/// above it.
pub fn is_adjacent(params: &ParamTable, u: &AdjLabel, v: &AdjLabel) -> Result<bool, ParamError> {
    if v.depth == u.depth + 1 {
        is_ancestor(params, &u.nu, &v.nu)
    } else if u.depth == v.depth + 1 {
        is_ancestor(params, &v.nu, &u.nu)
    } else {
        // Validate both labels even when the depths already decide.
        params.decode_triplet(&u.nu)?;
        params.decode_triplet(&v.nu)?;
        Ok(false)
    }
}

/// Fixed label widths of a family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LabelBits {
    pub ancestry: u64,
    pub adjacency: u64,
}

pub fn label_bits(params: &ParamTable) -> LabelBits {
    LabelBits {
        ancestry: params.ancestry_bits(),
        adjacency: params.adjacency_bits(),
    }
}
