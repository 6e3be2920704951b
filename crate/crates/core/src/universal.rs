//! The universal graph for `F(n, d)` induced by the adjacency labels.
//!
//! Vertices are all pairs `(ν, depth)` with `ν ∈ [1, Γ_K)` and
//! `depth ∈ [1, d]`; two vertices are adjacent exactly when the adjacency
//! decoder says so. Every forest of the family embeds into it as an induced
//! subgraph via `v ↦ (L(v), depth(v))`. The graph is never stored: adjacency
//! is evaluated on demand, and [`UniversalGraph::materialize`] is only
//! available for tiny tables.

use std::collections::HashSet;
use std::io::{self, Write};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::decoder::{is_adjacent, AdjLabel, DecodeError};
use crate::forest::Forest;
use crate::marker::{label_forest, MarkerError};
use crate::params::{LabelValue, ParamTable};

/// Largest vertex count [`UniversalGraph::materialize`] accepts.
pub const MAX_MATERIALIZED_VERTICES: u64 = 5000;

#[derive(Debug, Error)]
pub enum UniversalError {
    #[error("universal graph has {0} vertices, above the materialization limit {MAX_MATERIALIZED_VERTICES}")]
    TooLarge(BigUint),
    #[error(transparent)]
    Decode(#[from] DecodeError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Clone, Copy)]
pub struct UniversalGraph<'p> {
    params: &'p ParamTable,
}

impl<'p> UniversalGraph<'p> {
    pub fn new(params: &'p ParamTable) -> Self {
        Self { params }
    }

    pub fn params(&self) -> &'p ParamTable {
        self.params
    }

    /// `(Γ_K - 1)·d`.
    pub fn vertex_count(&self) -> BigUint {
        universal_vertex_count(self.params)
    }

    pub fn vertex(&self, nu: LabelValue, depth: u64) -> Result<AdjLabel, DecodeError> {
        AdjLabel::new(self.params, nu, depth)
    }

    pub fn adjacent(&self, a: &AdjLabel, b: &AdjLabel) -> Result<bool, DecodeError> {
        for w in [a, b] {
            if w.depth == 0 || w.depth > self.params.depth_bound() {
                return Err(DecodeError::DepthOutOfRange {
                    depth: w.depth,
                    bound: self.params.depth_bound(),
                });
            }
        }
        Ok(is_adjacent(self.params, a, b)?)
    }

    /// Labels `forest` and checks that `v ↦ (L(v), depth(v))` is injective
    /// and preserves adjacency and non-adjacency for every node pair.
    pub fn embed_check(&self, forest: &Forest) -> Result<bool, MarkerError> {
        let labeling = label_forest(self.params, forest)?;
        let phi: Vec<AdjLabel> = (0..forest.len())
            .map(|v| AdjLabel {
                nu: labeling.label(v).clone(),
                depth: u64::from(forest.depth(v)),
            })
            .collect();

        let distinct: HashSet<&AdjLabel> = phi.iter().collect();
        if distinct.len() != phi.len() {
            return Ok(false);
        }
        for u in 0..forest.len() {
            for v in u + 1..forest.len() {
                let edge = forest.is_edge(u, v);
                if is_adjacent(self.params, &phi[u], &phi[v])? != edge {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// All vertices as packed integers `0..(Γ_K - 1)·d`.
    pub fn vertices(&self) -> impl Iterator<Item = AdjLabel> + '_ {
        let limit = self.params.label_limit().to_u64().unwrap_or(u64::MAX);
        let d = self.params.depth_bound();
        (1..limit).flat_map(move |nu| {
            (1..=d).map(move |depth| AdjLabel {
                nu: LabelValue::from(nu),
                depth,
            })
        })
    }

    /// Every edge `{a, b}` with `pack(a) < pack(b)`, from all-pairs evaluation.
    pub fn materialize(&self) -> Result<Vec<(BigUint, BigUint)>, UniversalError> {
        let count = self.vertex_count();
        if count > BigUint::from(MAX_MATERIALIZED_VERTICES) {
            return Err(UniversalError::TooLarge(count));
        }
        let verts: Vec<(AdjLabel, BigUint)> = self
            .vertices()
            .map(|w| {
                let p = w.pack(self.params);
                (w, p)
            })
            .collect();
        let mut edges = Vec::new();
        for (i, (a, pa)) in verts.iter().enumerate() {
            for (b, pb) in &verts[i + 1..] {
                if is_adjacent(self.params, a, b).map_err(DecodeError::from)? {
                    edges.push((pa.clone(), pb.clone()));
                }
            }
        }
        Ok(edges)
    }

    /// Writes the materialized graph as `u v` lines of packed vertex ids.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> Result<usize, UniversalError> {
        let edges = self.materialize()?;
        for (a, b) in &edges {
            writeln!(out, "{a} {b}")?;
        }
        Ok(edges.len())
    }
}

/// `(Γ_K - 1)·d`, the size of the label space `[1, Γ_K) × [1, d]`.
pub fn universal_vertex_count(params: &ParamTable) -> BigUint {
    (params.label_limit() - 1u32) * params.depth_bound()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::{gen_forest, Shape};

    #[test]
    fn vertex_counts() {
        assert_eq!(
            universal_vertex_count(&ParamTable::new(16, 2).unwrap()),
            BigUint::from(112648u32)
        );
        assert_eq!(
            universal_vertex_count(&ParamTable::new(1, 1).unwrap()),
            BigUint::from(2u32)
        );
    }

    #[test]
    fn vertices_per_node_settle_at_fixed_depth() {
        let ratios: Vec<f64> = (10..=20)
            .map(|e| {
                let p = ParamTable::new(1 << e, 4).unwrap();
                universal_vertex_count(&p).to_f64().unwrap() / f64::from(1u32 << e)
            })
            .collect();
        // The tail of the level sum only grows, by ever smaller amounts.
        let steps: Vec<f64> = ratios.windows(2).map(|w| w[1] - w[0]).collect();
        assert!(steps.iter().all(|&s| s >= 0.0), "{ratios:?}");
        assert!(steps.windows(2).all(|s| s[1] < s[0]), "{ratios:?}");
        assert!(steps.last().unwrap() / ratios[9] < 0.002);
    }

    #[test]
    fn adjacency_examples() {
        let p = ParamTable::new(2, 2).unwrap();
        let g = UniversalGraph::new(&p);
        let w = |nu: u64, d: u64| g.vertex(LabelValue::from(nu), d).unwrap();
        assert!(g.adjacent(&w(15, 1), &w(1, 2)).unwrap());
        assert!(!g.adjacent(&w(15, 1), &w(15, 1)).unwrap());
        assert!(!g.adjacent(&w(1, 1), &w(3, 1)).unwrap());
        assert!(g.vertex(LabelValue::from(110), 1).is_err());
        assert!(g
            .adjacent(
                &AdjLabel {
                    nu: LabelValue::from(1),
                    depth: 3
                },
                &w(1, 1)
            )
            .is_err());
    }

    #[test]
    fn embed_small_cases() {
        let p = ParamTable::new(1, 1).unwrap();
        assert!(UniversalGraph::new(&p)
            .embed_check(&Forest::from_parents(vec![None]).unwrap())
            .unwrap());
        let p = ParamTable::new(32, 4).unwrap();
        let g = UniversalGraph::new(&p);
        for seed in 0..20 {
            assert!(g
                .embed_check(&gen_forest(32, 4, Shape::Random, seed).unwrap())
                .unwrap());
        }
    }

    #[test]
    fn materialized_matches_on_demand() {
        let p = ParamTable::new(2, 2).unwrap();
        let g = UniversalGraph::new(&p);
        let edges: HashSet<(BigUint, BigUint)> = g.materialize().unwrap().into_iter().collect();
        let verts: Vec<AdjLabel> = g.vertices().collect();
        assert_eq!(verts.len() as u64, 218);
        for a in &verts {
            for b in &verts {
                let (pa, pb) = (a.pack(&p), b.pack(&p));
                let key = if pa < pb { (pa, pb) } else { (pb, pa) };
                assert_eq!(g.adjacent(a, b).unwrap(), edges.contains(&key));
            }
        }
        let mut buf = Vec::new();
        let written = g.write_edge_list(&mut buf).unwrap();
        assert_eq!(written, edges.len());
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), edges.len());
        assert!(UniversalGraph::new(&ParamTable::new(16, 2).unwrap())
            .materialize()
            .is_err());
    }
}
