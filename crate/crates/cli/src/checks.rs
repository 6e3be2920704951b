//! Self-checks against the brute-force oracles.

use std::io::Write;

use anclab_core::baseline::{baseline_is_ancestor, baseline_label};
use anclab_core::decoder::{is_adjacent, is_ancestor, AdjLabel};
use anclab_core::forest::{enumerate_forests, gen_forest, Forest, Shape};
use anclab_core::marker::label_forest;
use anclab_core::params::ParamTable;
use anclab_core::universal::{universal_vertex_count, UniversalGraph};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PairCheck {
    pub pairs: u64,
    pub ancestry_mismatches: u64,
    pub adjacency_mismatches: u64,
    pub baseline_mismatches: u64,
}

impl PairCheck {
    pub fn mismatches(&self) -> u64 {
        self.ancestry_mismatches + self.adjacency_mismatches + self.baseline_mismatches
    }

    fn add(&mut self, other: PairCheck) {
        self.pairs += other.pairs;
        self.ancestry_mismatches += other.ancestry_mismatches;
        self.adjacency_mismatches += other.adjacency_mismatches;
        self.baseline_mismatches += other.baseline_mismatches;
    }
}

/// The family a forest tightly belongs to: its own size and depth.
pub fn tight_family(forest: &Forest) -> Result<ParamTable> {
    Ok(ParamTable::new(
        forest.len().max(1) as u64,
        u64::from(forest.forest_depth().max(1)),
    )?)
}

/// Labels `forest` under `params` and compares both decoders and the
/// baseline with the oracles on the given ordered pairs.
pub fn check_pairs(
    params: &ParamTable,
    forest: &Forest,
    pairs: impl IntoIterator<Item = (usize, usize)>,
) -> Result<PairCheck> {
    let labeling = label_forest(params, forest)?;
    let base = baseline_label(forest);
    let adj = |v: usize| AdjLabel {
        nu: labeling.label(v).clone(),
        depth: u64::from(forest.depth(v)),
    };
    let mut out = PairCheck::default();
    for (u, v) in pairs {
        out.pairs += 1;
        let truth = forest.is_ancestor_oracle(u, v);
        if is_ancestor(params, labeling.label(u), labeling.label(v))? != truth {
            out.ancestry_mismatches += 1;
        }
        if is_adjacent(params, &adj(u), &adj(v))? != forest.is_edge(u, v) {
            out.adjacency_mismatches += 1;
        }
        if baseline_is_ancestor(&base[u], &base[v]) != truth {
            out.baseline_mismatches += 1;
        }
    }
    Ok(out)
}

pub fn all_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SelftestReport {
    pub forests: u64,
    pub check: PairCheck,
}

/// Every parent-array forest with `1..=max_n` nodes, each in its tight
/// family, all ordered pairs.
pub fn selftest(max_n: usize) -> Result<SelftestReport> {
    let mut report = SelftestReport::default();
    for n in 1..=max_n {
        for forest in enumerate_forests(n)? {
            let params = tight_family(&forest)?;
            report
                .check
                .add(check_pairs(&params, &forest, all_pairs(n))?);
            report.forests += 1;
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniversalReport {
    pub trials: u64,
    pub failures: u64,
    pub vertex_count: BigUint,
    /// Edges written with `--export`.
    pub exported_edges: Option<usize>,
}

/// Embeds `trials` random forests of `F(n, d)` into the universal graph and
/// verifies each is an induced subgraph. Optionally writes the materialized
/// graph as an edge list.
pub fn universal_check(
    n: u64,
    d: u64,
    trials: u64,
    seed: u64,
    export: Option<&mut dyn Write>,
) -> Result<UniversalReport> {
    let params = ParamTable::new(n, d)?;
    let graph = UniversalGraph::new(&params);
    let size = usize::try_from(n)
        .map_err(|_| CliError::Usage(format!("n = {n} is too large to build forests")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    for _ in 0..trials {
        let forest = gen_forest(size, d, Shape::Random, rng.gen())?;
        if !graph.embed_check(&forest)? {
            failures += 1;
        }
    }
    let exported_edges = match export {
        Some(out) => Some(graph.write_edge_list(out)?),
        None => None,
    };
    Ok(UniversalReport {
        trials,
        failures,
        vertex_count: universal_vertex_count(&params),
        exported_edges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selftest_small() {
        let r = selftest(4).unwrap();
        assert_eq!(r.forests, 1 + 2 + 6 + 24);
        assert_eq!(r.check.pairs, 2 * 2 + 6 * 6 + 12 * 24);
        assert_eq!(r.check.mismatches(), 0);
        assert!(selftest(9).is_err());
    }

    #[test]
    fn universal_small() {
        let mut buf = Vec::new();
        let r = universal_check(2, 2, 5, 1, Some(&mut buf)).unwrap();
        assert_eq!(r.failures, 0);
        assert_eq!(r.vertex_count, BigUint::from(218u32));
        let lines = String::from_utf8(buf).unwrap();
        assert_eq!(lines.lines().count(), r.exported_edges.unwrap());
        assert!(r.exported_edges.unwrap() > 0);
        assert!(universal_check(64, 4, 1, 1, Some(&mut Vec::new())).is_err());
    }
}
