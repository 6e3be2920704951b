//! Label-size and speed comparison between the scheme and the interval
//! baseline over a grid of forest families.
//!
//! A config is a TOML table:
//!
//! ```toml
//! families = ["random", "kary:2"]
//! n = [1024, 1048576]
//! d = [4, 8]
//! trials = 2
//! seed = 42               # optional
//! queries = 1000000       # timed queries per instance, optional
//! oracle_checks = 1000    # oracle-checked pairs per instance, optional
//! max_labeled_n = 1048576 # larger n only get table rows, optional
//! ```
//!
//! Each `(family, n, d, trial)` cell is independent and cells run in
//! parallel. For `n` above `max_labeled_n` no forest is built; those rows
//! report the fixed label widths from the parameter table alone.

use std::fmt::Write as _;
use std::hint::black_box;
use std::time::Instant;

use anclab_core::baseline::{baseline_bits, baseline_is_ancestor, baseline_label};
use anclab_core::decoder::{is_adjacent, is_ancestor, AdjLabel};
use anclab_core::forest::{check_shape, gen_forest, Forest, Shape};
use anclab_core::marker::label_forest;
use anclab_core::params::ParamTable;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Deserialize;

use crate::error::{CliError, Result};

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    pub families: Vec<String>,
    pub n: Vec<u64>,
    pub d: Vec<u64>,
    #[serde(default = "defaults::trials")]
    pub trials: u32,
    #[serde(default = "defaults::seed")]
    pub seed: u64,
    #[serde(default = "defaults::queries")]
    pub queries: u64,
    #[serde(default = "defaults::oracle_checks")]
    pub oracle_checks: u64,
    #[serde(default = "defaults::max_labeled_n")]
    pub max_labeled_n: u64,
}

mod defaults {
    pub fn trials() -> u32 {
        1
    }
    pub fn seed() -> u64 {
        super::DEFAULT_SEED
    }
    pub fn queries() -> u64 {
        1_000_000
    }
    pub fn oracle_checks() -> u64 {
        1000
    }
    pub fn max_labeled_n() -> u64 {
        1 << 20
    }
}

impl BenchConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    fn shapes(&self) -> Result<Vec<Shape>> {
        let shapes = self
            .families
            .iter()
            .map(|f| f.parse::<Shape>())
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let empty = [
            ("families", shapes.is_empty()),
            ("n", self.n.is_empty()),
            ("d", self.d.is_empty()),
        ];
        if let Some((name, _)) = empty.iter().find(|(_, e)| *e) {
            return Err(CliError::Config(format!("`{name}` must not be empty")));
        }
        if self.n.contains(&0) || self.d.contains(&0) {
            return Err(CliError::Config("n and d values must be at least 1".into()));
        }
        if self.trials == 0 {
            return Err(CliError::Config("`trials` must be at least 1".into()));
        }
        for &shape in &shapes {
            for &n in &self.n {
                for &d in &self.d {
                    check_shape(usize::try_from(n).unwrap_or(usize::MAX), d, shape)?;
                }
            }
        }
        Ok(shapes)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Anclab,
    Baseline,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Anclab => "anclab",
            Scheme::Baseline => "baseline",
        }
    }
}

/// One report row. The per-instance fields are `None` for table-only rows.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub family: Shape,
    pub n: u64,
    pub d: u64,
    /// Instances actually labeled.
    pub trials: u32,
    pub scheme: Scheme,
    /// Fixed label width for the family.
    pub max_bits: u64,
    /// Largest label actually assigned, over all trials.
    pub observed_bits: Option<u64>,
    pub theoretical_bound_bits: u64,
    pub label_ms: Option<f64>,
    pub queries_per_sec: Option<f64>,
    pub oracle_mismatches: Option<u64>,
}

pub const CSV_HEADER: &str = "family,n,d,trials,scheme,max_bits,observed_bits,theoretical_bound_bits,label_ms,queries_per_sec,oracle_mismatches";

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    pub fn to_csv(&self) -> String {
        fn opt<T: std::fmt::Display>(v: Option<T>) -> String {
            v.map(|v| v.to_string()).unwrap_or_default()
        }
        let mut s = String::new();
        writeln!(s, "{CSV_HEADER}").unwrap();
        for r in &self.rows {
            writeln!(
                s,
                "{},{},{},{},{},{},{},{},{},{},{}",
                r.family,
                r.n,
                r.d,
                r.trials,
                r.scheme.name(),
                r.max_bits,
                opt(r.observed_bits),
                r.theoretical_bound_bits,
                opt(r.label_ms.map(|t| format!("{t:.3}"))),
                opt(r.queries_per_sec.map(|q| format!("{q:.0}"))),
                opt(r.oracle_mismatches),
            )
            .unwrap();
        }
        s
    }

    pub fn total_mismatches(&self) -> u64 {
        self.rows.iter().filter_map(|r| r.oracle_mismatches).sum()
    }

    pub fn find(&self, family: Shape, n: u64, d: u64, scheme: Scheme) -> Option<&BenchRow> {
        self.rows
            .iter()
            .find(|r| r.family == family && r.n == n && r.d == d && r.scheme == scheme)
    }
}

fn ceil_log2(x: u64) -> u64 {
    u64::from(64 - (x - 1).leading_zeros()) * u64::from(x > 1)
}

/// `⌈log₂ n'⌉ + 2⌈log₂ d⌉ + 16`.
pub fn anclab_bound_bits(params: &ParamTable) -> u64 {
    u64::from(params.levels()) + 2 * ceil_log2(params.depth_bound()) + 16
}

#[derive(Debug, Clone, Copy, Default)]
struct SchemeStats {
    bits: u64,
    label_ms: f64,
    qps: f64,
    mismatches: u64,
}

struct Cell {
    family: Shape,
    n: u64,
    d: u64,
    seed: u64,
}

fn sample_pairs(rng: &mut ChaCha8Rng, n: usize, count: u64) -> Vec<(usize, usize)> {
    (0..count)
        .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n)))
        .collect()
}

fn per_sec(count: usize, start: Instant) -> f64 {
    count as f64 / start.elapsed().as_secs_f64().max(1e-9)
}

fn run_cell(cell: &Cell, cfg: &BenchConfig) -> Result<(SchemeStats, SchemeStats)> {
    let params = ParamTable::new(cell.n, cell.d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cell.seed);
    let forest: Forest = gen_forest(cell.n as usize, cell.d, cell.family, rng.gen())?;
    let n = forest.len();

    let start = Instant::now();
    let labeling = label_forest(&params, &forest)?;
    let anc_ms = start.elapsed().as_secs_f64() * 1e3;

    let start = Instant::now();
    let base = baseline_label(&forest);
    let base_ms = start.elapsed().as_secs_f64() * 1e3;

    let queries = sample_pairs(&mut rng, n, cfg.queries);
    let start = Instant::now();
    let mut hits = 0usize;
    for &(u, v) in &queries {
        hits += usize::from(is_ancestor(&params, labeling.label(u), labeling.label(v))?);
    }
    black_box(hits);
    let anc_qps = per_sec(queries.len(), start);

    let start = Instant::now();
    let mut hits = 0usize;
    for &(u, v) in &queries {
        hits += usize::from(baseline_is_ancestor(&base[u], &base[v]));
    }
    black_box(hits);
    let base_qps = per_sec(queries.len(), start);

    let adj = |v: usize| AdjLabel {
        nu: labeling.label(v).clone(),
        depth: u64::from(forest.depth(v)),
    };
    let (mut anc_bad, mut base_bad) = (0, 0);
    for (u, v) in sample_pairs(&mut rng, n, cfg.oracle_checks) {
        let truth = forest.is_ancestor_oracle(u, v);
        if is_ancestor(&params, labeling.label(u), labeling.label(v))? != truth
            || is_adjacent(&params, &adj(u), &adj(v))? != forest.is_edge(u, v)
        {
            anc_bad += 1;
        }
        if baseline_is_ancestor(&base[u], &base[v]) != truth {
            base_bad += 1;
        }
    }

    let top = base.iter().map(|l| l.hi).max().unwrap_or(0);
    let anc = SchemeStats {
        bits: labeling.max_assigned_bits(),
        label_ms: anc_ms,
        qps: anc_qps,
        mismatches: anc_bad,
    };
    let base = SchemeStats {
        bits: 2 * u64::from(64 - top.leading_zeros()),
        label_ms: base_ms,
        qps: base_qps,
        mismatches: base_bad,
    };
    Ok((anc, base))
}

fn aggregate(
    cells: &[(SchemeStats, SchemeStats)],
    pick: impl Fn(&(SchemeStats, SchemeStats)) -> SchemeStats,
) -> SchemeStats {
    let all: Vec<SchemeStats> = cells.iter().map(pick).collect();
    let k = all.len() as f64;
    SchemeStats {
        bits: all.iter().map(|s| s.bits).max().unwrap_or(0),
        label_ms: all.iter().map(|s| s.label_ms).sum::<f64>() / k,
        qps: all.iter().map(|s| s.qps).sum::<f64>() / k,
        mismatches: all.iter().map(|s| s.mismatches).sum(),
    }
}

pub fn run_bench(cfg: &BenchConfig) -> Result<BenchReport> {
    let shapes = cfg.shapes()?;
    let mut seeds = ChaCha8Rng::seed_from_u64(cfg.seed);

    // Grid in report order; seeds are drawn up front so results do not depend
    // on scheduling.
    let mut groups = Vec::new();
    for &family in &shapes {
        for &n in &cfg.n {
            for &d in &cfg.d {
                let labeled = n <= cfg.max_labeled_n;
                let cells: Vec<Cell> = if labeled {
                    (0..cfg.trials)
                        .map(|_| Cell {
                            family,
                            n,
                            d,
                            seed: seeds.gen(),
                        })
                        .collect()
                } else {
                    Vec::new()
                };
                groups.push((family, n, d, cells));
            }
        }
    }

    let results: Vec<Vec<(SchemeStats, SchemeStats)>> = groups
        .par_iter()
        .map(|(_, _, _, cells)| {
            cells
                .par_iter()
                .map(|c| run_cell(c, cfg))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let mut rows = Vec::new();
    for ((family, n, d, cells), stats) in groups.iter().zip(&results) {
        let (family, n, d) = (*family, *n, *d);
        let params = ParamTable::new(n, d)?;
        let trials = cells.len() as u32;
        let labeled = !cells.is_empty();
        let anc = labeled.then(|| aggregate(stats, |s| s.0));
        let base = labeled.then(|| aggregate(stats, |s| s.1));
        for (scheme, max_bits, bound, s) in [
            (
                Scheme::Anclab,
                params.ancestry_bits(),
                anclab_bound_bits(&params),
                anc,
            ),
            (Scheme::Baseline, baseline_bits(n), baseline_bits(n), base),
        ] {
            rows.push(BenchRow {
                family,
                n,
                d,
                trials,
                scheme,
                max_bits,
                observed_bits: s.map(|s| s.bits),
                theoretical_bound_bits: bound,
                label_ms: s.map(|s| s.label_ms),
                queries_per_sec: s.map(|s| s.qps),
                oracle_mismatches: s.map(|s| s.mismatches),
            });
        }
    }
    Ok(BenchReport { rows })
}
