//! File formats, benchmarks and checks behind the `anclab` command.

pub mod bench;
pub mod checks;
pub mod error;
pub mod ingest;
pub mod labelfile;
pub mod xml;

use std::fmt::Write as _;

use anclab_core::marker::label_forest;
use anclab_core::params::ParamTable;
use anclab_core::universal::universal_vertex_count;

use crate::error::Result;
use crate::ingest::Ingested;
use crate::labelfile::LabelFile;

/// Human-readable dump of a parameter table.
pub fn render_params(p: &ParamTable) -> String {
    let mut s = String::new();
    writeln!(
        s,
        "n_input={} d={} n_pow2={} K={}",
        p.n_input(),
        p.depth_bound(),
        p.n_pow2(),
        p.levels()
    )
    .unwrap();
    writeln!(s, "k,c_k,x_k,H_k,J_k,gamma_k").unwrap();
    for k in 0..=p.levels() {
        let c = p.c(k).expect("level in range");
        let (h, j) = if k == 0 {
            (String::new(), String::new())
        } else {
            (
                p.h_count(k).unwrap().to_string(),
                p.j_count(k).unwrap().to_string(),
            )
        };
        writeln!(
            s,
            "{k},{}/{},{},{h},{j},{}",
            c.numer(),
            c.denom(),
            p.x(k).unwrap(),
            p.gamma(k).unwrap()
        )
        .unwrap();
    }
    writeln!(s, "ancestry_bits={}", p.ancestry_bits()).unwrap();
    writeln!(s, "adjacency_bits={}", p.adjacency_bits()).unwrap();
    writeln!(s, "universal_vertices={}", universal_vertex_count(p)).unwrap();
    s
}

/// Labels an ingested forest in the family `F(|F|, d)`.
pub fn label_ingested(input: &Ingested) -> Result<LabelFile> {
    let params = ParamTable::new(input.forest.len() as u64, input.d)?;
    let labeling = label_forest(&params, &input.forest)?;
    Ok(LabelFile::from_labeling(&labeling))
}
