use anclab_cli::bench::{run_bench, BenchConfig, Scheme};
use anclab_core::forest::Shape;

#[test]
fn million_node_random_forest_beats_two_log_n() {
    let cfg =
        BenchConfig::parse("families = [\"random\"]\nn = [1048576]\nd = [8]\nqueries = 10000")
            .unwrap();
    let report = run_bench(&cfg).unwrap();
    let anclab = report
        .find(Shape::Random, 1 << 20, 8, Scheme::Anclab)
        .unwrap();
    let baseline = report
        .find(Shape::Random, 1 << 20, 8, Scheme::Baseline)
        .unwrap();
    assert!(anclab.max_bits < 40, "{anclab:?}");
    // Endpoints run up to 2n = 2^21, so each takes 22 bits.
    assert_eq!(baseline.max_bits, 44);
    assert_eq!(report.total_mismatches(), 0);
}

#[test]
fn tiny_family_loses_to_baseline() {
    let cfg = BenchConfig::parse(
        "families = [\"random\"]\nn = [16]\nd = [2]\nqueries = 1000\ntrials = 3",
    )
    .unwrap();
    let report = run_bench(&cfg).unwrap();
    let anclab = report.find(Shape::Random, 16, 2, Scheme::Anclab).unwrap();
    let baseline = report.find(Shape::Random, 16, 2, Scheme::Baseline).unwrap();
    assert_eq!((anclab.max_bits, baseline.max_bits), (16, 12));
    assert_eq!(anclab.trials, 3);
}

#[test]
fn every_row_within_its_bound() {
    let cfg = BenchConfig::parse(
        "families = [\"random\", \"star\", \"kary:3\", \"forest_of:4\"]\nn = [40, 500]\nd = [7, 9]\nqueries = 500\nseed = 1",
    )
    .unwrap();
    let report = run_bench(&cfg).unwrap();
    assert_eq!(report.rows.len(), 32);
    for r in &report.rows {
        assert!(r.max_bits <= r.theoretical_bound_bits, "{r:?}");
        assert_eq!(r.oracle_mismatches, Some(0));
    }
}
