//! The classic interval scheme: each node stores its DFS entry and exit
//! times, so ancestry is strict nesting. About `2 log n` bits per label.

use crate::forest::{Forest, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BaselineLabel {
    pub lo: u64,
    pub hi: u64,
}

/// Entry/exit numbering from one counter shared by all trees, starting at 1.
pub fn baseline_label(forest: &Forest) -> Vec<BaselineLabel> {
    let mut labels = vec![BaselineLabel { lo: 0, hi: 0 }; forest.len()];
    let mut counter = 0u64;
    // (node, entered)
    let mut stack: Vec<(NodeId, bool)> = forest.roots().iter().rev().map(|&r| (r, false)).collect();
    while let Some((v, entered)) = stack.pop() {
        counter += 1;
        if entered {
            labels[v].hi = counter;
        } else {
            labels[v].lo = counter;
            stack.push((v, true));
            stack.extend(forest.children(v).iter().rev().map(|&c| (c, false)));
        }
    }
    labels
}

pub fn baseline_is_ancestor(u: &BaselineLabel, v: &BaselineLabel) -> bool {
    u.lo < v.lo && v.hi < u.hi
}

/// Fixed width of a baseline label for `n` nodes: two endpoints in `[1, 2n]`.
pub fn baseline_bits(n: u64) -> u64 {
    2 * u64::from(64 - (2 * n).leading_zeros())
}
