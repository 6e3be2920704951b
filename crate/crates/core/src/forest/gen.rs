//! Deterministic forest generators and exhaustive enumeration.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::{Forest, NodeId};

/// Enumeration yields `n!` forests; beyond this it stops being useful.
pub const MAX_ENUMERATION_NODES: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("shape {shape} cannot be built with n={n}, d={d}")]
    Unrealizable { shape: Shape, n: usize, d: u64 },
    #[error("enumeration of {0}-node forests is too large (max {MAX_ENUMERATION_NODES})")]
    TooLarge(usize),
    #[error("unknown forest shape `{0}`")]
    UnknownShape(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Shape {
    /// Each new node picks a parent uniformly among nodes of depth `< d`,
    /// or starts a new tree with probability 1/16.
    Random,
    Path,
    /// A root with `n - 1` leaves.
    Star,
    /// Complete `b`-ary tree filled in breadth-first order.
    Kary(usize),
    /// `t` roots, the remaining nodes attached as in `Random`.
    ForestOf(usize),
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Random => f.write_str("random"),
            Shape::Path => f.write_str("path"),
            Shape::Star => f.write_str("star"),
            Shape::Kary(b) => write!(f, "kary:{b}"),
            Shape::ForestOf(t) => write!(f, "forest_of:{t}"),
        }
    }
}

impl FromStr for Shape {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GenError::UnknownShape(s.to_owned());
        let (name, arg) = match s.split_once(':') {
            Some((name, arg)) => (name, Some(arg.parse::<usize>().map_err(|_| bad())?)),
            None => (s, None),
        };
        match (name, arg) {
            ("random", None) => Ok(Shape::Random),
            ("path", None) => Ok(Shape::Path),
            ("star", None) => Ok(Shape::Star),
            ("kary", Some(b)) => Ok(Shape::Kary(b)),
            ("forest_of", Some(t)) => Ok(Shape::ForestOf(t)),
            _ => Err(bad()),
        }
    }
}

const NEW_TREE_ODDS: u32 = 16;

/// Whether `shape` can be built with `n` nodes under depth bound `d`.
pub fn check_shape(n: usize, d: u64, shape: Shape) -> Result<(), GenError> {
    let ok = match shape {
        Shape::Path => n as u64 <= d,
        Shape::Star => n < 2 || d >= 2,
        Shape::Kary(0) => n <= 1,
        Shape::Kary(b) => n == 0 || kary_depth(n - 1, b) <= d,
        Shape::Random => true,
        Shape::ForestOf(t) => (t > 0 || n == 0) && t <= n && (n == t || d >= 2),
    };
    if ok {
        Ok(())
    } else {
        Err(GenError::Unrealizable { shape, n, d })
    }
}

/// Depth of node `v` in the breadth-first `b`-ary tree.
fn kary_depth(mut v: usize, b: usize) -> u64 {
    let mut depth = 1;
    while v > 0 {
        v = (v - 1) / b;
        depth += 1;
    }
    depth
}

pub fn gen_forest(n: usize, d: u64, shape: Shape, seed: u64) -> Result<Forest, GenError> {
    check_shape(n, d, shape)?;
    let parent: Vec<Option<NodeId>> = match shape {
        Shape::Path => (0..n).map(|i| i.checked_sub(1)).collect(),
        Shape::Star => (0..n)
            .map(|i| if i == 0 { None } else { Some(0) })
            .collect(),
        Shape::Kary(b) => (0..n)
            .map(|i| if i == 0 { None } else { Some((i - 1) / b) })
            .collect(),
        Shape::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            attach_randomly(n, d, 1.min(n), true, &mut rng)
        }
        Shape::ForestOf(t) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            attach_randomly(n, d, t, false, &mut rng)
        }
    };
    Ok(Forest::with_depth_bound(parent, d).expect("generated forests respect their bound"))
}

/// The first `roots` nodes are roots; every later node either starts a new
/// tree (only when `new_trees`) or hangs below a uniformly chosen node that
/// still has room under the depth bound.
fn attach_randomly(
    n: usize,
    d: u64,
    roots: usize,
    new_trees: bool,
    rng: &mut ChaCha8Rng,
) -> Vec<Option<NodeId>> {
    let mut parent = Vec::with_capacity(n);
    let mut depth = Vec::with_capacity(n);
    let mut open = Vec::new();
    for v in 0..n {
        let p = if v < roots
            || open.is_empty()
            || (new_trees && rng.gen_range(0..NEW_TREE_ODDS) == 0)
        {
            None
        } else {
            Some(open[rng.gen_range(0..open.len())])
        };
        let dep = p.map_or(1u64, |p: NodeId| depth[p] + 1);
        parent.push(p);
        depth.push(dep);
        if dep < d {
            open.push(v);
        }
    }
    parent
}

/// Every parent array with `parent[i] ∈ {root} ∪ {0..i}`, i.e. `n!` forests.
/// Each unlabeled rooted forest on `n` nodes appears at least once.
pub fn enumerate_forests(n: usize) -> Result<ForestEnumerator, GenError> {
    if n > MAX_ENUMERATION_NODES {
        return Err(GenError::TooLarge(n));
    }
    Ok(ForestEnumerator {
        choice: vec![0; n],
        done: false,
    })
}

#[derive(Debug, Clone)]
pub struct ForestEnumerator {
    /// `choice[i] == 0` means root, otherwise parent `choice[i] - 1`.
    choice: Vec<usize>,
    done: bool,
}

impl Iterator for ForestEnumerator {
    type Item = Forest;

    fn next(&mut self) -> Option<Forest> {
        if self.done {
            return None;
        }
        let parent = self.choice.iter().map(|&c| c.checked_sub(1)).collect();
        let forest = Forest::from_parents(parent).expect("parents precede children");

        // Mixed-radix increment, digit i has radix i + 1.
        self.done = true;
        for i in (0..self.choice.len()).rev() {
            if self.choice[i] < i {
                self.choice[i] += 1;
                self.done = false;
                break;
            }
            self.choice[i] = 0;
        }
        Some(forest)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_and_star() {
        let p = gen_forest(5, 5, Shape::Path, 0).unwrap();
        assert_eq!(p.parents(), &[None, Some(0), Some(1), Some(2), Some(3)]);
        assert!(matches!(
            gen_forest(6, 5, Shape::Path, 0),
            Err(GenError::Unrealizable { .. })
        ));
        let s = gen_forest(5, 2, Shape::Star, 0).unwrap();
        assert_eq!(s.children(0), &[1, 2, 3, 4]);
        assert!(gen_forest(2, 1, Shape::Star, 0).is_err());
    }

    #[test]
    fn kary() {
        let k = gen_forest(7, 2, Shape::Kary(6), 0).unwrap();
        assert_eq!(k.children(0), &[1, 2, 3, 4, 5, 6]);
        assert_eq!(k.forest_depth(), 2);
        let b = gen_forest(7, 3, Shape::Kary(2), 0).unwrap();
        assert_eq!(b.children(1), &[3, 4]);
        assert!(gen_forest(8, 3, Shape::Kary(2), 0).is_err());
    }

    #[test]
    fn random_is_deterministic_and_bounded() {
        for seed in 0..20 {
            let a = gen_forest(300, 4, Shape::Random, seed).unwrap();
            let b = gen_forest(300, 4, Shape::Random, seed).unwrap();
            assert_eq!(a, b);
            assert!(a.forest_depth() <= 4);
        }
        assert_ne!(
            gen_forest(300, 4, Shape::Random, 1).unwrap(),
            gen_forest(300, 4, Shape::Random, 2).unwrap()
        );
        let flat = gen_forest(50, 1, Shape::Random, 3).unwrap();
        assert_eq!(flat.roots().len(), 50);
    }

    #[test]
    fn forest_of() {
        let f = gen_forest(40, 3, Shape::ForestOf(5), 9).unwrap();
        assert_eq!(f.roots(), &[0, 1, 2, 3, 4]);
        assert!(f.forest_depth() <= 3);
        assert!(gen_forest(3, 3, Shape::ForestOf(4), 0).is_err());
        assert!(gen_forest(4, 1, Shape::ForestOf(2), 0).is_err());
    }

    #[test]
    fn shape_parse_round_trip() {
        for s in [
            Shape::Random,
            Shape::Path,
            Shape::Star,
            Shape::Kary(3),
            Shape::ForestOf(2),
        ] {
            assert_eq!(s.to_string().parse::<Shape>().unwrap(), s);
        }
        assert!("kary".parse::<Shape>().is_err());
        assert!("blob".parse::<Shape>().is_err());
    }

    #[test]
    fn enumeration_counts() {
        let counts: Vec<usize> = (0..=7)
            .map(|n| enumerate_forests(n).unwrap().count())
            .collect();
        assert_eq!(counts, vec![1, 1, 2, 6, 24, 120, 720, 5040]);
        assert!(matches!(enumerate_forests(9), Err(GenError::TooLarge(9))));
    }

    #[test]
    fn enumeration_is_distinct() {
        let all: std::collections::HashSet<Vec<Option<NodeId>>> = enumerate_forests(5)
            .unwrap()
            .map(|f| f.parents().to_vec())
            .collect();
        assert_eq!(all.len(), 120);
    }
}
