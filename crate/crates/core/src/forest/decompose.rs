use super::{Forest, NodeId};

/// A tree cut along the path from its separator up to its root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpineDecomposition {
    /// `spine[0]` is the separator, the last entry is the root.
    pub spine: Vec<NodeId>,
    /// `hanging[i]` holds the roots of the subtrees attached to `spine[i]`
    /// off the spine. May be empty for `i ≥ 1`.
    pub hanging: Vec<Vec<NodeId>>,
}

impl Forest {
    /// The separator of the tree rooted at `root`: removing it leaves
    /// components of at most `|T|/2` nodes. When two separators exist the one
    /// closer to the root is returned.
    ///
    /// Descends from the root into the unique child whose subtree holds more
    /// than half of `T`. The node where this stops is a separator, and its
    /// parent is not one, so it is the shallowest.
    pub fn separator(&self, root: NodeId) -> NodeId {
        let total = self.subtree_size(root);
        let mut v = root;
        while let Some(&heavy) = self
            .children(v)
            .iter()
            .find(|&&c| 2 * self.subtree_size(c) > total)
        {
            v = heavy;
        }
        v
    }

    pub fn spine_decompose(&self, root: NodeId) -> SpineDecomposition {
        let sep = self.separator(root);
        let mut spine = vec![sep];
        let mut hanging = vec![self.children(sep).to_vec()];
        let mut below = sep;
        while below != root {
            let v = self.parent(below).expect("separator lies inside the tree");
            spine.push(v);
            hanging.push(
                self.children(v)
                    .iter()
                    .copied()
                    .filter(|&c| c != below)
                    .collect(),
            );
            below = v;
        }
        SpineDecomposition { spine, hanging }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Forest {
        Forest::from_parents((0..n).map(|i| i.checked_sub(1)).collect()).unwrap()
    }

    fn star(leaves: usize) -> Forest {
        let mut p = vec![None];
        p.extend(std::iter::repeat_n(Some(0), leaves));
        Forest::from_parents(p).unwrap()
    }

    /// Largest component left after deleting `v` from the tree at `root`.
    fn largest_component(f: &Forest, root: NodeId, v: NodeId) -> usize {
        let child_max = f
            .children(v)
            .iter()
            .map(|&c| f.subtree_size(c))
            .max()
            .unwrap_or(0);
        child_max.max(f.subtree_size(root) - f.subtree_size(v))
    }

    #[test]
    fn separator_examples() {
        assert_eq!(path(5).separator(0), 2);
        assert_eq!(path(4).separator(0), 1);
        assert_eq!(star(4).separator(0), 0);
        assert_eq!(path(1).separator(0), 0);
        assert_eq!(path(2).separator(0), 0);
    }

    #[test]
    fn separator_is_shallowest_candidate_on_all_small_trees() {
        for n in 1..=7 {
            for f in crate::forest::enumerate_forests(n).unwrap() {
                for &root in f.roots() {
                    let total = f.subtree_size(root);
                    let candidates: Vec<NodeId> = f
                        .subtree_nodes(root)
                        .into_iter()
                        .filter(|&v| 2 * largest_component(&f, root, v) <= total)
                        .collect();
                    let shallowest = *candidates.iter().min_by_key(|&&v| f.depth(v)).unwrap();
                    assert!(candidates.len() <= 2);
                    assert_eq!(f.separator(root), shallowest, "{:?}", f.parents());
                }
            }
        }
    }

    #[test]
    fn spine_examples() {
        let two = path(2).spine_decompose(0);
        assert_eq!(two.spine, vec![0]);
        assert_eq!(two.hanging, vec![vec![1]]);

        let five = path(5).spine_decompose(0);
        assert_eq!(five.spine, vec![2, 1, 0]);
        assert_eq!(five.hanging, vec![vec![3], vec![], vec![]]);

        let s = star(4).spine_decompose(0);
        assert_eq!(s.spine, vec![0]);
        assert_eq!(s.hanging, vec![vec![1, 2, 3, 4]]);
    }

    #[test]
    fn spine_partitions_tree() {
        for n in 2..=7 {
            for f in crate::forest::enumerate_forests(n).unwrap() {
                for &root in f.roots() {
                    let size = f.subtree_size(root);
                    if size < 2 {
                        continue;
                    }
                    let dec = f.spine_decompose(root);
                    assert_eq!(dec.spine.len(), dec.hanging.len());
                    assert_eq!(
                        dec.spine.len() as u32,
                        f.depth(dec.spine[0]) - f.depth(root) + 1
                    );
                    assert!(!dec.hanging[0].is_empty());
                    let hung: usize = dec.hanging.iter().map(|h| f.forest_size(h)).sum();
                    assert_eq!(dec.spine.len() + hung, size);
                    for (i, h) in dec.hanging.iter().enumerate() {
                        for &r in h {
                            assert_eq!(f.parent(r), Some(dec.spine[i]));
                            assert!(f.subtree_size(r) <= size / 2);
                        }
                    }
                    let mut seen: Vec<NodeId> = dec.spine.clone();
                    for h in &dec.hanging {
                        for &r in h {
                            seen.extend(f.subtree_nodes(r));
                        }
                    }
                    seen.sort_unstable();
                    let mut all = f.subtree_nodes(root);
                    all.sort_unstable();
                    assert_eq!(seen, all);
                }
            }
        }
    }
}
