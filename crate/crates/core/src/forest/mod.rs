//! Rooted forests: validation, structural queries, and the ancestry oracle.
//!
//! Nodes are dense indices `0..n`. Children are kept in increasing id order,
//! which is the left-to-right order used by every traversal in the crate.

mod decompose;
mod gen;

pub use decompose::SpineDecomposition;
pub use gen::{
    check_shape, enumerate_forests, gen_forest, ForestEnumerator, GenError, Shape,
    MAX_ENUMERATION_NODES,
};

use thiserror::Error;

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ForestError {
    #[error("parent references of node {node} form a cycle")]
    CycleDetected { node: NodeId },
    #[error("node {node} refers to unknown parent {parent}")]
    UnknownParent { node: NodeId, parent: NodeId },
    #[error("node {node} has depth {depth}, exceeding the bound {bound}")]
    DepthExceeded {
        node: NodeId,
        depth: u64,
        bound: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Forest {
    parent: Vec<Option<NodeId>>,
    depth: Vec<u32>,
    child_offsets: Vec<usize>,
    child_list: Vec<NodeId>,
    roots: Vec<NodeId>,
    subtree_size: Vec<usize>,
    max_depth: u32,
}

/// Builds a [`Forest`] from parent references, checking that it lies in a
/// family of depth bound `d` (root depth is 1).
pub fn validate_forest(parent: &[Option<NodeId>], d: u64) -> Result<Forest, ForestError> {
    Forest::with_depth_bound(parent.to_vec(), d)
}

impl Forest {
    /// Validates acyclicity only.
    pub fn from_parents(parent: Vec<Option<NodeId>>) -> Result<Self, ForestError> {
        Self::with_depth_bound(parent, u64::MAX)
    }

    pub fn with_depth_bound(parent: Vec<Option<NodeId>>, d: u64) -> Result<Self, ForestError> {
        let n = parent.len();
        for (node, p) in parent.iter().enumerate() {
            if let Some(p) = *p {
                if p >= n {
                    return Err(ForestError::UnknownParent { node, parent: p });
                }
            }
        }

        const UNSEEN: u32 = 0;
        const ON_PATH: u32 = u32::MAX;
        let mut depth = vec![UNSEEN; n];
        let mut path = Vec::new();
        for start in 0..n {
            if depth[start] != UNSEEN {
                continue;
            }
            let mut v = start;
            // Climb until a root or an already-resolved node.
            let base = loop {
                depth[v] = ON_PATH;
                path.push(v);
                match parent[v] {
                    None => break 0,
                    Some(p) if depth[p] == ON_PATH => {
                        return Err(ForestError::CycleDetected { node: p });
                    }
                    Some(p) if depth[p] != UNSEEN => break depth[p],
                    Some(p) => v = p,
                }
            };
            for (offset, &u) in path.iter().rev().enumerate() {
                depth[u] = base + 1 + offset as u32;
            }
            path.clear();
        }

        if let Some((node, &dep)) = depth
            .iter()
            .enumerate()
            .find(|(_, &dep)| u64::from(dep) > d)
        {
            return Err(ForestError::DepthExceeded {
                node,
                depth: u64::from(dep),
                bound: d,
            });
        }

        let mut child_offsets = vec![0usize; n + 1];
        for p in parent.iter().flatten() {
            child_offsets[p + 1] += 1;
        }
        for i in 0..n {
            child_offsets[i + 1] += child_offsets[i];
        }
        let mut fill = child_offsets.clone();
        let mut child_list = vec![0; child_offsets[n]];
        let mut roots = Vec::new();
        for (v, p) in parent.iter().enumerate() {
            match *p {
                Some(p) => {
                    child_list[fill[p]] = v;
                    fill[p] += 1;
                }
                None => roots.push(v),
            }
        }

        let mut forest = Forest {
            max_depth: depth.iter().copied().max().unwrap_or(0),
            parent,
            depth,
            child_offsets,
            child_list,
            roots,
            subtree_size: Vec::new(),
        };
        forest.subtree_size = forest.compute_subtree_sizes();
        Ok(forest)
    }

    fn compute_subtree_sizes(&self) -> Vec<usize> {
        let mut size = vec![1usize; self.len()];
        for v in self.preorder().into_iter().rev() {
            if let Some(p) = self.parent[v] {
                size[p] += size[v];
            }
        }
        size
    }

    /// All nodes, every tree in pre-order, trees left to right.
    pub fn preorder(&self) -> Vec<NodeId> {
        let mut order = Vec::with_capacity(self.len());
        let mut stack: Vec<NodeId> = self.roots.iter().rev().copied().collect();
        while let Some(v) = stack.pop() {
            order.push(v);
            stack.extend(self.children(v).iter().rev());
        }
        order
    }

    /// Nodes of the subtree rooted at `root`, in pre-order.
    pub fn subtree_nodes(&self, root: NodeId) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.subtree_size[root]);
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            out.push(v);
            stack.extend(self.children(v).iter().rev());
        }
        out
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn parent(&self, v: NodeId) -> Option<NodeId> {
        self.parent[v]
    }

    pub fn parents(&self) -> &[Option<NodeId>] {
        &self.parent
    }

    pub fn children(&self, v: NodeId) -> &[NodeId] {
        &self.child_list[self.child_offsets[v]..self.child_offsets[v + 1]]
    }

    pub fn roots(&self) -> &[NodeId] {
        &self.roots
    }

    /// Depth of `v`; roots have depth 1.
    pub fn depth(&self, v: NodeId) -> u32 {
        self.depth[v]
    }

    /// Maximum node depth, 0 for the empty forest.
    pub fn forest_depth(&self) -> u32 {
        self.max_depth
    }

    /// Number of nodes in the subtree rooted at `v`, `v` included.
    pub fn subtree_size(&self, v: NodeId) -> usize {
        self.subtree_size[v]
    }

    /// Total size of the trees rooted at `roots`.
    pub fn forest_size(&self, roots: &[NodeId]) -> usize {
        roots.iter().map(|&r| self.subtree_size[r]).sum()
    }

    /// `(parent, child)` pairs.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.parent
            .iter()
            .enumerate()
            .filter_map(|(v, p)| p.map(|p| (p, v)))
    }

    /// Whether `u` is a strict ancestor of `v`, by walking `v`'s parent chain.
    pub fn is_ancestor_oracle(&self, u: NodeId, v: NodeId) -> bool {
        let mut cur = self.parent[v];
        while let Some(w) = cur {
            if w == u {
                return true;
            }
            cur = self.parent[w];
        }
        false
    }

    pub fn is_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.parent[v] == Some(u) || self.parent[u] == Some(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_node() {
        let f = validate_forest(&[None], 1).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f.depth(0), 1);
        assert_eq!(f.forest_depth(), 1);
        assert_eq!(f.roots(), &[0]);
    }

    #[test]
    fn chain_of_three_exceeds_depth_two() {
        let err = validate_forest(&[None, Some(0), Some(1)], 2).unwrap_err();
        assert_eq!(
            err,
            ForestError::DepthExceeded {
                node: 2,
                depth: 3,
                bound: 2
            }
        );
        assert!(validate_forest(&[None, Some(0), Some(1)], 3).is_ok());
    }

    #[test]
    fn detects_cycles() {
        let err = validate_forest(&[None, Some(2), Some(1)], 5).unwrap_err();
        assert!(matches!(err, ForestError::CycleDetected { .. }));
        assert!(matches!(
            validate_forest(&[Some(0)], 5),
            Err(ForestError::CycleDetected { node: 0 })
        ));
    }

    #[test]
    fn detects_unknown_parent() {
        let err = validate_forest(&[None, Some(7)], 5).unwrap_err();
        assert_eq!(err, ForestError::UnknownParent { node: 1, parent: 7 });
    }

    #[test]
    fn depth_is_order_independent() {
        // Parents listed after their children.
        let f = validate_forest(&[Some(1), Some(2), None], 3).unwrap();
        assert_eq!((f.depth(0), f.depth(1), f.depth(2)), (3, 2, 1));
        assert_eq!(f.subtree_size(2), 3);
        assert_eq!(f.subtree_size(0), 1);
    }

    #[test]
    fn oracle_basics() {
        // 0 -> {1, 2}, 2 -> 3; separate root 4
        let f = Forest::from_parents(vec![None, Some(0), Some(0), Some(2), None]).unwrap();
        assert!(f.is_ancestor_oracle(0, 3));
        assert!(f.is_ancestor_oracle(2, 3));
        assert!(!f.is_ancestor_oracle(1, 3));
        assert!(!f.is_ancestor_oracle(3, 0));
        assert!(!f.is_ancestor_oracle(0, 0));
        assert!(!f.is_ancestor_oracle(4, 1));
        assert!(!f.is_ancestor_oracle(0, 4));
        assert_eq!(f.children(0), &[1, 2]);
        assert_eq!(f.preorder(), vec![0, 1, 2, 3, 4]);
        assert_eq!(f.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 2), (2, 3)]);
    }

    #[test]
    fn empty_forest_is_valid() {
        let f = validate_forest(&[], 1).unwrap();
        assert!(f.is_empty());
        assert_eq!(f.forest_depth(), 0);
    }
}
