//! Compact ancestry labels for rooted forests of bounded depth.
//!
//! For the family of forests with at most `n` nodes and depth at most `d`,
//! every node receives a single integer label of `log n + 2 log d + O(1)`
//! bits, and whether one node is an ancestor of another can be decided from
//! the two labels alone. Adding the node depth gives adjacency labels and,
//! with them, an implicit universal graph for the family.
//!
//! ```
//! use anclab_core::{decoder, forest::Forest, marker, params::ParamTable};
//!
//! let params = ParamTable::new(3, 2).unwrap();
//! let forest = Forest::from_parents(vec![None, Some(0), Some(0)]).unwrap();
//! let labels = marker::label_forest(&params, &forest).unwrap();
//! assert!(decoder::is_ancestor(&params, labels.label(0), labels.label(2)).unwrap());
//! assert!(!decoder::is_ancestor(&params, labels.label(1), labels.label(2)).unwrap());
//! ```

pub mod baseline;
pub mod decoder;
pub mod forest;
pub mod marker;
pub mod params;
pub mod universal;

pub use decoder::{is_adjacent, is_ancestor, label_bits, AdjLabel};
pub use forest::{validate_forest, Forest, NodeId};
pub use marker::{label_forest, Labeling};
pub use params::{IntInterval, LabelValue, ParamTable, Triplet};
