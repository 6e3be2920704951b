//! The marker: embeds a forest into the label space so that ancestry becomes
//! interval containment.
//!
//! A call `embed(T, I, k)` places a tree of at most `2^k` nodes into
//! `U_k(I)`, the triplets of level `≤ k` whose interval lies in `I`, where
//! `|I| = ⌊c_k·|T|⌋`. Small trees are pushed down to the lowest level that
//! fits them. A tree with `2^(k-1) < |T| ≤ 2^k` is cut along its spine; spine
//! node `v_i` gets `(k, h_1, ĥ_i)` whose interval covers the slots
//! `I_1 ∪ … ∪ I_i` reserved for the hanging forests `F_1..F_i`, and each
//! `F_i` is embedded recursively at level `k - 1` inside its slot.
//!
//! Every hanging tree is a complete subtree of the input, so subtree sizes
//! are computed once up front and the whole run is linear in `n` apart from
//! the bignum arithmetic.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::forest::{Forest, NodeId};
use crate::params::{IntInterval, LabelValue, ParamError, ParamTable, Triplet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MarkerError {
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error("forest has {nodes} nodes, family bound is {bound}")]
    ForestTooLarge { nodes: usize, bound: u64 },
    #[error("forest has depth {depth}, family bound is {bound}")]
    ForestTooDeep { depth: u32, bound: u64 },
    #[error("tree at node {root} has {size} nodes, too many for level {level}")]
    TreeTooLarge {
        root: NodeId,
        size: usize,
        level: u32,
    },
    #[error("interval {interval} is shorter than the required {need}")]
    IntervalTooSmall {
        interval: IntInterval,
        need: BigUint,
    },
    #[error("interval {interval} leaves the base range [1, {gamma0})")]
    OutsideBase {
        interval: IntInterval,
        gamma0: BigUint,
    },
    #[error("spine start h_1 = {h} reaches H_{level} = {limit}")]
    StartOverflow {
        level: u32,
        h: BigUint,
        limit: BigUint,
    },
    #[error("spine width ĥ = {j} reaches J_{level} = {limit}")]
    WidthOverflow {
        level: u32,
        j: BigUint,
        limit: BigUint,
    },
    #[error("spine slots end at {end}, beyond the interval {interval}")]
    SlotOverflow { end: BigUint, interval: IntInterval },
    #[error("node {0} was never embedded")]
    Unlabeled(NodeId),
    #[error("node {node} got {triplet}, not inside U_{level}({interval})")]
    Unsound {
        node: NodeId,
        triplet: Triplet,
        interval: IntInterval,
        level: u32,
    },
}

impl MarkerError {
    /// True for violations of the scheme's own bounds, which signal a bug
    /// rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            MarkerError::StartOverflow { .. }
                | MarkerError::WidthOverflow { .. }
                | MarkerError::SlotOverflow { .. }
                | MarkerError::Unsound { .. }
        )
    }
}

/// Labels of one forest under one parameter table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labeling<'p> {
    params: &'p ParamTable,
    labels: Vec<LabelValue>,
    depths: Vec<u32>,
}

impl<'p> Labeling<'p> {
    pub fn params(&self) -> &'p ParamTable {
        self.params
    }

    pub fn label(&self, v: NodeId) -> &LabelValue {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[LabelValue] {
        &self.labels
    }

    pub fn depth(&self, v: NodeId) -> u32 {
        self.depths[v]
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Bit length of the largest label actually assigned.
    pub fn max_assigned_bits(&self) -> u64 {
        self.labels.iter().map(LabelValue::bits).max().unwrap_or(0)
    }
}

/// One recursive embedding of a tree, as seen by the marker.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbedCall {
    pub root: NodeId,
    pub interval: IntInterval,
    pub level: u32,
}

/// Labels every node of `forest`.
pub fn label_forest<'p>(
    params: &'p ParamTable,
    forest: &Forest,
) -> Result<Labeling<'p>, MarkerError> {
    let mut marker = Marker::new(params, forest)?;
    marker.embed_forest(forest.roots(), &marker.root_interval()?, params.levels())?;
    marker.finish()
}

/// Like [`label_forest`], also returning every tree embedding performed.
pub fn label_forest_traced<'p>(
    params: &'p ParamTable,
    forest: &Forest,
) -> Result<(Labeling<'p>, Vec<EmbedCall>), MarkerError> {
    let mut marker = Marker::new(params, forest)?;
    marker.trace = Some(Vec::new());
    marker.embed_forest(forest.roots(), &marker.root_interval()?, params.levels())?;
    let trace = marker.trace.take().unwrap_or_default();
    Ok((marker.finish()?, trace))
}

/// Whether `t` belongs to `U_k(I)`: a valid triplet of level at most `k`
/// whose interval lies inside `I`.
pub fn in_uk(params: &ParamTable, t: &Triplet, interval: &IntInterval, k: u32) -> bool {
    t.level <= k && params.is_valid_triplet(t) && interval.contains(&params.interval_unchecked(t))
}

/// Incremental access to the embedding steps. Most callers want
/// [`label_forest`].
pub struct Marker<'p, 'f> {
    params: &'p ParamTable,
    forest: &'f Forest,
    labels: Vec<Option<LabelValue>>,
    stack: Vec<EmbedCall>,
    trace: Option<Vec<EmbedCall>>,
}

impl<'p, 'f> Marker<'p, 'f> {
    pub fn new(params: &'p ParamTable, forest: &'f Forest) -> Result<Self, MarkerError> {
        if forest.len() as u64 > params.n_input() {
            return Err(MarkerError::ForestTooLarge {
                nodes: forest.len(),
                bound: params.n_input(),
            });
        }
        if u64::from(forest.forest_depth()) > params.depth_bound() {
            return Err(MarkerError::ForestTooDeep {
                depth: forest.forest_depth(),
                bound: params.depth_bound(),
            });
        }
        Ok(Self {
            params,
            forest,
            labels: vec![None; forest.len()],
            stack: Vec::new(),
            trace: None,
        })
    }

    /// `[1, 1 + ⌊c_K·|F|⌋)`, which fits in `[1, Γ_0)` because `c_K < 3`.
    pub fn root_interval(&self) -> Result<IntInterval, MarkerError> {
        let len = self
            .params
            .floor_c_u64(self.params.levels(), self.forest.len() as u64)?;
        Ok(IntInterval::with_len(BigUint::one(), &len))
    }

    pub fn label(&self, v: NodeId) -> Option<&LabelValue> {
        self.labels[v].as_ref()
    }

    /// Embeds the trees rooted at `roots` into `U_k(interval)`. Tree `T_i`
    /// receives the next `⌊c_k·|T_i|⌋` integers, left to right.
    pub fn embed_forest(
        &mut self,
        roots: &[NodeId],
        interval: &IntInterval,
        k: u32,
    ) -> Result<(), MarkerError> {
        self.check_base(interval)?;
        let need = self
            .params
            .floor_c_u64(k, self.forest.forest_size(roots) as u64)?;
        if interval.len() < need {
            return Err(MarkerError::IntervalTooSmall {
                interval: interval.clone(),
                need,
            });
        }
        self.push_forest(roots, interval.lo.clone(), k)?;
        self.run()
    }

    /// Embeds the tree rooted at `root` into `U_k(interval)`, using the
    /// prefix of length `⌊c_k·|T|⌋`.
    pub fn embed_tree(
        &mut self,
        root: NodeId,
        interval: &IntInterval,
        k: u32,
    ) -> Result<(), MarkerError> {
        self.check_base(interval)?;
        let need = self
            .params
            .floor_c_u64(k, self.forest.subtree_size(root) as u64)?;
        if interval.len() < need {
            return Err(MarkerError::IntervalTooSmall {
                interval: interval.clone(),
                need,
            });
        }
        self.stack.push(EmbedCall {
            root,
            interval: interval.prefix(&need),
            level: k,
        });
        self.run()
    }

    pub fn finish(self) -> Result<Labeling<'p>, MarkerError> {
        let labels = self
            .labels
            .into_iter()
            .enumerate()
            .map(|(v, l)| l.ok_or(MarkerError::Unlabeled(v)))
            .collect::<Result<_, _>>()?;
        let depths = (0..self.forest.len())
            .map(|v| self.forest.depth(v))
            .collect();
        Ok(Labeling {
            params: self.params,
            labels,
            depths,
        })
    }

    fn check_base(&self, interval: &IntInterval) -> Result<(), MarkerError> {
        let gamma0 = self.params.gammas()[0].clone();
        if interval.lo.is_zero() || interval.hi > gamma0 {
            return Err(MarkerError::OutsideBase {
                interval: interval.clone(),
                gamma0,
            });
        }
        Ok(())
    }

    /// Queues consecutive slices starting at `lo`; returns the end offset.
    fn push_forest(
        &mut self,
        roots: &[NodeId],
        mut lo: BigUint,
        k: u32,
    ) -> Result<BigUint, MarkerError> {
        // Pushed in reverse so trees are processed left to right.
        let mut calls = Vec::with_capacity(roots.len());
        for &root in roots {
            let len = self
                .params
                .floor_c_u64(k, self.forest.subtree_size(root) as u64)?;
            let slice = IntInterval::with_len(lo, &len);
            lo = slice.hi.clone();
            calls.push(EmbedCall {
                root,
                interval: slice,
                level: k,
            });
        }
        self.stack.extend(calls.into_iter().rev());
        Ok(lo)
    }

    fn run(&mut self) -> Result<(), MarkerError> {
        while let Some(call) = self.stack.pop() {
            if let Some(trace) = self.trace.as_mut() {
                trace.push(call.clone());
            }
            self.embed_one(call)?;
        }
        Ok(())
    }

    fn assign(&mut self, node: NodeId, t: Triplet, scope: &EmbedCall) -> Result<(), MarkerError> {
        if !in_uk(self.params, &t, &scope.interval, scope.level) {
            return Err(MarkerError::Unsound {
                node,
                triplet: t,
                interval: scope.interval.clone(),
                level: scope.level,
            });
        }
        let nu = self.params.encode_triplet(&t)?;
        debug_assert!(self.labels[node].is_none(), "node {node} labeled twice");
        self.labels[node] = Some(nu);
        Ok(())
    }

    fn embed_one(&mut self, call: EmbedCall) -> Result<(), MarkerError> {
        let size = self.forest.subtree_size(call.root);
        if size == 1 {
            return self.assign(call.root, Triplet::point(call.interval.lo.clone()), &call);
        }

        // Lowest level holding the tree: 2^(k-1) < |T| ≤ 2^k.
        let k = usize::BITS - (size - 1).leading_zeros();
        if k > call.level {
            return Err(MarkerError::TreeTooLarge {
                root: call.root,
                size,
                level: call.level,
            });
        }
        let interval = if k < call.level {
            call.interval
                .prefix(&self.params.floor_c_u64(k, size as u64)?)
        } else {
            call.interval.clone()
        };

        let params = self.params;
        let x = params.x(k)?;
        let h_first = Integer::div_ceil(&interval.lo, x);
        let h_limit = params.h_count(k)?;
        if &h_first >= h_limit {
            return Err(MarkerError::StartOverflow {
                level: k,
                h: h_first,
                limit: h_limit.clone(),
            });
        }

        let dec = self.forest.spine_decompose(call.root);
        // Slot widths h̄_i; at least 1 so that consecutive spine nodes nest strictly.
        let slot_widths: Vec<BigUint> = dec
            .hanging
            .iter()
            .map(|hanging| {
                let need = params.floor_c_u64(k - 1, self.forest.forest_size(hanging) as u64)?;
                Ok(Integer::div_ceil(&need, x).max(BigUint::one()))
            })
            .collect::<Result<_, MarkerError>>()?;

        let total: BigUint = slot_widths.iter().sum();
        let j_limit = params.j_count(k)?;
        if &total >= j_limit {
            return Err(MarkerError::WidthOverflow {
                level: k,
                j: total,
                limit: j_limit.clone(),
            });
        }
        let end = (&h_first + &total) * x;
        if end > interval.hi {
            return Err(MarkerError::SlotOverflow { end, interval });
        }

        let mut slot_start = h_first.clone();
        let mut width = BigUint::zero();
        for ((v, hanging), slot_width) in dec.spine.iter().zip(&dec.hanging).zip(slot_widths) {
            width += &slot_width;
            self.push_forest(hanging, &slot_start * x, k - 1)?;
            self.assign(
                *v,
                Triplet {
                    level: k,
                    h: h_first.clone(),
                    j: width.clone(),
                },
                &call,
            )?;
            slot_start += slot_width;
        }
        Ok(())
    }
}
