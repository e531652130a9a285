//! Node-by-node comparison of two Sk_trees into a Diff_tree.
//!
//! Each node of a Diff_tree annotates four features of the paired source
//! nodes: `Sk` (expansion-direction agreement, a leaf counting as expanded
//! to the left), `Ch` (child-count comparison of the second against the
//! first), and, when the child counts agree and both nodes are internal,
//! `Dir` (interval-direction agreement) and `Int` (interval-width
//! comparison). Recursion pairs children index-wise and stops at leaves or
//! child-count mismatches, so a Diff_tree leaf occurs wherever either
//! source tree has a leaf. Comparison is forward-only: the left segment
//! must precede the right one.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::pitch_interval;
use crate::sktree::{SkNode, SkTree};

#[derive(Debug, Error)]
pub enum DiffError {
    #[error("cannot compare spans {left} and {right}: unequal windows")]
    SpanMismatch {
        left: crate::model::RationalDuration,
        right: crate::model::RationalDuration,
    },
    #[error("comparison is forward-only: left segment {left} must precede right segment {right}")]
    NotForward { left: usize, right: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Agreement {
    Same,
    Diff,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChildCount {
    Same,
    More,
    Less,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntervalWidth {
    Narrow,
    Wide,
    Same,
}

/// The four per-node features. `dir` and `int_width` are present iff the
/// child counts agree and both compared nodes are internal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffFeatures {
    pub sk: Agreement,
    pub ch: ChildCount,
    pub dir: Option<Agreement>,
    pub int_width: Option<IntervalWidth>,
}

impl DiffFeatures {
    /// True when nothing differs: `sk` and `ch` agree and, where present,
    /// `dir` and `int_width` agree too.
    pub fn all_same(&self) -> bool {
        self.sk == Agreement::Same
            && self.ch == ChildCount::Same
            && self.dir.map_or(true, |d| d == Agreement::Same)
            && self.int_width.map_or(true, |w| w == IntervalWidth::Same)
    }
}

/// Positional path into a source tree: child indices from the root.
pub type NodePath = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffNode {
    pub features: DiffFeatures,
    pub children: Vec<DiffNode>,
    pub left_ref: NodePath,
    pub right_ref: NodePath,
}

impl DiffNode {
    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(DiffNode::node_count).sum::<usize>()
    }

    pub fn leaf_count(&self) -> usize {
        if self.children.is_empty() {
            1
        } else {
            self.children.iter().map(DiffNode::leaf_count).sum()
        }
    }

    pub fn depth(&self) -> usize {
        1 + self
            .children
            .iter()
            .map(DiffNode::depth)
            .max()
            .unwrap_or(0)
    }
}

/// The comparison tree of two segments, plus the semitone offset between
/// the two root pitches. The offset is an extension beyond the four
/// per-node features: it distinguishes exact repetition from exact
/// transposition, which are otherwise both all-`same`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffTree {
    pub root: DiffNode,
    /// 0-based segment ordinals, left < right; user-facing output adds 1.
    pub left_segment: usize,
    pub right_segment: usize,
    pub root_pitch_offset: i32,
}

/// Compares two nodes feature-wise. `Sk` is always computed; `Dir` and
/// `Int` only when the child counts agree and both nodes are internal.
pub fn diff_features(a: &SkNode, b: &SkNode) -> DiffFeatures {
    let sk = if a.expansion.survivor_index() == b.expansion.survivor_index() {
        Agreement::Same
    } else {
        Agreement::Diff
    };
    let ch = match b.children.len().cmp(&a.children.len()) {
        std::cmp::Ordering::Equal => ChildCount::Same,
        std::cmp::Ordering::Greater => ChildCount::More,
        std::cmp::Ordering::Less => ChildCount::Less,
    };
    let (dir, int_width) = if ch == ChildCount::Same && !a.is_leaf() && !b.is_leaf() {
        let ia = a.child_interval().unwrap_or(0);
        let ib = b.child_interval().unwrap_or(0);
        // A unison has no direction: zero matches only zero.
        let dir = if ia.signum() == ib.signum() {
            Agreement::Same
        } else {
            Agreement::Diff
        };
        let int_width = match ib.abs().cmp(&ia.abs()) {
            std::cmp::Ordering::Equal => IntervalWidth::Same,
            std::cmp::Ordering::Greater => IntervalWidth::Wide,
            std::cmp::Ordering::Less => IntervalWidth::Narrow,
        };
        (Some(dir), Some(int_width))
    } else {
        (None, None)
    };
    DiffFeatures {
        sk,
        ch,
        dir,
        int_width,
    }
}

/// Builds the Diff_tree of two Sk_trees over equal spans, recursing
/// index-wise while both nodes are internal with matching child counts.
pub fn build_diff_tree(left: &SkTree, right: &SkTree) -> Result<DiffTree, DiffError> {
    if left.segment_index >= right.segment_index {
        return Err(DiffError::NotForward {
            left: left.segment_index,
            right: right.segment_index,
        });
    }
    if left.span() != right.span() {
        return Err(DiffError::SpanMismatch {
            left: left.span(),
            right: right.span(),
        });
    }
    let root = diff_nodes(&left.root, &right.root, Vec::new(), Vec::new());
    Ok(DiffTree {
        root,
        left_segment: left.segment_index,
        right_segment: right.segment_index,
        root_pitch_offset: pitch_interval(&left.root.pitch, &right.root.pitch),
    })
}

fn diff_nodes(a: &SkNode, b: &SkNode, left_ref: NodePath, right_ref: NodePath) -> DiffNode {
    let features = diff_features(a, b);
    let children = if features.ch == ChildCount::Same && !a.is_leaf() && !b.is_leaf() {
        a.children
            .iter()
            .zip(&b.children)
            .enumerate()
            .map(|(i, (ca, cb))| {
                let mut lp = left_ref.clone();
                lp.push(i);
                let mut rp = right_ref.clone();
                rp.push(i);
                diff_nodes(ca, cb, lp, rp)
            })
            .collect()
    } else {
        Vec::new()
    };
    DiffNode {
        features,
        children,
        left_ref,
        right_ref,
    }
}

/// Per-feature tallies for one set of nodes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureTally {
    pub nodes: usize,
    pub sk_same: usize,
    pub sk_diff: usize,
    pub ch_same: usize,
    pub ch_more: usize,
    pub ch_less: usize,
    pub dir_same: usize,
    pub dir_diff: usize,
    pub int_same: usize,
    pub int_wide: usize,
    pub int_narrow: usize,
}

impl FeatureTally {
    fn add(&mut self, f: &DiffFeatures) {
        self.nodes += 1;
        match f.sk {
            Agreement::Same => self.sk_same += 1,
            Agreement::Diff => self.sk_diff += 1,
        }
        match f.ch {
            ChildCount::Same => self.ch_same += 1,
            ChildCount::More => self.ch_more += 1,
            ChildCount::Less => self.ch_less += 1,
        }
        match f.dir {
            Some(Agreement::Same) => self.dir_same += 1,
            Some(Agreement::Diff) => self.dir_diff += 1,
            None => {}
        }
        match f.int_width {
            Some(IntervalWidth::Same) => self.int_same += 1,
            Some(IntervalWidth::Wide) => self.int_wide += 1,
            Some(IntervalWidth::Narrow) => self.int_narrow += 1,
            None => {}
        }
    }

    fn merge(&mut self, other: &FeatureTally) {
        self.nodes += other.nodes;
        self.sk_same += other.sk_same;
        self.sk_diff += other.sk_diff;
        self.ch_same += other.ch_same;
        self.ch_more += other.ch_more;
        self.ch_less += other.ch_less;
        self.dir_same += other.dir_same;
        self.dir_diff += other.dir_diff;
        self.int_same += other.int_same;
        self.int_wide += other.int_wide;
        self.int_narrow += other.int_narrow;
    }

    /// True when no node in this tally shows any difference.
    pub fn clean(&self) -> bool {
        self.sk_diff == 0
            && self.ch_more == 0
            && self.ch_less == 0
            && self.dir_diff == 0
            && self.int_wide == 0
            && self.int_narrow == 0
    }
}

/// Node/leaf counts plus exact per-level and overall feature tallies.
/// Level 1 is the root.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffSummary {
    pub node_count: usize,
    pub leaf_count: usize,
    pub depth: usize,
    pub total: FeatureTally,
    pub per_level: Vec<FeatureTally>,
}

/// Tallies every feature value, per level and overall.
pub fn diff_depth_and_counts(tree: &DiffTree) -> DiffSummary {
    let mut per_level: Vec<FeatureTally> = Vec::new();
    tally(&tree.root, 0, &mut per_level);
    let mut total = FeatureTally::default();
    for level in &per_level {
        total.merge(level);
    }
    DiffSummary {
        node_count: tree.root.node_count(),
        leaf_count: tree.root.leaf_count(),
        depth: tree.root.depth(),
        total,
        per_level,
    }
}

fn tally(node: &DiffNode, level: usize, per_level: &mut Vec<FeatureTally>) {
    if per_level.len() <= level {
        per_level.resize(level + 1, FeatureTally::default());
    }
    per_level[level].add(&node.features);
    for child in &node.children {
        tally(child, level + 1, per_level);
    }
}

/// Structural check of the leaf rule: a Diff_tree node has children iff
/// the child counts agree and both source nodes are internal. Returns the
/// paths of any violations.
pub fn leaf_rule_violations(tree: &DiffTree, left: &SkTree, right: &SkTree) -> Vec<NodePath> {
    let mut bad = Vec::new();
    check_leaf_rule(&tree.root, &left.root, &right.root, &mut bad);
    bad
}

fn check_leaf_rule(d: &DiffNode, a: &SkNode, b: &SkNode, bad: &mut Vec<NodePath>) {
    let should_have_children =
        d.features.ch == ChildCount::Same && !a.is_leaf() && !b.is_leaf();
    if d.children.is_empty() == should_have_children {
        bad.push(d.left_ref.clone());
    }
    for (i, child) in d.children.iter().enumerate() {
        check_leaf_rule(child, &a.children[i], &b.children[i], bad);
    }
}
