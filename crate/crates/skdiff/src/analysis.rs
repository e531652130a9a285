//! Forward-only pairwise comparison over a piece's segments and
//! classification of segment relationships.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::difftree::{
    build_diff_tree, diff_depth_and_counts, DiffSummary, DiffTree, FeatureTally,
};
use crate::segment::Segment;
use crate::sktree::{build_sk_tree, SkTree};

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("pairwise analysis needs at least 2 segments, got {0}")]
    TooFewSegments(usize),
    #[error("pair ({left}, {right}) is out of range for {count} segments")]
    PairOutOfRange {
        left: usize,
        right: usize,
        count: usize,
    },
    #[error(transparent)]
    Reduce(#[from] crate::sktree::ReduceError),
    #[error(transparent)]
    Diff(#[from] crate::difftree::DiffError),
}

/// Which forward pairs to compare.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PairSelection {
    /// Every forward pair (i, j), i < j.
    Forward,
    /// Neighbouring pairs (i, i+1) only.
    Adjacent,
    /// The curated exhibit selection: openings plus structural pairs
    /// (1,2), (1,3), (1,5), (2,4), (6,8), filtered to the segment count.
    Exhibit,
    /// An explicit list of 1-based pairs.
    Pairs(Vec<(usize, usize)>),
}

impl PairSelection {
    /// Resolves to concrete 0-based pairs for `n` segments.
    fn resolve(&self, n: usize) -> Result<Vec<(usize, usize)>, AnalysisError> {
        let pairs: Vec<(usize, usize)> = match self {
            PairSelection::Forward => (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .collect(),
            PairSelection::Adjacent => (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect(),
            PairSelection::Exhibit => [(1, 2), (1, 3), (1, 5), (2, 4), (6, 8)]
                .iter()
                .filter(|(_, j)| *j <= n)
                .map(|(i, j)| (i - 1, j - 1))
                .collect(),
            PairSelection::Pairs(list) => {
                for &(i, j) in list {
                    if i < 1 || j <= i || j > n {
                        return Err(AnalysisError::PairOutOfRange {
                            left: i,
                            right: j,
                            count: n,
                        });
                    }
                }
                list.iter().map(|(i, j)| (i - 1, j - 1)).collect()
            }
        };
        Ok(pairs)
    }
}

/// Upper-triangular map of forward Diff_trees, keyed by 0-based segment
/// pairs (i, j) with i < j. All user-facing serialization adds 1.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairwiseMatrix {
    pub piece: String,
    pub segment_count: usize,
    pub entries: BTreeMap<(usize, usize), DiffTree>,
}

impl PairwiseMatrix {
    pub fn get(&self, left: usize, right: usize) -> Option<&DiffTree> {
        self.entries.get(&(left, right))
    }
}

/// Builds Sk_trees once per segment, then Diff_trees for the selected
/// forward pairs. Partial trailing segments must be filtered out by the
/// caller (`analyze_piece` does).
pub fn pairwise_analysis(
    piece: &str,
    segments: &[Segment],
    selection: &PairSelection,
) -> Result<PairwiseMatrix, AnalysisError> {
    if segments.len() < 2 {
        return Err(AnalysisError::TooFewSegments(segments.len()));
    }
    let trees: Vec<SkTree> = segments
        .iter()
        .map(build_sk_tree)
        .collect::<Result<_, _>>()?;
    let mut entries = BTreeMap::new();
    for (i, j) in selection.resolve(segments.len())? {
        let diff = build_diff_tree(&trees[i], &trees[j])?;
        entries.insert((i, j), diff);
    }
    Ok(PairwiseMatrix {
        piece: piece.to_string(),
        segment_count: segments.len(),
        entries,
    })
}

/// The relationship a Diff_tree witnesses between its two segments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationKind {
    ExactRepetition,
    Transposition,
    ContourMatch,
    Variation,
    Unrelated,
}

impl RelationKind {
    /// Labels beyond the four per-node features are marked as extensions.
    pub fn is_extension(&self) -> bool {
        matches!(self, RelationKind::ContourMatch)
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            RelationKind::ExactRepetition => "exact_repetition",
            RelationKind::Transposition => "transposition",
            RelationKind::ContourMatch => "contour_match",
            RelationKind::Variation => "variation",
            RelationKind::Unrelated => "unrelated",
        }
    }
}

/// A classification plus the evidence behind it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationLabel {
    pub kind: RelationKind,
    pub extension: bool,
    /// 1-based level at which differences first appear, if any.
    pub first_diff_level: Option<usize>,
    pub root_pitch_offset: i32,
    pub summary: DiffSummary,
}

/// Levels counted as the "top half" of a tree of the given depth: levels
/// 1 through floor(depth / 2), at least 1.
pub fn default_variation_split(depth: usize) -> usize {
    (depth / 2).max(1)
}

/// Classifies a Diff_tree. Rules are checked in order: exact repetition
/// (all same, zero offset), transposition (all same, nonzero offset),
/// contour match (only interval widths differ), variation (the top half
/// of levels is clean but deeper levels differ), else unrelated.
pub fn classify(tree: &DiffTree) -> RelationLabel {
    classify_with_split(tree, default_variation_split)
}

/// `classify` with a configurable top-half threshold: `split(depth)`
/// yields the number of levels that must be clean for `variation`.
pub fn classify_with_split(tree: &DiffTree, split: impl Fn(usize) -> usize) -> RelationLabel {
    let summary = diff_depth_and_counts(tree);
    let first_diff_level = summary
        .per_level
        .iter()
        .position(|t| !t.clean())
        .map(|i| i + 1);
    let offset = tree.root_pitch_offset;

    let kind = if first_diff_level.is_none() {
        if offset == 0 {
            RelationKind::ExactRepetition
        } else {
            RelationKind::Transposition
        }
    } else if summary.total.sk_diff == 0
        && summary.total.ch_more == 0
        && summary.total.ch_less == 0
        && summary.total.dir_diff == 0
    {
        RelationKind::ContourMatch
    } else {
        let top = split(summary.depth);
        let top_clean = summary.per_level.iter().take(top).all(FeatureTally::clean);
        if top_clean && first_diff_level.map_or(false, |l| l > top) {
            RelationKind::Variation
        } else {
            RelationKind::Unrelated
        }
    };

    RelationLabel {
        kind,
        extension: kind.is_extension(),
        first_diff_level,
        root_pitch_offset: offset,
        summary,
    }
}

/// One classified pair in a report (1-based segment numbers).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairRelation {
    pub left: usize,
    pub right: usize,
    pub label: RelationLabel,
}

/// A group of segments related by repetition or transposition; members
/// joined only through a variation link are listed separately.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentGroup {
    /// 1-based segment numbers, ascending.
    pub members: Vec<usize>,
    /// Members attached through variation-labelled pairs only.
    pub variation_members: Vec<usize>,
}

/// The structure report: per-pair labels, repetition groups, candidate
/// phrase boundaries, and consistency warnings.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StructureReport {
    pub piece: String,
    pub segment_count: usize,
    pub pairs: Vec<PairRelation>,
    pub groups: Vec<SegmentGroup>,
    /// 1-based positions where the segment's group differs from its
    /// predecessor's.
    pub phrase_boundaries: Vec<usize>,
    pub warnings: Vec<String>,
}

/// Groups segments under exact repetition and transposition, attaches
/// variation-linked segments with a flag, and derives candidate phrase
/// boundaries from group changes.
pub fn structure_report(matrix: &PairwiseMatrix) -> StructureReport {
    let n = matrix.segment_count;
    let pairs: Vec<PairRelation> = matrix
        .entries
        .iter()
        .map(|(&(i, j), tree)| PairRelation {
            left: i + 1,
            right: j + 1,
            label: classify(tree),
        })
        .collect();

    // Union-find over hard equivalences.
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for pr in &pairs {
        if matches!(
            pr.label.kind,
            RelationKind::ExactRepetition | RelationKind::Transposition
        ) {
            let a = find(&mut parent, pr.left - 1);
            let b = find(&mut parent, pr.right - 1);
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let hard_root: Vec<usize> = (0..n).map(|i| find(&mut parent, i)).collect();

    // Attach hard-singleton segments to a partner's group when a
    // variation pair links them.
    let is_hard_singleton =
        |x: usize| hard_root.iter().filter(|&&r| r == hard_root[x]).count() == 1;
    let mut variation_link: BTreeMap<usize, usize> = BTreeMap::new();
    for pr in &pairs {
        if pr.label.kind == RelationKind::Variation {
            let a = pr.left - 1;
            let b = pr.right - 1;
            if is_hard_singleton(b) && !is_hard_singleton(a) {
                variation_link.entry(b).or_insert(a);
            } else if is_hard_singleton(a) && !is_hard_singleton(b) {
                variation_link.entry(a).or_insert(b);
            } else if is_hard_singleton(a) && is_hard_singleton(b) {
                variation_link.entry(b).or_insert(a);
            }
        }
    }
    // Follow link chains so every attachment lands on an unlinked anchor.
    let resolve = |mut t: usize| {
        for _ in 0..=variation_link.len() {
            match variation_link.get(&t) {
                Some(&next) => t = next,
                None => break,
            }
        }
        t
    };

    fn group_entry(
        by_root: &mut BTreeMap<usize, SegmentGroup>,
        root: usize,
    ) -> &mut SegmentGroup {
        by_root.entry(root).or_insert_with(|| SegmentGroup {
            members: Vec::new(),
            variation_members: Vec::new(),
        })
    }
    let mut by_root: BTreeMap<usize, SegmentGroup> = BTreeMap::new();
    for i in 0..n {
        match variation_link.get(&i) {
            Some(_) => {
                let root = hard_root[resolve(i)];
                group_entry(&mut by_root, root).variation_members.push(i + 1);
            }
            None => {
                group_entry(&mut by_root, hard_root[i]).members.push(i + 1);
            }
        }
    }
    let groups: Vec<SegmentGroup> = by_root.into_values().collect();

    // Phrase boundaries: group changes between consecutive segments.
    let group_of = |seg: usize| -> usize {
        groups
            .iter()
            .position(|g| g.members.contains(&seg) || g.variation_members.contains(&seg))
            .unwrap_or(usize::MAX)
    };
    let phrase_boundaries: Vec<usize> = (2..=n)
        .filter(|&s| group_of(s) != group_of(s - 1))
        .collect();

    // Transitivity of exact repetition should hold; violations indicate a
    // bug upstream and are surfaced as warnings.
    let mut warnings = Vec::new();
    let exact: Vec<(usize, usize)> = pairs
        .iter()
        .filter(|p| p.label.kind == RelationKind::ExactRepetition)
        .map(|p| (p.left, p.right))
        .collect();
    for &(i, j) in &exact {
        for &(j2, k) in &exact {
            if j2 == j && matrix.get(i - 1, k - 1).is_some() && !exact.contains(&(i, k)) {
                warnings.push(format!(
                    "exact repetition is not transitive across segments {i}, {j}, {k}"
                ));
            }
        }
    }

    StructureReport {
        piece: matrix.piece.clone(),
        segment_count: n,
        pairs,
        groups,
        phrase_boundaries,
        warnings,
    }
}
