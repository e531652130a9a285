//! Serialization of trees and reports: a versioned JSON schema and DOT
//! graphs. Durations always serialize as exact `num/den` strings and all
//! output is deterministic byte-for-byte for a fixed input.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::{PairwiseMatrix, RelationLabel, SegmentGroup, StructureReport};
use crate::corpus::ValidationReport;
use crate::difftree::{Agreement, ChildCount, DiffFeatures, DiffNode, DiffTree, IntervalWidth};
use crate::model::{Pitch, RationalDuration};
use crate::sktree::{Expansion, SkNode, SkTree};

pub const SCHEMA_VERSION: &str = "1.0";

/// Placeholder for an absent `Dir`/`Int` value in DOT and text output.
const ABSENT: &str = "\u{2013}";

#[derive(Debug, Error)]
pub enum ExportError {
    #[error("JSON error: {0}")]
    Json(String),
    #[error("schema mismatch: expected kind {expected}, found {found}")]
    WrongKind { expected: String, found: String },
    #[error("invalid field {field}: {value}")]
    BadField { field: &'static str, value: String },
}

/// Top-level JSON document: a schema version plus one tagged payload.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct JsonDocument {
    pub schema_version: String,
    #[serde(flatten)]
    pub payload: Payload,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "snake_case")]
pub enum Payload {
    SkTree(SkTreeJson),
    DiffTree(DiffTreeJson),
    PairwiseReport(PairwiseReportJson),
    ValidationReport(ValidationReport),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PitchJson {
    pub midi: u8,
    pub spelled: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SkNodeJson {
    pub pitch: PitchJson,
    pub onset: String,
    pub duration: String,
    pub expansion: String,
    pub children: Vec<SkNodeJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SkTreeJson {
    /// 1-based segment number.
    pub segment: usize,
    pub levels: usize,
    pub grid_unit: String,
    pub root: SkNodeJson,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiffNodeJson {
    pub sk: Agreement,
    pub ch: ChildCount,
    pub dir: Option<Agreement>,
    pub int: Option<IntervalWidth>,
    pub left_ref: Vec<usize>,
    pub right_ref: Vec<usize>,
    pub children: Vec<DiffNodeJson>,
}

/// Extension data beyond the four per-node features.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiffExtensions {
    pub root_pitch_offset: i32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiffTreeJson {
    /// 1-based segment numbers, left < right.
    pub left_segment: usize,
    pub right_segment: usize,
    pub extensions: DiffExtensions,
    pub root: DiffNodeJson,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairEntryJson {
    pub left: usize,
    pub right: usize,
    pub label: RelationLabel,
    pub tree: DiffTreeJson,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairwiseReportJson {
    pub piece: String,
    pub segment_count: usize,
    pub pairs: Vec<PairEntryJson>,
    pub groups: Vec<SegmentGroup>,
    pub phrase_boundaries: Vec<usize>,
    pub warnings: Vec<String>,
}

fn pitch_json(pitch: &Pitch) -> PitchJson {
    PitchJson {
        midi: pitch.midi_number(),
        spelled: pitch.to_string(),
    }
}

fn sk_node_json(node: &SkNode) -> SkNodeJson {
    SkNodeJson {
        pitch: pitch_json(&node.pitch),
        onset: node.onset.to_string(),
        duration: node.duration.to_string(),
        expansion: node.expansion.code(),
        children: node.children.iter().map(sk_node_json).collect(),
    }
}

pub fn sk_tree_document(tree: &SkTree) -> JsonDocument {
    JsonDocument {
        schema_version: SCHEMA_VERSION.to_string(),
        payload: Payload::SkTree(SkTreeJson {
            segment: tree.segment_index + 1,
            levels: tree.levels,
            grid_unit: tree.grid_unit.to_string(),
            root: sk_node_json(&tree.root),
        }),
    }
}

/// Serializes one Sk_tree as a pretty-printed JSON document.
pub fn export_sk_tree_json(tree: &SkTree) -> String {
    to_json(&sk_tree_document(tree))
}

fn diff_node_json(node: &DiffNode) -> DiffNodeJson {
    DiffNodeJson {
        sk: node.features.sk,
        ch: node.features.ch,
        dir: node.features.dir,
        int: node.features.int_width,
        left_ref: node.left_ref.clone(),
        right_ref: node.right_ref.clone(),
        children: node.children.iter().map(diff_node_json).collect(),
    }
}

pub fn diff_tree_json(tree: &DiffTree) -> DiffTreeJson {
    DiffTreeJson {
        left_segment: tree.left_segment + 1,
        right_segment: tree.right_segment + 1,
        extensions: DiffExtensions {
            root_pitch_offset: tree.root_pitch_offset,
        },
        root: diff_node_json(&tree.root),
    }
}

pub fn diff_tree_document(tree: &DiffTree) -> JsonDocument {
    JsonDocument {
        schema_version: SCHEMA_VERSION.to_string(),
        payload: Payload::DiffTree(diff_tree_json(tree)),
    }
}

/// Serializes one Diff_tree as a pretty-printed JSON document.
pub fn export_diff_tree_json(tree: &DiffTree) -> String {
    to_json(&diff_tree_document(tree))
}

/// Serializes a pairwise report (matrix plus structure analysis).
pub fn export_pairwise_report_json(matrix: &PairwiseMatrix, report: &StructureReport) -> String {
    let pairs = report
        .pairs
        .iter()
        .map(|pr| PairEntryJson {
            left: pr.left,
            right: pr.right,
            label: pr.label.clone(),
            tree: diff_tree_json(
                matrix
                    .get(pr.left - 1, pr.right - 1)
                    .expect("report pairs come from the matrix"),
            ),
        })
        .collect();
    let doc = JsonDocument {
        schema_version: SCHEMA_VERSION.to_string(),
        payload: Payload::PairwiseReport(PairwiseReportJson {
            piece: report.piece.clone(),
            segment_count: report.segment_count,
            pairs,
            groups: report.groups.clone(),
            phrase_boundaries: report.phrase_boundaries.clone(),
            warnings: report.warnings.clone(),
        }),
    };
    to_json(&doc)
}

pub fn export_validation_report_json(report: &ValidationReport) -> String {
    let doc = JsonDocument {
        schema_version: SCHEMA_VERSION.to_string(),
        payload: Payload::ValidationReport(report.clone()),
    };
    to_json(&doc)
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serialization cannot fail") + "\n"
}

/// Re-parses an exported Sk_tree document.
pub fn import_sk_tree_json(text: &str) -> Result<SkTree, ExportError> {
    let doc: JsonDocument =
        serde_json::from_str(text).map_err(|e| ExportError::Json(e.to_string()))?;
    let Payload::SkTree(tree) = doc.payload else {
        return Err(ExportError::WrongKind {
            expected: "sk_tree".to_string(),
            found: payload_kind(&doc.payload).to_string(),
        });
    };
    let root = sk_node_from_json(&tree.root)?;
    let grid_unit: RationalDuration = tree
        .grid_unit
        .parse()
        .map_err(|_| ExportError::BadField {
            field: "grid_unit",
            value: tree.grid_unit.clone(),
        })?;
    Ok(SkTree::from_parts(root, tree.segment - 1, grid_unit))
}

fn sk_node_from_json(node: &SkNodeJson) -> Result<SkNode, ExportError> {
    let pitch: Pitch = node
        .pitch
        .spelled
        .parse()
        .or_else(|_| Pitch::from_midi(node.pitch.midi))
        .map_err(|_| ExportError::BadField {
            field: "pitch",
            value: node.pitch.spelled.clone(),
        })?;
    let onset: RationalDuration = node.onset.parse().map_err(|_| ExportError::BadField {
        field: "onset",
        value: node.onset.clone(),
    })?;
    let duration: RationalDuration =
        node.duration.parse().map_err(|_| ExportError::BadField {
            field: "duration",
            value: node.duration.clone(),
        })?;
    let expansion = Expansion::from_code(&node.expansion).ok_or(ExportError::BadField {
        field: "expansion",
        value: node.expansion.clone(),
    })?;
    let children = node
        .children
        .iter()
        .map(sk_node_from_json)
        .collect::<Result<_, _>>()?;
    Ok(SkNode {
        pitch,
        onset,
        duration,
        expansion,
        children,
    })
}

/// Re-parses an exported Diff_tree document.
pub fn import_diff_tree_json(text: &str) -> Result<DiffTree, ExportError> {
    let doc: JsonDocument =
        serde_json::from_str(text).map_err(|e| ExportError::Json(e.to_string()))?;
    let Payload::DiffTree(tree) = doc.payload else {
        return Err(ExportError::WrongKind {
            expected: "diff_tree".to_string(),
            found: payload_kind(&doc.payload).to_string(),
        });
    };
    Ok(DiffTree {
        root: diff_node_from_json(&tree.root),
        left_segment: tree.left_segment - 1,
        right_segment: tree.right_segment - 1,
        root_pitch_offset: tree.extensions.root_pitch_offset,
    })
}

fn diff_node_from_json(node: &DiffNodeJson) -> DiffNode {
    DiffNode {
        features: DiffFeatures {
            sk: node.sk,
            ch: node.ch,
            dir: node.dir,
            int_width: node.int,
        },
        children: node.children.iter().map(diff_node_from_json).collect(),
        left_ref: node.left_ref.clone(),
        right_ref: node.right_ref.clone(),
    }
}

fn payload_kind(payload: &Payload) -> &'static str {
    match payload {
        Payload::SkTree(_) => "sk_tree",
        Payload::DiffTree(_) => "diff_tree",
        Payload::PairwiseReport(_) => "pairwise_report",
        Payload::ValidationReport(_) => "validation_report",
    }
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Renders an Sk_tree as a DOT digraph. `max_depth` (1-based levels)
/// omits deeper nodes.
pub fn export_sk_tree_dot(tree: &SkTree, max_depth: Option<usize>) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "digraph sk_tree_{} {{\n  node [shape=box, fontname=\"monospace\"];\n",
        tree.segment_index + 1
    ));
    let mut counter = 0usize;
    sk_dot_node(&tree.root, 1, max_depth, &mut counter, None, &mut out);
    out.push_str("}\n");
    out
}

fn sk_dot_node(
    node: &SkNode,
    level: usize,
    max_depth: Option<usize>,
    counter: &mut usize,
    parent: Option<usize>,
    out: &mut String,
) {
    if max_depth.is_some_and(|d| level > d) {
        return;
    }
    let id = *counter;
    *counter += 1;
    let label = format!(
        "{}\\n{} + {}\\n{}",
        dot_escape(&node.pitch.to_string()),
        node.onset,
        node.duration,
        node.expansion.code()
    );
    out.push_str(&format!("  n{id} [label=\"{label}\"];\n"));
    if let Some(p) = parent {
        out.push_str(&format!("  n{p} -> n{id};\n"));
    }
    for child in &node.children {
        sk_dot_node(child, level + 1, max_depth, counter, Some(id), out);
    }
}

fn feature_label(features: &DiffFeatures) -> String {
    let sk = match features.sk {
        Agreement::Same => "same",
        Agreement::Diff => "diff",
    };
    let ch = match features.ch {
        ChildCount::Same => "same",
        ChildCount::More => "more",
        ChildCount::Less => "less",
    };
    let dir = match features.dir {
        Some(Agreement::Same) => "same",
        Some(Agreement::Diff) => "diff",
        None => ABSENT,
    };
    let int = match features.int_width {
        Some(IntervalWidth::Same) => "same",
        Some(IntervalWidth::Wide) => "wide",
        Some(IntervalWidth::Narrow) => "narrow",
        None => ABSENT,
    };
    format!("Sk:{sk}\\nCh:{ch}\\nDir:{dir}\\nInt:{int}")
}

/// Renders a Diff_tree as a DOT digraph with the four features on each
/// node label; absent `Dir`/`Int` render as an en dash. `max_depth`
/// omits nodes below that level.
pub fn export_diff_tree_dot(tree: &DiffTree, max_depth: Option<usize>) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "digraph diff_tree_{}_{} {{\n  node [shape=box, fontname=\"monospace\"];\n",
        tree.left_segment + 1,
        tree.right_segment + 1
    ));
    let mut counter = 0usize;
    diff_dot_node(&tree.root, 1, max_depth, &mut counter, None, "n", &mut out);
    out.push_str("}\n");
    out
}

fn diff_dot_node(
    node: &DiffNode,
    level: usize,
    max_depth: Option<usize>,
    counter: &mut usize,
    parent: Option<usize>,
    prefix: &str,
    out: &mut String,
) {
    if max_depth.is_some_and(|d| level > d) {
        return;
    }
    let id = *counter;
    *counter += 1;
    out.push_str(&format!(
        "  {prefix}{id} [label=\"{}\"];\n",
        feature_label(&node.features)
    ));
    if let Some(p) = parent {
        out.push_str(&format!("  {prefix}{p} -> {prefix}{id};\n"));
    }
    for child in &node.children {
        diff_dot_node(child, level + 1, max_depth, counter, Some(id), prefix, out);
    }
}

/// Renders a whole pairwise matrix as one DOT digraph with a cluster per
/// pair, in the compact style of a multi-tree exhibit.
pub fn export_matrix_dot(matrix: &PairwiseMatrix, max_depth: Option<usize>) -> String {
    let mut out = String::new();
    out.push_str("digraph diff_trees {\n  node [shape=box, fontname=\"monospace\"];\n");
    for (&(i, j), tree) in &matrix.entries {
        out.push_str(&format!(
            "  subgraph cluster_{i1}_{j1} {{\n    label=\"{i1}-{j1}\";\n",
            i1 = i + 1,
            j1 = j + 1
        ));
        let mut counter = 0usize;
        let prefix = format!("p{}_{}_n", i + 1, j + 1);
        let mut body = String::new();
        diff_dot_node(&tree.root, 1, max_depth, &mut counter, None, &prefix, &mut body);
        for line in body.lines() {
            out.push_str("  ");
            out.push_str(line);
            out.push('\n');
        }
        out.push_str("  }\n");
    }
    out.push_str("}\n");
    out
}

/// Human-readable report: per-pair labels with the paper's feature
/// spellings, groups, and phrase boundaries.
pub fn report_to_text(report: &StructureReport) -> String {
    use std::fmt::Write as _;
    let mut out = String::new();
    writeln!(out, "piece: {}", report.piece).unwrap();
    writeln!(out, "segments: {}", report.segment_count).unwrap();
    writeln!(out, "pairs:").unwrap();
    for pr in &report.pairs {
        let t = &pr.label.summary.total;
        let ext = if pr.label.extension { " (ext)" } else { "" };
        let first = pr
            .label
            .first_diff_level
            .map(|l| format!(" first-diff-level {l}"))
            .unwrap_or_default();
        writeln!(
            out,
            "  {}-{}: {}{}{} offset {:+}; Sk same {}/{n} diff {}; Ch same {}/{n} more {} less {}; Dir same {} diff {}; Int same {} wide {} narrow {}",
            pr.left,
            pr.right,
            pr.label.kind.as_str(),
            ext,
            first,
            pr.label.root_pitch_offset,
            t.sk_same,
            t.sk_diff,
            t.ch_same,
            t.ch_more,
            t.ch_less,
            t.dir_same,
            t.dir_diff,
            t.int_same,
            t.int_wide,
            t.int_narrow,
            n = t.nodes,
        )
        .unwrap();
    }
    writeln!(out, "groups:").unwrap();
    for group in &report.groups {
        let members: Vec<String> = group.members.iter().map(usize::to_string).collect();
        let mut line = format!("  {{{}}}", members.join(", "));
        if !group.variation_members.is_empty() {
            let vars: Vec<String> = group
                .variation_members
                .iter()
                .map(usize::to_string)
                .collect();
            line.push_str(&format!(" + variation {{{}}}", vars.join(", ")));
        }
        writeln!(out, "{line}").unwrap();
    }
    let boundaries: Vec<String> = report
        .phrase_boundaries
        .iter()
        .map(usize::to_string)
        .collect();
    writeln!(out, "phrase boundaries: [{}]", boundaries.join(", ")).unwrap();
    for warning in &report.warnings {
        writeln!(out, "warning: {warning}").unwrap();
    }
    out
}
