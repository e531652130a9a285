//! Compare two segments node by node and read the four features of the
//! resulting difference tree: Sk (which side survived), Ch (child-count
//! comparison), Dir (interval direction) and Int (interval width).
//!
//! ```bash
//! cargo run -p skdiff --example diff_two_segments
//! ```

use skdiff::difftree::{build_diff_tree, DiffNode};
use skdiff::export::export_diff_tree_json;
use skdiff::ingest::parse_leadsheet_text;
use skdiff::segment::segment_melody;
use skdiff::sktree::build_sk_tree;

// Four bars: the second two-bar segment repeats the first with a varied
// cadence (the last two notes swap).
const SHEET: &str = "\
key C major
meter 2/4
chords | C | C | C | C |
notes C4:q E4:q G4:q C5:q C4:q E4:q C5:q G4:q
";

fn print_diff(node: &DiffNode, indent: usize) {
    let dir = node
        .features
        .dir
        .map(|d| format!("{d:?}").to_lowercase())
        .unwrap_or_else(|| "-".to_string());
    let int = node
        .features
        .int_width
        .map(|w| format!("{w:?}").to_lowercase())
        .unwrap_or_else(|| "-".to_string());
    println!(
        "{:indent$}Sk:{} Ch:{} Dir:{} Int:{}   (left {:?}, right {:?})",
        "",
        format!("{:?}", node.features.sk).to_lowercase(),
        format!("{:?}", node.features.ch).to_lowercase(),
        dir,
        int,
        node.left_ref,
        node.right_ref,
    );
    for child in &node.children {
        print_diff(child, indent + 2);
    }
}

fn main() {
    let melody = parse_leadsheet_text(SHEET).expect("well-formed sheet");
    let segments = segment_melody(&melody, 2).expect("bar-aligned melody");
    let left = build_sk_tree(&segments[0]).expect("feasible grid");
    let right = build_sk_tree(&segments[1]).expect("feasible grid");

    let diff = build_diff_tree(&left, &right).expect("equal spans, forward order");
    println!(
        "comparing segments {} and {} (root pitch offset {:+}):\n",
        diff.left_segment + 1,
        diff.right_segment + 1,
        diff.root_pitch_offset
    );
    print_diff(&diff.root, 0);

    let summary = skdiff::difftree::diff_depth_and_counts(&diff);
    println!(
        "\n{} nodes, {} leaves, depth {}; Sk diff {}, Ch non-same {}, Int non-same {}",
        summary.node_count,
        summary.leaf_count,
        summary.depth,
        summary.total.sk_diff,
        summary.total.ch_more + summary.total.ch_less,
        summary.total.int_wide + summary.total.int_narrow,
    );

    println!("\nJSON document:\n{}", export_diff_tree_json(&diff));
}
