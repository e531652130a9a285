//! Build the reduction tree of one segment and walk its levels.
//!
//! A window twice the shortest note duration sweeps the segment; the more
//! important note of each window survives, extended over the window, and
//! the passes iterate until one note spans the segment. The tree records
//! which side survived at every step.
//!
//! ```bash
//! cargo run -p skdiff --example reduce_segment
//! ```

use skdiff::export::export_sk_tree_json;
use skdiff::ingest::parse_leadsheet_text;
use skdiff::segment::segment_melody;
use skdiff::sktree::{build_sk_tree, SkNode};

const SHEET: &str = "\
key C major
meter 2/4
chords | C | G |
notes C4:e D4:e E4:q B3:e D4:e G4:q
";

fn print_node(node: &SkNode, indent: usize) {
    println!(
        "{:indent$}{} at {} for {}  [{}]",
        "",
        node.pitch,
        node.onset,
        node.duration,
        node.expansion.code(),
    );
    for child in &node.children {
        print_node(child, indent + 2);
    }
}

fn main() {
    let melody = parse_leadsheet_text(SHEET).expect("well-formed sheet");
    let segments = segment_melody(&melody, 2).expect("bar-aligned melody");
    let tree = build_sk_tree(&segments[0]).expect("feasible grid");

    println!("levels: {}, grid unit: {}\n", tree.levels, tree.grid_unit);
    print_node(&tree.root, 0);

    println!("\nreduction levels, surface first:");
    for (i, level) in tree.level_notes().iter().enumerate() {
        let rendered: Vec<String> = level
            .iter()
            .map(|n| format!("{}:{}", n.pitch, n.duration))
            .collect();
        println!("  level {i}: {}", rendered.join(" "));
    }

    println!("\nJSON document:\n{}", export_sk_tree_json(&tree));
}
