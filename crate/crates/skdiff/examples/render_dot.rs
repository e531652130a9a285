//! Render trees as DOT for graphviz. Difference-tree nodes carry the four
//! feature values; `max_depth` omits deep nodes for a compact exhibit.
//!
//! ```bash
//! cargo run -p skdiff --example render_dot > trees.dot
//! dot -Tsvg trees.dot -o trees.svg
//! ```

use skdiff::analysis::{pairwise_analysis, PairSelection};
use skdiff::export::{export_matrix_dot, export_sk_tree_dot};
use skdiff::ingest::parse_leadsheet_text;
use skdiff::segment::segment_melody;
use skdiff::sktree::build_sk_tree;

const SHEET: &str = "\
key C major
meter 2/4
chords | C | C | G | G | C | C | G | G |
notes C4:q E4:q G4:q C5:q D4:q B3:q G3:q B3:q C4:q E4:q G4:q C5:q G4:q E4:q D4:q B3:q
";

fn main() {
    let melody = parse_leadsheet_text(SHEET).expect("well-formed sheet");
    let segments = segment_melody(&melody, 2).expect("bar-aligned melody");

    let tree = build_sk_tree(&segments[0]).expect("feasible grid");
    println!("{}", export_sk_tree_dot(&tree, None));

    // All forward pairs in one digraph, one cluster per pair, nodes below
    // the third level omitted.
    let matrix = pairwise_analysis("abac", &segments, &PairSelection::Forward).unwrap();
    println!("{}", export_matrix_dot(&matrix, Some(3)));
}
