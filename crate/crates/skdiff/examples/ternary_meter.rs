//! Reduce a 3/8 segment: the ladder runs duple up to the beat, takes one
//! three-way window across the bar, and continues duple above it.
//!
//! ```bash
//! cargo run -p skdiff --example ternary_meter
//! ```

use skdiff::ingest::parse_leadsheet_text;
use skdiff::segment::{quantize_to_grid, segment_melody, window_ladder};
use skdiff::sktree::build_sk_tree;

const SHEET: &str = "\
key F major
meter 3/8
chords | F | C7 |
notes F4:s G4:s A4:e C5:e Bb4:e. G4:s E4:e
";

fn main() {
    let melody = parse_leadsheet_text(SHEET).expect("well-formed sheet");
    let segment = segment_melody(&melody, 2).expect("bar-aligned").remove(0);

    let quantized = quantize_to_grid(&segment).expect("feasible grid");
    let ladder: Vec<String> = window_ladder(&quantized)
        .expect("feasible grid")
        .iter()
        .map(|w| w.to_string())
        .collect();
    println!("window ladder: {}", ladder.join(" -> "));

    let tree = build_sk_tree(&segment).expect("reducible segment");
    println!("root: {} [{}]", tree.root.pitch, tree.root.expansion.code());
    for child in &tree.root.children {
        println!(
            "  bar node: {} [{}] with {} children",
            child.pitch,
            child.expansion.code(),
            child.children.len()
        );
    }
    for (i, level) in tree.level_notes().iter().enumerate() {
        let rendered: Vec<String> = level
            .iter()
            .map(|n| format!("{}:{}", n.pitch, n.duration))
            .collect();
        println!("level {i}: {}", rendered.join(" "));
    }
}
