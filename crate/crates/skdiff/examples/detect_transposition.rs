//! Exact repetition and exact transposition both give an all-`same`
//! difference tree; the root pitch offset tells them apart.
//!
//! ```bash
//! cargo run -p skdiff --example detect_transposition
//! ```

use skdiff::analysis::classify;
use skdiff::difftree::build_diff_tree;
use skdiff::ingest::parse_leadsheet_text;
use skdiff::segment::segment_melody;
use skdiff::sktree::build_sk_tree;

const SHEET: &str = "\
key C major
meter 2/4
chords | C | G |
notes C4:q E4:e G4:e D4:q B3:q
";

fn main() {
    let melody = parse_leadsheet_text(SHEET).expect("well-formed sheet");
    let base = segment_melody(&melody, 2).expect("bar-aligned").remove(0);

    for semitones in [0i32, 5, -7] {
        // Joint transposition: notes, chords, and key move together, so
        // every reduction decision is preserved.
        let mut moved = base.transposed(semitones).expect("stays in range");
        moved.index = 1;
        let left = build_sk_tree(&base).expect("feasible grid");
        let right = build_sk_tree(&moved).expect("feasible grid");
        let diff = build_diff_tree(&left, &right).expect("equal spans");
        let label = classify(&diff);
        println!(
            "offset {semitones:+}: classified {} (root pitch offset {:+}, first diff level {:?})",
            label.kind.as_str(),
            label.root_pitch_offset,
            label.first_diff_level
        );
    }
}
