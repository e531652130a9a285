//! Full structure analysis of a piece: forward-only pairwise difference
//! trees over all segments, relationship labels, repetition groups, and
//! candidate phrase boundaries.
//!
//! ```bash
//! cargo run -p skdiff --example analyze_piece
//! ```

use skdiff::analysis::{pairwise_analysis, structure_report, PairSelection};
use skdiff::export::report_to_text;
use skdiff::ingest::parse_leadsheet_text;
use skdiff::segment::segment_melody;

// Eight bars shaped A B A C at two bars per segment: an opening phrase,
// a contrasting answer, the opening again, and a closing figure.
const SHEET: &str = "\
key C major
meter 2/4
chords | C | C | G | G | C | C | G | G |
notes C4:q E4:q G4:q C5:q D4:q B3:q G3:q B3:q C4:q E4:q G4:q C5:q G4:q E4:q D4:q B3:q
";

fn main() {
    let melody = parse_leadsheet_text(SHEET).expect("well-formed sheet");
    let segments = segment_melody(&melody, 2).expect("bar-aligned melody");
    println!(
        "{} bars -> {} segments of 2 bars\n",
        melody.bar_count().unwrap(),
        segments.len()
    );

    let matrix = pairwise_analysis("abac", &segments, &PairSelection::Forward)
        .expect("at least two segments");
    let report = structure_report(&matrix);
    print!("{}", report_to_text(&report));

    // The same analysis restricted to neighbouring pairs.
    let adjacent = pairwise_analysis("abac", &segments, &PairSelection::Adjacent).unwrap();
    println!("\nadjacent-only matrix holds {} trees", adjacent.entries.len());
}
