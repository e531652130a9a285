//! Parse a lead sheet from the plain-text format and inspect it.
//!
//! ```bash
//! cargo run -p skdiff --example parse_leadsheet
//! ```

use skdiff::ingest::{melody_to_leadsheet, parse_leadsheet_text};

const SHEET: &str = "\
key G major
meter 2/4
chords | G | D7 | . | G |
notes G4:q B4:e G4:e A4:q F#4:q A4:q C5:e A4:e B4:q G4:q
";

fn main() {
    let melody = parse_leadsheet_text(SHEET).expect("well-formed sheet");

    println!("key:    {}", melody.key);
    println!("meter:  {}", melody.meter);
    println!("bars:   {}", melody.bar_count().unwrap());
    println!("notes:");
    for note in melody.notes() {
        let chord = melody.chord_at(&note.onset).expect("covered");
        println!(
            "  {:>5} at {:>4} for {:>4}  over {}",
            note.pitch.to_string(),
            note.onset.to_string(),
            note.duration.to_string(),
            chord
        );
    }

    // The format round-trips: serializing and re-parsing yields an equal
    // melody.
    let text = melody_to_leadsheet(&melody).expect("bar-aligned harmony");
    let reparsed = parse_leadsheet_text(&text).expect("round trip");
    assert_eq!(melody, reparsed);
    println!("\nserialized form:\n{text}");
}
