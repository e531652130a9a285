//! Parse a two-part MusicXML score and extract the monophonic lead:
//! the first part is kept and the highest note of each chord wins.
//!
//! ```bash
//! cargo run -p skdiff --example parse_musicxml [score.musicxml]
//! ```

use skdiff::ingest::{extract_lead, parse_musicxml};

const SCORE: &str = r#"<?xml version="1.0" encoding="UTF-8"?>
<score-partwise version="3.1">
  <part-list>
    <score-part id="P1"><part-name>Mandolin 1</part-name></score-part>
    <score-part id="P2"><part-name>Mandolin 2</part-name></score-part>
  </part-list>
  <part id="P1">
    <measure number="1">
      <attributes>
        <divisions>2</divisions>
        <key><fifths>0</fifths></key>
        <time><beats>2</beats><beat-type>4</beat-type></time>
      </attributes>
      <harmony><root><root-step>C</root-step></root><kind>major</kind></harmony>
      <note><pitch><step>E</step><octave>4</octave></pitch><duration>2</duration></note>
      <note><chord/><pitch><step>C</step><octave>5</octave></pitch><duration>2</duration></note>
      <note><pitch><step>D</step><octave>4</octave></pitch><duration>2</duration></note>
    </measure>
    <measure number="2">
      <harmony><root><root-step>G</root-step></root><kind>dominant</kind></harmony>
      <note><pitch><step>B</step><octave>4</octave></pitch><duration>2</duration><tie type="start"/></note>
      <note><pitch><step>B</step><octave>4</octave></pitch><duration>2</duration><tie type="stop"/></note>
    </measure>
  </part>
  <part id="P2">
    <measure number="1">
      <attributes>
        <divisions>1</divisions>
        <time><beats>2</beats><beat-type>4</beat-type></time>
      </attributes>
      <note><pitch><step>C</step><octave>3</octave></pitch><duration>2</duration></note>
    </measure>
    <measure number="2">
      <note><pitch><step>G</step><octave>2</octave></pitch><duration>2</duration></note>
    </measure>
  </part>
</score-partwise>
"#;

fn main() {
    let bytes = match std::env::args().nth(1) {
        Some(path) => std::fs::read(path).expect("readable input file"),
        None => SCORE.as_bytes().to_vec(),
    };
    let score = parse_musicxml(&bytes).expect("well-formed MusicXML");
    for warning in &score.warnings {
        eprintln!("warning: {warning}");
    }

    println!("parts: {}", score.parts.len());
    for part in &score.parts {
        println!(
            "  {}: {} measures, {} in {}, up to {} simultaneous notes",
            part.part_id,
            part.bar_count(),
            part.key,
            part.meter,
            part.max_simultaneous()
        );
    }

    let melody = extract_lead(&score.parts, 0).expect("lead part has notes");
    println!("\nlead (highest simultaneous note kept, ties merged):");
    for note in melody.notes() {
        println!(
            "  {:>5} at {:>4} for {:>4}",
            note.pitch.to_string(),
            note.onset.to_string(),
            note.duration.to_string()
        );
    }
}
