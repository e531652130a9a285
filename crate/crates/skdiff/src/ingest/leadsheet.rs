//! The plain-text lead-sheet format (`.lsht`), the canonical fixture
//! format. One directive per line:
//!
//! ```text
//! key C major
//! meter 2/4
//! chords | C | G7 | . | C |
//! notes C4:q D4:e E4:e F#4:q ~F#4:e G4:e
//! ```
//!
//! Chord cells are one per bar, `.` repeating the previous cell. Note
//! tokens are pitch:duration with durations `w h q e s` plus dotted forms
//! (`q.`); a `~` prefix marks a tie continuation of the previous note.
//! Blank lines and lines starting with `#` are ignored. `notes` may be
//! repeated; the tokens append.

use std::fmt::Write as _;

use crate::ingest::IngestError;
use crate::model::{
    ChordSymbol, HarmonySpan, KeySignature, Melody, Meter, Mode, Note, Pitch, RationalDuration,
};

fn syntax(line: usize, column: usize, message: impl Into<String>) -> IngestError {
    IngestError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn duration_token(tok: &str) -> Option<RationalDuration> {
    let (base, dotted) = match tok.strip_suffix('.') {
        Some(b) => (b, true),
        None => (tok, false),
    };
    let dur = match base {
        "w" => RationalDuration::frac(1, 1),
        "h" => RationalDuration::frac(1, 2),
        "q" => RationalDuration::frac(1, 4),
        "e" => RationalDuration::frac(1, 8),
        "s" => RationalDuration::frac(1, 16),
        _ => return None,
    };
    Some(if dotted { dur * 3 / 2 } else { dur })
}

fn duration_to_tokens(dur: &RationalDuration) -> Vec<(&'static str, RationalDuration)> {
    const NAMED: [(&str, (i64, i64)); 10] = [
        ("w.", (3, 2)),
        ("w", (1, 1)),
        ("h.", (3, 4)),
        ("h", (1, 2)),
        ("q.", (3, 8)),
        ("q", (1, 4)),
        ("e.", (3, 16)),
        ("e", (1, 8)),
        ("s.", (3, 32)),
        ("s", (1, 16)),
    ];
    let mut out = Vec::new();
    let mut rest = *dur;
    while rest.is_positive() {
        let (name, value) = NAMED
            .iter()
            .map(|(n, (num, den))| (*n, RationalDuration::frac(*num, *den)))
            .find(|(_, v)| *v <= rest)
            .expect("grid durations decompose into sixteenths");
        out.push((name, value));
        rest = rest - value;
    }
    out
}

/// Parses lead-sheet text into a `Melody`, semantically identical to the
/// MusicXML path.
pub fn parse_leadsheet_text(text: &str) -> Result<Melody, IngestError> {
    let mut key: Option<KeySignature> = None;
    let mut meter: Option<Meter> = None;
    let mut chord_cells: Option<Vec<ChordSymbol>> = None;
    let mut note_tokens: Vec<(usize, usize, String)> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (directive, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match directive {
            "key" => {
                let mut parts = rest.split_whitespace();
                let tonic: crate::model::PitchClass = parts
                    .next()
                    .ok_or_else(|| syntax(lineno, 1, "key needs a tonic and a mode"))?
                    .parse()
                    .map_err(|e| syntax(lineno, 5, format!("{e}")))?;
                let mode = match parts.next() {
                    Some("major") => Mode::Major,
                    Some("minor") => Mode::Minor,
                    other => {
                        return Err(syntax(
                            lineno,
                            5,
                            format!("mode must be major or minor, got {other:?}"),
                        ))
                    }
                };
                key = Some(KeySignature::new(tonic, mode));
            }
            "meter" => {
                meter = Some(
                    rest.parse()
                        .map_err(|e| syntax(lineno, 7, format!("{e}")))?,
                );
            }
            "chords" => {
                let mut cells = Vec::new();
                for cell in rest.split('|') {
                    let cell = cell.trim();
                    if cell.is_empty() {
                        continue;
                    }
                    if cell == "." {
                        let prev = *cells.last().ok_or_else(|| {
                            syntax(lineno, 8, "`.` has no previous chord to repeat")
                        })?;
                        cells.push(prev);
                    } else {
                        cells.push(
                            cell.parse::<ChordSymbol>()
                                .map_err(|e| syntax(lineno, 8, format!("{e}")))?,
                        );
                    }
                }
                chord_cells = Some(cells);
            }
            "notes" => {
                for (col, tok) in rest.split_whitespace().enumerate() {
                    note_tokens.push((lineno, col + 1, tok.to_string()));
                }
            }
            other => {
                return Err(syntax(lineno, 1, format!("unknown directive `{other}`")));
            }
        }
    }

    let key = key.ok_or_else(|| syntax(0, 0, "missing `key` directive"))?;
    let meter = meter.ok_or_else(|| syntax(0, 0, "missing `meter` directive"))?;
    let cells = chord_cells.ok_or_else(|| syntax(0, 0, "missing `chords` directive"))?;
    if note_tokens.is_empty() {
        return Err(IngestError::EmptyMelody);
    }

    let mut notes: Vec<Note> = Vec::new();
    let mut onset = RationalDuration::ZERO;
    for (line, col, tok) in &note_tokens {
        let (tie, body) = match tok.strip_prefix('~') {
            Some(b) => (true, b),
            None => (false, tok.as_str()),
        };
        let (pitch_str, dur_str) = body
            .split_once(':')
            .ok_or_else(|| syntax(*line, *col, format!("note token `{tok}` needs pitch:dur")))?;
        let pitch: Pitch = pitch_str
            .parse()
            .map_err(|e| syntax(*line, *col, format!("{e}")))?;
        let duration = duration_token(dur_str)
            .ok_or_else(|| syntax(*line, *col, format!("unknown duration `{dur_str}`")))?;
        let mut note = Note::new(pitch, onset, duration);
        note.tie_continuation = tie;
        notes.push(note);
        onset += duration;
    }
    let extent = onset;

    let bar = meter.bar_length();
    let bars = {
        let full = extent.div_floor(&bar);
        if (bar * full) == extent {
            full
        } else {
            full + 1
        }
    };
    if (cells.len() as i64) < bars {
        return Err(IngestError::HarmonyGapBars {
            bars,
            cells: cells.len(),
        });
    }
    if (cells.len() as i64) > bars {
        return Err(syntax(
            0,
            0,
            format!("{} chord cells for only {} bars of notes", cells.len(), bars),
        ));
    }
    let harmony: Vec<HarmonySpan> = cells
        .iter()
        .enumerate()
        .map(|(i, chord)| HarmonySpan {
            onset: bar * i as i64,
            duration: bar,
            chord: *chord,
        })
        .collect();

    Melody::new(notes, key, meter, harmony).map_err(IngestError::from)
}

/// Serializes a melody back to the text format. Chord spans must be
/// bar-aligned (mid-bar chord changes are not representable in one cell
/// per bar). Durations outside the named vocabulary split into tied
/// tokens. Output is deterministic.
pub fn melody_to_leadsheet(melody: &Melody) -> Result<String, IngestError> {
    let bar = melody.meter.bar_length();
    let extent = melody.extent();
    let bars = extent.div_floor(&bar) + i64::from(!(bar * extent.div_floor(&bar) == extent));

    let mut cells: Vec<ChordSymbol> = Vec::new();
    for b in 0..bars {
        let start = bar * b;
        let chord = melody
            .chord_at(&start)
            .or_else(|| melody.harmony().last().map(|s| &s.chord))
            .ok_or(IngestError::EmptyMelody)?;
        // Reject a chord change strictly inside this bar.
        for span in melody.harmony() {
            if span.onset > start && span.onset < start + bar {
                return Err(IngestError::UnrepresentableHarmony { onset: span.onset });
            }
        }
        cells.push(*chord);
    }

    let mut out = String::new();
    writeln!(out, "key {}", melody.key).unwrap();
    writeln!(out, "meter {}", melody.meter).unwrap();
    let mut chords_line = String::from("chords");
    for cell in &cells {
        write!(chords_line, " | {cell}").unwrap();
    }
    chords_line.push_str(" |");
    writeln!(out, "{chords_line}").unwrap();

    let mut notes_line = String::from("notes");
    for note in melody.notes() {
        for (i, (name, _)) in duration_to_tokens(&note.duration).iter().enumerate() {
            let tie = if i == 0 { note.tie_continuation } else { true };
            let marker = if tie { "~" } else { "" };
            write!(notes_line, " {marker}{}:{name}", note.pitch).unwrap();
        }
    }
    writeln!(out, "{notes_line}").unwrap();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const BASIC: &str = "key C major\nmeter 2/4\nchords | C | G |\nnotes C4:q D4:q E4:q D4:q\n";

    #[test]
    fn parses_basic_sheet() {
        let m = parse_leadsheet_text(BASIC).unwrap();
        assert_eq!(m.notes().len(), 4);
        assert_eq!(m.harmony().len(), 2);
        assert_eq!(m.meter, Meter::new(2, 4).unwrap());
        assert_eq!(m.notes()[2].onset, RationalDuration::frac(1, 2));
        assert_eq!(m.chord_at(&RationalDuration::frac(1, 2)).unwrap().to_string(), "G");
    }

    #[test]
    fn empty_notes_is_empty_melody_error() {
        let text = "key C major\nmeter 2/4\nchords | C |\nnotes\n";
        assert!(matches!(
            parse_leadsheet_text(text),
            Err(IngestError::EmptyMelody)
        ));
    }

    #[test]
    fn uncovered_bar_is_harmony_gap() {
        let text = "key C major\nmeter 2/4\nchords | C |\nnotes C4:q D4:q E4:q D4:q\n";
        assert!(matches!(
            parse_leadsheet_text(text),
            Err(IngestError::HarmonyGapBars { bars: 2, cells: 1 })
        ));
    }

    #[test]
    fn syntax_error_carries_location() {
        let text = "key C major\nmeter 2/4\nchords | C |\nnotes C4:q Qx:q\n";
        match parse_leadsheet_text(text) {
            Err(IngestError::Syntax { line, column, .. }) => {
                assert_eq!(line, 4);
                assert_eq!(column, 2);
            }
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn dot_repeats_previous_chord() {
        let text = "key G major\nmeter 2/4\nchords | G | . |\nnotes G4:h D4:h\n";
        let m = parse_leadsheet_text(text).unwrap();
        assert_eq!(m.harmony()[1].chord.to_string(), "G");
    }

    #[test]
    fn leading_dot_is_an_error() {
        let text = "key G major\nmeter 2/4\nchords | . |\nnotes G4:h\n";
        assert!(parse_leadsheet_text(text).is_err());
    }

    #[test]
    fn tie_marker_and_dotted_durations() {
        let text = "key C major\nmeter 2/4\nchords | C |\nnotes C4:q. ~C4:e\n";
        let m = parse_leadsheet_text(text).unwrap();
        assert_eq!(m.notes()[0].duration, RationalDuration::frac(3, 8));
        assert!(m.notes()[1].tie_continuation);
    }

    #[test]
    fn round_trip_basic() {
        let m = parse_leadsheet_text(BASIC).unwrap();
        let text = melody_to_leadsheet(&m).unwrap();
        let m2 = parse_leadsheet_text(&text).unwrap();
        assert_eq!(m, m2);
    }

    #[test]
    fn serializer_output_is_stable() {
        let m = parse_leadsheet_text(BASIC).unwrap();
        let text = melody_to_leadsheet(&m).unwrap();
        assert_eq!(
            text,
            "key C major\nmeter 2/4\nchords | C | G |\nnotes C4:q D4:q E4:q D4:q\n"
        );
    }

    #[test]
    fn multiline_notes_append() {
        let text = "key C major\nmeter 2/4\nchords | C | G |\nnotes C4:q D4:q\nnotes E4:q D4:q\n";
        let m = parse_leadsheet_text(text).unwrap();
        assert_eq!(m.notes().len(), 4);
    }

    #[test]
    fn unrepresentable_mid_bar_chord_change_errors() {
        let meter = Meter::new(2, 4).unwrap();
        let key = KeySignature::new(crate::model::PitchClass::new(0).unwrap(), Mode::Major);
        let notes = vec![
            Note::new("C4".parse().unwrap(), RationalDuration::ZERO, RationalDuration::frac(1, 4)),
            Note::new("E4".parse().unwrap(), RationalDuration::frac(1, 4), RationalDuration::frac(1, 4)),
        ];
        let harmony = vec![
            HarmonySpan {
                onset: RationalDuration::ZERO,
                duration: RationalDuration::frac(1, 4),
                chord: "C".parse().unwrap(),
            },
            HarmonySpan {
                onset: RationalDuration::frac(1, 4),
                duration: RationalDuration::frac(1, 4),
                chord: "G".parse().unwrap(),
            },
        ];
        let m = Melody::new(notes, key, meter, harmony).unwrap();
        assert!(matches!(
            melody_to_leadsheet(&m),
            Err(IngestError::UnrepresentableHarmony { .. })
        ));
    }

    proptest! {
        /// Any parsed sheet survives a serialize/parse round trip intact.
        #[test]
        fn round_trip_random_sheets(
            seed_notes in proptest::collection::vec((60u8..=79, 0usize..4), 2..12),
            chord_roots in proptest::collection::vec(0u8..12, 1..4),
        ) {
            let durs = ["q", "e", "h", "e"]; // per-index duration choice
            let mut notes_line = String::from("notes");
            let mut total = RationalDuration::ZERO;
            for (midi, di) in &seed_notes {
                let pitch = Pitch::from_midi(*midi).unwrap();
                let d = durs[*di];
                notes_line.push_str(&format!(" {pitch}:{d}"));
                total += duration_token(d).unwrap();
            }
            // Pad to a whole bar with sixteenths.
            let bar = RationalDuration::frac(1, 2);
            while !total.is_multiple_of(&bar) {
                notes_line.push_str(" C4:s");
                total += RationalDuration::frac(1, 16);
            }
            let bars = total.exact_div(&bar).unwrap();
            let mut chords_line = String::from("chords");
            for i in 0..bars {
                let root = chord_roots[i as usize % chord_roots.len()];
                let pc = crate::model::PitchClass::new(root).unwrap();
                chords_line.push_str(&format!(" | {} ", pc.name_mixed()));
            }
            chords_line.push('|');
            let text = format!("key C major\nmeter 2/4\n{chords_line}\n{notes_line}\n");
            let parsed = parse_leadsheet_text(&text).unwrap();
            let serialized = melody_to_leadsheet(&parsed).unwrap();
            let reparsed = parse_leadsheet_text(&serialized).unwrap();
            prop_assert_eq!(parsed, reparsed);
        }
    }
}
