//! MusicXML subset parser (uncompressed `.xml`/`.musicxml`).
//!
//! Recognized elements: `part-list`, `part`, `measure`,
//! `attributes/divisions`, `attributes/key/fifths`, `attributes/time`,
//! `note` (`pitch` with step/alter/octave, `duration`, `chord`, `tie`,
//! `rest`, `grace`), `harmony` (`root`, `kind`), and `barline` repeat
//! marks. Unknown elements are ignored with a warning (one per element
//! name); unknown harmony kinds are an error naming the kind.

use std::collections::BTreeSet;

use roxmltree::{Document, Node};

use crate::ingest::{IngestError, Measure, NoteEvent, ScorePart};
use crate::model::{
    ChordQuality, ChordSymbol, KeySignature, Meter, Mode, Pitch, PitchClass, RationalDuration,
    Step,
};

/// A parsed document: parts in document order plus accumulated warnings.
#[derive(Clone, Debug)]
pub struct MusicXmlScore {
    pub parts: Vec<ScorePart>,
    pub warnings: Vec<String>,
}

/// Parses a MusicXML byte stream into score parts.
pub fn parse_musicxml(document: &[u8]) -> Result<MusicXmlScore, IngestError> {
    let text = std::str::from_utf8(document)
        .map_err(|e| IngestError::Xml(format!("invalid UTF-8: {e}")))?;
    let doc = Document::parse(text).map_err(|e| IngestError::Xml(e.to_string()))?;
    let root = doc.root_element();
    if root.tag_name().name() != "score-partwise" {
        return Err(IngestError::Xml(format!(
            "expected <score-partwise>, found <{}>",
            root.tag_name().name()
        )));
    }

    let mut warnings = Vec::new();
    let mut ignored: BTreeSet<String> = BTreeSet::new();
    let mut parts = Vec::new();
    for part_node in root.children().filter(|n| n.has_tag_name("part")) {
        let part_id = part_node.attribute("id").unwrap_or("").to_string();
        parts.push(parse_part(part_node, part_id, &mut ignored)?);
    }
    for name in ignored {
        warnings.push(format!("ignored unknown element <{name}>"));
    }
    if parts.is_empty() {
        return Err(IngestError::Xml("document has no <part> elements".into()));
    }
    Ok(MusicXmlScore { parts, warnings })
}

struct PartState {
    /// MusicXML divisions per quarter note.
    divisions: i64,
    meter: Option<Meter>,
    key: Option<KeySignature>,
}

fn parse_part(
    node: Node,
    part_id: String,
    ignored: &mut BTreeSet<String>,
) -> Result<ScorePart, IngestError> {
    let mut state = PartState {
        divisions: 1,
        meter: None,
        key: None,
    };
    let mut measures = Vec::new();
    for (i, m) in node
        .children()
        .filter(|n| n.has_tag_name("measure"))
        .enumerate()
    {
        measures.push(parse_measure(m, i + 1, &mut state, ignored)?);
    }
    let meter = state.meter.unwrap_or(Meter { beats: 4, beat_unit: 4 });
    let key = state
        .key
        .unwrap_or_else(|| KeySignature::from_fifths(0, Mode::Major));

    // Only the first measure may be short (a pickup); every other measure
    // must fill the bar exactly.
    let bar = meter.bar_length();
    for measure in &measures {
        if measure.length != bar && !(measure.number == 1 && measure.length < bar) {
            return Err(IngestError::InconsistentMeasure {
                measure: measure.number,
                actual: measure.length,
                meter,
            });
        }
    }
    let has_anacrusis = measures.first().map(|m| m.length < bar).unwrap_or(false);
    Ok(ScorePart {
        part_id,
        measures,
        meter,
        key,
        has_anacrusis,
    })
}

fn parse_measure(
    node: Node,
    number: usize,
    state: &mut PartState,
    ignored: &mut BTreeSet<String>,
) -> Result<Measure, IngestError> {
    let mut events: Vec<NoteEvent> = Vec::new();
    let mut harmonies = Vec::new();
    let mut repeat_forward = false;
    let mut repeat_backward = false;
    let mut cursor = RationalDuration::ZERO;

    for child in node.children().filter(Node::is_element) {
        match child.tag_name().name() {
            "attributes" => parse_attributes(child, state, ignored)?,
            "note" => {
                if child.children().any(|c| c.has_tag_name("grace")) {
                    ignored.insert("grace".to_string());
                    continue;
                }
                let duration_divs = child_int(&child, "duration").ok_or_else(|| {
                    IngestError::Xml(format!("measure {number}: note without <duration>"))
                })?;
                let duration =
                    RationalDuration::frac(duration_divs, state.divisions * 4);
                let is_chord = child.children().any(|c| c.has_tag_name("chord"));
                let is_rest = child.children().any(|c| c.has_tag_name("rest"));
                let mut tie_start = false;
                let mut tie_stop = false;
                for tie in child.children().filter(|c| c.has_tag_name("tie")) {
                    match tie.attribute("type") {
                        Some("start") => tie_start = true,
                        Some("stop") => tie_stop = true,
                        _ => {}
                    }
                }
                let pitch = if is_rest {
                    None
                } else {
                    Some(parse_pitch(&child, number)?)
                };
                if is_chord {
                    match events.last_mut() {
                        Some(prev) => {
                            if let Some(p) = pitch {
                                prev.pitches.push(p);
                            }
                            prev.tie_start |= tie_start;
                            prev.tie_stop |= tie_stop;
                        }
                        None => {
                            return Err(IngestError::Xml(format!(
                                "measure {number}: <chord> flag on the first note"
                            )))
                        }
                    }
                } else {
                    events.push(NoteEvent {
                        onset: cursor,
                        duration,
                        pitches: pitch.into_iter().collect(),
                        tie_start,
                        tie_stop,
                    });
                    cursor += duration;
                }
            }
            "harmony" => {
                harmonies.push((cursor, parse_harmony(&child, number)?));
            }
            "barline" => {
                for repeat in child.children().filter(|c| c.has_tag_name("repeat")) {
                    match repeat.attribute("direction") {
                        Some("forward") => repeat_forward = true,
                        Some("backward") => repeat_backward = true,
                        _ => {}
                    }
                }
            }
            other => {
                ignored.insert(other.to_string());
            }
        }
    }

    Ok(Measure {
        number,
        events,
        harmonies,
        repeat_forward,
        repeat_backward,
        length: cursor,
    })
}

fn parse_attributes(
    node: Node,
    state: &mut PartState,
    ignored: &mut BTreeSet<String>,
) -> Result<(), IngestError> {
    for child in node.children().filter(Node::is_element) {
        match child.tag_name().name() {
            "divisions" => {
                state.divisions = element_int(&child).ok_or_else(|| {
                    IngestError::Xml("non-numeric <divisions>".to_string())
                })?;
            }
            "key" => {
                let fifths = child_int(&child, "fifths").unwrap_or(0);
                let mode = match child_text(&child, "mode").as_deref() {
                    Some("minor") => Mode::Minor,
                    _ => Mode::Major,
                };
                state.key = Some(KeySignature::from_fifths(fifths as i32, mode));
            }
            "time" => {
                let beats = child_int(&child, "beats").unwrap_or(4);
                let unit = child_int(&child, "beat-type").unwrap_or(4);
                state.meter = Some(
                    Meter::new(beats as u8, unit as u8)
                        .map_err(|e| IngestError::Xml(e.to_string()))?,
                );
            }
            other => {
                ignored.insert(other.to_string());
            }
        }
    }
    Ok(())
}

fn parse_pitch(note: &Node, measure: usize) -> Result<Pitch, IngestError> {
    let pitch_node = note
        .children()
        .find(|c| c.has_tag_name("pitch"))
        .ok_or_else(|| IngestError::Xml(format!("measure {measure}: note without <pitch>")))?;
    let step_text = child_text(&pitch_node, "step")
        .ok_or_else(|| IngestError::Xml(format!("measure {measure}: pitch without <step>")))?;
    let step: Step = step_text
        .chars()
        .next()
        .unwrap_or(' ')
        .try_into()
        .map_err(|_| IngestError::Xml(format!("measure {measure}: bad step `{step_text}`")))?;
    let alter = child_int(&pitch_node, "alter").unwrap_or(0) as i8;
    let octave = child_int(&pitch_node, "octave")
        .ok_or_else(|| IngestError::Xml(format!("measure {measure}: pitch without <octave>")))?
        as i8;
    Pitch::spelled(step, alter, octave).map_err(|e| IngestError::Xml(e.to_string()))
}

fn parse_harmony(node: &Node, measure: usize) -> Result<ChordSymbol, IngestError> {
    let root_node = node
        .children()
        .find(|c| c.has_tag_name("root"))
        .ok_or_else(|| IngestError::Xml(format!("measure {measure}: harmony without <root>")))?;
    let step_text = child_text(&root_node, "root-step").ok_or_else(|| {
        IngestError::Xml(format!("measure {measure}: harmony without <root-step>"))
    })?;
    let step: Step = step_text
        .chars()
        .next()
        .unwrap_or(' ')
        .try_into()
        .map_err(|_| IngestError::Xml(format!("measure {measure}: bad root `{step_text}`")))?;
    let alter = child_int(&root_node, "root-alter").unwrap_or(0) as i32;
    let root = PitchClass::from_semitones(step.semitone() as i32 + alter);
    let kind = child_text(node, "kind").unwrap_or_else(|| "major".to_string());
    let quality = match kind.trim() {
        "major" => ChordQuality::Major,
        "minor" => ChordQuality::Minor,
        "dominant" | "dominant-seventh" => ChordQuality::Dominant7,
        "major-seventh" => ChordQuality::Major7,
        "minor-seventh" => ChordQuality::Minor7,
        "diminished" => ChordQuality::Diminished,
        "augmented" => ChordQuality::Augmented,
        other => {
            return Err(IngestError::UnsupportedChordKind {
                kind: other.to_string(),
                measure,
            })
        }
    };
    Ok(ChordSymbol::new(root, quality))
}

fn child_text(node: &Node, name: &str) -> Option<String> {
    node.children()
        .find(|c| c.has_tag_name(name))
        .and_then(|c| c.text())
        .map(|t| t.trim().to_string())
}

fn child_int(node: &Node, name: &str) -> Option<i64> {
    child_text(node, name)?.parse().ok()
}

fn element_int(node: &Node) -> Option<i64> {
    node.text()?.trim().parse().ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(n: i64, den: i64) -> RationalDuration {
        RationalDuration::frac(n, den)
    }

    fn wrap(measures: &str) -> String {
        format!(
            r#"<?xml version="1.0" encoding="UTF-8"?>
<score-partwise version="3.1">
  <part-list>
    <score-part id="P1"><part-name>Mandolin 1</part-name></score-part>
  </part-list>
  <part id="P1">
{measures}
  </part>
</score-partwise>"#
        )
    }

    const FIRST_MEASURE_HEAD: &str = r#"
      <attributes>
        <divisions>2</divisions>
        <key><fifths>0</fifths></key>
        <time><beats>2</beats><beat-type>4</beat-type></time>
      </attributes>
      <harmony><root><root-step>C</root-step></root><kind>major</kind></harmony>"#;

    #[test]
    fn minimal_single_part_document() {
        let xml = wrap(&format!(
            r#"    <measure number="1">{FIRST_MEASURE_HEAD}
      <note><pitch><step>C</step><octave>4</octave></pitch><duration>2</duration></note>
      <note><pitch><step>E</step><octave>4</octave></pitch><duration>2</duration></note>
    </measure>"#
        ));
        let score = parse_musicxml(xml.as_bytes()).unwrap();
        assert_eq!(score.parts.len(), 1);
        let part = &score.parts[0];
        assert_eq!(part.part_id, "P1");
        assert_eq!(part.meter, Meter::new(2, 4).unwrap());
        assert_eq!(part.measures[0].events.len(), 2);
        assert_eq!(part.measures[0].events[0].duration, d(1, 4));
        assert_eq!(part.measures[0].events[1].onset, d(1, 4));
        assert_eq!(
            part.measures[0].events[0].pitches[0].midi_number(),
            60
        );
    }

    #[test]
    fn chord_flag_stacks_simultaneous_pitches() {
        let xml = wrap(&format!(
            r#"    <measure number="1">{FIRST_MEASURE_HEAD}
      <note><pitch><step>E</step><octave>4</octave></pitch><duration>4</duration></note>
      <note><chord/><pitch><step>C</step><octave>5</octave></pitch><duration>4</duration></note>
    </measure>"#
        ));
        let score = parse_musicxml(xml.as_bytes()).unwrap();
        let events = &score.parts[0].measures[0].events;
        assert_eq!(events.len(), 1);
        let mut midi: Vec<u8> = events[0].pitches.iter().map(|p| p.midi_number()).collect();
        midi.sort();
        assert_eq!(midi, vec![64, 72]);
    }

    #[test]
    fn malformed_xml_reports_location() {
        let err = parse_musicxml(b"<score-partwise><part").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("XML"), "got: {msg}");
    }

    #[test]
    fn unsupported_chord_kind_is_named() {
        let xml = wrap(
            r#"    <measure number="1">
      <attributes>
        <divisions>1</divisions>
        <time><beats>2</beats><beat-type>4</beat-type></time>
      </attributes>
      <harmony><root><root-step>C</root-step></root><kind>suspended-fourth</kind></harmony>
      <note><pitch><step>C</step><octave>4</octave></pitch><duration>2</duration></note>
    </measure>"#,
        );
        match parse_musicxml(xml.as_bytes()) {
            Err(IngestError::UnsupportedChordKind { kind, measure }) => {
                assert_eq!(kind, "suspended-fourth");
                assert_eq!(measure, 1);
            }
            other => panic!("expected unsupported-kind error, got {other:?}"),
        }
    }

    #[test]
    fn inconsistent_measure_is_named() {
        let xml = wrap(&format!(
            r#"    <measure number="1">{FIRST_MEASURE_HEAD}
      <note><pitch><step>C</step><octave>4</octave></pitch><duration>4</duration></note>
    </measure>
    <measure number="2">
      <note><pitch><step>D</step><octave>4</octave></pitch><duration>3</duration></note>
    </measure>"#
        ));
        match parse_musicxml(xml.as_bytes()) {
            Err(IngestError::InconsistentMeasure { measure, .. }) => assert_eq!(measure, 2),
            other => panic!("expected inconsistent measure, got {other:?}"),
        }
    }

    #[test]
    fn short_first_measure_flags_anacrusis() {
        let xml = wrap(&format!(
            r#"    <measure number="1">{FIRST_MEASURE_HEAD}
      <note><pitch><step>G</step><octave>4</octave></pitch><duration>1</duration></note>
    </measure>
    <measure number="2">
      <note><pitch><step>C</step><octave>4</octave></pitch><duration>4</duration></note>
    </measure>"#
        ));
        let score = parse_musicxml(xml.as_bytes()).unwrap();
        assert!(score.parts[0].has_anacrusis);
        assert_eq!(score.parts[0].measures[0].length, d(1, 8));
    }

    #[test]
    fn ties_rests_and_repeats_are_captured() {
        let xml = wrap(&format!(
            r#"    <measure number="1">{FIRST_MEASURE_HEAD}
      <note><pitch><step>G</step><octave>4</octave></pitch><duration>2</duration><tie type="start"/></note>
      <note><rest/><duration>2</duration></note>
      <barline location="right"><repeat direction="backward"/></barline>
    </measure>"#
        ));
        let score = parse_musicxml(xml.as_bytes()).unwrap();
        let m = &score.parts[0].measures[0];
        assert!(m.events[0].tie_start);
        assert!(m.events[1].is_rest());
        assert!(m.repeat_backward);
        assert!(!m.repeat_forward);
    }

    #[test]
    fn grace_notes_are_dropped_with_warning() {
        let xml = wrap(&format!(
            r#"    <measure number="1">{FIRST_MEASURE_HEAD}
      <note><grace/><pitch><step>D</step><octave>4</octave></pitch></note>
      <note><pitch><step>C</step><octave>4</octave></pitch><duration>4</duration></note>
    </measure>"#
        ));
        let score = parse_musicxml(xml.as_bytes()).unwrap();
        assert_eq!(score.parts[0].measures[0].events.len(), 1);
        assert!(score
            .warnings
            .iter()
            .any(|w| w.contains("grace")), "warnings: {:?}", score.warnings);
    }

    #[test]
    fn unknown_elements_warn_once_per_name() {
        let xml = wrap(&format!(
            r#"    <measure number="1">{FIRRST}
      <direction><sound tempo="96"/></direction>
      <direction><sound tempo="120"/></direction>
      <note><pitch><step>C</step><octave>4</octave></pitch><duration>4</duration></note>
    </measure>"#,
            FIRRST = FIRST_MEASURE_HEAD
        ));
        let score = parse_musicxml(xml.as_bytes()).unwrap();
        let direction_warnings = score
            .warnings
            .iter()
            .filter(|w| w.contains("direction"))
            .count();
        assert_eq!(direction_warnings, 1);
    }

    #[test]
    fn two_part_document_preserves_order() {
        let xml = format!(
            r#"<score-partwise>
  <part-list>
    <score-part id="P1"/><score-part id="P2"/>
  </part-list>
  <part id="P1">
    <measure number="1">{FIRST_MEASURE_HEAD}
      <note><pitch><step>C</step><octave>5</octave></pitch><duration>4</duration></note>
    </measure>
  </part>
  <part id="P2">
    <measure number="1">
      <attributes><divisions>1</divisions><time><beats>2</beats><beat-type>4</beat-type></time></attributes>
      <note><pitch><step>C</step><octave>3</octave></pitch><duration>2</duration></note>
    </measure>
  </part>
</score-partwise>"#
        );
        let score = parse_musicxml(xml.as_bytes()).unwrap();
        assert_eq!(score.parts.len(), 2);
        assert_eq!(score.parts[0].part_id, "P1");
        assert_eq!(score.parts[1].part_id, "P2");
    }

    #[test]
    fn key_mode_minor_is_read() {
        let xml = wrap(
            r#"    <measure number="1">
      <attributes>
        <divisions>1</divisions>
        <key><fifths>0</fifths><mode>minor</mode></key>
        <time><beats>2</beats><beat-type>4</beat-type></time>
      </attributes>
      <note><pitch><step>A</step><octave>3</octave></pitch><duration>2</duration></note>
    </measure>"#,
        );
        let score = parse_musicxml(xml.as_bytes()).unwrap();
        assert_eq!(score.parts[0].key.mode, Mode::Minor);
        assert_eq!(score.parts[0].key.tonic.value(), 9); // A minor
    }
}
