//! Input parsing: MusicXML (subset) and the plain-text lead-sheet format,
//! plus the monophonic lead extraction that turns a score part into a
//! `Melody`.

mod leadsheet;
mod musicxml;

pub use leadsheet::{melody_to_leadsheet, parse_leadsheet_text};
pub use musicxml::{parse_musicxml, MusicXmlScore};

use thiserror::Error;

use crate::model::{
    ChordSymbol, HarmonySpan, KeySignature, Melody, Meter, ModelError, Note, Pitch,
    RationalDuration,
};

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("XML error: {0}")]
    Xml(String),
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported chord kind `{kind}` in measure {measure}")]
    UnsupportedChordKind { kind: String, measure: usize },
    #[error("measure {measure} length {actual} does not match the {meter} bar")]
    InconsistentMeasure {
        measure: usize,
        actual: RationalDuration,
        meter: Meter,
    },
    #[error("part {0} does not exist")]
    PartOutOfRange(usize),
    #[error("part has no notes")]
    EmptyMelody,
    #[error("no chord annotations cover the notes")]
    NoHarmony,
    #[error("{bars} bars of notes but only {cells} chord cells")]
    HarmonyGapBars { bars: i64, cells: usize },
    #[error("chord change at {onset} is not representable in one cell per bar")]
    UnrepresentableHarmony { onset: RationalDuration },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// A timed event within a measure: one or more simultaneous pitches (via
/// the MusicXML chord flag), or a rest when `pitches` is empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NoteEvent {
    pub onset: RationalDuration,
    pub duration: RationalDuration,
    pub pitches: Vec<Pitch>,
    pub tie_start: bool,
    pub tie_stop: bool,
}

impl NoteEvent {
    pub fn is_rest(&self) -> bool {
        self.pitches.is_empty()
    }
}

/// One measure of a part: events and harmony annotations at onsets
/// relative to the measure start, plus repeat-barline flags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Measure {
    /// 1-based position within the part.
    pub number: usize,
    pub events: Vec<NoteEvent>,
    pub harmonies: Vec<(RationalDuration, ChordSymbol)>,
    pub repeat_forward: bool,
    pub repeat_backward: bool,
    /// Actual sounding length (may be short for a pickup measure).
    pub length: RationalDuration,
}

/// One parsed part: measures in order with the part's meter and key.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScorePart {
    pub part_id: String,
    pub measures: Vec<Measure>,
    pub meter: Meter,
    pub key: KeySignature,
    /// True when the first measure is shorter than a full bar.
    pub has_anacrusis: bool,
}

impl ScorePart {
    /// Maximum number of simultaneous pitches in any event.
    pub fn max_simultaneous(&self) -> usize {
        self.measures
            .iter()
            .flat_map(|m| &m.events)
            .map(|e| e.pitches.len())
            .max()
            .unwrap_or(0)
    }

    pub fn bar_count(&self) -> usize {
        self.measures.len()
    }
}

/// What to do with a pickup measure during lead extraction.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum AnacrusisPolicy {
    /// Pad the pickup at its start so bar 1 begins on a full-bar boundary
    /// (the pad is silence, absorbed by the first note).
    #[default]
    PadStart,
    /// Drop the pickup measure entirely.
    DropPickup,
}

/// Extracts the monophonic lead from one part: the highest pitch of every
/// simultaneous event is kept, rests are absorbed by extending the
/// neighbouring note (a leading rest by the following note), and tied
/// notes merge into single longer notes.
pub fn extract_lead(parts: &[ScorePart], part_index: usize) -> Result<Melody, IngestError> {
    extract_lead_with(parts, part_index, AnacrusisPolicy::default())
}

pub fn extract_lead_with(
    parts: &[ScorePart],
    part_index: usize,
    anacrusis: AnacrusisPolicy,
) -> Result<Melody, IngestError> {
    let part = parts
        .get(part_index)
        .ok_or(IngestError::PartOutOfRange(part_index))?;
    let bar = part.meter.bar_length();

    // Lay measures out on the absolute time axis. A pickup measure is
    // padded to a full bar (events shifted right) or dropped.
    let mut timed_events: Vec<NoteEvent> = Vec::new();
    let mut timed_harmony: Vec<(RationalDuration, ChordSymbol)> = Vec::new();
    let mut offset = RationalDuration::ZERO;
    for (i, measure) in part.measures.iter().enumerate() {
        let short = measure.length < bar;
        let mut shift = RationalDuration::ZERO;
        if i == 0 && short {
            match anacrusis {
                AnacrusisPolicy::PadStart => shift = bar - measure.length,
                AnacrusisPolicy::DropPickup => continue,
            }
        }
        for event in &measure.events {
            timed_events.push(NoteEvent {
                onset: event.onset + offset + shift,
                ..event.clone()
            });
        }
        for (onset, chord) in &measure.harmonies {
            timed_harmony.push((*onset + offset + shift, *chord));
        }
        offset += if i == 0 && short { bar } else { measure.length };
    }
    let extent = offset;

    // Keep the highest pitch of each event; drop rests (their time is
    // re-absorbed below).
    let mut notes: Vec<Note> = Vec::new();
    for event in &timed_events {
        let Some(pitch) = event.pitches.iter().max().copied() else {
            continue;
        };
        let note = Note::new(pitch, event.onset, event.duration);
        // Merge a tie continuation into its head when pitch matches and
        // the spans abut.
        if event.tie_stop {
            if let Some(prev) = notes.last_mut() {
                if prev.pitch == note.pitch && prev.end() == note.onset {
                    prev.duration += note.duration;
                    continue;
                }
            }
        }
        notes.push(note);
    }
    if notes.is_empty() {
        return Err(IngestError::EmptyMelody);
    }

    // Rest absorption: a leading gap extends the first note backward, any
    // other gap extends the previous note forward.
    if notes[0].onset > RationalDuration::ZERO {
        let gap = notes[0].onset;
        notes[0].onset = RationalDuration::ZERO;
        notes[0].duration += gap;
    }
    for i in 1..notes.len() {
        let prev_end = notes[i - 1].end();
        if notes[i].onset > prev_end {
            let gap = notes[i].onset - prev_end;
            notes[i - 1].duration += gap;
        }
    }
    if let Some(last) = notes.last_mut() {
        if last.end() < extent {
            last.duration += extent - last.end();
        }
    }

    // Harmony spans: one chord until the next harmony element; the first
    // span extends back to the start, the last to the piece end.
    timed_harmony.sort_by_key(|(onset, _)| *onset);
    timed_harmony.dedup_by_key(|(onset, _)| *onset);
    if timed_harmony.is_empty() {
        return Err(IngestError::NoHarmony);
    }
    let mut harmony: Vec<HarmonySpan> = Vec::new();
    for (i, (onset, chord)) in timed_harmony.iter().enumerate() {
        let start = if i == 0 { RationalDuration::ZERO } else { *onset };
        let end = timed_harmony
            .get(i + 1)
            .map(|(next, _)| *next)
            .unwrap_or(extent);
        if end > start {
            harmony.push(HarmonySpan {
                onset: start,
                duration: end - start,
                chord: *chord,
            });
        }
    }

    Melody::new(notes, part.key, part.meter, harmony).map_err(IngestError::from)
}
