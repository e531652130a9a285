//! Shared acceptance-test machinery: an independent brute-force reducer
//! and a seeded random-segment generator.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use skdiff::model::{
    ChordQuality, ChordSymbol, HarmonySpan, KeySignature, Meter, Mode, Note, Pitch, PitchClass,
    RationalDuration,
};
use skdiff::segment::Segment;

/// A note as the oracle sees it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ONote {
    pub midi: u8,
    pub onset: RationalDuration,
    pub dur: RationalDuration,
    pub tie: bool,
}

/// Independent brute-force reducer: plain list rewriting with no tree
/// bookkeeping. Everything the selection needs — chord-tone tables, scale
/// tables, metric strength — is recomputed here from scratch so the oracle
/// shares no code with the implementation it checks.
pub fn oracle_levels(segment: &Segment) -> Vec<Vec<ONote>> {
    let mut notes: Vec<ONote> = segment
        .notes
        .iter()
        .map(|n| ONote {
            midi: n.pitch.midi_number(),
            onset: n.onset,
            dur: n.duration,
            tie: n.tie_continuation,
        })
        .collect();
    let bar = segment.meter.bar_length();
    let mut levels = vec![notes.clone()];
    while notes.len() > 1 {
        let min = notes.iter().map(|n| n.dur).min().expect("non-empty");
        let window = if bar == min * 3 { min * 3 } else { min * 2 };
        let mut next: Vec<ONote> = Vec::new();
        let mut i = 0;
        while i < notes.len() {
            if notes[i].dur >= window {
                next.push(notes[i]);
                i += 1;
                continue;
            }
            let w_start = window * notes[i].onset.div_floor(&window);
            let w_end = w_start + window;
            let start = i;
            while i < notes.len() && notes[i].onset < w_end && notes[i].dur < window {
                i += 1;
            }
            let group = &notes[start..i];
            let chord = chord_at(segment, &w_start);
            let mut best = 0;
            for cand in 1..group.len() {
                if oracle_key(&group[cand], chord, segment) > oracle_key(&group[best], chord, segment)
                {
                    best = cand;
                }
            }
            next.push(ONote {
                midi: group[best].midi,
                onset: w_start,
                dur: window,
                tie: group[best].tie,
            });
        }
        notes = next;
        levels.push(notes.clone());
    }
    levels
}

fn chord_at<'a>(segment: &'a Segment, instant: &RationalDuration) -> &'a ChordSymbol {
    segment
        .harmony
        .iter()
        .find(|s| *instant >= s.onset && *instant < s.onset + s.duration)
        .map(|s| &s.chord)
        .unwrap_or_else(|| &segment.harmony.last().expect("segments carry harmony").chord)
}

/// (chord tone?, member rank, scale tone?, metric strength); ties break
/// by list position, which the caller's scan handles (first wins).
fn oracle_key(note: &ONote, chord: &ChordSymbol, segment: &Segment) -> (bool, i8, bool, u8) {
    let pc = note.midi % 12;
    let root = chord.root.value();
    let intervals: &[(u8, i8)] = match chord.quality {
        ChordQuality::Major => &[(0, 3), (4, 1), (7, 2)],
        ChordQuality::Minor => &[(0, 3), (3, 1), (7, 2)],
        ChordQuality::Dominant7 => &[(0, 3), (4, 1), (7, 2), (10, 0)],
        ChordQuality::Major7 => &[(0, 3), (4, 1), (7, 2), (11, 0)],
        ChordQuality::Minor7 => &[(0, 3), (3, 1), (7, 2), (10, 0)],
        ChordQuality::Diminished => &[(0, 3), (3, 1), (6, 2)],
        ChordQuality::Augmented => &[(0, 3), (4, 1), (8, 2)],
    };
    let member = intervals
        .iter()
        .find(|(iv, _)| (root + iv) % 12 == pc)
        .map(|(_, rank)| *rank);
    let is_chord_tone = member.is_some();
    let rank = if note.tie { -1 } else { member.unwrap_or(-1) };

    let scale_steps: &[u8] = match segment.key.mode {
        Mode::Major => &[0, 2, 4, 5, 7, 9, 11],
        Mode::Minor => &[0, 2, 3, 5, 7, 8, 10],
    };
    let tonic = segment.key.tonic.value();
    let is_scale_tone = scale_steps.iter().any(|s| (tonic + s) % 12 == pc);

    let beat = segment.meter.beat_length();
    let strength = if note.onset.is_multiple_of(&segment.meter.bar_length()) {
        3
    } else if note.onset.is_multiple_of(&beat) {
        2
    } else if note.onset.is_multiple_of(&(beat / 2)) {
        1
    } else {
        0
    };
    (is_chord_tone, rank, is_scale_tone, strength)
}

const QUALITIES: [ChordQuality; 7] = [
    ChordQuality::Major,
    ChordQuality::Minor,
    ChordQuality::Dominant7,
    ChordQuality::Major7,
    ChordQuality::Minor7,
    ChordQuality::Diminished,
    ChordQuality::Augmented,
];

/// A random grid-aligned segment of at most 16 slots with random chord
/// and key context. Notes tile the span; occasional tie continuations
/// repeat the previous pitch.
pub fn random_segment(rng: &mut ChaCha8Rng, index: usize) -> Segment {
    let (meter, slot_choices): (Meter, &[i64]) = if rng.gen_bool(0.75) {
        (Meter::new(2, 4).unwrap(), &[1, 2, 4, 8])
    } else {
        (Meter::new(3, 8).unwrap(), &[1, 3, 6])
    };
    let bars: i64 = if rng.gen_bool(0.5) { 1 } else { 2 };
    let slots_per_bar = loop {
        let s = slot_choices[rng.gen_range(0..slot_choices.len())];
        if s * bars <= 16 {
            break s;
        }
    };
    let bar = meter.bar_length();
    let grid = bar / slots_per_bar;
    let total_slots = slots_per_bar * bars;
    let span = bar * bars;

    // Random cut points tile the span; quantization later splits any note
    // that straddles a window boundary.
    let mut cuts: Vec<i64> = vec![0];
    for k in 1..total_slots {
        if rng.gen_bool(0.55) {
            cuts.push(k);
        }
    }
    cuts.push(total_slots);

    let mut notes: Vec<Note> = Vec::new();
    for pair in cuts.windows(2) {
        let onset = grid * pair[0];
        let dur = grid * (pair[1] - pair[0]);
        let tie = !notes.is_empty() && rng.gen_bool(0.15);
        let pitch = if tie {
            notes.last().unwrap().pitch
        } else {
            Pitch::from_midi(rng.gen_range(48..=84)).unwrap()
        };
        let mut note = Note::new(pitch, onset, dur);
        note.tie_continuation = tie;
        notes.push(note);
    }

    let harmony: Vec<HarmonySpan> = (0..bars)
        .map(|b| HarmonySpan {
            onset: bar * b,
            duration: bar,
            chord: ChordSymbol::new(
                PitchClass::new(rng.gen_range(0..12)).unwrap(),
                QUALITIES[rng.gen_range(0..QUALITIES.len())],
            ),
        })
        .collect();
    let key = KeySignature::new(
        PitchClass::new(rng.gen_range(0..12)).unwrap(),
        if rng.gen_bool(0.8) {
            Mode::Major
        } else {
            Mode::Minor
        },
    );

    let grid_unit = notes
        .iter()
        .fold(RationalDuration::ZERO, |acc, n| {
            acc.gcd(&n.onset).gcd(&n.duration)
        });
    Segment {
        index,
        notes,
        span,
        key,
        meter,
        harmony,
        grid_unit,
        partial: false,
    }
}

/// Parses an inline lead sheet and returns its non-partial segments.
pub fn segments_of(text: &str, bars: u8) -> Vec<Segment> {
    let melody = skdiff::ingest::parse_leadsheet_text(text).expect("fixture parses");
    skdiff::segment::segment_melody(&melody, bars)
        .expect("fixture segments")
        .into_iter()
        .filter(|s| !s.partial)
        .collect()
}
