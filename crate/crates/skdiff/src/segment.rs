//! Equal-width segmentation and grid quantization.
//!
//! Segments are one or two bars wide, re-based to onset 0, and carry their
//! own clipped harmony. Quantization aligns every note to the segment's
//! window ladder: the sequence of window sizes the reduction will sweep,
//! from the grid unit up to the full span, doubling at each step with a
//! single ternary step at the beat-to-bar boundary of triple meters.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{
    ChordSymbol, HarmonySpan, KeySignature, Melody, Meter, Note, RationalDuration,
};

#[derive(Debug, Error)]
pub enum SegmentError {
    #[error("melody is not a whole number of bars (extent {extent}, bar {bar})")]
    NotBarAligned {
        extent: RationalDuration,
        bar: RationalDuration,
    },
    #[error("bars per segment must be 1 or 2, got {0}")]
    BadSegmentWidth(u8),
    #[error("segment is empty")]
    EmptySegment,
    #[error(
        "no feasible reduction grid: {slots} slots of {grid} in {meter} \
         cannot form a doubling ladder (note at onset {onset})"
    )]
    GridInfeasible {
        slots: i64,
        grid: RationalDuration,
        meter: Meter,
        onset: RationalDuration,
    },
    #[error("segment notes do not tile the span: gap or overhang at {at}")]
    NotTiling { at: RationalDuration },
}

/// One equal-width slice of a melody, re-based so the segment starts at
/// onset 0. `index` is 0-based; user-facing output adds 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub index: usize,
    pub notes: Vec<Note>,
    pub span: RationalDuration,
    pub key: KeySignature,
    pub meter: Meter,
    pub harmony: Vec<HarmonySpan>,
    pub grid_unit: RationalDuration,
    /// True for a trailing segment shorter than the requested width.
    pub partial: bool,
}

impl Segment {
    /// The chord governing an instant within the segment. Falls back to the
    /// last span so window starts at the segment end never dangle.
    pub fn chord_at(&self, instant: &RationalDuration) -> Option<&ChordSymbol> {
        self.harmony
            .iter()
            .find(|s| s.covers(instant))
            .or_else(|| self.harmony.last())
            .map(|s| &s.chord)
    }

    /// Jointly transposes notes, key, and chords; the time axis is untouched.
    pub fn transposed(&self, semitones: i32) -> Result<Segment, crate::model::ModelError> {
        let notes = self
            .notes
            .iter()
            .map(|n| {
                Ok(Note {
                    pitch: n.pitch.transposed(semitones)?,
                    ..*n
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let harmony = self
            .harmony
            .iter()
            .map(|s| HarmonySpan {
                chord: s.chord.transposed(semitones),
                ..*s
            })
            .collect();
        Ok(Segment {
            notes,
            key: self.key.transposed(semitones),
            harmony,
            ..self.clone()
        })
    }
}

/// Splits a melody into contiguous segments of `bars_per_segment` bars.
///
/// Notes crossing a segment boundary are split there, with the right part
/// flagged as a tie continuation. With two-bar segments and an odd bar
/// count the trailing one-bar segment is emitted flagged `partial`.
pub fn segment_melody(melody: &Melody, bars_per_segment: u8) -> Result<Vec<Segment>, SegmentError> {
    if !(1..=2).contains(&bars_per_segment) {
        return Err(SegmentError::BadSegmentWidth(bars_per_segment));
    }
    let bar = melody.meter.bar_length();
    let bars = melody
        .bar_count()
        .filter(|&b| b > 0)
        .ok_or(SegmentError::NotBarAligned {
            extent: melody.extent(),
            bar,
        })?;

    let full_span = bar * bars_per_segment as i64;
    let mut segments = Vec::new();
    let mut start = RationalDuration::ZERO;
    let mut index = 0;
    while start < melody.extent() {
        let remaining_bars = bars - index as i64 * bars_per_segment as i64;
        let width_bars = (bars_per_segment as i64).min(remaining_bars);
        let span = bar * width_bars;
        let end = start + span;
        let notes = clip_notes(melody.notes(), &start, &end);
        let harmony = clip_harmony(melody.harmony(), &start, &end);
        let grid_unit = grid_of(&notes);
        segments.push(Segment {
            index,
            notes,
            span,
            key: melody.key,
            meter: melody.meter,
            harmony,
            grid_unit,
            partial: span < full_span,
        });
        start = end;
        index += 1;
    }
    Ok(segments)
}

fn clip_notes(notes: &[Note], start: &RationalDuration, end: &RationalDuration) -> Vec<Note> {
    let mut out = Vec::new();
    for note in notes {
        if note.end() <= *start || note.onset >= *end {
            continue;
        }
        let clip_on = note.onset.max(*start);
        let clip_end = note.end().min(*end);
        out.push(Note {
            pitch: note.pitch,
            onset: clip_on - *start,
            duration: clip_end - clip_on,
            // The left part keeps the original flag; any clipped-off head
            // makes this piece a continuation.
            tie_continuation: note.tie_continuation || note.onset < *start,
        });
    }
    out
}

fn clip_harmony(
    harmony: &[HarmonySpan],
    start: &RationalDuration,
    end: &RationalDuration,
) -> Vec<HarmonySpan> {
    let mut out = Vec::new();
    for span in harmony {
        if span.end() <= *start || span.onset >= *end {
            continue;
        }
        let clip_on = span.onset.max(*start);
        let clip_end = span.end().min(*end);
        out.push(HarmonySpan {
            onset: clip_on - *start,
            duration: clip_end - clip_on,
            chord: span.chord,
        });
    }
    out
}

fn grid_of(notes: &[Note]) -> RationalDuration {
    notes.iter().fold(RationalDuration::ZERO, |acc, n| {
        acc.gcd(&n.onset).gcd(&n.duration)
    })
}

/// The ladder of window sizes for one segment: `grid, ..., span`, doubling
/// at every step except a single ternary step producing the bar of a
/// triple meter.
pub fn window_ladder(segment: &Segment) -> Result<Vec<RationalDuration>, SegmentError> {
    ladder_from(&segment.grid_unit, &segment.span, &segment.meter).ok_or_else(|| {
        let slots = segment.span.exact_div(&segment.grid_unit).unwrap_or(0);
        SegmentError::GridInfeasible {
            slots,
            grid: segment.grid_unit,
            meter: segment.meter,
            onset: first_offending_onset(segment),
        }
    })
}

fn first_offending_onset(segment: &Segment) -> RationalDuration {
    // Best effort: name the first note whose duration forces a factor the
    // ladder cannot absorb.
    segment
        .notes
        .iter()
        .find(|n| {
            let mut q = n.duration.exact_div(&segment.grid_unit).unwrap_or(0);
            while q > 0 && q % 2 == 0 {
                q /= 2;
            }
            !(q == 1 || (q == 3 && segment.meter.is_triple()))
        })
        .map(|n| n.onset)
        .unwrap_or(RationalDuration::ZERO)
}

fn is_power_of_two(n: i64) -> bool {
    n > 0 && (n & (n - 1)) == 0
}

fn ladder_from(
    grid: &RationalDuration,
    span: &RationalDuration,
    meter: &Meter,
) -> Option<Vec<RationalDuration>> {
    if grid.is_zero() {
        return None;
    }
    let slots = span.exact_div(grid)?;
    if slots < 1 {
        return None;
    }
    let mut n = slots;
    let mut threes = 0;
    while n % 3 == 0 {
        n /= 3;
        threes += 1;
    }
    if !is_power_of_two(n) || threes > 1 {
        return None;
    }
    let mut ladder = vec![*grid];
    if threes == 0 {
        let mut w = *grid;
        while w < *span {
            w = w * 2;
            ladder.push(w);
        }
        return Some(ladder);
    }
    // One ternary step. It must produce the bar of a triple meter from its
    // beat; everything below and above is duple.
    if !meter.is_triple() {
        return None;
    }
    let bar = meter.bar_length();
    let beat = bar / 3;
    let mut w = *grid;
    while w < beat {
        w = w * 2;
        ladder.push(w);
    }
    if w != beat {
        return None;
    }
    w = w * 3;
    ladder.push(w);
    if w != bar {
        return None;
    }
    while w < *span {
        w = w * 2;
        ladder.push(w);
    }
    (w == *span).then_some(ladder)
}

/// Aligns every note to the segment's window ladder, splitting any note
/// that would straddle a window boundary into tied ladder-sized parts.
/// The result is idempotent: a quantized segment passes through unchanged.
pub fn quantize_to_grid(segment: &Segment) -> Result<Segment, SegmentError> {
    if segment.notes.is_empty() {
        return Err(SegmentError::EmptySegment);
    }
    let mut cursor = RationalDuration::ZERO;
    for note in &segment.notes {
        if note.onset != cursor {
            return Err(SegmentError::NotTiling { at: cursor });
        }
        cursor = note.end();
    }
    if cursor != segment.span {
        return Err(SegmentError::NotTiling { at: cursor });
    }

    let ladder = window_ladder(segment)?;
    let mut notes = Vec::with_capacity(segment.notes.len());
    for note in &segment.notes {
        split_to_ladder(note, &ladder, &mut notes);
    }
    let grid_unit = grid_of(&notes);
    Ok(Segment {
        notes,
        grid_unit,
        ..segment.clone()
    })
}

/// Emits `note` as the minimal run of tied parts such that each part
/// occupies exactly one ladder window (duration equal to a ladder size,
/// onset a multiple of that size).
fn split_to_ladder(note: &Note, ladder: &[RationalDuration], out: &mut Vec<Note>) {
    // Find the largest ladder window that starts at the note's onset and
    // fits inside the note; take it, then recurse on the remainder.
    let mut remaining = *note;
    loop {
        let w = ladder
            .iter()
            .rev()
            .find(|w| remaining.onset.is_multiple_of(w) && **w <= remaining.duration)
            .copied()
            .expect("grid unit always fits");
        if w == remaining.duration {
            out.push(remaining);
            return;
        }
        out.push(Note {
            duration: w,
            ..remaining
        });
        remaining = Note {
            pitch: remaining.pitch,
            onset: remaining.onset + w,
            duration: remaining.duration - w,
            tie_continuation: true,
        };
    }
}

/// Undoes segmentation: re-bases each segment's notes and merges the tie
/// parts introduced at segment boundaries. Quantization splits are merged
/// too, so this reconstructs the surface note sequence.
pub fn concatenate_segments(segments: &[Segment]) -> Vec<Note> {
    let mut out: Vec<Note> = Vec::new();
    let mut offset = RationalDuration::ZERO;
    for segment in segments {
        for note in &segment.notes {
            let abs = Note {
                onset: note.onset + offset,
                ..*note
            };
            match out.last_mut() {
                Some(prev)
                    if abs.tie_continuation && prev.pitch == abs.pitch && prev.end() == abs.onset =>
                {
                    prev.duration += abs.duration;
                }
                _ => out.push(abs),
            }
        }
        offset += segment.span;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Mode, Pitch, PitchClass};

    fn d(n: i64, den: i64) -> RationalDuration {
        RationalDuration::frac(n, den)
    }

    fn c_major() -> KeySignature {
        KeySignature::new(PitchClass::new(0).unwrap(), Mode::Major)
    }

    fn melody_of(tokens: &[(&str, i64, i64)], meter: Meter) -> Melody {
        let mut notes = Vec::new();
        let mut onset = RationalDuration::ZERO;
        for (p, n, den) in tokens {
            let dur = d(*n, *den);
            notes.push(Note::new(p.parse::<Pitch>().unwrap(), onset, dur));
            onset += dur;
        }
        let harmony = vec![HarmonySpan {
            onset: RationalDuration::ZERO,
            duration: onset,
            chord: "C".parse().unwrap(),
        }];
        Melody::new(notes, c_major(), meter, harmony).unwrap()
    }

    fn eight_bar_melody() -> Melody {
        let mut tokens = Vec::new();
        for _ in 0..8 {
            tokens.push(("C4", 1, 4));
            tokens.push(("E4", 1, 4));
        }
        melody_of(&tokens, Meter::new(2, 4).unwrap())
    }

    #[test]
    fn eight_bars_two_per_segment_gives_four() {
        let segs = segment_melody(&eight_bar_melody(), 2).unwrap();
        assert_eq!(segs.len(), 4);
        assert!(segs.iter().all(|s| s.span == d(1, 1) && !s.partial));
        assert!(segs.iter().all(|s| s.notes[0].onset == RationalDuration::ZERO));
    }

    #[test]
    fn one_bar_melody_identity_segmentation() {
        let m = melody_of(&[("C4", 1, 4), ("E4", 1, 4)], Meter::new(2, 4).unwrap());
        let segs = segment_melody(&m, 1).unwrap();
        assert_eq!(segs.len(), 1);
        assert_eq!(segs[0].notes, m.notes());
    }

    #[test]
    fn boundary_crossing_note_is_split_and_tied() {
        // Quarter, then a half note spanning bars 1-2, then quarter.
        let m = melody_of(
            &[("C4", 1, 4), ("G4", 1, 2), ("E4", 1, 4)],
            Meter::new(2, 4).unwrap(),
        );
        let segs = segment_melody(&m, 1).unwrap();
        assert_eq!(segs.len(), 2);
        let first = &segs[0].notes;
        let second = &segs[1].notes;
        assert_eq!(first.len(), 2);
        assert_eq!(second.len(), 2);
        assert_eq!(first[1].duration, d(1, 4));
        assert!(!first[1].tie_continuation);
        assert_eq!(second[0].duration, d(1, 4));
        assert!(second[0].tie_continuation);
        assert_eq!(second[0].onset, RationalDuration::ZERO);
    }

    #[test]
    fn odd_bar_count_yields_trailing_partial() {
        let m = melody_of(
            &[
                ("C4", 1, 2),
                ("D4", 1, 2),
                ("E4", 1, 2),
            ],
            Meter::new(2, 4).unwrap(),
        );
        let segs = segment_melody(&m, 2).unwrap();
        assert_eq!(segs.len(), 2);
        assert!(!segs[0].partial);
        assert!(segs[1].partial);
        assert_eq!(segs[1].span, d(1, 2));
    }

    #[test]
    fn non_bar_aligned_melody_is_an_error() {
        let m = melody_of(&[("C4", 1, 4), ("D4", 1, 4), ("E4", 1, 4)], Meter::new(2, 4).unwrap());
        assert!(matches!(
            segment_melody(&m, 1),
            Err(SegmentError::NotBarAligned { .. })
        ));
    }

    #[test]
    fn uniform_quarters_grid() {
        let m = eight_bar_melody();
        let segs = segment_melody(&m, 2).unwrap();
        let q = quantize_to_grid(&segs[0]).unwrap();
        assert_eq!(q.grid_unit, d(1, 4));
        assert_eq!(q.span.exact_div(&q.grid_unit), Some(4));
        assert_eq!(q.notes, segs[0].notes);
    }

    #[test]
    fn mixed_durations_gcd_grid() {
        let m = melody_of(&[("C4", 1, 8), ("D4", 1, 8), ("E4", 1, 4)], Meter::new(2, 4).unwrap());
        let segs = segment_melody(&m, 1).unwrap();
        let q = quantize_to_grid(&segs[0]).unwrap();
        assert_eq!(q.grid_unit, d(1, 8));
        assert_eq!(q.notes.len(), 3);
    }

    #[test]
    fn dotted_quarter_splits_at_window_boundary() {
        let m = melody_of(&[("C4", 3, 8), ("D4", 1, 8)], Meter::new(2, 4).unwrap());
        let segs = segment_melody(&m, 1).unwrap();
        let q = quantize_to_grid(&segs[0]).unwrap();
        assert_eq!(q.grid_unit, d(1, 8));
        let durs: Vec<_> = q.notes.iter().map(|n| n.duration).collect();
        assert_eq!(durs, vec![d(1, 4), d(1, 8), d(1, 8)]);
        assert!(q.notes[1].tie_continuation);
        assert!(!q.notes[2].tie_continuation);
    }

    #[test]
    fn syncopated_quarter_splits_into_offbeat_parts() {
        let m = melody_of(
            &[("C4", 1, 8), ("D4", 1, 4), ("E4", 1, 8)],
            Meter::new(2, 4).unwrap(),
        );
        let q = quantize_to_grid(&segment_melody(&m, 1).unwrap()[0]).unwrap();
        let durs: Vec<_> = q.notes.iter().map(|n| n.duration).collect();
        assert_eq!(durs, vec![d(1, 8), d(1, 8), d(1, 8), d(1, 8)]);
        assert!(q.notes[2].tie_continuation);
    }

    #[test]
    fn quantize_is_idempotent() {
        let m = melody_of(&[("C4", 3, 8), ("D4", 1, 8)], Meter::new(2, 4).unwrap());
        let q1 = quantize_to_grid(&segment_melody(&m, 1).unwrap()[0]).unwrap();
        let q2 = quantize_to_grid(&q1).unwrap();
        assert_eq!(q1, q2);
    }

    #[test]
    fn three_eight_ladder_has_ternary_step() {
        let m = melody_of(
            &[("C4", 1, 16), ("D4", 1, 16), ("E4", 1, 8), ("F4", 1, 8)],
            Meter::new(3, 8).unwrap(),
        );
        let segs = segment_melody(&m, 1).unwrap();
        let q = quantize_to_grid(&segs[0]).unwrap();
        let ladder = window_ladder(&q).unwrap();
        assert_eq!(ladder, vec![d(1, 16), d(1, 8), d(3, 8)]);
    }

    #[test]
    fn two_bar_three_eight_ladder() {
        let mut tokens = Vec::new();
        for _ in 0..6 {
            tokens.push(("C4", 1, 8));
        }
        let m = melody_of(&tokens, Meter::new(3, 8).unwrap());
        let q = quantize_to_grid(&segment_melody(&m, 2).unwrap()[0]).unwrap();
        assert_eq!(window_ladder(&q).unwrap(), vec![d(1, 8), d(3, 8), d(3, 4)]);
    }

    #[test]
    fn triplet_grid_in_duple_meter_is_infeasible() {
        let m = melody_of(
            &[("C4", 1, 12), ("D4", 1, 12), ("E4", 1, 12), ("F4", 1, 4)],
            Meter::new(2, 4).unwrap(),
        );
        let segs = segment_melody(&m, 1).unwrap();
        assert!(matches!(
            quantize_to_grid(&segs[0]),
            Err(SegmentError::GridInfeasible { .. })
        ));
    }

    #[test]
    fn concatenation_reproduces_melody() {
        let m = melody_of(
            &[("C4", 1, 4), ("G4", 1, 2), ("E4", 1, 4), ("D4", 1, 2)],
            Meter::new(2, 4).unwrap(),
        );
        for bars in [1, 2] {
            let segs = segment_melody(&m, bars).unwrap();
            assert_eq!(concatenate_segments(&segs), m.notes());
        }
    }

    #[test]
    fn concatenation_after_quantization_reproduces_melody() {
        let m = melody_of(&[("C4", 3, 8), ("D4", 1, 8), ("G4", 1, 2)], Meter::new(2, 4).unwrap());
        let segs: Vec<Segment> = segment_melody(&m, 1)
            .unwrap()
            .iter()
            .map(|s| quantize_to_grid(s).unwrap())
            .collect();
        assert_eq!(concatenate_segments(&segs), m.notes());
    }

    #[test]
    fn all_full_segments_share_span() {
        let segs = segment_melody(&eight_bar_melody(), 2).unwrap();
        let spans: Vec<_> = segs.iter().filter(|s| !s.partial).map(|s| s.span).collect();
        assert!(spans.windows(2).all(|w| w[0] == w[1]));
    }
}
