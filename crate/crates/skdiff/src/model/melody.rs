//! Notes and the lead-sheet melody: a monophonic, onset-ordered note
//! sequence with key, meter, and chord-span annotations.

use serde::{Deserialize, Serialize};

use crate::model::{ChordSymbol, KeySignature, Meter, ModelError, Pitch, RationalDuration};

/// A single melody note. Onsets are offsets from the melody (or segment)
/// start; `tie_continuation` marks the right-hand part of a note that was
/// split at a boundary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Note {
    pub pitch: Pitch,
    pub onset: RationalDuration,
    pub duration: RationalDuration,
    pub tie_continuation: bool,
}

impl Note {
    pub fn new(pitch: Pitch, onset: RationalDuration, duration: RationalDuration) -> Self {
        Note {
            pitch,
            onset,
            duration,
            tie_continuation: false,
        }
    }

    pub fn end(&self) -> RationalDuration {
        self.onset + self.duration
    }
}

/// One chord annotation covering a half-open time span.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HarmonySpan {
    pub onset: RationalDuration,
    pub duration: RationalDuration,
    pub chord: ChordSymbol,
}

impl HarmonySpan {
    pub fn end(&self) -> RationalDuration {
        self.onset + self.duration
    }

    pub fn covers(&self, instant: &RationalDuration) -> bool {
        *instant >= self.onset && *instant < self.end()
    }
}

/// A monophonic lead sheet: ordered non-overlapping notes, one key, one
/// meter, and chord spans covering every note onset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Melody {
    notes: Vec<Note>,
    pub key: KeySignature,
    pub meter: Meter,
    harmony: Vec<HarmonySpan>,
}

impl Melody {
    /// Validates every melody invariant before construction: notes must be
    /// strictly ordered and non-overlapping, every note must have positive
    /// duration, tie continuations must abut an identical preceding pitch,
    /// and each note onset must lie inside exactly one harmony span.
    pub fn new(
        notes: Vec<Note>,
        key: KeySignature,
        meter: Meter,
        harmony: Vec<HarmonySpan>,
    ) -> Result<Self, ModelError> {
        for (i, note) in notes.iter().enumerate() {
            if !note.duration.is_positive() {
                return Err(ModelError::NonPositiveDuration { index: i });
            }
            if let Some(prev) = i.checked_sub(1).map(|j| &notes[j]) {
                if note.onset < prev.end() {
                    return Err(ModelError::OverlappingNotes { index: i });
                }
                if note.tie_continuation && !(prev.pitch == note.pitch && prev.end() == note.onset)
                {
                    return Err(ModelError::DanglingTie { index: i });
                }
            } else if note.tie_continuation {
                return Err(ModelError::DanglingTie { index: i });
            }
        }
        for (i, span) in harmony.iter().enumerate() {
            if !span.duration.is_positive() {
                return Err(ModelError::EmptyHarmonySpan { index: i });
            }
            if let Some(prev) = i.checked_sub(1).map(|j| &harmony[j]) {
                if span.onset < prev.end() {
                    return Err(ModelError::OverlappingHarmony { index: i });
                }
            }
        }
        for (i, note) in notes.iter().enumerate() {
            let covering = harmony.iter().filter(|s| s.covers(&note.onset)).count();
            if covering != 1 {
                return Err(ModelError::HarmonyGap {
                    index: i,
                    onset: note.onset,
                });
            }
        }
        Ok(Melody {
            notes,
            key,
            meter,
            harmony,
        })
    }

    pub fn notes(&self) -> &[Note] {
        &self.notes
    }

    pub fn harmony(&self) -> &[HarmonySpan] {
        &self.harmony
    }

    /// The chord governing an instant, if any span covers it.
    pub fn chord_at(&self, instant: &RationalDuration) -> Option<&ChordSymbol> {
        self.harmony
            .iter()
            .find(|s| s.covers(instant))
            .map(|s| &s.chord)
    }

    /// End of the last note (the melody extent).
    pub fn extent(&self) -> RationalDuration {
        self.notes
            .last()
            .map(Note::end)
            .unwrap_or(RationalDuration::ZERO)
    }

    pub fn bar_count(&self) -> Option<i64> {
        self.extent().exact_div(&self.meter.bar_length())
    }

    /// Joint transposition of notes, key, and chords by `semitones`.
    pub fn transposed(&self, semitones: i32) -> Result<Melody, ModelError> {
        let notes = self
            .notes
            .iter()
            .map(|n| {
                Ok(Note {
                    pitch: n.pitch.transposed(semitones)?,
                    ..*n
                })
            })
            .collect::<Result<Vec<_>, ModelError>>()?;
        let harmony = self
            .harmony
            .iter()
            .map(|s| HarmonySpan {
                chord: s.chord.transposed(semitones),
                ..*s
            })
            .collect();
        Melody::new(notes, self.key.transposed(semitones), self.meter, harmony)
    }
}
