//! Core domain vocabulary: pitch, rhythm, harmony, and meter. Everything
//! here is immutable after construction and all operations are pure.

mod duration;
mod harmony;
mod melody;
mod meter;
mod pitch;

pub use duration::RationalDuration;
pub use harmony::{ChordMemberRole, ChordQuality, ChordSymbol, KeySignature, Mode};
pub use melody::{HarmonySpan, Melody, Note};
pub use meter::{metric_strength, Meter};
pub use pitch::{pitch_interval, Pitch, PitchClass, Spelling, Step};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("invalid duration {num}/{den}: must be non-negative with positive denominator")]
    InvalidDuration { num: i64, den: i64 },
    #[error("malformed duration fraction `{0}` (expected num/den)")]
    DurationSyntax(String),
    #[error("pitch class {0} out of range 0..=11")]
    InvalidPitchClass(u8),
    #[error("MIDI number {0} out of range 0..=127")]
    MidiOutOfRange(i32),
    #[error("malformed pitch `{0}`")]
    PitchSyntax(String),
    #[error("malformed chord symbol `{0}`")]
    ChordSyntax(String),
    #[error("unsupported chord quality `{0}`")]
    UnknownChordQuality(String),
    #[error("invalid meter {beats}/{beat_unit}")]
    InvalidMeter { beats: u8, beat_unit: u8 },
    #[error("malformed meter `{0}` (expected beats/unit)")]
    MeterSyntax(String),
    #[error("note {index} has non-positive duration")]
    NonPositiveDuration { index: usize },
    #[error("note {index} overlaps the preceding note")]
    OverlappingNotes { index: usize },
    #[error("note {index} is marked as a tie continuation without an abutting equal-pitch head")]
    DanglingTie { index: usize },
    #[error("harmony span {index} is empty")]
    EmptyHarmonySpan { index: usize },
    #[error("harmony span {index} overlaps the preceding span")]
    OverlappingHarmony { index: usize },
    #[error("note {index} at onset {onset} is not covered by exactly one harmony span")]
    HarmonyGap {
        index: usize,
        onset: RationalDuration,
    },
}
