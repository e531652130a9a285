//! Pitch as a MIDI semitone index, with an optional spelled form kept from
//! the input. Analysis compares pitches by semitone only; spelling is for
//! display and serialization.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::model::ModelError;

/// A pitch class, 0–11 with C = 0.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PitchClass(u8);

impl PitchClass {
    pub fn new(pc: u8) -> Result<Self, ModelError> {
        if pc < 12 {
            Ok(PitchClass(pc))
        } else {
            Err(ModelError::InvalidPitchClass(pc))
        }
    }

    /// Wraps any semitone offset into 0–11.
    pub fn from_semitones(semitones: i32) -> Self {
        PitchClass(semitones.rem_euclid(12) as u8)
    }

    pub fn value(&self) -> u8 {
        self.0
    }

    pub fn transposed(&self, semitones: i32) -> Self {
        Self::from_semitones(self.0 as i32 + semitones)
    }

    /// Sharp-preferring display name (C, C#, D, ...).
    pub fn name_sharp(&self) -> &'static str {
        const NAMES: [&str; 12] = [
            "C", "C#", "D", "D#", "E", "F", "F#", "G", "G#", "A", "A#", "B",
        ];
        NAMES[self.0 as usize]
    }

    /// Name using the conventional mix of sharps and flats for chord roots
    /// and key tonics (Eb rather than D#, Bb rather than A#).
    pub fn name_mixed(&self) -> &'static str {
        const NAMES: [&str; 12] = [
            "C", "C#", "D", "Eb", "E", "F", "F#", "G", "Ab", "A", "Bb", "B",
        ];
        NAMES[self.0 as usize]
    }
}

impl fmt::Display for PitchClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name_mixed())
    }
}

impl fmt::Debug for PitchClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name_mixed())
    }
}

/// Parses note-name syntax without octave: step letter plus optional `#`/`b`.
impl FromStr for PitchClass {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut chars = s.chars();
        let step: Step = chars
            .next()
            .ok_or_else(|| ModelError::PitchSyntax(s.to_string()))?
            .try_into()
            .map_err(|_| ModelError::PitchSyntax(s.to_string()))?;
        let alter = match chars.as_str() {
            "" => 0,
            "#" => 1,
            "b" => -1,
            _ => return Err(ModelError::PitchSyntax(s.to_string())),
        };
        Ok(PitchClass::from_semitones(step.semitone() as i32 + alter))
    }
}

/// Diatonic step letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Step {
    C,
    D,
    E,
    F,
    G,
    A,
    B,
}

impl Step {
    pub fn semitone(&self) -> u8 {
        match self {
            Step::C => 0,
            Step::D => 2,
            Step::E => 4,
            Step::F => 5,
            Step::G => 7,
            Step::A => 9,
            Step::B => 11,
        }
    }

    pub fn letter(&self) -> char {
        match self {
            Step::C => 'C',
            Step::D => 'D',
            Step::E => 'E',
            Step::F => 'F',
            Step::G => 'G',
            Step::A => 'A',
            Step::B => 'B',
        }
    }
}

impl TryFrom<char> for Step {
    type Error = ModelError;

    fn try_from(c: char) -> Result<Self, Self::Error> {
        match c.to_ascii_uppercase() {
            'C' => Ok(Step::C),
            'D' => Ok(Step::D),
            'E' => Ok(Step::E),
            'F' => Ok(Step::F),
            'G' => Ok(Step::G),
            'A' => Ok(Step::A),
            'B' => Ok(Step::B),
            other => Err(ModelError::PitchSyntax(other.to_string())),
        }
    }
}

/// A spelled pitch: step letter, chromatic alteration, octave (C4 = middle C).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Spelling {
    pub step: Step,
    pub alter: i8,
    pub octave: i8,
}

impl Spelling {
    pub fn midi_number(&self) -> i32 {
        (self.octave as i32 + 1) * 12 + self.step.semitone() as i32 + self.alter as i32
    }
}

impl fmt::Display for Spelling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.step.letter())?;
        match self.alter {
            0 => {}
            a if a > 0 => {
                for _ in 0..a {
                    write!(f, "#")?;
                }
            }
            a => {
                for _ in 0..-a {
                    write!(f, "b")?;
                }
            }
        }
        write!(f, "{}", self.octave)
    }
}

/// A concrete pitch. Equality, ordering, and hashing use the MIDI number
/// only; two differently spelled pitches at the same semitone are equal.
#[derive(Clone, Copy, Serialize, Deserialize)]
pub struct Pitch {
    midi: u8,
    spelling: Option<Spelling>,
}

impl Pitch {
    pub fn from_midi(midi: u8) -> Result<Self, ModelError> {
        if midi > 127 {
            return Err(ModelError::MidiOutOfRange(midi as i32));
        }
        Ok(Pitch {
            midi,
            spelling: None,
        })
    }

    pub fn spelled(step: Step, alter: i8, octave: i8) -> Result<Self, ModelError> {
        let spelling = Spelling {
            step,
            alter,
            octave,
        };
        let midi = spelling.midi_number();
        if !(0..=127).contains(&midi) {
            return Err(ModelError::MidiOutOfRange(midi));
        }
        Ok(Pitch {
            midi: midi as u8,
            spelling: Some(spelling),
        })
    }

    pub fn midi_number(&self) -> u8 {
        self.midi
    }

    pub fn spelling(&self) -> Option<Spelling> {
        self.spelling
    }

    pub fn pitch_class(&self) -> PitchClass {
        PitchClass(self.midi % 12)
    }

    /// Transposes by semitones, dropping the spelling (respelling a
    /// transposed note is a display concern the analysis never needs).
    pub fn transposed(&self, semitones: i32) -> Result<Self, ModelError> {
        let midi = self.midi as i32 + semitones;
        if !(0..=127).contains(&midi) {
            return Err(ModelError::MidiOutOfRange(midi));
        }
        Ok(Pitch {
            midi: midi as u8,
            spelling: None,
        })
    }
}

impl PartialEq for Pitch {
    fn eq(&self, other: &Self) -> bool {
        self.midi == other.midi
    }
}

impl Eq for Pitch {}

impl PartialOrd for Pitch {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Pitch {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.midi.cmp(&other.midi)
    }
}

impl Hash for Pitch {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.midi.hash(state);
    }
}

impl fmt::Display for Pitch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.spelling {
            Some(sp) => write!(f, "{sp}"),
            None => {
                let octave = self.midi as i32 / 12 - 1;
                write!(f, "{}{}", self.pitch_class().name_sharp(), octave)
            }
        }
    }
}

impl fmt::Debug for Pitch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Parses spelled-pitch syntax such as `C4`, `F#5`, `Bb3`.
impl FromStr for Pitch {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ModelError::PitchSyntax(s.to_string());
        let mut chars = s.chars().peekable();
        let step: Step = chars.next().ok_or_else(bad)?.try_into()?;
        let mut alter: i8 = 0;
        while let Some(&c) = chars.peek() {
            match c {
                '#' => {
                    alter += 1;
                    chars.next();
                }
                'b' => {
                    alter -= 1;
                    chars.next();
                }
                _ => break,
            }
        }
        let octave: i8 = chars.collect::<String>().parse().map_err(|_| bad())?;
        Pitch::spelled(step, alter, octave)
    }
}

/// Signed semitone distance from `a` to `b` (positive when `b` is higher).
pub fn pitch_interval(a: &Pitch, b: &Pitch) -> i32 {
    b.midi_number() as i32 - a.midi_number() as i32
}
