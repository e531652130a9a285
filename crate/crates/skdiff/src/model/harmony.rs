//! Chord symbols and key signatures. Chord tones and scale tones are
//! derived deterministically from root/tonic plus quality/mode.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::model::{ModelError, PitchClass};

/// Supported chord qualities. The annotation vocabulary is fixed to these
/// seven; anything else is rejected at parse time.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChordQuality {
    Major,
    Minor,
    Dominant7,
    Major7,
    Minor7,
    Diminished,
    Augmented,
}

impl ChordQuality {
    /// Intervals from the root paired with the member role each fills.
    fn template(&self) -> &'static [(u8, ChordMemberRole)] {
        use ChordMemberRole::*;
        match self {
            ChordQuality::Major => &[(0, Root), (4, Third), (7, Fifth)],
            ChordQuality::Minor => &[(0, Root), (3, Third), (7, Fifth)],
            ChordQuality::Dominant7 => &[(0, Root), (4, Third), (7, Fifth), (10, Other)],
            ChordQuality::Major7 => &[(0, Root), (4, Third), (7, Fifth), (11, Other)],
            ChordQuality::Minor7 => &[(0, Root), (3, Third), (7, Fifth), (10, Other)],
            ChordQuality::Diminished => &[(0, Root), (3, Third), (6, Fifth)],
            ChordQuality::Augmented => &[(0, Root), (4, Third), (8, Fifth)],
        }
    }

    /// Suffix used in chord-symbol text (`""`, `"m"`, `"7"`, ...).
    pub fn suffix(&self) -> &'static str {
        match self {
            ChordQuality::Major => "",
            ChordQuality::Minor => "m",
            ChordQuality::Dominant7 => "7",
            ChordQuality::Major7 => "maj7",
            ChordQuality::Minor7 => "m7",
            ChordQuality::Diminished => "dim",
            ChordQuality::Augmented => "aug",
        }
    }

    pub fn from_suffix(s: &str) -> Option<Self> {
        match s {
            "" => Some(ChordQuality::Major),
            "m" => Some(ChordQuality::Minor),
            "7" => Some(ChordQuality::Dominant7),
            "maj7" => Some(ChordQuality::Major7),
            "m7" => Some(ChordQuality::Minor7),
            "dim" => Some(ChordQuality::Diminished),
            "aug" => Some(ChordQuality::Augmented),
            _ => None,
        }
    }
}

/// Structural role of a pitch class within a chord, ranked for the
/// importance comparison: root over fifth over third over other members.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ChordMemberRole {
    Other,
    Third,
    Fifth,
    Root,
}

impl ChordMemberRole {
    pub fn rank(&self) -> i8 {
        match self {
            ChordMemberRole::Root => 3,
            ChordMemberRole::Fifth => 2,
            ChordMemberRole::Third => 1,
            ChordMemberRole::Other => 0,
        }
    }
}

/// A chord symbol: root pitch class plus quality.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChordSymbol {
    pub root: PitchClass,
    pub quality: ChordQuality,
}

impl ChordSymbol {
    pub fn new(root: PitchClass, quality: ChordQuality) -> Self {
        ChordSymbol { root, quality }
    }

    /// The chord's pitch classes, root first, in template order.
    pub fn chord_tones(&self) -> Vec<PitchClass> {
        self.quality
            .template()
            .iter()
            .map(|(iv, _)| self.root.transposed(*iv as i32))
            .collect()
    }

    pub fn contains(&self, pc: PitchClass) -> bool {
        self.member_role(pc).is_some()
    }

    pub fn member_role(&self, pc: PitchClass) -> Option<ChordMemberRole> {
        self.quality
            .template()
            .iter()
            .find(|(iv, _)| self.root.transposed(*iv as i32) == pc)
            .map(|(_, role)| *role)
    }

    /// Importance rank of a pitch class against this chord:
    /// root 3, fifth 2, third 1, other chord tone 0, non-chord tone -1.
    pub fn member_rank(&self, pc: PitchClass) -> i8 {
        self.member_role(pc).map_or(-1, |r| r.rank())
    }

    pub fn transposed(&self, semitones: i32) -> Self {
        ChordSymbol {
            root: self.root.transposed(semitones),
            quality: self.quality,
        }
    }
}

impl fmt::Display for ChordSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.root.name_mixed(), self.quality.suffix())
    }
}

impl fmt::Debug for ChordSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Parses chord-symbol text: root name plus quality suffix (`C`, `Gm7`,
/// `F#dim`). Unknown suffixes are an error naming the offending text.
impl FromStr for ChordSymbol {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ModelError::ChordSyntax(s.to_string());
        let mut root_len = 1;
        if s.len() > 1 {
            match &s[1..2] {
                "#" => root_len = 2,
                "b" => root_len = 2,
                _ => {}
            }
        }
        if s.len() < root_len {
            return Err(bad());
        }
        let root: PitchClass = s[..root_len].parse().map_err(|_| bad())?;
        let quality = ChordQuality::from_suffix(&s[root_len..])
            .ok_or_else(|| ModelError::UnknownChordQuality(s[root_len..].to_string()))?;
        Ok(ChordSymbol::new(root, quality))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Major,
    Minor,
}

/// A key signature: tonic pitch class plus mode. Scale tones derive from
/// the major scale or the natural minor scale.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KeySignature {
    pub tonic: PitchClass,
    pub mode: Mode,
}

impl KeySignature {
    pub fn new(tonic: PitchClass, mode: Mode) -> Self {
        KeySignature { tonic, mode }
    }

    pub fn scale_tones(&self) -> [PitchClass; 7] {
        let steps: [i32; 7] = match self.mode {
            Mode::Major => [0, 2, 4, 5, 7, 9, 11],
            Mode::Minor => [0, 2, 3, 5, 7, 8, 10],
        };
        steps.map(|s| self.tonic.transposed(s))
    }

    pub fn contains(&self, pc: PitchClass) -> bool {
        self.scale_tones().contains(&pc)
    }

    pub fn transposed(&self, semitones: i32) -> Self {
        KeySignature {
            tonic: self.tonic.transposed(semitones),
            mode: self.mode,
        }
    }

    /// Key from a circle-of-fifths count (sharps positive, flats negative).
    pub fn from_fifths(fifths: i32, mode: Mode) -> Self {
        let major_tonic = PitchClass::from_semitones(fifths * 7);
        let tonic = match mode {
            Mode::Major => major_tonic,
            Mode::Minor => major_tonic.transposed(-3),
        };
        KeySignature { tonic, mode }
    }
}

impl fmt::Display for KeySignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mode = match self.mode {
            Mode::Major => "major",
            Mode::Minor => "minor",
        };
        write!(f, "{} {}", self.tonic.name_mixed(), mode)
    }
}

impl fmt::Debug for KeySignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
