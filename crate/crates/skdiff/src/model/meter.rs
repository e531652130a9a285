//! Meter and metric strength.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::model::{ModelError, RationalDuration};

/// A time signature such as 2/4 or 3/8. Serializes as its display form
/// (`"2/4"`).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Meter {
    pub beats: u8,
    pub beat_unit: u8,
}

impl Serialize for Meter {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Meter {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Meter {
    pub fn new(beats: u8, beat_unit: u8) -> Result<Self, ModelError> {
        if beats == 0 || !matches!(beat_unit, 1 | 2 | 4 | 8 | 16 | 32) {
            return Err(ModelError::InvalidMeter { beats, beat_unit });
        }
        Ok(Meter { beats, beat_unit })
    }

    pub fn bar_length(&self) -> RationalDuration {
        RationalDuration::frac(self.beats as i64, self.beat_unit as i64)
    }

    pub fn beat_length(&self) -> RationalDuration {
        RationalDuration::frac(1, self.beat_unit as i64)
    }

    /// True when the bar divides into three beats; such bars reduce with a
    /// single ternary window at the beat-to-bar step.
    pub fn is_triple(&self) -> bool {
        self.beats == 3
    }
}

impl fmt::Display for Meter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.beats, self.beat_unit)
    }
}

impl fmt::Debug for Meter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Meter {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ModelError::MeterSyntax(s.to_string());
        let (beats, unit) = s.split_once('/').ok_or_else(bad)?;
        let beats: u8 = beats.trim().parse().map_err(|_| bad())?;
        let unit: u8 = unit.trim().parse().map_err(|_| bad())?;
        Meter::new(beats, unit).map_err(|_| bad())
    }
}

/// Metric strength of an onset: the number of hierarchy levels — bar,
/// beat, half-beat — at whose boundaries the onset falls. Bar starts score
/// 3, beat starts 2, half-beat starts 1, anything finer 0. Within any bar
/// the bar start is the unique maximum.
pub fn metric_strength(onset: &RationalDuration, meter: &Meter) -> u8 {
    let half_beat = meter.beat_length() / 2;
    let levels = [meter.bar_length(), meter.beat_length(), half_beat];
    let aligned = levels
        .iter()
        .position(|level| onset.is_multiple_of(level));
    match aligned {
        Some(i) => (levels.len() - i) as u8,
        None => 0,
    }
}
