//! Registry of the 24 allemandes' expected metadata and a validator that
//! checks the corpus's structural regularities against downloaded files.
//!
//! The corpus itself is never vendored; `fetch_instructions` points at the
//! public archive and the validator works on whatever files are present,
//! marking absent pieces as skipped.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::ScorePart;
use crate::model::{Meter, Mode};

const MANIFEST_TOML: &str = include_str!("../data/allemande_manifest.toml");

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("manifest parse error: {0}")]
    Manifest(String),
}

/// Macro-form of a piece: which sections repeat, in order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RepeatForm {
    #[serde(rename = "ABA")]
    Aba,
    #[serde(rename = "AABB")]
    Aabb,
    #[serde(rename = "AABBA")]
    Aabba,
}

/// How the B section leaves the home key. Unassigned in the shipped
/// manifest until verified against the actual corpus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeOfB {
    CloseMajorTonality,
    MinorMode,
}

/// Expected metadata of one piece.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceRecord {
    /// Roman numeral I–XXIV.
    pub number: String,
    /// The author's descriptive title; absent until read from the corpus.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub title_adjective: Option<String>,
    pub meter: Meter,
    pub section_a_bars: u32,
    pub section_b_bars: u32,
    pub repeat_form: RepeatForm,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode_of_b: Option<ModeOfB>,
    pub has_anacrusis: bool,
    /// File name stem (without extension) expected in a corpus directory.
    pub file_stem: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusManifest {
    pub source_doi: String,
    #[serde(rename = "piece")]
    pub records: Vec<PieceRecord>,
}

impl CorpusManifest {
    pub fn record(&self, number: &str) -> Option<&PieceRecord> {
        self.records.iter().find(|r| r.number == number)
    }

    pub fn tallies(&self) -> AggregateTallies {
        let two_four = Meter::new(2, 4).expect("valid meter");
        let three_eight = Meter::new(3, 8).expect("valid meter");
        AggregateTallies {
            pieces: self.records.len(),
            aba: self
                .records
                .iter()
                .filter(|r| r.repeat_form == RepeatForm::Aba)
                .count(),
            duple_meter: self.records.iter().filter(|r| r.meter == two_four).count(),
            triple_meter: self
                .records
                .iter()
                .filter(|r| r.meter == three_eight)
                .count(),
            eight_eight: self
                .records
                .iter()
                .filter(|r| r.section_a_bars == 8 && r.section_b_bars == 8)
                .count(),
            anacrusis: self.records.iter().filter(|r| r.has_anacrusis).count(),
        }
    }
}

/// Aggregate counts over manifest records.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AggregateTallies {
    pub pieces: usize,
    pub aba: usize,
    pub duple_meter: usize,
    pub triple_meter: usize,
    pub eight_eight: usize,
    pub anacrusis: usize,
}

/// Loads the embedded manifest. The data ships with the artifact, so this
/// cannot fail at runtime; the parse is checked by tests.
pub fn load_manifest() -> CorpusManifest {
    toml::from_str(MANIFEST_TOML).expect("embedded manifest is well-formed")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceValidation {
    pub number: String,
    pub skipped: bool,
    pub checks: Vec<CheckResult>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub manifest_tallies: AggregateTallies,
    pub pieces: Vec<PieceValidation>,
    pub checked: usize,
    pub skipped: usize,
    pub failures: usize,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    /// Human-readable rendering, one line per check.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for piece in &self.pieces {
            if piece.skipped {
                writeln!(out, "{:<6} skipped (file absent)", piece.number).unwrap();
                continue;
            }
            for check in &piece.checks {
                writeln!(
                    out,
                    "{:<6} {:<16} {} {}",
                    piece.number,
                    check.name,
                    if check.passed { "pass" } else { "FAIL" },
                    check.detail
                )
                .unwrap();
            }
        }
        writeln!(
            out,
            "pieces {} checked {} skipped {} failures {}",
            self.manifest_tallies.pieces, self.checked, self.skipped, self.failures
        )
        .unwrap();
        writeln!(
            out,
            "manifest tallies: {} ABA, {} in 2/4, {} with 8+8 bars, {} in 3/8, {} with anacrusis",
            self.manifest_tallies.aba,
            self.manifest_tallies.duple_meter,
            self.manifest_tallies.eight_eight,
            self.manifest_tallies.triple_meter,
            self.manifest_tallies.anacrusis
        )
        .unwrap();
        out
    }
}

/// Validates parsed pieces against the manifest's expectations. `pieces`
/// maps roman numerals to parsed parts and may cover any subset of the
/// corpus; absent pieces are reported skipped, contradictions are
/// recorded as failures, never raised.
pub fn validate_regularities(
    manifest: &CorpusManifest,
    pieces: &BTreeMap<String, Vec<ScorePart>>,
) -> ValidationReport {
    let mut out = Vec::new();
    let mut checked = 0;
    let mut skipped = 0;
    let mut failures = 0;
    for record in &manifest.records {
        match pieces.get(&record.number) {
            None => {
                skipped += 1;
                out.push(PieceValidation {
                    number: record.number.clone(),
                    skipped: true,
                    checks: Vec::new(),
                });
            }
            Some(parts) => {
                checked += 1;
                let checks = validate_piece(record, parts);
                failures += checks.iter().filter(|c| !c.passed).count();
                out.push(PieceValidation {
                    number: record.number.clone(),
                    skipped: false,
                    checks,
                });
            }
        }
    }
    ValidationReport {
        manifest_tallies: manifest.tallies(),
        pieces: out,
        checked,
        skipped,
        failures,
    }
}

fn validate_piece(record: &PieceRecord, parts: &[ScorePart]) -> Vec<CheckResult> {
    let mut checks = Vec::new();
    let check = |name: &str, passed: bool, detail: String| CheckResult {
        name: name.to_string(),
        passed,
        detail,
    };

    checks.push(check(
        "part-count",
        parts.len() == 2,
        format!("expected 2 parts, found {}", parts.len()),
    ));

    let Some(first) = parts.first() else {
        return checks;
    };

    checks.push(check(
        "meter",
        first.meter == record.meter,
        format!("expected {}, found {}", record.meter, first.meter),
    ));

    let max_stack = parts.iter().map(ScorePart::max_simultaneous).max().unwrap_or(0);
    checks.push(check(
        "max-simultaneous",
        max_stack <= 4,
        format!("largest chord has {max_stack} notes"),
    ));

    checks.push(check(
        "major-key",
        first.key.mode == Mode::Major,
        format!("key is {}", first.key),
    ));

    checks.push(section_check(record, first));
    checks
}

/// Section lengths from repeat barlines when present, otherwise a total
/// bar-count check against the plausible written-out expansions of the
/// record's repeat form.
fn section_check(record: &PieceRecord, part: &ScorePart) -> CheckResult {
    let bar = part.meter.bar_length();
    let full_bars: Vec<bool> = part.measures.iter().map(|m| m.length == bar).collect();
    let total: u32 = full_bars.iter().filter(|&&f| f).count() as u32;
    let boundaries: Vec<usize> = part
        .measures
        .iter()
        .enumerate()
        .filter(|(_, m)| m.repeat_backward)
        .map(|(i, _)| i)
        .collect();

    if boundaries.is_empty() {
        let (a, b) = (record.section_a_bars, record.section_b_bars);
        let plausible: Vec<u32> = match record.repeat_form {
            RepeatForm::Aba => vec![a + b, a + b + a],
            RepeatForm::Aabb => vec![a + b, 2 * a + 2 * b],
            RepeatForm::Aabba => vec![a + b, 2 * a + 2 * b + a],
        };
        let passed = plausible.contains(&total);
        return CheckResult {
            name: "sections".to_string(),
            passed,
            detail: format!(
                "no repeat barlines; {total} bars vs plausible {plausible:?} for {a}+{b}"
            ),
        };
    }

    // Bars (full measures only, excluding a pickup) per section: runs of
    // measures ending at each backward repeat, then the remainder.
    let mut sections: Vec<u32> = Vec::new();
    let mut start = 0;
    for &end in &boundaries {
        sections.push(full_bars[start..=end].iter().filter(|&&f| f).count() as u32);
        start = end + 1;
    }
    if start < part.measures.len() {
        sections.push(full_bars[start..].iter().filter(|&&f| f).count() as u32);
    }
    let expected = [record.section_a_bars, record.section_b_bars];
    let got: Vec<u32> = sections.iter().take(2).copied().collect();
    CheckResult {
        name: "sections".to_string(),
        passed: got == expected,
        detail: format!("repeat-delimited sections {sections:?} vs expected {expected:?}"),
    }
}

/// Retrieval instructions for the corpus: the archive DOI and the file
/// layout the validator expects. Performs no network access and is
/// byte-identical across invocations.
pub fn fetch_instructions() -> String {
    let manifest = load_manifest();
    let mut out = String::new();
    writeln!(out, "Leone allemande corpus retrieval").unwrap();
    writeln!(out, "=================================").unwrap();
    writeln!(out).unwrap();
    writeln!(out, "Archive DOI: https://doi.org/{}", manifest.source_doi).unwrap();
    writeln!(out, "License: Creative Commons (see the archive record).").unwrap();
    writeln!(out).unwrap();
    writeln!(
        out,
        "Download the archive at the DOI above and unpack it into a directory."
    )
    .unwrap();
    writeln!(
        out,
        "`validate-corpus <dir>` expects one MusicXML file per piece, named"
    )
    .unwrap();
    writeln!(
        out,
        "<stem>.musicxml or <stem>.xml with the following {} stems:",
        manifest.records.len()
    )
    .unwrap();
    writeln!(out).unwrap();
    for record in &manifest.records {
        writeln!(out, "  {}", record.file_stem).unwrap();
    }
    writeln!(out).unwrap();
    writeln!(
        out,
        "Differently named files can be accommodated by editing the file_stem"
    )
    .unwrap();
    writeln!(
        out,
        "entries in data/allemande_manifest.toml. No network access is ever"
    )
    .unwrap();
    writeln!(out, "performed by this tool.").unwrap();
    out
}
