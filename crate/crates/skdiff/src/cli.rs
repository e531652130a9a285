//! Command-line interface: the whole pipeline behind five subcommands.
//!
//! Exit codes: 0 success, 1 usage error, 2 input parse error, 3 analysis
//! infeasible (grid or span errors), 4 validation failures.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analysis::{pairwise_analysis, structure_report, AnalysisError, PairSelection};
use crate::corpus::{load_manifest, validate_regularities, fetch_instructions};
use crate::difftree::build_diff_tree;
use crate::export;
use crate::ingest::{
    extract_lead_with, parse_leadsheet_text, parse_musicxml, AnacrusisPolicy, IngestError,
};
use crate::model::Melody;
use crate::segment::{segment_melody, Segment, SegmentError};
use crate::sktree::{build_sk_tree, ReduceError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_VALIDATION: i32 = 4;

#[derive(Parser)]
#[command(
    name = "skdiff",
    about = "Reduction trees and difference trees for monophonic lead sheets",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Anacrusis {
    /// Pad the pickup to a full bar (default).
    Pad,
    /// Drop the pickup measure.
    Drop,
}

impl From<Anacrusis> for AnacrusisPolicy {
    fn from(a: Anacrusis) -> Self {
        match a {
            Anacrusis::Pad => AnacrusisPolicy::PadStart,
            Anacrusis::Drop => AnacrusisPolicy::DropPickup,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Pairs {
    /// Every forward pair (i, j) with i < j.
    Forward,
    /// Neighbouring pairs only.
    Adjacent,
    /// The curated exhibit pairs (1,2), (1,3), (1,5), (2,4), (6,8).
    Figure2,
}

impl From<Pairs> for PairSelection {
    fn from(p: Pairs) -> Self {
        match p {
            Pairs::Forward => PairSelection::Forward,
            Pairs::Adjacent => PairSelection::Adjacent,
            Pairs::Figure2 => PairSelection::Exhibit,
        }
    }
}

#[derive(Args)]
struct InputArgs {
    /// Input file: .lsht lead-sheet text or .xml/.musicxml.
    input: PathBuf,
    /// Part to extract from a MusicXML score (1-based).
    #[arg(long, default_value_t = 1)]
    part: usize,
    /// Pickup-measure handling for MusicXML input.
    #[arg(long, value_enum, default_value_t = Anacrusis::Pad)]
    anacrusis: Anacrusis,
    /// Segment width in bars.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2), default_value_t = 2)]
    segment_bars: u8,
    /// Keep a trailing partial segment instead of dropping it.
    #[arg(long)]
    include_partial: bool,
}

#[derive(Args)]
struct OutArgs {
    /// Write output to a file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Build reduction trees for a piece's segments.
    Reduce {
        #[command(flatten)]
        input: InputArgs,
        /// Only emit the tree of this segment (1-based).
        #[arg(long)]
        segment: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Omit tree nodes below this level in DOT output.
        #[arg(long)]
        max_depth: Option<usize>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Compare two segments of a piece.
    Diff {
        #[command(flatten)]
        input: InputArgs,
        /// Left segment (1-based); must precede --right.
        #[arg(long)]
        left: usize,
        /// Right segment (1-based).
        #[arg(long)]
        right: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        max_depth: Option<usize>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Pairwise comparison of all selected segment pairs.
    Analyze {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value_t = Pairs::Forward)]
        pairs: Pairs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        max_depth: Option<usize>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Check downloaded corpus files against the expected regularities.
    ValidateCorpus {
        /// Directory holding the corpus MusicXML files.
        dir: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Print corpus retrieval instructions.
    FetchInfo {
        #[command(flatten)]
        out: OutArgs,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<IngestError> for Failure {
    fn from(e: IngestError) -> Self {
        Failure {
            code: EXIT_PARSE,
            message: e.to_string(),
        }
    }
}

impl From<SegmentError> for Failure {
    fn from(e: SegmentError) -> Self {
        Failure {
            code: EXIT_INFEASIBLE,
            message: e.to_string(),
        }
    }
}

impl From<ReduceError> for Failure {
    fn from(e: ReduceError) -> Self {
        Failure {
            code: EXIT_INFEASIBLE,
            message: e.to_string(),
        }
    }
}

impl From<crate::difftree::DiffError> for Failure {
    fn from(e: crate::difftree::DiffError) -> Self {
        Failure {
            code: EXIT_INFEASIBLE,
            message: e.to_string(),
        }
    }
}

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Self {
        Failure {
            code: EXIT_INFEASIBLE,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: EXIT_PARSE,
            message: e.to_string(),
        }
    }
}

/// Entry point used by the binary and by tests. `args` excludes the
/// program name; rendered output goes to `out` (or the `--out` file),
/// errors and warnings to stderr.
pub fn run<W: Write>(args: &[String], out: &mut W) -> i32 {
    let mut argv = vec!["skdiff".to_string()];
    argv.extend_from_slice(args);
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    eprint!("{e}");
                    EXIT_USAGE
                }
            }
        }
    };
    match dispatch(cli.command) {
        Ok((text, destination, code)) => match destination {
            Some(path) => match std::fs::write(&path, text) {
                Ok(()) => code,
                Err(e) => {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    EXIT_PARSE
                }
            },
            None => {
                let _ = out.write_all(text.as_bytes());
                code
            }
        },
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            failure.code
        }
    }
}

type Rendered = (String, Option<PathBuf>, i32);

fn dispatch(command: Command) -> Result<Rendered, Failure> {
    match command {
        Command::Reduce {
            input,
            segment,
            format,
            max_depth,
            out,
        } => {
            let segments = prepare_segments(&input)?;
            let trees: Vec<crate::sktree::SkTree> = match segment {
                Some(k) => {
                    let seg = segments
                        .iter()
                        .find(|s| s.index + 1 == k)
                        .ok_or_else(|| {
                            Failure::usage(format!(
                                "--segment {k} out of range 1..={}",
                                segments.len()
                            ))
                        })?;
                    vec![build_sk_tree(seg)?]
                }
                None => segments
                    .iter()
                    .map(build_sk_tree)
                    .collect::<Result<_, _>>()?,
            };
            let text = match format {
                Format::Json => {
                    if trees.len() == 1 {
                        export::export_sk_tree_json(&trees[0])
                    } else {
                        let docs: Vec<export::JsonDocument> =
                            trees.iter().map(export::sk_tree_document).collect();
                        serde_json::to_string_pretty(&docs).expect("serializable") + "\n"
                    }
                }
                Format::Dot => trees
                    .iter()
                    .map(|t| export::export_sk_tree_dot(t, max_depth))
                    .collect::<Vec<_>>()
                    .join("\n"),
                Format::Text => {
                    return Err(Failure::usage("reduce supports --format json or dot"))
                }
            };
            Ok((text, out.out, EXIT_OK))
        }
        Command::Diff {
            input,
            left,
            right,
            format,
            max_depth,
            out,
        } => {
            if left < 1 || right <= left {
                return Err(Failure::usage(format!(
                    "comparison is forward-only: --left {left} must be smaller than --right {right}"
                )));
            }
            let segments = prepare_segments(&input)?;
            if right > segments.len() {
                return Err(Failure::usage(format!(
                    "--right {right} out of range 1..={}",
                    segments.len()
                )));
            }
            let t1 = build_sk_tree(&segments[left - 1])?;
            let t2 = build_sk_tree(&segments[right - 1])?;
            let diff = build_diff_tree(&t1, &t2)?;
            let text = match format {
                Format::Json => export::export_diff_tree_json(&diff),
                Format::Dot => export::export_diff_tree_dot(&diff, max_depth),
                Format::Text => {
                    let label = crate::analysis::classify(&diff);
                    let report = crate::analysis::StructureReport {
                        piece: input.input.display().to_string(),
                        segment_count: segments.len(),
                        pairs: vec![crate::analysis::PairRelation {
                            left,
                            right,
                            label,
                        }],
                        groups: Vec::new(),
                        phrase_boundaries: Vec::new(),
                        warnings: Vec::new(),
                    };
                    export::report_to_text(&report)
                }
            };
            Ok((text, out.out, EXIT_OK))
        }
        Command::Analyze {
            input,
            pairs,
            format,
            max_depth,
            out,
        } => {
            let segments = prepare_segments(&input)?;
            let piece = input
                .input
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| input.input.display().to_string());
            let matrix = pairwise_analysis(&piece, &segments, &pairs.into())?;
            let report = structure_report(&matrix);
            let text = match format {
                Format::Json => export::export_pairwise_report_json(&matrix, &report),
                Format::Dot => export::export_matrix_dot(&matrix, max_depth),
                Format::Text => export::report_to_text(&report),
            };
            Ok((text, out.out, EXIT_OK))
        }
        Command::ValidateCorpus { dir, format, out } => {
            let manifest = load_manifest();
            let mut pieces = BTreeMap::new();
            let mut parse_failures: Vec<String> = Vec::new();
            for record in &manifest.records {
                let candidates = [
                    dir.join(format!("{}.musicxml", record.file_stem)),
                    dir.join(format!("{}.xml", record.file_stem)),
                ];
                let Some(path) = candidates.iter().find(|p| p.is_file()) else {
                    continue;
                };
                match std::fs::read(path).map(|bytes| parse_musicxml(&bytes)) {
                    Ok(Ok(score)) => {
                        for w in &score.warnings {
                            eprintln!("warning: {}: {w}", record.number);
                        }
                        pieces.insert(record.number.clone(), score.parts);
                    }
                    Ok(Err(e)) => parse_failures.push(format!("{}: {e}", record.number)),
                    Err(e) => parse_failures.push(format!("{}: {e}", record.number)),
                }
            }
            let report = validate_regularities(&manifest, &pieces);
            let mut text = match format {
                Format::Json => export::export_validation_report_json(&report),
                Format::Text | Format::Dot => report.to_text(),
            };
            if format != Format::Json {
                for failure in &parse_failures {
                    text.push_str(&format!("parse failure: {failure}\n"));
                }
            }
            let code = if report.passed() && parse_failures.is_empty() {
                EXIT_OK
            } else {
                EXIT_VALIDATION
            };
            Ok((text, out.out, code))
        }
        Command::FetchInfo { out } => Ok((fetch_instructions(), out.out, EXIT_OK)),
    }
}

/// Loads a melody from `.lsht` or MusicXML input.
fn load_melody(path: &Path, part: usize, anacrusis: AnacrusisPolicy) -> Result<Melody, Failure> {
    let extension = path
        .extension()
        .map(|e| e.to_string_lossy().to_lowercase())
        .unwrap_or_default();
    match extension.as_str() {
        "lsht" => {
            let text = std::fs::read_to_string(path)?;
            Ok(parse_leadsheet_text(&text)?)
        }
        "xml" | "musicxml" => {
            let bytes = std::fs::read(path)?;
            let score = parse_musicxml(&bytes)?;
            for w in &score.warnings {
                eprintln!("warning: {w}");
            }
            if part < 1 {
                return Err(Failure::usage("--part is 1-based"));
            }
            Ok(extract_lead_with(&score.parts, part - 1, anacrusis)?)
        }
        other => Err(Failure {
            code: EXIT_PARSE,
            message: format!("unrecognized input extension `.{other}` (expected .lsht, .xml, .musicxml)"),
        }),
    }
}

fn prepare_segments(input: &InputArgs) -> Result<Vec<Segment>, Failure> {
    let melody = load_melody(&input.input, input.part, input.anacrusis.into())?;
    let mut segments = segment_melody(&melody, input.segment_bars)?;
    if !input.include_partial {
        segments.retain(|s| !s.partial);
    }
    Ok(segments)
}
