//! Hierarchical reduction trees and difference trees for monophonic
//! lead-sheet melodies: build per-segment reduction trees, compare
//! segments pairwise, and classify repetition, transposition, and
//! variation structure.
//!
//! See the `examples/` directory for one runnable example per capability.

pub mod analysis;
pub mod cli;
pub mod corpus;
pub mod difftree;
pub mod export;
pub mod ingest;
pub mod model;
pub mod segment;
pub mod sktree;

pub use analysis::{classify, pairwise_analysis, structure_report, PairwiseMatrix, RelationKind};
pub use difftree::{build_diff_tree, diff_features, DiffTree};
pub use ingest::{extract_lead, parse_leadsheet_text, parse_musicxml};
pub use model::{Melody, Meter, Note, Pitch, RationalDuration};
pub use segment::{quantize_to_grid, segment_melody, Segment};
pub use sktree::{build_sk_tree, SkTree};
