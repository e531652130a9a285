//! Inspect the embedded allemande-corpus manifest: per-piece metadata,
//! the aggregate regularities, and the retrieval instructions. Running
//! the validator against an empty directory reports every piece skipped.
//!
//! ```bash
//! cargo run -p skdiff --example corpus_manifest
//! ```

use std::collections::BTreeMap;

use skdiff::corpus::{fetch_instructions, load_manifest, validate_regularities};

fn main() {
    let manifest = load_manifest();
    println!("pieces in manifest: {}", manifest.records.len());
    println!("{:<7} {:>5} {:>3}+{:<3} {:<6} anacrusis", "piece", "meter", "A", "B", "form");
    for record in &manifest.records {
        println!(
            "{:<7} {:>5} {:>3}+{:<3} {:<6} {}",
            record.number,
            record.meter.to_string(),
            record.section_a_bars,
            record.section_b_bars,
            format!("{:?}", record.repeat_form).to_uppercase(),
            if record.has_anacrusis { "yes" } else { "" }
        );
    }

    let tallies = manifest.tallies();
    println!(
        "\naggregates: {} ABA, {} in 2/4, {} in 3/8, {} with 8+8 bars, {} with anacrusis",
        tallies.aba,
        tallies.duple_meter,
        tallies.triple_meter,
        tallies.eight_eight,
        tallies.anacrusis
    );

    // With no files on hand, validation skips everything and passes.
    let report = validate_regularities(&manifest, &BTreeMap::new());
    println!(
        "validation without files: {} skipped, {} failures\n",
        report.skipped, report.failures
    );

    print!("{}", fetch_instructions());
}
