//! On-disk artifact formats: JSON distribution files, CSV export, JSON
//! correlation reports, and PBM images.
//!
//! Every artifact embeds the full parameter set that produced it, so a
//! file alone is enough to regenerate its contents. Serialization is
//! canonical: saving the same distribution twice yields byte-identical
//! files regardless of worker count or platform.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::automata::BitMatrix;
use crate::distribution::{IndexRange, PatternDistribution, SourceDescriptor};
use crate::error::{Error, Result};
use crate::stats::CorrelationReport;

/// Version stamp of the distribution file layout.
pub const FORMAT_VERSION: u32 = 1;

/// Serialized form of a `PatternDistribution`.
#[derive(Debug, Serialize, Deserialize)]
struct DistributionFile {
    format_version: u32,
    metadata: FileMetadata,
    entries: Vec<EntryRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
struct FileMetadata {
    tool_version: String,
    source: SourceDescriptor,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    shard: Option<IndexRange>,
    total_runs: u64,
    contributing_runs: u64,
}

#[derive(Debug, Serialize, Deserialize)]
struct EntryRecord {
    string: String,
    count: u64,
    frequency: f64,
}

fn to_file(d: &PatternDistribution) -> DistributionFile {
    DistributionFile {
        format_version: FORMAT_VERSION,
        metadata: FileMetadata {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            source: d.source().clone(),
            seed: d.seed(),
            shard: d.shard(),
            total_runs: d.total_runs(),
            contributing_runs: d.contributing_runs(),
        },
        entries: d
            .canonical_entries()
            .into_iter()
            .map(|(s, c, f)| EntryRecord {
                string: s.to_string(),
                count: c,
                frequency: f,
            })
            .collect(),
    }
}

/// Renders a distribution as its canonical JSON document.
pub fn distribution_to_json(d: &PatternDistribution) -> String {
    let mut s = serde_json::to_string_pretty(&to_file(d)).expect("distribution serializes");
    s.push('\n');
    s
}

/// Parses and validates a distribution document, rejecting any file whose
/// stored invariants do not hold. `origin` names the file in errors.
pub fn distribution_from_json(json: &str, origin: &str) -> Result<PatternDistribution> {
    let file: DistributionFile =
        serde_json::from_str(json).map_err(|e| Error::malformed(origin, e.to_string()))?;
    if file.format_version != FORMAT_VERSION {
        return Err(Error::malformed(
            origin,
            format!(
                "format_version is {} but this build reads {FORMAT_VERSION}",
                file.format_version
            ),
        ));
    }
    let mut counts = BTreeMap::new();
    let mut sum = 0u64;
    for e in &file.entries {
        if e.count == 0 {
            return Err(Error::malformed(
                origin,
                format!("entry {:?} has count 0", e.string),
            ));
        }
        if counts.insert(e.string.clone(), e.count).is_some() {
            return Err(Error::malformed(
                origin,
                format!("duplicate entry {:?}", e.string),
            ));
        }
        sum = sum
            .checked_add(e.count)
            .ok_or_else(|| Error::malformed(origin, "entry counts overflow u64"))?;
    }
    if sum != file.metadata.contributing_runs {
        return Err(Error::malformed(
            origin,
            format!(
                "contributing_runs is {} but entry counts sum to {sum}",
                file.metadata.contributing_runs
            ),
        ));
    }
    for e in &file.entries {
        let expected = e.count as f64 / sum as f64;
        if (e.frequency - expected).abs() > 1e-12 {
            return Err(Error::malformed(
                origin,
                format!(
                    "frequency of {:?} is {} but count/total gives {expected}",
                    e.string, e.frequency
                ),
            ));
        }
    }
    // from_counts re-checks key alphabet and count/total consistency.
    PatternDistribution::from_counts(
        file.metadata.source,
        file.metadata.seed,
        file.metadata.shard,
        file.metadata.total_runs,
        counts,
    )
    .map_err(|e| Error::malformed(origin, e.to_string()))
}

/// Writes the canonical JSON document to `path`.
pub fn save_distribution(d: &PatternDistribution, path: &Path) -> Result<()> {
    fs::write(path, distribution_to_json(d)).map_err(|e| Error::io(path, e))
}

/// Reads a distribution document back, enforcing all file invariants.
pub fn load_distribution(path: &Path) -> Result<PatternDistribution> {
    let json = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    distribution_from_json(&json, &path.display().to_string())
}

/// Renders the entries as `string,count,frequency` CSV in canonical order.
pub fn distribution_to_csv(d: &PatternDistribution) -> String {
    let mut out = String::from("string,count,frequency\n");
    for (s, c, f) in d.canonical_entries() {
        writeln!(out, "{s},{c},{f}").expect("string formatting cannot fail");
    }
    out
}

/// Writes the CSV form to `path`. CSV is export-only; JSON is the loadable
/// canonical format.
pub fn export_csv(d: &PatternDistribution, path: &Path) -> Result<()> {
    fs::write(path, distribution_to_csv(d)).map_err(|e| Error::io(path, e))
}

/// Renders a correlation report as a single JSON document.
pub fn report_to_json(r: &CorrelationReport) -> String {
    let mut s = serde_json::to_string_pretty(r).expect("report serializes");
    s.push('\n');
    s
}

/// Writes a correlation report to `path`.
pub fn save_report(r: &CorrelationReport, path: &Path) -> Result<()> {
    fs::write(path, report_to_json(r)).map_err(|e| Error::io(path, e))
}

/// Writes a bit matrix as a binary PBM (P4) image.
pub fn write_pbm(m: &BitMatrix, path: &Path) -> Result<()> {
    fs::write(path, m.to_pbm()).map_err(|e| Error::io(path, e))
}
