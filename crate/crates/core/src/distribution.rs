//! Output-frequency distributions over exhaustive machine-space runs.
//!
//! Running every machine of an (n,2) space and tallying the outputs of the
//! halting ones gives an experimental stand-in for the algorithmic
//! probability of each string: frequently produced strings are the ones
//! many small programs compute. `PatternDistribution` is the shared result
//! type for those runs and for the automaton-cutoff and ingested-data
//! pipelines, which count k-tuples instead of halting outputs.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::automata::{EcaInitKind, GridInitKind, RowSelection};
use crate::bits;
use crate::error::{Error, Result};
use crate::ingest::BinarizeMethod;
use crate::rng::Prng;
use crate::tm::{self, EnumOptions, MachineConfig, RunStatus, TuringMachineSpec};

/// Initial tape regime for machine-space runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitMode {
    /// All machines start on the all-zero tape.
    Blank,
    /// Each machine runs on `samples` pseudorandom tapes of `len` bits
    /// placed at cells 0..len, pooling the outputs.
    RandomSegment { len: u32, samples: u32 },
}

/// Half-open machine-index range a distribution was built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexRange {
    pub start: u64,
    pub end: u64,
}

impl IndexRange {
    pub fn len(&self) -> u64 {
        self.end.saturating_sub(self.start)
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }

    fn overlaps(&self, other: &IndexRange) -> bool {
        !self.is_empty() && !other.is_empty() && self.start < other.end && other.start < self.end
    }
}

/// What produced a distribution. Stamped into every serialized artifact so
/// results are regenerable from the file alone.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SourceDescriptor {
    MachineSpace {
        n_states: u32,
        cap: u64,
        init: InitMode,
    },
    Eca {
        rule: u8,
        width: u32,
        steps: u32,
        init: EcaInitKind,
        k: u32,
        overlap: bool,
        rows: RowSelection,
    },
    Ca2d {
        rule: u16,
        height: u32,
        width: u32,
        steps: u32,
        snapshot_every: u32,
        init: GridInitKind,
        k: u32,
        overlap: bool,
        rows: RowSelection,
    },
    Ingested {
        name: String,
        bytes: u64,
        method: BinarizeMethod,
        k: u32,
        overlap: bool,
    },
    /// Hand-built or test data; the label is free-form provenance.
    Synthetic { label: String },
    /// A distribution folded onto symmetry-orbit representatives.
    Collapsed { inner: Box<SourceDescriptor> },
}

/// Normalized frequency distribution over binary strings.
///
/// `total_runs` counts every run attempted (or every window cut);
/// contributing runs are the ones that produced a string. Frequencies are
/// always `count / sum(counts)`, so they are conditional on producing
/// output at all.
#[derive(Clone, Debug, PartialEq)]
pub struct PatternDistribution {
    source: SourceDescriptor,
    seed: Option<u64>,
    shard: Option<IndexRange>,
    total_runs: u64,
    contributing_runs: u64,
    counts: BTreeMap<String, u64>,
}

impl PatternDistribution {
    /// Assembles a distribution from raw counts, validating every entry.
    pub fn from_counts(
        source: SourceDescriptor,
        seed: Option<u64>,
        shard: Option<IndexRange>,
        total_runs: u64,
        counts: BTreeMap<String, u64>,
    ) -> Result<Self> {
        let mut sum = 0u64;
        for (s, &c) in &counts {
            if !bits::is_binary(s) {
                return Err(Error::Parameter(format!(
                    "distribution keys must be non-empty binary strings, got {s:?}"
                )));
            }
            if c == 0 {
                return Err(Error::Parameter(format!("zero count for {s:?}")));
            }
            sum = sum
                .checked_add(c)
                .ok_or_else(|| Error::Parameter("total count overflows u64".into()))?;
        }
        if sum > total_runs {
            return Err(Error::Parameter(format!(
                "counts sum to {sum} but only {total_runs} runs were attempted"
            )));
        }
        Ok(PatternDistribution {
            source,
            seed,
            shard,
            total_runs,
            contributing_runs: sum,
            counts,
        })
    }

    pub fn source(&self) -> &SourceDescriptor {
        &self.source
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn shard(&self) -> Option<IndexRange> {
        self.shard
    }

    pub fn total_runs(&self) -> u64 {
        self.total_runs
    }

    pub fn contributing_runs(&self) -> u64 {
        self.contributing_runs
    }

    pub fn support_size(&self) -> usize {
        self.counts.len()
    }

    pub fn count(&self, s: &str) -> Option<u64> {
        self.counts.get(s).copied()
    }

    pub fn frequency(&self, s: &str) -> Option<f64> {
        self.counts
            .get(s)
            .map(|&c| c as f64 / self.contributing_runs as f64)
    }

    /// All entries as (string, count, frequency), in key order.
    pub fn entries(&self) -> impl Iterator<Item = (&str, u64, f64)> {
        let denom = self.contributing_runs as f64;
        self.counts
            .iter()
            .map(move |(s, &c)| (s.as_str(), c, c as f64 / denom))
    }

    /// Entries in the canonical serialization order: length ascending,
    /// frequency (equivalently count) descending, then lexicographic.
    pub fn canonical_entries(&self) -> Vec<(&str, u64, f64)> {
        let mut v: Vec<_> = self.entries().collect();
        v.sort_by(|a, b| {
            a.0.len()
                .cmp(&b.0.len())
                .then(b.1.cmp(&a.1))
                .then(a.0.cmp(b.0))
        });
        v
    }

    /// Complexity estimate -log2(frequency(s)) in bits: strings that many
    /// programs produce are cheap, rare ones expensive.
    pub fn ctm_complexity(&self, s: &str) -> Result<f64> {
        self.frequency(s)
            .map(|f| -f.log2())
            .ok_or_else(|| Error::NotObserved(s.to_string()))
    }

    /// 1-based frequency rank of `s` (1 = most frequent; ties broken by
    /// lexicographic order). With `length_restricted`, ranks only among
    /// entries of length |s|.
    pub fn rank_of(&self, s: &str, length_restricted: bool) -> Result<u64> {
        let own = self
            .count(s)
            .ok_or_else(|| Error::NotObserved(s.to_string()))?;
        let mut rank = 1u64;
        for (t, &c) in &self.counts {
            if length_restricted && t.len() != s.len() {
                continue;
            }
            if c > own || (c == own && t.as_str() < s) {
                rank += 1;
            }
        }
        Ok(rank)
    }

    /// Combines two shards of the same build. Requires identical source,
    /// seed, and disjoint shard ranges; counts and totals add.
    pub fn merge(a: &PatternDistribution, b: &PatternDistribution) -> Result<PatternDistribution> {
        if a.source != b.source {
            return Err(Error::IncompatibleSources(
                "source descriptors differ".into(),
            ));
        }
        if a.seed != b.seed {
            return Err(Error::IncompatibleSources("seeds differ".into()));
        }
        let shard = match (a.shard, b.shard) {
            (Some(ra), Some(rb)) => {
                if ra.overlaps(&rb) {
                    return Err(Error::IncompatibleSources(format!(
                        "shard ranges overlap: {}..{} vs {}..{}",
                        ra.start, ra.end, rb.start, rb.end
                    )));
                }
                Some(IndexRange {
                    start: ra.start.min(rb.start),
                    end: ra.end.max(rb.end),
                })
            }
            _ => {
                return Err(Error::IncompatibleSources(
                    "both inputs must carry shard ranges".into(),
                ))
            }
        };
        let mut counts = a.counts.clone();
        for (s, &c) in &b.counts {
            *counts.entry(s.clone()).or_insert(0) += c;
        }
        let total = a.total_runs.checked_add(b.total_runs).ok_or_else(|| {
            Error::IncompatibleSources("merged total run count overflows u64".into())
        })?;
        PatternDistribution::from_counts(a.source.clone(), a.seed, shard, total, counts)
    }
}

/// Builds the output distribution of the full (n,2) machine space.
///
/// Every machine runs with the step cap; halting outputs are counted,
/// cap-exceeded runs contribute nothing. In `RandomSegment` mode sample j
/// always uses pseudorandom substream j of the seed, so results do not
/// depend on scheduling or worker count.
pub fn build_distribution(
    n: u32,
    cap: u64,
    init: InitMode,
    seed: Option<u64>,
    opts: &EnumOptions,
) -> Result<PatternDistribution> {
    let size = preflight(n, cap)?;
    build_distribution_shard(n, cap, init, seed, IndexRange { start: 0, end: size }, opts)
}

/// Same as [`build_distribution`] but over one machine-index shard, for
/// distributing a space across processes. Shards of the same build merge
/// with [`PatternDistribution::merge`].
pub fn build_distribution_shard(
    n: u32,
    cap: u64,
    init: InitMode,
    seed: Option<u64>,
    shard: IndexRange,
    opts: &EnumOptions,
) -> Result<PatternDistribution> {
    let size = preflight(n, cap)?;
    if shard.start > shard.end || shard.end > size {
        return Err(Error::Parameter(format!(
            "shard {}..{} does not fit the space 0..{size}",
            shard.start, shard.end
        )));
    }
    let tapes: Vec<Vec<u8>> = match init {
        InitMode::Blank => {
            if seed.is_some() {
                return Err(Error::Parameter(
                    "a seed is only meaningful in RandomSegment mode".into(),
                ));
            }
            vec![Vec::new()]
        }
        InitMode::RandomSegment { len, samples } => {
            if len == 0 || samples == 0 {
                return Err(Error::Parameter(
                    "RandomSegment needs len >= 1 and samples >= 1".into(),
                ));
            }
            let seed = seed.ok_or_else(|| {
                Error::Parameter("RandomSegment mode requires a seed".into())
            })?;
            if opts.mirror_reduction {
                return Err(Error::Parameter(
                    "mirror reduction applies to blank-tape enumeration only".into(),
                ));
            }
            (0..samples)
                .map(|j| Prng::substream(seed, j as u64).bits(len as usize))
                .collect()
        }
    };
    let total_runs = shard
        .len()
        .checked_mul(tapes.len() as u64)
        .ok_or_else(|| Error::Parameter("total run count overflows u64".into()))?;

    let reduction = opts.mirror_reduction;
    let raw = tm::with_pool(opts.workers, || {
        tm::chunk_ranges(shard.start, shard.end)
            .into_par_iter()
            .map(|range| {
                let mut spec = decode_stub(n);
                let mut config = MachineConfig::new(&[]);
                let mut acc: HashMap<Vec<u8>, u64> = HashMap::new();
                for index in range {
                    let paired = if reduction {
                        if tm::mirror_index(index, n) < index {
                            continue;
                        }
                        true
                    } else {
                        false
                    };
                    tm::decode_machine_into(index, &mut spec);
                    for tape in &tapes {
                        config.reset(tape);
                        if config.run_to(&spec, cap) == RunStatus::Halted {
                            let out = config.output_bits();
                            if paired {
                                // The skipped mirror machine halts with the
                                // reversed output.
                                let mut rev = out.clone();
                                rev.reverse();
                                *acc.entry(rev).or_insert(0) += 1;
                            }
                            *acc.entry(out).or_insert(0) += 1;
                        }
                    }
                }
                acc
            })
            .reduce(HashMap::new, |mut a, b| {
                for (s, c) in b {
                    *a.entry(s).or_insert(0) += c;
                }
                a
            })
    });

    let counts: BTreeMap<String, u64> = raw
        .into_iter()
        .map(|(bits, c)| (bits::to_string(&bits), c))
        .collect();
    PatternDistribution::from_counts(
        SourceDescriptor::MachineSpace { n_states: n, cap, init },
        seed,
        Some(shard),
        total_runs,
        counts,
    )
}

fn preflight(n: u32, cap: u64) -> Result<u64> {
    if n == 0 || n > tm::MAX_ENUM_STATES {
        return Err(Error::Capacity(format!(
            "exhaustive enumeration supports 1..={} states, got {n}",
            tm::MAX_ENUM_STATES
        )));
    }
    if cap == 0 {
        return Err(Error::Parameter("step cap must be at least 1".into()));
    }
    tm::space_size(n)
}

fn decode_stub(n: u32) -> TuringMachineSpec {
    tm::decode_machine(0, n).expect("stub decode for validated n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tm::busy_beaver_search;
    use proptest::prelude::*;

    fn opts() -> EnumOptions {
        EnumOptions::default()
    }

    fn synthetic(counts: &[(&str, u64)], total: u64) -> PatternDistribution {
        PatternDistribution::from_counts(
            SourceDescriptor::Synthetic {
                label: "test".into(),
            },
            None,
            Some(IndexRange { start: 0, end: total }),
            total,
            counts.iter().map(|&(s, c)| (s.to_string(), c)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn one_state_blank_distribution() {
        let d = build_distribution(1, 10, InitMode::Blank, None, &opts()).unwrap();
        assert_eq!(d.total_runs(), 64);
        assert_eq!(d.contributing_runs(), 32);
        assert_eq!(d.support_size(), 2);
        assert_eq!(d.count("0"), Some(16));
        assert_eq!(d.count("1"), Some(16));
        assert_eq!(d.frequency("0"), Some(0.5));
        assert_eq!(d.frequency("1"), Some(0.5));
        let total: f64 = d.entries().map(|(_, _, f)| f).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn contributing_matches_busy_beaver_halters() {
        let d = build_distribution(2, 6, InitMode::Blank, None, &opts()).unwrap();
        let bb = busy_beaver_search(2, 6, &opts()).unwrap();
        assert_eq!(d.contributing_runs(), bb.halting_count);
        let total: f64 = d.entries().map(|(_, _, f)| f).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn random_segment_is_seed_deterministic() {
        let init = InitMode::RandomSegment { len: 4, samples: 2 };
        let a = build_distribution(1, 10, init, Some(42), &opts()).unwrap();
        let b = build_distribution(1, 10, init, Some(42), &opts()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.total_runs(), 128);
        let c = build_distribution(1, 10, init, Some(43), &opts()).unwrap();
        // A different seed should give different tapes; totals agree even
        // when the tallies move.
        assert_eq!(c.total_runs(), 128);
    }

    #[test]
    fn blank_mode_rejects_seed_and_random_requires_it() {
        assert!(matches!(
            build_distribution(1, 10, InitMode::Blank, Some(1), &opts()),
            Err(Error::Parameter(_))
        ));
        assert!(matches!(
            build_distribution(
                1,
                10,
                InitMode::RandomSegment { len: 4, samples: 1 },
                None,
                &opts()
            ),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn mirror_reduction_matches_plain_build() {
        let plain = build_distribution(2, 100, InitMode::Blank, None, &opts()).unwrap();
        let reduced = build_distribution(
            2,
            100,
            InitMode::Blank,
            None,
            &EnumOptions {
                workers: 0,
                mirror_reduction: true,
            },
        )
        .unwrap();
        assert_eq!(plain, reduced);
    }

    #[test]
    fn merging_halves_equals_whole_build() {
        let whole = build_distribution(1, 10, InitMode::Blank, None, &opts()).unwrap();
        let lo = build_distribution_shard(
            1,
            10,
            InitMode::Blank,
            None,
            IndexRange { start: 0, end: 32 },
            &opts(),
        )
        .unwrap();
        let hi = build_distribution_shard(
            1,
            10,
            InitMode::Blank,
            None,
            IndexRange { start: 32, end: 64 },
            &opts(),
        )
        .unwrap();
        let merged = PatternDistribution::merge(&lo, &hi).unwrap();
        assert_eq!(merged, whole);
    }

    #[test]
    fn merge_with_empty_shard_is_identity() {
        let whole = build_distribution(1, 10, InitMode::Blank, None, &opts()).unwrap();
        let empty = build_distribution_shard(
            1,
            10,
            InitMode::Blank,
            None,
            IndexRange { start: 64, end: 64 },
            &opts(),
        )
        .unwrap();
        assert_eq!(empty.total_runs(), 0);
        assert_eq!(empty.support_size(), 0);
        let merged = PatternDistribution::merge(&whole, &empty).unwrap();
        assert_eq!(merged, whole);
    }

    #[test]
    fn merge_rejects_mismatches() {
        let a = build_distribution(1, 10, InitMode::Blank, None, &opts()).unwrap();
        let b = build_distribution(1, 11, InitMode::Blank, None, &opts()).unwrap();
        assert!(matches!(
            PatternDistribution::merge(&a, &b),
            Err(Error::IncompatibleSources(_))
        ));
        assert!(matches!(
            PatternDistribution::merge(&a, &a),
            Err(Error::IncompatibleSources(_))
        ));
    }

    #[test]
    fn ctm_complexity_values() {
        let d = build_distribution(1, 10, InitMode::Blank, None, &opts()).unwrap();
        assert_eq!(d.ctm_complexity("0").unwrap(), 1.0);
        assert!(matches!(
            d.ctm_complexity("01"),
            Err(Error::NotObserved(_))
        ));
        // The modal string never estimates higher than anything else.
        let best = d
            .entries()
            .map(|(s, _, _)| d.ctm_complexity(s).unwrap())
            .fold(f64::INFINITY, f64::min);
        assert_eq!(best, 1.0);
    }

    #[test]
    fn rank_examples() {
        let d = build_distribution(1, 10, InitMode::Blank, None, &opts()).unwrap();
        assert_eq!(d.rank_of("0", false).unwrap(), 1);
        assert_eq!(d.rank_of("1", false).unwrap(), 2);
        assert!(matches!(d.rank_of("00", false), Err(Error::NotObserved(_))));

        let s = synthetic(&[("0", 5), ("1", 2), ("00", 3), ("01", 3)], 20);
        assert_eq!(s.rank_of("0", false).unwrap(), 1);
        assert_eq!(s.rank_of("00", false).unwrap(), 2);
        assert_eq!(s.rank_of("01", false).unwrap(), 3);
        assert_eq!(s.rank_of("1", false).unwrap(), 4);
        assert_eq!(s.rank_of("00", true).unwrap(), 1);
        assert_eq!(s.rank_of("1", true).unwrap(), 2);

        let singleton = synthetic(&[("0110", 4)], 4);
        assert_eq!(singleton.rank_of("0110", false).unwrap(), 1);
    }

    #[test]
    fn rank_is_scale_invariant() {
        let a = synthetic(&[("0", 5), ("1", 2), ("00", 3)], 10);
        let b = synthetic(&[("0", 50), ("1", 20), ("00", 30)], 100);
        for s in ["0", "1", "00"] {
            assert_eq!(a.rank_of(s, false).unwrap(), b.rank_of(s, false).unwrap());
        }
    }

    #[test]
    fn canonical_order_is_length_then_count_then_lex() {
        let d = synthetic(&[("1", 3), ("0", 3), ("11", 5), ("00", 1), ("01", 5)], 20);
        let order: Vec<&str> = d.canonical_entries().iter().map(|e| e.0).collect();
        assert_eq!(order, vec!["0", "1", "01", "11", "00"]);
    }

    #[test]
    fn from_counts_validates() {
        let bad_key: BTreeMap<String, u64> = [("01x".to_string(), 1)].into();
        assert!(PatternDistribution::from_counts(
            SourceDescriptor::Synthetic { label: "t".into() },
            None,
            None,
            5,
            bad_key
        )
        .is_err());
        let too_many: BTreeMap<String, u64> = [("0".to_string(), 6)].into();
        assert!(PatternDistribution::from_counts(
            SourceDescriptor::Synthetic { label: "t".into() },
            None,
            None,
            5,
            too_many
        )
        .is_err());
    }

    proptest! {
        #[test]
        fn merge_commutes(
            counts_a in proptest::collection::btree_map("[01]{1,4}", 1u64..50, 0..6),
            counts_b in proptest::collection::btree_map("[01]{1,4}", 1u64..50, 0..6),
        ) {
            let total_a: u64 = counts_a.values().sum();
            let total_b: u64 = counts_b.values().sum();
            let src = SourceDescriptor::Synthetic { label: "prop".into() };
            let a = PatternDistribution::from_counts(
                src.clone(), None, Some(IndexRange { start: 0, end: 100 }), total_a + 3, counts_a,
            ).unwrap();
            let b = PatternDistribution::from_counts(
                src, None, Some(IndexRange { start: 100, end: 180 }), total_b + 1, counts_b,
            ).unwrap();
            let ab = PatternDistribution::merge(&a, &b).unwrap();
            let ba = PatternDistribution::merge(&b, &a).unwrap();
            prop_assert_eq!(ab, ba);
        }
    }
}
