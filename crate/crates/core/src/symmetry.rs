//! The four-element symmetry group on binary strings: identity, reversal,
//! complementation, and reversed complementation.
//!
//! Strings related by these transformations are equally easy to produce,
//! so analyses that should not care about orientation or polarity work on
//! orbit representatives instead of raw strings.

use std::collections::{BTreeMap, BTreeSet};

use crate::bits;
use crate::distribution::{PatternDistribution, SourceDescriptor};
use crate::error::{Error, Result};

/// An orbit under the group, with its canonical representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryOrbit {
    canonical: String,
    members: BTreeSet<String>,
}

impl SymmetryOrbit {
    /// Lexicographic minimum of the orbit.
    pub fn canonical(&self) -> &str {
        &self.canonical
    }

    pub fn members(&self) -> &BTreeSet<String> {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

pub fn reverse(s: &str) -> String {
    s.chars().rev().collect()
}

pub fn complement(s: &str) -> String {
    s.chars()
        .map(|c| if c == '0' { '1' } else { '0' })
        .collect()
}

fn validated(s: &str) -> Result<()> {
    if !bits::is_binary(s) {
        return Err(Error::Parameter(format!(
            "expected a non-empty binary string, got {s:?}"
        )));
    }
    Ok(())
}

/// Orbit of `s`: {s, reverse, complement, reverse of complement},
/// deduplicated (1 to 4 members).
pub fn orbit(s: &str) -> Result<SymmetryOrbit> {
    validated(s)?;
    let r = reverse(s);
    let c = complement(s);
    let rc = complement(&r);
    let members: BTreeSet<String> = [s.to_string(), r, c, rc].into();
    let canonical = members.first().expect("orbit is never empty").clone();
    Ok(SymmetryOrbit { canonical, members })
}

/// Canonical (lexicographically minimal) representative of the orbit of `s`.
pub fn canonical(s: &str) -> Result<String> {
    Ok(orbit(s)?.canonical)
}

/// Number of orbits of length-n strings, by the closed form derived from
/// Burnside's lemma: average the fixed points of the four group elements.
/// Identity fixes 2^n strings; complement fixes none; reversal fixes the
/// 2^ceil(n/2) palindromes; reversed complement fixes 2^(n/2) strings for
/// even n and none for odd n.
pub fn burnside_count(n: u32) -> Result<u64> {
    if n == 0 {
        return Err(Error::Parameter("string length must be at least 1".into()));
    }
    if n > 62 {
        return Err(Error::Capacity(format!(
            "burnside_count supports n <= 62 in exact u64 arithmetic, got {n}"
        )));
    }
    let total = if n % 2 == 0 {
        (1u64 << n) + (1u64 << (n / 2 + 1))
    } else {
        (1u64 << n) + (1u64 << ((n + 1) / 2))
    };
    Ok(total / 4)
}

/// Folds every orbit of `d` onto its canonical representative, summing
/// counts. Totals are preserved exactly.
pub fn collapse_by_symmetry(d: &PatternDistribution) -> PatternDistribution {
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    for (s, c, _) in d.entries() {
        let rep = canonical(s).expect("distribution keys are valid binary strings");
        *counts.entry(rep).or_insert(0) += c;
    }
    PatternDistribution::from_counts(
        SourceDescriptor::Collapsed {
            inner: Box::new(d.source().clone()),
        },
        d.seed(),
        d.shard(),
        d.total_runs(),
        counts,
    )
    .expect("collapsing preserves count validity")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::IndexRange;
    use proptest::prelude::*;

    fn dist(counts: &[(&str, u64)], total: u64) -> PatternDistribution {
        PatternDistribution::from_counts(
            SourceDescriptor::Synthetic {
                label: "symmetry-test".into(),
            },
            None,
            Some(IndexRange { start: 0, end: total }),
            total,
            counts.iter().map(|&(s, c)| (s.to_string(), c)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn orbit_hand_examples() {
        let o = orbit("01").unwrap();
        assert_eq!(o.canonical(), "01");
        assert_eq!(
            o.members().iter().cloned().collect::<Vec<_>>(),
            vec!["01", "10"]
        );

        let o = orbit("0110").unwrap();
        assert_eq!(o.canonical(), "0110");
        assert_eq!(
            o.members().iter().cloned().collect::<Vec<_>>(),
            vec!["0110", "1001"]
        );

        let o = orbit("0").unwrap();
        assert_eq!(o.canonical(), "0");
        assert_eq!(
            o.members().iter().cloned().collect::<Vec<_>>(),
            vec!["0", "1"]
        );
    }

    #[test]
    fn canonical_examples_and_idempotence() {
        assert_eq!(canonical("10").unwrap(), "01");
        assert_eq!(canonical("01").unwrap(), "01");
        assert!(orbit("").is_err());
        assert!(canonical("012").is_err());
    }

    #[test]
    fn burnside_small_values() {
        assert_eq!(burnside_count(1).unwrap(), 1);
        assert_eq!(burnside_count(3).unwrap(), 3);
        assert_eq!(burnside_count(4).unwrap(), 6);
        assert!(burnside_count(0).is_err());
        assert!(burnside_count(63).is_err());
        assert_eq!(burnside_count(62).unwrap(), (1u64 << 62) / 4 + (1u64 << 32) / 4);
    }

    #[test]
    fn group_closure_exhaustive_up_to_length_12() {
        for n in 1..=12u32 {
            for v in 0u64..(1 << n) {
                let s: String = (0..n)
                    .rev()
                    .map(|i| if (v >> i) & 1 == 1 { '1' } else { '0' })
                    .collect();
                let o = orbit(&s).unwrap();
                for m in o.members() {
                    assert!(o.members().contains(&reverse(m)));
                    assert!(o.members().contains(&complement(m)));
                    assert_eq!(orbit(m).unwrap().canonical(), o.canonical());
                }
            }
        }
    }

    #[test]
    fn orbit_sizes_partition_the_cube() {
        // Orbit sizes summed over canonical representatives must cover all
        // 2^n strings, and the class count must match the closed form.
        for n in 1..=12u32 {
            let mut classes = 0u64;
            let mut covered = 0u64;
            for v in 0u64..(1 << n) {
                let s: String = (0..n)
                    .rev()
                    .map(|i| if (v >> i) & 1 == 1 { '1' } else { '0' })
                    .collect();
                let o = orbit(&s).unwrap();
                if o.canonical() == s {
                    classes += 1;
                    covered += o.len() as u64;
                }
            }
            assert_eq!(covered, 1 << n, "length {n}");
            assert_eq!(classes, burnside_count(n).unwrap(), "length {n}");
        }
    }

    #[test]
    fn collapse_folds_d1() {
        let d = dist(&[("0", 16), ("1", 16)], 64);
        let c = collapse_by_symmetry(&d);
        assert_eq!(c.support_size(), 1);
        assert_eq!(c.count("0"), Some(32));
        assert_eq!(c.frequency("0"), Some(1.0));
        assert_eq!(c.total_runs(), 64);
        assert_eq!(c.contributing_runs(), 32);
    }

    #[test]
    fn collapse_keeps_self_symmetric_strings() {
        let d = dist(&[("0110", 7)], 7);
        let c = collapse_by_symmetry(&d);
        assert_eq!(c.count("0110"), Some(7));
        assert_eq!(c.support_size(), 1);
    }

    proptest! {
        #[test]
        fn canonical_is_idempotent(s in "[01]{1,16}") {
            let c = canonical(&s).unwrap();
            prop_assert_eq!(canonical(&c).unwrap(), c);
        }

        #[test]
        fn collapse_conserves_counts(
            counts in proptest::collection::btree_map("[01]{1,6}", 1u64..40, 1..10)
        ) {
            let total: u64 = counts.values().sum();
            let d = PatternDistribution::from_counts(
                SourceDescriptor::Synthetic { label: "prop".into() },
                None,
                None,
                total,
                counts,
            ).unwrap();
            let c = collapse_by_symmetry(&d);
            prop_assert_eq!(c.contributing_runs(), d.contributing_runs());
            prop_assert_eq!(c.total_runs(), d.total_runs());
            let sum: f64 = c.entries().map(|(_, _, f)| f).sum();
            prop_assert!((sum - 1.0).abs() < 1e-12);
        }
    }
}
