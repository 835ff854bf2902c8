//! Rank correlation between two pattern distributions, with a seeded
//! permutation test for significance.

use serde::{Deserialize, Serialize};

use crate::distribution::{PatternDistribution, SourceDescriptor};
use crate::error::{Error, Result};
use crate::rng::Prng;

/// How the two supports are reconciled before pairing frequencies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SupportPolicy {
    /// Strings of length k present in both distributions.
    Intersection,
    /// Strings of length k present in either; absentees count 0. Beware:
    /// at large k this floods the comparison with zero ties.
    UnionWithZeros,
}

/// Frequencies of both distributions over a shared, lexicographically
/// sorted string list.
#[derive(Clone, Debug, PartialEq)]
pub struct AlignedPairs {
    pub strings: Vec<String>,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl AlignedPairs {
    pub fn len(&self) -> usize {
        self.strings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strings.is_empty()
    }
}

/// Pairs the length-k frequencies of `a` and `b` under `policy`.
pub fn align(
    a: &PatternDistribution,
    b: &PatternDistribution,
    k: u32,
    policy: SupportPolicy,
) -> Result<AlignedPairs> {
    if k == 0 {
        return Err(Error::Parameter("k must be at least 1".into()));
    }
    let k = k as usize;
    let in_a: Vec<&str> = a
        .entries()
        .map(|(s, _, _)| s)
        .filter(|s| s.len() == k)
        .collect();
    let strings: Vec<String> = match policy {
        SupportPolicy::Intersection => in_a
            .into_iter()
            .filter(|s| b.count(s).is_some())
            .map(str::to_string)
            .collect(),
        SupportPolicy::UnionWithZeros => {
            let mut all: Vec<String> = in_a.into_iter().map(str::to_string).collect();
            all.extend(
                b.entries()
                    .map(|(s, _, _)| s)
                    .filter(|s| s.len() == k && a.count(s).is_none())
                    .map(str::to_string),
            );
            all.sort();
            all
        }
    };
    // Distribution entries iterate in key order, so the intersection is
    // already lexicographically sorted.
    if strings.len() < 3 {
        return Err(Error::InsufficientSupport {
            pairs: strings.len(),
            k,
        });
    }
    let x = strings
        .iter()
        .map(|s| a.frequency(s).unwrap_or(0.0))
        .collect();
    let y = strings
        .iter()
        .map(|s| b.frequency(s).unwrap_or(0.0))
        .collect();
    Ok(AlignedPairs { strings, x, y })
}

/// Ranks descending by value (rank 1 = largest), ties sharing the average
/// of the ranks they span.
fn average_ranks_desc(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[j].total_cmp(&values[i]));
    let mut ranks = vec![0.0; values.len()];
    let mut at = 0;
    while at < order.len() {
        let mut end = at + 1;
        while end < order.len() && values[order[end]] == values[order[at]] {
            end += 1;
        }
        // Positions at..end hold ranks at+1..=end; their average is exact
        // in f64 (a half-integer).
        let shared = (at + 1 + end) as f64 / 2.0;
        for &i in &order[at..end] {
            ranks[i] = shared;
        }
        at = end;
    }
    ranks
}

fn validate_pair(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::Parameter(format!(
            "vector lengths differ: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 3 {
        return Err(Error::Parameter(format!(
            "need at least 3 pairs, got {}",
            x.len()
        )));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::Parameter("values must be finite".into()));
    }
    Ok(())
}

/// Spearman rank correlation with average-rank tie handling.
///
/// Computed as the Pearson correlation of the two rank vectors, which
/// stays correct under ties (the classical 1 - 6*sum(d^2)/(m(m^2-1))
/// shortcut does not). Identical and exactly opposed rankings return
/// exactly 1.0 and -1.0: both rank vectors then produce bitwise equal
/// centered sums, which short-circuit before any square root.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    validate_pair(x, y)?;
    let rx = average_ranks_desc(x);
    let ry = average_ranks_desc(y);
    // Rank sums are m(m+1)/2 regardless of ties, so the mean is exact.
    let mean = (x.len() as f64 + 1.0) / 2.0;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for i in 0..rx.len() {
        let dx = rx[i] - mean;
        let dy = ry[i] - mean;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::UndefinedCorrelation);
    }
    if sxx == syy && sxy.abs() == sxx {
        return Ok(if sxy > 0.0 { 1.0 } else { -1.0 });
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

fn lex_le(x: &[f64], y: &[f64]) -> bool {
    for (a, b) in x.iter().zip(y) {
        match a.total_cmp(b) {
            std::cmp::Ordering::Less => return true,
            std::cmp::Ordering::Greater => return false,
            std::cmp::Ordering::Equal => {}
        }
    }
    x.len() <= y.len()
}

/// Two-sided permutation p-value for the Spearman correlation:
/// p = (1 + #{shuffles with |rho| >= |rho observed|}) / (permutations + 1).
///
/// Shuffle j uses pseudorandom substream j of the seed, so the value is
/// independent of platform and evaluation order. The pair is canonically
/// oriented before shuffling, making the result symmetric in (x, y).
pub fn permutation_pvalue(x: &[f64], y: &[f64], permutations: u32, seed: u64) -> Result<f64> {
    if permutations == 0 {
        return Err(Error::Parameter("permutations must be at least 1".into()));
    }
    let observed = spearman(x, y)?.abs();
    let (base, shuffled) = if lex_le(x, y) { (x, y) } else { (y, x) };
    let mut hits = 0u64;
    let mut perm = shuffled.to_vec();
    for j in 0..permutations {
        perm.copy_from_slice(shuffled);
        Prng::substream(seed, j as u64).shuffle(&mut perm);
        // Shuffling permutes the rank multiset, so variance stays nonzero
        // and spearman cannot fail here.
        let rho = spearman(base, &perm)?;
        if rho.abs() >= observed {
            hits += 1;
        }
    }
    Ok((1 + hits) as f64 / (permutations as f64 + 1.0))
}

/// Everything needed to reproduce and interpret one comparison.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub k: u32,
    pub support_policy: SupportPolicy,
    pub pair_count: u64,
    pub rho: f64,
    pub p_value: f64,
    pub permutations: u32,
    pub seed: u64,
    pub sources: [SourceStamp; 2],
}

/// Provenance of one side of a comparison.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SourceStamp {
    pub source: SourceDescriptor,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// Full comparison pipeline: align, correlate, test significance.
pub fn compare_report(
    a: &PatternDistribution,
    b: &PatternDistribution,
    k: u32,
    policy: SupportPolicy,
    permutations: u32,
    seed: u64,
) -> Result<CorrelationReport> {
    let pairs = align(a, b, k, policy)?;
    let rho = spearman(&pairs.x, &pairs.y)?;
    let p_value = permutation_pvalue(&pairs.x, &pairs.y, permutations, seed)?;
    Ok(CorrelationReport {
        k,
        support_policy: policy,
        pair_count: pairs.len() as u64,
        rho,
        p_value,
        permutations,
        seed,
        sources: [
            SourceStamp {
                source: a.source().clone(),
                seed: a.seed(),
            },
            SourceStamp {
                source: b.source().clone(),
                seed: b.seed(),
            },
        ],
    })
}
