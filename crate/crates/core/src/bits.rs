//! Small shared helpers for bit vectors and k-tuple windowing.

use std::collections::BTreeMap;

/// Renders bits as an ASCII string of '0'/'1'.
pub(crate) fn to_string(bits: &[u8]) -> String {
    bits.iter().map(|&b| if b == 0 { '0' } else { '1' }).collect()
}

/// Parses an ASCII bit string; `None` if any character is not '0' or '1'.
pub(crate) fn parse(s: &str) -> Option<Vec<u8>> {
    s.bytes()
        .map(|c| match c {
            b'0' => Some(0),
            b'1' => Some(1),
            _ => None,
        })
        .collect()
}

pub(crate) fn is_binary(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|c| c == b'0' || c == b'1')
}

/// Cuts every row into k-tuples and counts them.
///
/// Sliding mode yields `len - k + 1` windows per row, disjoint mode
/// `floor(len / k)`; a row shorter than k contributes nothing. Returns the
/// counts keyed by tuple string plus the total window count.
pub(crate) fn count_windows(
    rows: &[&[u8]],
    k: usize,
    overlap: bool,
) -> (BTreeMap<String, u64>, u64) {
    debug_assert!(k >= 1);
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    let mut windows = 0u64;
    for row in rows {
        if overlap {
            for win in row.windows(k) {
                *counts.entry(to_string(win)).or_insert(0) += 1;
                windows += 1;
            }
        } else {
            for win in row.chunks_exact(k) {
                *counts.entry(to_string(win)).or_insert(0) += 1;
                windows += 1;
            }
        }
    }
    (counts, windows)
}
