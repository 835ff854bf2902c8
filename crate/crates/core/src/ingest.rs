//! Real-world data as binary k-tuple distributions, plus two demonstration
//! pipelines: decimal digits of pi and lossless-compressibility ratios.

use std::io::Write;

use flate2::write::DeflateEncoder;
use flate2::Compression;
use serde::{Deserialize, Serialize};

use crate::bits;
use crate::distribution::{PatternDistribution, SourceDescriptor};
use crate::error::{Error, Result};

/// How bytes become bits. Stamped into the distribution's source record:
/// two files only compare meaningfully when their encodings are explicit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BinarizeMethod {
    /// Each byte expands to its 8 bits, most significant first.
    RawBits,
    /// Bytes are sample values; emit 1 where the value exceeds the median
    /// of the whole sequence.
    ThresholdMedian,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum StreamOrigin {
    Binarized {
        name: String,
        bytes: u64,
        method: BinarizeMethod,
    },
    Synthetic {
        label: String,
    },
}

/// A named stream of bits with full provenance of how it was derived.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitStream {
    bits: Vec<u8>,
    origin: StreamOrigin,
}

impl BitStream {
    /// Wraps already-binary data (generated or hand-built); `label` is
    /// recorded as free-form provenance.
    pub fn synthetic(label: &str, bits: Vec<u8>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::Parameter("bit stream must be non-empty".into()));
        }
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::Parameter("stream cells must be bits".into()));
        }
        Ok(BitStream {
            bits,
            origin: StreamOrigin::Synthetic {
                label: label.to_string(),
            },
        })
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn to_bit_string(&self) -> String {
        bits::to_string(&self.bits)
    }
}

/// Converts `bytes` to a bit stream under `method`; `name` identifies the
/// source (typically the file name).
pub fn binarize(bytes: &[u8], method: BinarizeMethod, name: &str) -> Result<BitStream> {
    if bytes.is_empty() {
        return Err(Error::Parameter("cannot binarize empty input".into()));
    }
    let bits = match method {
        BinarizeMethod::RawBits => {
            let mut bits = Vec::with_capacity(bytes.len() * 8);
            for &b in bytes {
                for shift in (0..8).rev() {
                    bits.push((b >> shift) & 1);
                }
            }
            bits
        }
        BinarizeMethod::ThresholdMedian => {
            let mut sorted = bytes.to_vec();
            sorted.sort_unstable();
            let mid = sorted.len() / 2;
            let median = if sorted.len() % 2 == 1 {
                sorted[mid] as f64
            } else {
                (sorted[mid - 1] as f64 + sorted[mid] as f64) / 2.0
            };
            bytes
                .iter()
                .map(|&b| u8::from(b as f64 > median))
                .collect()
        }
    };
    Ok(BitStream {
        bits,
        origin: StreamOrigin::Binarized {
            name: name.to_string(),
            bytes: bytes.len() as u64,
            method,
        },
    })
}

/// Counts k-tuples of the stream: identical windowing semantics as the
/// automaton cutoff on a single row.
pub fn tuple_counts(b: &BitStream, k: u32, overlap: bool) -> Result<PatternDistribution> {
    if k == 0 {
        return Err(Error::Parameter("k must be at least 1".into()));
    }
    if k as usize > b.len() {
        return Err(Error::Parameter(format!(
            "k = {k} exceeds the stream length {}",
            b.len()
        )));
    }
    let (counts, windows) = bits::count_windows(&[b.bits()], k as usize, overlap);
    let descriptor = match &b.origin {
        StreamOrigin::Binarized {
            name,
            bytes,
            method,
        } => SourceDescriptor::Ingested {
            name: name.clone(),
            bytes: *bytes,
            method: *method,
            k,
            overlap,
        },
        StreamOrigin::Synthetic { label } => SourceDescriptor::Synthetic {
            label: format!(
                "{label} k={k} windows={}",
                if overlap { "sliding" } else { "disjoint" }
            ),
        },
    };
    PatternDistribution::from_counts(descriptor, None, None, windows, counts)
}

/// DEFLATE-at-maximum-effort size ratio, compressed / original. Small for
/// regular data, near (or slightly above) 1 for incompressible data.
pub fn compression_ratio(bytes: &[u8]) -> Result<f64> {
    if bytes.len() < 64 {
        return Err(Error::Parameter(format!(
            "compression ratios need at least 64 bytes, got {} (tiny inputs are header-dominated)",
            bytes.len()
        )));
    }
    let mut encoder = DeflateEncoder::new(Vec::new(), Compression::best());
    encoder
        .write_all(bytes)
        .expect("writing to an in-memory encoder cannot fail");
    let compressed = encoder
        .finish()
        .expect("finishing an in-memory encoder cannot fail");
    Ok(compressed.len() as f64 / bytes.len() as f64)
}

/// First `count` decimal digits of pi ("3141...") by a fixed-precision
/// spigot.
///
/// The working array holds 14 mixed-radix cells per 4 digits plus two
/// guard groups; each pass extracts one 4-digit group and pending carries
/// are resolved before formatting, so every returned digit is exact.
pub fn pi_digits(count: usize) -> Result<String> {
    if count == 0 || count > 100_000 {
        return Err(Error::Parameter(format!(
            "digit count must be in 1..=100000, got {count}"
        )));
    }
    const GROUP: u64 = 10_000;
    let groups = count / 4 + 2;
    let mut c = 14 * groups;
    let mut f = vec![2000u64; c + 1];
    let mut carry_in = 0u64;
    let mut packed: Vec<u64> = Vec::with_capacity(groups);
    while c >= 14 {
        let mut d = 0u64;
        let mut g = 2 * c as u64;
        let mut b = c;
        loop {
            d += f[b] * GROUP;
            g -= 1;
            f[b] = d % g;
            d /= g;
            g -= 1;
            b -= 1;
            if b == 0 {
                break;
            }
            d *= b as u64;
        }
        packed.push(carry_in + d / GROUP);
        carry_in = d % GROUP;
        c -= 14;
    }
    // A group can reach 10000 when a carry ripples across; settle them so
    // each holds exactly 4 digits.
    for i in (1..packed.len()).rev() {
        if packed[i] >= GROUP {
            packed[i - 1] += packed[i] / GROUP;
            packed[i] %= GROUP;
        }
    }
    let mut out = String::with_capacity(packed.len() * 4);
    for (i, grp) in packed.iter().enumerate() {
        if i == 0 {
            out.push_str(&grp.to_string());
        } else {
            out.push_str(&format!("{grp:04}"));
        }
    }
    out.truncate(count);
    Ok(out)
}
