//! Deterministic pseudorandom bit generation.
//!
//! Everything in this crate that consumes randomness goes through [`Prng`],
//! a xoshiro256** generator seeded through splitmix64. The algorithm is
//! fixed on purpose: results quoted in reports must be reproducible from
//! `(seed, index)` alone, across platforms and across releases, so swapping
//! in a different generator would silently invalidate stored artifacts.
//!
//! Independent substreams are derived with [`Prng::substream`], which mixes
//! a stream index into the seed before key expansion. Sample j of a run
//! always draws from substream j regardless of how work is scheduled, which
//! keeps parallel builds byte-identical to sequential ones.

/// One step of the splitmix64 sequence, advancing `state` in place.
pub fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// xoshiro256** with explicit seeding and no global state.
#[derive(Clone, Debug)]
pub struct Prng {
    s: [u64; 4],
}

impl Prng {
    /// Generator for the root stream of `seed`.
    pub fn seeded(seed: u64) -> Self {
        let mut st = seed;
        Prng {
            s: [
                splitmix64(&mut st),
                splitmix64(&mut st),
                splitmix64(&mut st),
                splitmix64(&mut st),
            ],
        }
    }

    /// Generator for substream `index` of `seed`.
    ///
    /// Distinct indices give streams that do not overlap in practice: the
    /// state is expanded from `seed + (index + 1) * phi64` through the same
    /// splitmix64 pipeline, so any change in either input reshuffles all
    /// 256 bits of state. Substream 0 is distinct from the root stream.
    pub fn substream(seed: u64, index: u64) -> Self {
        let mut st = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        Prng {
            s: [
                splitmix64(&mut st),
                splitmix64(&mut st),
                splitmix64(&mut st),
                splitmix64(&mut st),
            ],
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        let result = self.s[1].wrapping_mul(5).rotate_left(7).wrapping_mul(9);
        let t = self.s[1] << 17;
        self.s[2] ^= self.s[0];
        self.s[3] ^= self.s[1];
        self.s[1] ^= self.s[2];
        self.s[0] ^= self.s[3];
        self.s[2] ^= t;
        self.s[3] = self.s[3].rotate_left(45);
        result
    }

    /// `len` fair bits, extracted most significant bit first from
    /// consecutive `next_u64` words.
    pub fn bits(&mut self, len: usize) -> Vec<u8> {
        let mut out = Vec::with_capacity(len);
        let mut word = 0u64;
        let mut have = 0usize;
        for _ in 0..len {
            if have == 0 {
                word = self.next_u64();
                have = 64;
            }
            out.push((word >> 63) as u8);
            word <<= 1;
            have -= 1;
        }
        out
    }

    /// Uniform value in `0..n` by rejection, free of modulo bias.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "below(0) is undefined");
        if n.is_power_of_two() {
            return self.next_u64() & (n - 1);
        }
        // Largest multiple of n that fits in u64; draws at or above it are
        // rejected so all residues are equally likely.
        let zone = u64::MAX - u64::MAX % n;
        loop {
            let v = self.next_u64();
            if v < zone {
                return v % n;
            }
        }
    }

    /// In-place Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_xoshiro::rand_core::{Rng as _, SeedableRng};
    use rand_xoshiro::Xoshiro256StarStar;

    #[test]
    fn core_matches_reference_implementation() {
        // Same 256-bit state must produce the same output stream as the
        // independently maintained rand_xoshiro crate.
        for seed in [0u64, 1, 42, 0xDEAD_BEEF, u64::MAX] {
            let mut ours = Prng::seeded(seed);
            let mut bytes = [0u8; 32];
            let mut st = seed;
            for chunk in bytes.chunks_mut(8) {
                chunk.copy_from_slice(&splitmix64(&mut st).to_le_bytes());
            }
            let mut theirs = Xoshiro256StarStar::from_seed(bytes);
            for _ in 0..64 {
                assert_eq!(ours.next_u64(), theirs.next_u64());
            }
        }
    }

    #[test]
    fn seeding_matches_reference_seed_from_u64() {
        // rand_xoshiro also key-expands u64 seeds through splitmix64, so the
        // full pipeline should agree, not just the core.
        for seed in [0u64, 7, 12345, 0x0123_4567_89AB_CDEF] {
            let mut ours = Prng::seeded(seed);
            let mut theirs = Xoshiro256StarStar::seed_from_u64(seed);
            for _ in 0..16 {
                assert_eq!(ours.next_u64(), theirs.next_u64());
            }
        }
    }

    #[test]
    fn substreams_are_reproducible_and_distinct() {
        let a1: Vec<u64> = {
            let mut g = Prng::substream(99, 3);
            (0..8).map(|_| g.next_u64()).collect()
        };
        let a2: Vec<u64> = {
            let mut g = Prng::substream(99, 3);
            (0..8).map(|_| g.next_u64()).collect()
        };
        assert_eq!(a1, a2);
        let b: Vec<u64> = {
            let mut g = Prng::substream(99, 4);
            (0..8).map(|_| g.next_u64()).collect()
        };
        assert_ne!(a1, b);
        let root: Vec<u64> = {
            let mut g = Prng::seeded(99);
            (0..8).map(|_| g.next_u64()).collect()
        };
        assert_ne!(a1, root);
    }

    #[test]
    fn bits_come_from_word_msb_first() {
        let mut g = Prng::seeded(7);
        let word = Prng::seeded(7).next_u64();
        let bits = g.bits(64);
        for (i, &b) in bits.iter().enumerate() {
            assert_eq!(b, ((word >> (63 - i)) & 1) as u8);
        }
    }

    #[test]
    fn below_is_in_range_and_reaches_bounds() {
        let mut g = Prng::seeded(2024);
        let mut seen_zero = false;
        let mut seen_max = false;
        for _ in 0..10_000 {
            let v = g.below(7);
            assert!(v < 7);
            seen_zero |= v == 0;
            seen_max |= v == 6;
        }
        assert!(seen_zero && seen_max);
    }

    #[test]
    fn shuffle_is_a_permutation() {
        let mut g = Prng::seeded(5);
        let mut v: Vec<u32> = (0..100).collect();
        g.shuffle(&mut v);
        let mut sorted = v.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..100).collect::<Vec<_>>());
        assert_ne!(v, (0..100).collect::<Vec<_>>());
    }

    #[test]
    fn fair_bit_balance() {
        let mut g = Prng::seeded(11);
        let ones: u32 = g.bits(100_000).iter().map(|&b| b as u32).sum();
        // 5 sigma around 50000 for a fair coin is roughly +-790.
        assert!((49_210..=50_790).contains(&ones), "ones = {ones}");
    }
}
