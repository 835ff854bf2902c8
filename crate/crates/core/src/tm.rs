//! n-state 2-symbol Turing machines: encoding, simulation, exhaustive search.
//!
//! A machine has operating states 1..=n plus the halt state 0. Each of the
//! 2n table entries (one per state and read symbol) writes a bit, moves the
//! head one cell left or right, and names the next state; a transition into
//! state 0 still writes and moves, then the machine stops. The tape is
//! unbounded in both directions and blank cells read 0.
//!
//! Machines are numbered by a mixed-radix code: entry (state s, symbol b) is
//! digit 2(s-1)+b of the index in base 4(n+1), least significant digit
//! first, with digit value write + 2*move + 4*next_state (move: 0 = Left,
//! 1 = Right). The code is a bijection between 0..(4(n+1))^(2n) and the
//! machine space, so exhaustive scans are plain integer ranges.

use std::ops::Range;

use rayon::prelude::*;

use crate::bits;
use crate::error::{Error, Result};

/// Largest state count whose machine indices fit in u64.
pub const MAX_STATES: u32 = 6;

/// Largest state count accepted for full-space scans. The n=4 space already
/// holds 25.6 billion machines; anything beyond is out of desk range.
pub const MAX_ENUM_STATES: u32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TransitionEntry {
    pub write: u8,
    pub dir: Direction,
    /// 0 is the halt state.
    pub next_state: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TuringMachineSpec {
    n_states: u32,
    entries: Vec<TransitionEntry>,
}

impl TuringMachineSpec {
    /// Builds a spec from explicit entries in (state ascending, symbol
    /// ascending) order.
    pub fn from_entries(n_states: u32, entries: Vec<TransitionEntry>) -> Result<Self> {
        if n_states == 0 || n_states > MAX_STATES {
            return Err(Error::Capacity(format!(
                "state count must be in 1..={MAX_STATES}, got {n_states}"
            )));
        }
        if entries.len() != 2 * n_states as usize {
            return Err(Error::Parameter(format!(
                "expected {} transition entries for {} states, got {}",
                2 * n_states,
                n_states,
                entries.len()
            )));
        }
        for e in &entries {
            if e.write > 1 {
                return Err(Error::Parameter(format!(
                    "write symbol must be 0 or 1, got {}",
                    e.write
                )));
            }
            if e.next_state > n_states {
                return Err(Error::Parameter(format!(
                    "next state {} out of range 0..={}",
                    e.next_state, n_states
                )));
            }
        }
        Ok(TuringMachineSpec { n_states, entries })
    }

    pub fn n_states(&self) -> u32 {
        self.n_states
    }

    /// The entry consulted in `state` when reading `symbol`.
    pub fn entry(&self, state: u32, symbol: u8) -> &TransitionEntry {
        assert!(state >= 1 && state <= self.n_states, "state out of range");
        assert!(symbol <= 1, "symbol out of range");
        &self.entries[(2 * (state - 1) + symbol as u32) as usize]
    }

    pub fn entries(&self) -> &[TransitionEntry] {
        &self.entries
    }

    /// The left-right reflected machine: every move direction flipped.
    pub fn mirror(&self) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|e| TransitionEntry {
                write: e.write,
                dir: match e.dir {
                    Direction::Left => Direction::Right,
                    Direction::Right => Direction::Left,
                },
                next_state: e.next_state,
            })
            .collect();
        TuringMachineSpec {
            n_states: self.n_states,
            entries,
        }
    }

    fn blank_stub(n_states: u32) -> Self {
        let halt = TransitionEntry {
            write: 0,
            dir: Direction::Left,
            next_state: 0,
        };
        TuringMachineSpec {
            n_states,
            entries: vec![halt; 2 * n_states as usize],
        }
    }
}

/// Number of machines in the (n,2) space: (4(n+1))^(2n).
pub fn space_size(n: u32) -> Result<u64> {
    if n == 0 || n > MAX_STATES {
        return Err(Error::Capacity(format!(
            "state count must be in 1..={MAX_STATES}, got {n}"
        )));
    }
    let base = 4 * (n as u64 + 1);
    Ok(base.pow(2 * n))
}

fn decode_digits(mut index: u64, n: u32, entries: &mut [TransitionEntry]) {
    let base = 4 * (n as u64 + 1);
    for e in entries.iter_mut() {
        let d = index % base;
        index /= base;
        *e = TransitionEntry {
            write: (d & 1) as u8,
            dir: if (d >> 1) & 1 == 0 {
                Direction::Left
            } else {
                Direction::Right
            },
            next_state: (d >> 2) as u32,
        };
    }
}

/// Decodes machine `index` of the (n,2) space.
pub fn decode_machine(index: u64, n: u32) -> Result<TuringMachineSpec> {
    let size = space_size(n)?;
    if index >= size {
        return Err(Error::IndexOutOfRange { index, n, size });
    }
    let mut spec = TuringMachineSpec::blank_stub(n);
    decode_digits(index, n, &mut spec.entries);
    Ok(spec)
}

/// Overwrites `spec` (which must already have n states) with machine
/// `index`. Scan loops use this to avoid reallocating per machine.
pub(crate) fn decode_machine_into(index: u64, spec: &mut TuringMachineSpec) {
    decode_digits(index, spec.n_states, &mut spec.entries);
}

/// Inverse of [`decode_machine`].
pub fn encode_machine(spec: &TuringMachineSpec) -> u64 {
    let base = 4 * (spec.n_states as u64 + 1);
    let mut index = 0u64;
    for e in spec.entries.iter().rev() {
        let dir_bit = match e.dir {
            Direction::Left => 0u64,
            Direction::Right => 1u64,
        };
        let digit = ((e.next_state as u64) << 2) | (dir_bit << 1) | e.write as u64;
        index = index * base + digit;
    }
    index
}

/// Index of the left-right reflected machine. Flipping a move flips bit 1
/// of the digit, so this is a digitwise XOR with 2. The map is an
/// involution with no fixed points (every machine has at least one entry,
/// whose direction flips).
pub(crate) fn mirror_index(mut index: u64, n: u32) -> u64 {
    let base = 4 * (n as u64 + 1);
    let mut out = 0u64;
    let mut place = 1u64;
    for _ in 0..2 * n {
        let d = index % base;
        index /= base;
        out += (d ^ 2) * place;
        place = place.saturating_mul(base);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RunStatus {
    Halted,
    CapExceeded,
}

/// Result of simulating one machine.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOutcome {
    pub status: RunStatus,
    pub steps: u64,
    /// Count of 1 cells on the tape at termination.
    pub ones_count: u64,
    /// Contents of the scanned span [scanned_min, scanned_max]. A cell is
    /// scanned when the head reads it at the start of a step; the cell the
    /// final move lands on is not scanned. Empty only if no step ran.
    pub output: String,
}

/// Live execution state of one machine on a two-way infinite tape.
///
/// The tape is a flat buffer indexed by `cell + origin` that grows on
/// demand; `reset` zeroes only the span a run actually dirtied, so one
/// config can be reused across millions of simulations without paying for
/// full clears.
#[derive(Clone, Debug)]
pub struct MachineConfig {
    cells: Vec<u8>,
    origin: i64,
    head: i64,
    state: u32,
    steps: u64,
    scanned_min: i64,
    scanned_max: i64,
    init_len: usize,
}

impl MachineConfig {
    /// Fresh configuration: `initial` placed starting at cell 0, head at
    /// cell 0, state 1.
    pub fn new(initial: &[u8]) -> Self {
        let mut config = MachineConfig {
            cells: vec![0; 64],
            origin: 32,
            head: 0,
            state: 1,
            steps: 0,
            scanned_min: i64::MAX,
            scanned_max: i64::MIN,
            init_len: 0,
        };
        config.load(initial);
        config
    }

    /// Rewinds to the start configuration with a new initial tape.
    pub fn reset(&mut self, initial: &[u8]) {
        let mut lo = i64::MAX;
        let mut hi = i64::MIN;
        if self.scanned_min <= self.scanned_max {
            lo = self.scanned_min;
            hi = self.scanned_max;
        }
        if self.init_len > 0 {
            lo = lo.min(0);
            hi = hi.max(self.init_len as i64 - 1);
        }
        if lo <= hi {
            // Writes only land on scanned cells and the initial segment,
            // all of which are allocated, so this clears every dirty cell.
            let a = (lo + self.origin) as usize;
            let b = (hi + self.origin) as usize;
            self.cells[a..=b].fill(0);
        }
        self.head = 0;
        self.state = 1;
        self.steps = 0;
        self.scanned_min = i64::MAX;
        self.scanned_max = i64::MIN;
        self.load(initial);
    }

    fn load(&mut self, initial: &[u8]) {
        self.init_len = initial.len();
        if !initial.is_empty() {
            self.ensure(initial.len() as i64 - 1);
            self.ensure(0);
            let at = self.origin as usize;
            self.cells[at..at + initial.len()].copy_from_slice(initial);
        }
    }

    #[inline]
    fn ensure(&mut self, cell: i64) -> usize {
        let idx = cell + self.origin;
        if idx < 0 {
            self.grow_left((-idx) as usize);
        } else if idx as usize >= self.cells.len() {
            self.grow_right(idx as usize - self.cells.len() + 1);
        } else {
            return idx as usize;
        }
        (cell + self.origin) as usize
    }

    #[cold]
    fn grow_left(&mut self, need: usize) {
        let add = need.max(self.cells.len()).max(64);
        let mut next = vec![0u8; add + self.cells.len()];
        next[add..].copy_from_slice(&self.cells);
        self.cells = next;
        self.origin += add as i64;
    }

    #[cold]
    fn grow_right(&mut self, need: usize) {
        let add = need.max(self.cells.len()).max(64);
        let len = self.cells.len();
        self.cells.resize(len + add, 0);
    }

    #[inline]
    fn step_inner(&mut self, spec: &TuringMachineSpec) {
        let idx = self.ensure(self.head);
        if self.head < self.scanned_min {
            self.scanned_min = self.head;
        }
        if self.head > self.scanned_max {
            self.scanned_max = self.head;
        }
        let symbol = self.cells[idx];
        let e = &spec.entries[(2 * (self.state - 1) + symbol as u32) as usize];
        self.cells[idx] = e.write;
        self.head += match e.dir {
            Direction::Left => -1,
            Direction::Right => 1,
        };
        self.state = e.next_state;
        self.steps += 1;
    }

    /// Executes one step; returns false if the machine is (now) halted.
    /// Calling on a halted machine is a no-op.
    pub fn step(&mut self, spec: &TuringMachineSpec) -> bool {
        if self.state == 0 {
            return false;
        }
        self.step_inner(spec);
        self.state != 0
    }

    /// Runs until halt or until `steps` reaches `cap`.
    pub fn run_to(&mut self, spec: &TuringMachineSpec, cap: u64) -> RunStatus {
        while self.state != 0 {
            if self.steps >= cap {
                return RunStatus::CapExceeded;
            }
            self.step_inner(spec);
        }
        RunStatus::Halted
    }

    pub fn head(&self) -> i64 {
        self.head
    }

    pub fn state(&self) -> u32 {
        self.state
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    /// (scanned_min, scanned_max), or None before the first step.
    pub fn scanned_span(&self) -> Option<(i64, i64)> {
        (self.scanned_min <= self.scanned_max).then_some((self.scanned_min, self.scanned_max))
    }

    fn get(&self, cell: i64) -> u8 {
        let idx = cell + self.origin;
        if idx < 0 || idx as usize >= self.cells.len() {
            0
        } else {
            self.cells[idx as usize]
        }
    }

    /// Count of 1 cells on the whole tape.
    pub fn ones_on_tape(&self) -> u64 {
        let mut lo = i64::MAX;
        let mut hi = i64::MIN;
        if self.scanned_min <= self.scanned_max {
            lo = self.scanned_min;
            hi = self.scanned_max;
        }
        if self.init_len > 0 {
            lo = lo.min(0);
            hi = hi.max(self.init_len as i64 - 1);
        }
        if lo > hi {
            return 0;
        }
        let a = (lo + self.origin) as usize;
        let b = (hi + self.origin) as usize;
        self.cells[a..=b].iter().filter(|&&c| c == 1).count() as u64
    }

    /// Contents of the scanned span; empty before the first step.
    pub fn output_bits(&self) -> Vec<u8> {
        if self.scanned_min > self.scanned_max {
            return Vec::new();
        }
        (self.scanned_min..=self.scanned_max)
            .map(|c| self.get(c))
            .collect()
    }
}

/// Simulates `spec` from `initial_tape` (bits placed starting at cell 0,
/// empty string = blank tape) for at most `cap` steps.
pub fn run(spec: &TuringMachineSpec, initial_tape: &str, cap: u64) -> Result<RunOutcome> {
    if cap == 0 {
        return Err(Error::Parameter("step cap must be at least 1".into()));
    }
    let initial = if initial_tape.is_empty() {
        Vec::new()
    } else {
        bits::parse(initial_tape).ok_or_else(|| {
            Error::Parameter(format!(
                "initial tape must contain only '0' and '1', got {initial_tape:?}"
            ))
        })?
    };
    let mut config = MachineConfig::new(&initial);
    let status = config.run_to(spec, cap);
    Ok(RunOutcome {
        status,
        steps: config.steps,
        ones_count: config.ones_on_tape(),
        output: bits::to_string(&config.output_bits()),
    })
}

/// Knobs shared by the exhaustive scans.
#[derive(Clone, Copy, Debug, Default)]
pub struct EnumOptions {
    /// Worker threads; 0 uses the process-wide default pool.
    pub workers: usize,
    /// Skip the lexicographically larger machine of each mirror pair and
    /// account for it analytically. Valid for blank-tape scans only, where
    /// the mirror machine provably halts identically with reversed output.
    pub mirror_reduction: bool,
}

/// Runs `f` on a dedicated pool of `workers` threads (0 = default pool).
pub(crate) fn with_pool<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> T {
    if workers == 0 {
        f()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .expect("failed to build worker pool")
            .install(f)
    }
}

/// Splits 0..size into ranges sized for parallel scanning. Chunk geometry
/// never affects results; merges are associative and commutative.
pub(crate) fn chunk_ranges(start: u64, end: u64) -> Vec<Range<u64>> {
    let span = end.saturating_sub(start);
    let chunk = (span / 4096).max(1 << 14);
    let mut ranges = Vec::new();
    let mut at = start;
    while at < end {
        let stop = at.saturating_add(chunk).min(end);
        ranges.push(at..stop);
        at = stop;
    }
    ranges
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BusyBeaverResult {
    pub n_states: u32,
    /// Max ones left on the tape by any halting machine (Sigma).
    pub sigma: u64,
    /// Max steps taken by any halting machine (S).
    pub s_max: u64,
    pub halting_count: u64,
    pub total_count: u64,
    /// Values are exact only if this exceeded the true S(n).
    pub cap_used: u64,
}

/// Exhaustive Busy Beaver search: runs every machine in (n,2) from the
/// blank tape with the given step cap.
///
/// Machines that exceed the cap are treated as non-halting, so sigma and
/// s_max are lower bounds when the cap is below the true maximum step
/// count, and exact otherwise.
pub fn busy_beaver_search(n: u32, cap: u64, opts: &EnumOptions) -> Result<BusyBeaverResult> {
    if n == 0 || n > MAX_ENUM_STATES {
        return Err(Error::Capacity(format!(
            "exhaustive search supports 1..={MAX_ENUM_STATES} states, got {n}"
        )));
    }
    if cap == 0 {
        return Err(Error::Parameter("step cap must be at least 1".into()));
    }
    let size = space_size(n)?;
    let reduction = opts.mirror_reduction;
    let (sigma, s_max, halting_count) = with_pool(opts.workers, || {
        chunk_ranges(0, size)
            .into_par_iter()
            .map(|range| bb_scan_range(n, cap, range, reduction))
            .reduce(
                || (0, 0, 0),
                |a, b| (a.0.max(b.0), a.1.max(b.1), a.2 + b.2),
            )
    });
    Ok(BusyBeaverResult {
        n_states: n,
        sigma,
        s_max,
        halting_count,
        total_count: size,
        cap_used: cap,
    })
}

fn bb_scan_range(n: u32, cap: u64, range: Range<u64>, reduction: bool) -> (u64, u64, u64) {
    let mut spec = TuringMachineSpec::blank_stub(n);
    let mut config = MachineConfig::new(&[]);
    let mut sigma = 0u64;
    let mut s_max = 0u64;
    let mut halting = 0u64;
    for index in range {
        let weight = if reduction {
            if mirror_index(index, n) < index {
                continue;
            }
            2
        } else {
            1
        };
        decode_machine_into(index, &mut spec);
        config.reset(&[]);
        if config.run_to(&spec, cap) == RunStatus::Halted {
            halting += weight;
            sigma = sigma.max(config.ones_on_tape());
            s_max = s_max.max(config.steps);
        }
    }
    (sigma, s_max, halting)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn entry(write: u8, dir: Direction, next_state: u32) -> TransitionEntry {
        TransitionEntry {
            write,
            dir,
            next_state,
        }
    }

    #[test]
    fn space_sizes() {
        assert_eq!(space_size(1).unwrap(), 64);
        assert_eq!(space_size(2).unwrap(), 20736);
        assert_eq!(space_size(3).unwrap(), 16_777_216);
        assert_eq!(space_size(4).unwrap(), 25_600_000_000);
        assert!(matches!(space_size(0), Err(Error::Capacity(_))));
        assert!(matches!(space_size(7), Err(Error::Capacity(_))));
    }

    #[test]
    fn decode_zero_is_all_halt_left() {
        let spec = decode_machine(0, 1).unwrap();
        for e in spec.entries() {
            assert_eq!(*e, entry(0, Direction::Left, 0));
        }
    }

    #[test]
    fn decode_max_n1_is_all_ones_right_loop() {
        let spec = decode_machine(63, 1).unwrap();
        for e in spec.entries() {
            assert_eq!(*e, entry(1, Direction::Right, 1));
        }
    }

    #[test]
    fn encode_hand_example() {
        // digit0 = 1 (write) + 2 (Right) + 0 (halt) = 3, digit1 = 0.
        let spec = TuringMachineSpec::from_entries(
            1,
            vec![entry(1, Direction::Right, 0), entry(0, Direction::Left, 0)],
        )
        .unwrap();
        assert_eq!(encode_machine(&spec), 3);
    }

    #[test]
    fn decode_rejects_out_of_range() {
        let err = decode_machine(64, 1).unwrap_err();
        match err {
            Error::IndexOutOfRange { index, n, size } => {
                assert_eq!((index, n, size), (64, 1, 64));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn roundtrip_exhaustive_small_spaces() {
        for n in 1..=2u32 {
            for index in 0..space_size(n).unwrap() {
                let spec = decode_machine(index, n).unwrap();
                assert_eq!(encode_machine(&spec), index);
            }
        }
    }

    #[test]
    fn run_hand_examples() {
        let halt_right = TuringMachineSpec::from_entries(
            1,
            vec![entry(1, Direction::Right, 0), entry(0, Direction::Left, 0)],
        )
        .unwrap();
        let out = run(&halt_right, "", 10).unwrap();
        assert_eq!(out.status, RunStatus::Halted);
        assert_eq!(out.steps, 1);
        assert_eq!(out.ones_count, 1);
        assert_eq!(out.output, "1");

        let runaway = TuringMachineSpec::from_entries(
            1,
            vec![entry(1, Direction::Right, 1), entry(0, Direction::Left, 0)],
        )
        .unwrap();
        let out = run(&runaway, "", 100).unwrap();
        assert_eq!(out.status, RunStatus::CapExceeded);
        assert_eq!(out.steps, 100);

        let halt_left = TuringMachineSpec::from_entries(
            1,
            vec![entry(0, Direction::Left, 0), entry(0, Direction::Left, 0)],
        )
        .unwrap();
        let out = run(&halt_left, "", 10).unwrap();
        assert_eq!(out.status, RunStatus::Halted);
        assert_eq!(out.steps, 1);
        assert_eq!(out.output, "0");
    }

    #[test]
    fn initial_tape_is_respected() {
        // Read 1 at cell 0, write 0 over it, halt moving right.
        let spec = TuringMachineSpec::from_entries(
            1,
            vec![entry(1, Direction::Right, 0), entry(0, Direction::Right, 0)],
        )
        .unwrap();
        let out = run(&spec, "111", 10).unwrap();
        assert_eq!(out.status, RunStatus::Halted);
        assert_eq!(out.steps, 1);
        // Cell 0 rewritten to 0; cells 1 and 2 keep their initial ones.
        assert_eq!(out.ones_count, 2);
        assert_eq!(out.output, "0");
    }

    #[test]
    fn run_rejects_bad_arguments() {
        let spec = decode_machine(0, 1).unwrap();
        assert!(matches!(run(&spec, "", 0), Err(Error::Parameter(_))));
        assert!(matches!(run(&spec, "01x", 5), Err(Error::Parameter(_))));
    }

    #[test]
    fn mirror_runs_reflected() {
        // Exhaustive over n=1: mirrored machines halt together, with equal
        // steps and ones and reversed output.
        for index in 0..64 {
            let spec = decode_machine(index, 1).unwrap();
            let mirrored = spec.mirror();
            let a = run(&spec, "", 50).unwrap();
            let b = run(&mirrored, "", 50).unwrap();
            assert_eq!(a.status, b.status);
            assert_eq!(a.steps, b.steps);
            assert_eq!(a.ones_count, b.ones_count);
            assert_eq!(a.output, b.output.chars().rev().collect::<String>());
        }
    }

    #[test]
    fn mirror_index_matches_mirror_spec() {
        for n in 1..=3u32 {
            let size = space_size(n).unwrap();
            for probe in [0, 1, size / 3, size / 2, size - 1] {
                let spec = decode_machine(probe, n).unwrap();
                assert_eq!(mirror_index(probe, n), encode_machine(&spec.mirror()));
                assert_eq!(mirror_index(mirror_index(probe, n), n), probe);
                assert_ne!(mirror_index(probe, n), probe);
            }
        }
    }

    #[test]
    fn step_on_halted_machine_is_noop() {
        let spec = decode_machine(0, 1).unwrap();
        let mut config = MachineConfig::new(&[]);
        assert!(!config.step(&spec));
        assert_eq!(config.state(), 0);
        assert_eq!(config.steps(), 1);
        assert!(!config.step(&spec));
        assert_eq!(config.steps(), 1);
    }

    #[test]
    fn busy_beaver_one_state() {
        let r = busy_beaver_search(1, 1000, &EnumOptions::default()).unwrap();
        assert_eq!(r.sigma, 1);
        assert_eq!(r.s_max, 1);
        // Exactly the machines whose (1,0) entry halts ever halt: 4 digit
        // choices with next=0 for that entry, times 8 for the other.
        assert_eq!(r.halting_count, 32);
        assert_eq!(r.total_count, 64);
        assert!(r.sigma <= r.s_max + 1);
    }

    #[test]
    fn busy_beaver_monotone_in_cap() {
        let opts = EnumOptions::default();
        let short = busy_beaver_search(2, 3, &opts).unwrap();
        let long = busy_beaver_search(2, 50, &opts).unwrap();
        assert!(short.sigma <= long.sigma);
        assert!(short.s_max <= long.s_max);
        assert!(short.halting_count <= long.halting_count);
    }

    #[test]
    fn busy_beaver_mirror_reduction_agrees() {
        let plain = busy_beaver_search(2, 100, &EnumOptions::default()).unwrap();
        let reduced = busy_beaver_search(
            2,
            100,
            &EnumOptions {
                workers: 0,
                mirror_reduction: true,
            },
        )
        .unwrap();
        assert_eq!(plain, reduced);
    }

    #[test]
    fn busy_beaver_rejects_oversize_space() {
        assert!(matches!(
            busy_beaver_search(5, 10, &EnumOptions::default()),
            Err(Error::Capacity(_))
        ));
    }

    proptest! {
        #[test]
        fn roundtrip_random_indices(n in 1u32..=4, raw in 0u64..u64::MAX) {
            let size = space_size(n).unwrap();
            let index = raw % size;
            let spec = decode_machine(index, n).unwrap();
            prop_assert_eq!(encode_machine(&spec), index);
        }

        #[test]
        fn run_is_deterministic(index in 0u64..20736, cap in 1u64..200) {
            let spec = decode_machine(index, 2).unwrap();
            let a = run(&spec, "", cap).unwrap();
            let b = run(&spec, "", cap).unwrap();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn reused_config_matches_fresh(index in 0u64..20736) {
            let spec = decode_machine(index, 2).unwrap();
            let noise = decode_machine(mirror_index(index, 2), 2).unwrap();
            let mut config = MachineConfig::new(&[1, 0, 1]);
            config.run_to(&noise, 75);
            config.reset(&[]);
            config.run_to(&spec, 120);
            let fresh = run(&spec, "", 120).unwrap();
            prop_assert_eq!(config.steps(), fresh.steps);
            prop_assert_eq!(config.ones_on_tape(), fresh.ones_count);
            prop_assert_eq!(bits::to_string(&config.output_bits()), fresh.output);
        }
    }
}
