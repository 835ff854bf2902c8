//! Cellular automata as non-halting string sources.
//!
//! Automata never halt, so their output has no natural delimitation;
//! strings are harvested by stopping at an arbitrary time and cutting the
//! state into k-tuples. `cutoff_distribution` turns a 1D space-time diagram
//! or a series of 2D snapshots into a `PatternDistribution` with the same
//! windowing semantics as the data-ingestion pipeline.

use serde::{Deserialize, Serialize};

use crate::bits;
use crate::distribution::{PatternDistribution, SourceDescriptor};
use crate::error::{Error, Result};
use crate::rng::Prng;

/// How a run was initialized, for provenance stamps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EcaInitKind {
    SingleOne,
    RandomBits,
    Custom,
}

/// Initial row for [`eca_run`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EcaInit {
    /// All zeros except a single one at the middle cell (width / 2).
    SingleOne,
    /// Seeded pseudorandom fair bits.
    RandomBits(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridInitKind {
    RandomBits,
    Custom,
}

/// Which rows of a diagram feed the cutoff statistics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowSelection {
    /// Only the last row (1D) or last snapshot (2D).
    Final,
    /// Every row / every snapshot.
    All,
}

/// Space-time diagram of an elementary cellular automaton with periodic
/// boundary. Row 0 is the initial condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceTime1D {
    rule: u8,
    width: usize,
    init: EcaInitKind,
    seed: Option<u64>,
    rows: Vec<Vec<u8>>,
}

impl SpaceTime1D {
    /// Wraps externally produced rows (all the same width) as a diagram.
    /// The rows are taken as-is; the evolution invariant is only
    /// guaranteed for [`eca_run`] output.
    pub fn from_rows(rule: u8, rows: Vec<Vec<u8>>) -> Result<Self> {
        let width = match rows.first() {
            None => return Err(Error::Parameter("at least one row is required".into())),
            Some(r) if r.is_empty() => {
                return Err(Error::Parameter("rows must be non-empty".into()))
            }
            Some(r) => r.len(),
        };
        for row in &rows {
            if row.len() != width {
                return Err(Error::Parameter("all rows must have equal width".into()));
            }
            if row.iter().any(|&b| b > 1) {
                return Err(Error::Parameter("row cells must be bits".into()));
            }
        }
        Ok(SpaceTime1D {
            rule,
            width,
            init: EcaInitKind::Custom,
            seed: None,
            rows,
        })
    }

    pub fn rule(&self) -> u8 {
        self.rule
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn init(&self) -> EcaInitKind {
        self.init
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    /// Steps taken after the initial row.
    pub fn steps(&self) -> usize {
        self.rows.len() - 1
    }

    /// The whole diagram as a bitmap, rows top to bottom.
    pub fn to_matrix(&self) -> BitMatrix {
        let mut m = BitMatrix::zeros(self.rows.len(), self.width);
        for (r, row) in self.rows.iter().enumerate() {
            for (c, &b) in row.iter().enumerate() {
                m.set(r, c, b);
            }
        }
        m
    }
}

fn eca_step(rule: u8, row: &[u8], next: &mut Vec<u8>) {
    let w = row.len();
    next.clear();
    for i in 0..w {
        let l = row[(i + w - 1) % w];
        let c = row[i];
        let r = row[(i + 1) % w];
        let pattern = (l << 2) | (c << 1) | r;
        next.push((rule >> pattern) & 1);
    }
}

/// Runs elementary CA `rule` for `steps` steps on a periodic row of
/// `width` cells.
pub fn eca_run(rule: u8, width: usize, steps: u32, init: EcaInit) -> Result<SpaceTime1D> {
    if width < 3 {
        return Err(Error::Parameter(format!(
            "width must be at least 3, got {width}"
        )));
    }
    if steps == 0 {
        return Err(Error::Parameter("steps must be at least 1".into()));
    }
    let (first, kind, seed) = match init {
        EcaInit::SingleOne => {
            let mut row = vec![0u8; width];
            row[width / 2] = 1;
            (row, EcaInitKind::SingleOne, None)
        }
        EcaInit::RandomBits(seed) => (
            Prng::seeded(seed).bits(width),
            EcaInitKind::RandomBits,
            Some(seed),
        ),
    };
    let mut rows = Vec::with_capacity(steps as usize + 1);
    rows.push(first);
    let mut next = Vec::with_capacity(width);
    for _ in 0..steps {
        eca_step(rule, rows.last().expect("rows never empty"), &mut next);
        rows.push(next.clone());
    }
    Ok(SpaceTime1D {
        rule,
        width,
        init: kind,
        seed,
        rows,
    })
}

/// Dense bit matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    height: usize,
    width: usize,
    cells: Vec<u8>,
}

impl BitMatrix {
    pub fn zeros(height: usize, width: usize) -> Self {
        BitMatrix {
            height,
            width,
            cells: vec![0; height * width],
        }
    }

    /// Matrix of independent seeded fair bits, filled row-major.
    pub fn random(height: usize, width: usize, seed: u64) -> Self {
        BitMatrix {
            height,
            width,
            cells: Prng::seeded(seed).bits(height * width),
        }
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.cells[row * self.width + col]
    }

    pub fn set(&mut self, row: usize, col: usize, bit: u8) {
        self.cells[row * self.width + col] = bit;
    }

    /// Cells in row-major order.
    pub fn flat(&self) -> &[u8] {
        &self.cells
    }

    pub fn count_ones(&self) -> u64 {
        self.cells.iter().filter(|&&b| b == 1).count() as u64
    }

    /// Binary PBM (P4) image bytes; 1 renders black.
    pub fn to_pbm(&self) -> Vec<u8> {
        let mut out = format!("P4\n{} {}\n", self.width, self.height).into_bytes();
        for row in self.cells.chunks(self.width) {
            let mut byte = 0u8;
            let mut used = 0;
            for &b in row {
                byte = (byte << 1) | b;
                used += 1;
                if used == 8 {
                    out.push(byte);
                    byte = 0;
                    used = 0;
                }
            }
            if used > 0 {
                out.push(byte << (8 - used));
            }
        }
        out
    }
}

/// Snapshots of a 2D totalistic 9-neighbor automaton run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grid2D {
    rule: u16,
    height: usize,
    width: usize,
    steps: u32,
    snapshot_every: u32,
    init: GridInitKind,
    seed: Option<u64>,
    snapshots: Vec<(u32, BitMatrix)>,
}

impl Grid2D {
    pub fn rule(&self) -> u16 {
        self.rule
    }

    pub fn size(&self) -> (usize, usize) {
        (self.height, self.width)
    }

    pub fn steps(&self) -> u32 {
        self.steps
    }

    pub fn snapshot_every(&self) -> u32 {
        self.snapshot_every
    }

    pub fn init(&self) -> GridInitKind {
        self.init
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// (step index, state) pairs, step indices strictly increasing,
    /// starting with step 0.
    pub fn snapshots(&self) -> &[(u32, BitMatrix)] {
        &self.snapshots
    }
}

fn ca2d_step(rule: u16, grid: &BitMatrix, next: &mut BitMatrix) {
    let h = grid.height;
    let w = grid.width;
    for r in 0..h {
        let up = (r + h - 1) % h;
        let down = (r + 1) % h;
        for c in 0..w {
            let left = (c + w - 1) % w;
            let right = (c + 1) % w;
            let sum = grid.get(up, left)
                + grid.get(up, c)
                + grid.get(up, right)
                + grid.get(r, left)
                + grid.get(r, c)
                + grid.get(r, right)
                + grid.get(down, left)
                + grid.get(down, c)
                + grid.get(down, right);
            next.set(r, c, ((rule >> sum) & 1) as u8);
        }
    }
}

fn ca2d_run_inner(
    initial: BitMatrix,
    rule: u16,
    steps: u32,
    snapshot_every: u32,
    init: GridInitKind,
    seed: Option<u64>,
) -> Result<Grid2D> {
    let (height, width) = (initial.height, initial.width);
    if height < 3 || width < 3 {
        return Err(Error::Parameter(format!(
            "grid must be at least 3x3, got {height}x{width}"
        )));
    }
    if rule >= 1 << 10 {
        return Err(Error::Parameter(format!(
            "totalistic rule code must be below 1024 (neighborhood sums 0..9), got {rule}"
        )));
    }
    if steps == 0 || snapshot_every == 0 {
        return Err(Error::Parameter(
            "steps and snapshot_every must be at least 1".into(),
        ));
    }
    let mut snapshots = vec![(0u32, initial.clone())];
    let mut current = initial;
    let mut next = BitMatrix::zeros(height, width);
    for t in 1..=steps {
        ca2d_step(rule, &current, &mut next);
        std::mem::swap(&mut current, &mut next);
        if t % snapshot_every == 0 {
            snapshots.push((t, current.clone()));
        }
    }
    Ok(Grid2D {
        rule,
        height,
        width,
        steps,
        snapshot_every,
        init,
        seed,
        snapshots,
    })
}

/// Runs the 2D totalistic automaton from a seeded pseudorandom matrix.
/// Each cell's next state is bit `sum` of the rule code, where sum counts
/// the ones in the 9-cell Moore neighborhood (the cell included), with
/// periodic boundary. Snapshots are kept at step 0 and every
/// `snapshot_every` steps.
pub fn ca2d_run(
    rule: u16,
    size: (usize, usize),
    steps: u32,
    seed: u64,
    snapshot_every: u32,
) -> Result<Grid2D> {
    let (h, w) = size;
    if h < 3 || w < 3 {
        return Err(Error::Parameter(format!(
            "grid must be at least 3x3, got {h}x{w}"
        )));
    }
    ca2d_run_inner(
        BitMatrix::random(h, w, seed),
        rule,
        steps,
        snapshot_every,
        GridInitKind::RandomBits,
        Some(seed),
    )
}

/// Same as [`ca2d_run`] but from an explicit initial matrix.
pub fn ca2d_run_from(
    initial: BitMatrix,
    rule: u16,
    steps: u32,
    snapshot_every: u32,
) -> Result<Grid2D> {
    ca2d_run_inner(initial, rule, steps, snapshot_every, GridInitKind::Custom, None)
}

/// A cutoff source: either a 1D space-time diagram or 2D snapshots.
#[derive(Clone, Copy, Debug)]
pub enum CutoffSource<'a> {
    SpaceTime(&'a SpaceTime1D),
    Grid(&'a Grid2D),
}

impl<'a> From<&'a SpaceTime1D> for CutoffSource<'a> {
    fn from(st: &'a SpaceTime1D) -> Self {
        CutoffSource::SpaceTime(st)
    }
}

impl<'a> From<&'a Grid2D> for CutoffSource<'a> {
    fn from(g: &'a Grid2D) -> Self {
        CutoffSource::Grid(g)
    }
}

/// Harvests k-tuples from an automaton stopped at an arbitrary time.
///
/// Selected rows (each 2D snapshot is flattened row-major into one long
/// row) are cut into sliding windows when `overlap` is set, or disjoint
/// blocks with the remainder discarded otherwise.
pub fn cutoff_distribution(
    source: CutoffSource<'_>,
    k: u32,
    overlap: bool,
    which_rows: RowSelection,
) -> Result<PatternDistribution> {
    if k == 0 {
        return Err(Error::Parameter("k must be at least 1".into()));
    }
    let k_usize = k as usize;
    let (rows, row_width): (Vec<Vec<u8>>, usize) = match source {
        CutoffSource::SpaceTime(st) => {
            let picked: Vec<Vec<u8>> = match which_rows {
                RowSelection::Final => {
                    vec![st.rows().last().expect("diagram has rows").clone()]
                }
                RowSelection::All => st.rows().to_vec(),
            };
            (picked, st.width())
        }
        CutoffSource::Grid(g) => {
            let flatten = |m: &BitMatrix| m.flat().to_vec();
            let picked: Vec<Vec<u8>> = match which_rows {
                RowSelection::Final => {
                    vec![flatten(&g.snapshots().last().expect("grid has snapshots").1)]
                }
                RowSelection::All => g.snapshots().iter().map(|(_, m)| flatten(m)).collect(),
            };
            let (h, w) = g.size();
            (picked, h * w)
        }
    };
    if k_usize > row_width {
        return Err(Error::Parameter(format!(
            "k = {k} exceeds the row width {row_width}"
        )));
    }
    let refs: Vec<&[u8]> = rows.iter().map(|r| r.as_slice()).collect();
    let (counts, windows) = bits::count_windows(&refs, k_usize, overlap);
    let (descriptor, seed) = match source {
        CutoffSource::SpaceTime(st) => (
            SourceDescriptor::Eca {
                rule: st.rule(),
                width: st.width() as u32,
                steps: st.steps() as u32,
                init: st.init(),
                k,
                overlap,
                rows: which_rows,
            },
            st.seed(),
        ),
        CutoffSource::Grid(g) => (
            SourceDescriptor::Ca2d {
                rule: g.rule(),
                height: g.size().0 as u32,
                width: g.size().1 as u32,
                steps: g.steps(),
                snapshot_every: g.snapshot_every(),
                init: g.init(),
                k,
                overlap,
                rows: which_rows,
            },
            g.seed(),
        ),
    };
    PatternDistribution::from_counts(descriptor, seed, None, windows, counts)
}
