//! Command-line driver.
//!
//! Thin reproducibility shell around the library: parses flags, calls one
//! compute entry point, writes artifacts, prints a one-line summary. All
//! randomness flows through explicit `--seed` flags, so identical command
//! lines produce byte-identical artifacts at any `--workers` setting.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

use algoprob::automata::{ca2d_run, cutoff_distribution, eca_run, EcaInit, RowSelection};
use algoprob::distribution::{build_distribution, InitMode, PatternDistribution};
use algoprob::ingest::{binarize, compression_ratio, pi_digits, tuple_counts, BinarizeMethod};
use algoprob::persist;
use algoprob::rng::Prng;
use algoprob::stats::{compare_report, SupportPolicy};
use algoprob::symmetry::{burnside_count, collapse_by_symmetry, orbit};
use algoprob::tm::{self, busy_beaver_search, EnumOptions};
use algoprob::{Error, Result};

#[derive(Parser)]
#[command(
    name = "algoprob",
    version,
    about = "Algorithmic-probability laboratory: exhaustive Turing machine enumeration, \
             cellular automata, data ingestion, and rank-correlation analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every machine of an (n,2) space and save the output distribution
    Enumerate(EnumerateArgs),
    /// Exhaustive Busy Beaver search: max ones and steps among halters
    Busybeaver(BusyBeaverArgs),
    /// Evolve a cellular automaton; harvest k-tuples and export PBM images
    Ca(CaArgs),
    /// Binarize a data file and count its k-tuples
    Ingest(IngestArgs),
    /// Rank-correlate two saved distributions with a permutation test
    Compare(CompareArgs),
    /// Symmetry tools: orbits, class counts, distribution collapse
    Symmetry(SymmetryArgs),
    /// Complexity estimate and frequency ranks of a string in a saved distribution
    Complexity(ComplexityArgs),
    /// Generate decimal digits of pi; optionally report compression ratios
    Pi(PiArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum InitArg {
    /// All-zero tape
    Blank,
    /// Pooled runs over seeded pseudorandom tape segments
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum CaInitArg {
    /// Single one at the center cell
    Single,
    /// Seeded pseudorandom row
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum BinarizeArg {
    /// Bytes to bits, most significant first
    Rawbits,
    /// 1 where the byte exceeds the byte-value median
    Median,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    /// Strings present in both distributions
    Intersection,
    /// Strings present in either; absentees count 0
    Union,
}

#[derive(Clone, Copy, ValueEnum)]
enum RowsArg {
    /// Only the last row or snapshot
    Final,
    /// Every row or snapshot
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    /// Canonical, reloadable document
    Json,
    /// string,count,frequency table (export only)
    Csv,
}

#[derive(Args)]
struct EnumerateArgs {
    /// Operating states n of the (n,2) space
    #[arg(long)]
    states: u32,
    /// Step cap per run; cap-exceeded machines contribute nothing
    #[arg(long, default_value_t = 1000)]
    cap: u64,
    /// Initial tape regime
    #[arg(long, value_enum, default_value_t = InitArg::Blank)]
    init: InitArg,
    /// Random tape segment length (random init only)
    #[arg(long, required_if_eq("init", "random"))]
    seg_len: Option<u32>,
    /// Random tapes per machine (random init only)
    #[arg(long, required_if_eq("init", "random"))]
    samples: Option<u32>,
    /// PRNG seed (random init only)
    #[arg(long, required_if_eq("init", "random"))]
    seed: Option<u64>,
    /// Worker threads; 0 means one per core
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Distribution output file
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
}

#[derive(Args)]
struct BusyBeaverArgs {
    /// Operating states n of the (n,2) space
    #[arg(long)]
    states: u32,
    /// Step cap per run
    #[arg(long, default_value_t = 1000)]
    cap: u64,
    /// Worker threads; 0 means one per core
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

#[derive(Args)]
#[command(group(
    ArgGroup::new("emit").args(["k", "pbm_dir"]).required(true).multiple(true)
))]
struct CaArgs {
    /// 1 for elementary, 2 for 2D totalistic (Moore neighborhood)
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    dims: u8,
    /// Rule code: 0..=255 for --dims 1, 0..=1023 for --dims 2
    #[arg(long)]
    rule: u16,
    /// Row width (1D) or grid width (2D)
    #[arg(long)]
    width: u32,
    /// Grid height (2D only)
    #[arg(long, required_if_eq("dims", "2"))]
    height: Option<u32>,
    /// Evolution steps
    #[arg(long)]
    steps: u32,
    /// Keep a 2D snapshot every this many steps
    #[arg(long, default_value_t = 1)]
    snapshot_every: u32,
    /// Initial row for 1D runs (2D always starts from a seeded random grid)
    #[arg(long, value_enum, default_value_t = CaInitArg::Single)]
    init: CaInitArg,
    /// PRNG seed (random init, and all 2D runs)
    #[arg(long, required_if_eq_any([("dims", "2"), ("init", "random")]))]
    seed: Option<u64>,
    /// Tuple length to harvest into a distribution
    #[arg(long, requires = "out")]
    k: Option<u32>,
    /// Cut overlapping sliding windows (default)
    #[arg(long, overrides_with = "no_overlap")]
    overlap: bool,
    /// Cut disjoint blocks instead, discarding the remainder
    #[arg(long, overrides_with = "overlap")]
    no_overlap: bool,
    /// Which rows (1D) or snapshots (2D) contribute windows
    #[arg(long, value_enum, default_value_t = RowsArg::Final)]
    rows: RowsArg,
    /// Distribution output file (with --k)
    #[arg(long, requires = "k")]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    /// Directory for PBM images: the 1D space-time diagram, or one file per 2D snapshot
    #[arg(long)]
    pbm_dir: Option<PathBuf>,
}

#[derive(Args)]
struct IngestArgs {
    /// Data file to binarize
    #[arg(long)]
    file: PathBuf,
    #[arg(long, value_enum, default_value_t = BinarizeArg::Rawbits)]
    binarize: BinarizeArg,
    /// Tuple length
    #[arg(long)]
    k: u32,
    /// Cut overlapping sliding windows (default)
    #[arg(long, overrides_with = "no_overlap")]
    overlap: bool,
    /// Cut disjoint blocks instead, discarding the remainder
    #[arg(long, overrides_with = "overlap")]
    no_overlap: bool,
    /// Distribution output file
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
}

#[derive(Args)]
struct CompareArgs {
    /// First saved distribution
    #[arg(long)]
    a: PathBuf,
    /// Second saved distribution
    #[arg(long)]
    b: PathBuf,
    /// String length to align the supports on
    #[arg(long)]
    k: u32,
    #[arg(long, value_enum, default_value_t = PolicyArg::Intersection)]
    policy: PolicyArg,
    /// Shuffles in the permutation test
    #[arg(long, default_value_t = 999)]
    permutations: u32,
    /// Permutation-test seed
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Write the full JSON report here
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
#[command(group(ArgGroup::new("task").args(["count", "orbit", "collapse"]).required(true)))]
struct SymmetryArgs {
    /// Print the number of symmetry classes of length-n binary strings
    #[arg(long)]
    count: Option<u32>,
    /// Print the orbit and canonical form of a binary string
    #[arg(long)]
    orbit: Option<String>,
    /// Collapse a saved distribution onto canonical representatives
    #[arg(long, requires = "out")]
    collapse: Option<PathBuf>,
    /// Output file for --collapse
    #[arg(long, requires = "collapse")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ComplexityArgs {
    /// Saved distribution file
    #[arg(long)]
    file: PathBuf,
    /// Binary string to look up
    #[arg(long)]
    string: String,
}

#[derive(Args)]
struct PiArgs {
    /// Decimal digits to generate, starting "3141..."
    #[arg(long)]
    digits: usize,
    /// Write the digits here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also print deflate ratios of the digits vs a seeded noise stream
    #[arg(long)]
    report_compression: bool,
    /// Seed for the noise stream
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(cmd: Command) -> Result<()> {
    match cmd {
        Command::Enumerate(a) => cmd_enumerate(a),
        Command::Busybeaver(a) => cmd_busybeaver(a),
        Command::Ca(a) => cmd_ca(a),
        Command::Ingest(a) => cmd_ingest(a),
        Command::Compare(a) => cmd_compare(a),
        Command::Symmetry(a) => cmd_symmetry(a),
        Command::Complexity(a) => cmd_complexity(a),
        Command::Pi(a) => cmd_pi(a),
    }
}

/// Resolves the --overlap/--no-overlap pair; overlapping is the default.
fn overlap_flag(overlap: bool, no_overlap: bool) -> bool {
    overlap || !no_overlap
}

fn warn_if_huge(states: u32) {
    if states >= 4 {
        if let Ok(size) = tm::space_size(states) {
            eprintln!("note: the ({states},2) space has {size} machines; expect a very long run");
        }
    }
}

fn write_distribution(d: &PatternDistribution, out: &Path, format: FormatArg) -> Result<()> {
    match format {
        FormatArg::Json => persist::save_distribution(d, out),
        FormatArg::Csv => persist::export_csv(d, out),
    }
}

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn cmd_enumerate(a: EnumerateArgs) -> Result<()> {
    warn_if_huge(a.states);
    let init = match a.init {
        InitArg::Blank => InitMode::Blank,
        InitArg::Random => InitMode::RandomSegment {
            len: a.seg_len.expect("required by clap"),
            samples: a.samples.expect("required by clap"),
        },
    };
    let opts = EnumOptions {
        workers: a.workers,
        ..EnumOptions::default()
    };
    let d = build_distribution(a.states, a.cap, init, a.seed, &opts)?;
    write_distribution(&d, &a.out, a.format)?;
    println!(
        "total_runs={} contributing={} support={} out={}",
        d.total_runs(),
        d.contributing_runs(),
        d.support_size(),
        a.out.display()
    );
    Ok(())
}

fn cmd_busybeaver(a: BusyBeaverArgs) -> Result<()> {
    warn_if_huge(a.states);
    let opts = EnumOptions {
        workers: a.workers,
        ..EnumOptions::default()
    };
    let r = busy_beaver_search(a.states, a.cap, &opts)?;
    println!(
        "sigma={} s_max={} halting={}/{}",
        r.sigma, r.s_max, r.halting_count, r.total_count
    );
    Ok(())
}

fn cmd_ca(a: CaArgs) -> Result<()> {
    let overlap = overlap_flag(a.overlap, a.no_overlap);
    let rows = match a.rows {
        RowsArg::Final => RowSelection::Final,
        RowsArg::All => RowSelection::All,
    };
    if let Some(dir) = &a.pbm_dir {
        fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    }
    if a.dims == 1 {
        let rule = u8::try_from(a.rule).map_err(|_| {
            Error::Parameter(format!(
                "rule {} does not fit an elementary automaton (0..=255)",
                a.rule
            ))
        })?;
        let init = match a.init {
            CaInitArg::Single => EcaInit::SingleOne,
            CaInitArg::Random => EcaInit::RandomBits(a.seed.expect("required by clap")),
        };
        let st = eca_run(rule, a.width as usize, a.steps, init)?;
        if let Some(dir) = &a.pbm_dir {
            let path = dir.join(format!("eca-rule{rule}.pbm"));
            persist::write_pbm(&st.to_matrix(), &path)?;
            println!("pbm={}", path.display());
        }
        if let Some(k) = a.k {
            let d = cutoff_distribution((&st).into(), k, overlap, rows)?;
            let out = a.out.as_ref().expect("required by clap");
            write_distribution(&d, out, a.format)?;
            println!(
                "windows={} support={} out={}",
                d.total_runs(),
                d.support_size(),
                out.display()
            );
        }
    } else {
        let height = a.height.expect("required by clap") as usize;
        let seed = a.seed.expect("required by clap");
        let g = ca2d_run(
            a.rule,
            (height, a.width as usize),
            a.steps,
            seed,
            a.snapshot_every,
        )?;
        if let Some(dir) = &a.pbm_dir {
            for (t, m) in g.snapshots() {
                let path = dir.join(format!("ca2d-rule{}-t{t:06}.pbm", a.rule));
                persist::write_pbm(m, &path)?;
            }
            println!(
                "pbm_count={} dir={}",
                g.snapshots().len(),
                dir.display()
            );
        }
        if let Some(k) = a.k {
            let d = cutoff_distribution((&g).into(), k, overlap, rows)?;
            let out = a.out.as_ref().expect("required by clap");
            write_distribution(&d, out, a.format)?;
            println!(
                "windows={} support={} out={}",
                d.total_runs(),
                d.support_size(),
                out.display()
            );
        }
    }
    Ok(())
}

fn cmd_ingest(a: IngestArgs) -> Result<()> {
    let overlap = overlap_flag(a.overlap, a.no_overlap);
    let bytes = fs::read(&a.file).map_err(|e| io_err(&a.file, e))?;
    let method = match a.binarize {
        BinarizeArg::Rawbits => BinarizeMethod::RawBits,
        BinarizeArg::Median => BinarizeMethod::ThresholdMedian,
    };
    let name = a.file.display().to_string();
    let stream = binarize(&bytes, method, &name)?;
    let d = tuple_counts(&stream, a.k, overlap)?;
    write_distribution(&d, &a.out, a.format)?;
    println!(
        "bits={} windows={} support={} out={}",
        stream.len(),
        d.total_runs(),
        d.support_size(),
        a.out.display()
    );
    Ok(())
}

fn cmd_compare(a: CompareArgs) -> Result<()> {
    let da = persist::load_distribution(&a.a)?;
    let db = persist::load_distribution(&a.b)?;
    let policy = match a.policy {
        PolicyArg::Intersection => SupportPolicy::Intersection,
        PolicyArg::Union => SupportPolicy::UnionWithZeros,
    };
    let r = compare_report(&da, &db, a.k, policy, a.permutations, a.seed)?;
    println!(
        "rho={} p_value={} pairs={} k={}",
        r.rho, r.p_value, r.pair_count, r.k
    );
    if let Some(out) = &a.out {
        persist::save_report(&r, out)?;
    }
    Ok(())
}

fn cmd_symmetry(a: SymmetryArgs) -> Result<()> {
    if let Some(n) = a.count {
        println!("{}", burnside_count(n)?);
    } else if let Some(s) = &a.orbit {
        let o = orbit(s)?;
        let members: Vec<&str> = o.members().iter().map(String::as_str).collect();
        println!("canonical={} orbit={}", o.canonical(), members.join(","));
    } else if let Some(path) = &a.collapse {
        let d = persist::load_distribution(path)?;
        let c = collapse_by_symmetry(&d);
        let out = a.out.as_ref().expect("required by clap");
        persist::save_distribution(&c, out)?;
        println!("support={} out={}", c.support_size(), out.display());
    }
    Ok(())
}

fn cmd_complexity(a: ComplexityArgs) -> Result<()> {
    let d = persist::load_distribution(&a.file)?;
    let bits = d.ctm_complexity(&a.string)?;
    let rank = d.rank_of(&a.string, false)?;
    let rank_len = d.rank_of(&a.string, true)?;
    println!("string={} bits={bits} rank={rank} rank_len={rank_len}", a.string);
    Ok(())
}

fn cmd_pi(a: PiArgs) -> Result<()> {
    let digits = pi_digits(a.digits)?;
    match &a.out {
        Some(path) => {
            fs::write(path, format!("{digits}\n")).map_err(|e| io_err(path, e))?;
            println!("digits={} out={}", a.digits, path.display());
        }
        None => println!("{digits}"),
    }
    if a.report_compression {
        let pi_ratio = compression_ratio(digits.as_bytes())?;
        let mut rng = Prng::seeded(a.seed);
        let noise: Vec<u8> = (0..digits.len())
            .map(|_| b'0' + rng.below(10) as u8)
            .collect();
        let random_ratio = compression_ratio(&noise)?;
        println!("pi_ratio={pi_ratio:.4} random_ratio={random_ratio:.4}");
    }
    Ok(())
}
