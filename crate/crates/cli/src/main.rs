mod spec;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use biso_core::lorenz::{biso_curve, lorenz_of_curve, write_curve_csv};
use biso_core::ordering::{
    crossing_sets, essentially_less_noisy_equal_cap, more_capable_lorenz_verdict, more_capable_numeric,
    suggest_dominant, Interval, DEFAULT_GRID,
};
use biso_core::regions::{
    equivalence_report, f_profile, ob_region, rtd_region, superposition_region, td_region, write_region_csv,
    RateRegion, PROFILE_GRID, SWEEP_WEIGHTS,
};
use biso_core::verify::{run_suite, Suite, DEFAULT_SEED};
use biso_core::{BisoChannel, Error, Tolerance};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::spec::{ChannelSpec, ParseError};

#[derive(Parser)]
#[command(name = "biso", version, about = "Compare BISO channels and their broadcast rate regions")]
struct Cli {
    /// Absolute tolerance for non-strict comparisons
    #[arg(long, global = true, default_value_t = 1e-9, allow_negative_numbers = true)]
    tol: f64,

    /// Print machine-readable JSON instead of text
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Capacity, symbol pairs, BISO curve and Lorenz breakpoints of a channel
    Info {
        spec: PathBuf,
        /// Write the curve breakpoints `t,f,F` to this CSV file
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// More-capable and essentially-less-noisy verdicts for two channels
    Compare {
        spec1: PathBuf,
        spec2: PathBuf,
        /// Rescale the second channel within its BSC/BEC family to the first one's capacity
        #[arg(long)]
        equalize: bool,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
    },
    /// Rate-region frontiers and maximum sum rates
    Region {
        spec1: PathBuf,
        spec2: PathBuf,
        #[arg(long, value_enum, default_value_t = BoundArg::All)]
        bound: BoundArg,
        /// Write the frontier points to this CSV file
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, default_value_t = PROFILE_GRID)]
        grid: usize,
        #[arg(long, default_value_t = SWEEP_WEIGHTS)]
        weights: usize,
    },
    /// Run the bundled acceptance checks
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::Paper)]
        suite: SuiteArg,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BoundArg {
    Td,
    Sup,
    Rtd,
    Ob,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Paper,
    Random,
}

const EXIT_PRECONDITION: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_CONSISTENCY: u8 = 3;

/// A check of `biso verify` failed.
#[derive(Debug, thiserror::Error)]
#[error("{0} of the checks failed")]
struct ChecksFailed(usize);

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<ParseError>().is_some() {
        return EXIT_INVALID;
    }
    if err.downcast_ref::<ChecksFailed>().is_some() {
        return EXIT_CONSISTENCY;
    }
    match err.downcast_ref::<Error>() {
        Some(Error::EquivalenceViolation(_)) => EXIT_CONSISTENCY,
        Some(Error::Precondition(_) | Error::CapacityMismatch { .. }) => EXIT_PRECONDITION,
        Some(Error::Csv(_) | Error::Io(_)) => EXIT_PRECONDITION,
        Some(_) => EXIT_INVALID,
        None if err.downcast_ref::<io::Error>().is_some() => EXIT_INVALID,
        None => EXIT_PRECONDITION,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn run(cli: &Cli) -> Result<()> {
    let tol = Tolerance::default().with_abs_eps(cli.tol)?;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match &cli.command {
        Command::Info { spec, csv } => info(&mut out, cli.json, spec, csv.as_deref()),
        Command::Compare {
            spec1,
            spec2,
            equalize,
            grid,
        } => compare(&mut out, cli.json, &tol, spec1, spec2, *equalize, *grid),
        Command::Region {
            spec1,
            spec2,
            bound,
            csv,
            grid,
            weights,
        } => region(&mut out, cli.json, &tol, spec1, spec2, *bound, csv.as_deref(), *grid, *weights),
        Command::Verify { suite, seed } => verify(&mut out, cli.json, *suite, *seed),
    }
}

fn load(path: &Path) -> Result<(ChannelSpec, BisoChannel)> {
    let spec = ChannelSpec::load(path)?;
    let ch = spec.build().with_context(|| format!("invalid channel in {}", path.display()))?;
    Ok((spec, ch))
}

fn csv_file(path: &Path) -> Result<BufWriter<File>> {
    let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn info(out: &mut impl Write, as_json: bool, path: &Path, csv: Option<&Path>) -> Result<()> {
    let (_, ch) = load(path)?;
    let curve = biso_curve(&ch);
    let lz = lorenz_of_curve(&curve);
    if let Some(p) = csv {
        write_curve_csv(&ch, csv_file(p)?)?;
    }
    if as_json {
        let v = json!({
            "label": ch.label(),
            "capacity": ch.capacity(),
            "raw_outputs": ch.raw_output_count(),
            "pairs": ch.pairs(),
            "partition": curve.partition().points(),
            "curve": curve.values(),
            "lorenz": lz.cumulative(),
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&v)?)?;
        return Ok(());
    }
    writeln!(out, "channel   {}", ch.label())?;
    writeln!(out, "capacity  {:.15}", ch.capacity())?;
    writeln!(out, "outputs   {}", ch.raw_output_count())?;
    writeln!(out)?;
    writeln!(out, "{:>4}  {:>18}  {:>18}  {:>18}  {:>18}", "k", "p_k", "p_-k", "ratio", "h(ratio)")?;
    for (k, p) in ch.pairs().iter().enumerate() {
        writeln!(
            out,
            "{:>4}  {:>18.15}  {:>18.15}  {:>18.15}  {:>18.15}",
            k + 1,
            p.pos,
            p.neg,
            p.ratio(),
            p.entropy()
        )?;
    }
    writeln!(out)?;
    writeln!(out, "{:>18}  {:>18}  {:>18}", "t", "f(t-)", "F(t)")?;
    for (k, &t) in curve.partition().points().iter().enumerate() {
        let f = if k == 0 { 0.0 } else { curve.values()[k - 1] };
        writeln!(out, "{:>18.15}  {:>18.15}  {:>18.15}", t, f, lz.cumulative()[k])?;
    }
    Ok(())
}

fn equalized(spec2: &ChannelSpec, ch2: BisoChannel, c1: f64, equalize: bool) -> Result<BisoChannel> {
    if !equalize {
        return Ok(ch2);
    }
    match spec2.rescaled(c1) {
        Some(ch) => Ok(ch?),
        None => Err(Error::Precondition(
            "--equalize only rescales bsc and bec specs; give the second channel as one of those".into(),
        )
        .into()),
    }
}

fn fmt_intervals(set: &[Interval]) -> String {
    if set.is_empty() {
        return "empty".into();
    }
    set.iter()
        .map(|i| format!("[{:.6}, {:.6}]", i.lo, i.hi))
        .collect::<Vec<_>>()
        .join(" u ")
}

fn compare(
    out: &mut impl Write,
    as_json: bool,
    tol: &Tolerance,
    p1: &Path,
    p2: &Path,
    equalize: bool,
    grid: usize,
) -> Result<()> {
    let (_, ch1) = load(p1)?;
    let (spec2, ch2) = load(p2)?;
    let ch2 = equalized(&spec2, ch2, ch1.capacity(), equalize)?;
    let (c1, c2) = (ch1.capacity(), ch2.capacity());
    let equal = (c1 - c2).abs() <= tol.capacity_eps;

    let numeric = more_capable_numeric(&ch1, &ch2, grid, tol)?;
    let lorenz = if equal { more_capable_lorenz_verdict(&ch1, &ch2, tol)? } else { None };
    let eln = if equal {
        Some(essentially_less_noisy_equal_cap(&ch1, &ch2, grid, tol)?)
    } else {
        None
    };
    let sets = crossing_sets(&ch1, &ch2, grid, tol);

    if as_json {
        let v = json!({
            "first": ch1.label(),
            "second": ch2.label(),
            "capacities": [c1, c2],
            "lorenz": lorenz,
            "numeric": numeric,
            "kind": numeric.kind(),
            "essentially_less_noisy": eln,
            "crossing_sets": sets,
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&v)?)?;
        return Ok(());
    }
    writeln!(out, "first     {}  C = {:.15}", ch1.label(), c1)?;
    writeln!(out, "second    {}  C = {:.15}", ch2.label(), c2)?;
    writeln!(out, "gap       {:.3e}", (c1 - c2).abs())?;
    match (&lorenz, equal) {
        (Some(v), _) => writeln!(out, "lorenz    {}", v.kind())?,
        (None, true) => writeln!(out, "lorenz    inconclusive (curves cross)")?,
        (None, false) => writeln!(out, "lorenz    not applicable (capacities differ)")?,
    }
    writeln!(out, "numeric   {}", numeric.record())?;
    if let Some(v) = &eln {
        writeln!(out, "eln       {}", v.record())?;
    }
    writeln!(out, "I         {}", fmt_intervals(&sets.i_set))?;
    writeln!(out, "J         {}", fmt_intervals(&sets.j_set))?;
    writeln!(out, "verdict   {}", numeric.kind())?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn region(
    out: &mut impl Write,
    as_json: bool,
    tol: &Tolerance,
    p1: &Path,
    p2: &Path,
    bound: BoundArg,
    csv: Option<&Path>,
    grid: usize,
    weights: usize,
) -> Result<()> {
    let (_, ch1) = load(p1)?;
    let (_, ch2) = load(p2)?;
    let wants = |b: BoundArg| bound == b || bound == BoundArg::All;

    let mut regions: Vec<RateRegion> = Vec::new();
    let mut notes = Vec::new();
    if wants(BoundArg::Td) {
        regions.push(td_region(ch1.capacity(), ch2.capacity()));
    }
    if wants(BoundArg::Sup) {
        let (dominant, rule) = suggest_dominant(&ch1, &ch2, DEFAULT_GRID, tol)?;
        notes.push(format!("superposition: {dominant:?} receiver decodes both ({rule})"));
        regions.push(superposition_region(&ch1, &ch2, dominant, grid));
    }
    let (prof1, prof2) = (f_profile(&ch1, grid), f_profile(&ch2, grid));
    if wants(BoundArg::Rtd) {
        regions.push(rtd_region(&prof1, &prof2, weights, tol)?);
    }
    if wants(BoundArg::Ob) {
        regions.push(ob_region(&prof1, &prof2, weights, tol)?);
    }
    let equal = (ch1.capacity() - ch2.capacity()).abs() <= tol.capacity_eps;
    let report = if bound == BoundArg::All && equal {
        Some(equivalence_report(&ch1, &ch2, grid, tol)?)
    } else {
        None
    };

    if let Some(p) = csv {
        let mut buf = Vec::new();
        for (k, r) in regions.iter().enumerate() {
            let mut part = Vec::new();
            write_region_csv(r, &mut part)?;
            let skip = if k == 0 { 0 } else { part.iter().position(|&b| b == b'\n').map_or(0, |i| i + 1) };
            buf.extend_from_slice(&part[skip..]);
        }
        csv_file(p)?.write_all(&buf)?;
    }

    if as_json {
        let v = json!({
            "first": ch1.label(),
            "second": ch2.label(),
            "capacities": [ch1.capacity(), ch2.capacity()],
            "regions": regions,
            "notes": notes,
            "equivalence": report,
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&v)?)?;
        return Ok(());
    }
    writeln!(out, "first     {}  C = {:.15}", ch1.label(), ch1.capacity())?;
    writeln!(out, "second    {}  C = {:.15}", ch2.label(), ch2.capacity())?;
    for n in &notes {
        writeln!(out, "note      {n}")?;
    }
    writeln!(out)?;
    writeln!(out, "{:<6}  {:>18}  {:>8}", "bound", "max sum rate", "points")?;
    for r in &regions {
        writeln!(out, "{:<6}  {:>18.15}  {:>8}", r.bound.name(), r.max_sum_rate, r.frontier.len())?;
    }
    if let Some(r) = &report {
        writeln!(out)?;
        writeln!(out, "equivalence (strict margin {:.1e})", tol.strict_margin)?;
        for (name, p) in r.predicates() {
            writeln!(out, "  {:<16} {:<5} margin {:+.6e}", name, p.holds, p.margin)?;
        }
        if let Some((s1, s2)) = r.crossing_witness {
            writeln!(out, "  witness          s1 = {s1:.6}, s2 = {s2:.6}")?;
        }
        if r.marginal {
            writeln!(out, "  note             predicates split only within the margin band")?;
        }
    }
    Ok(())
}

fn verify(out: &mut impl Write, as_json: bool, suite: SuiteArg, seed: u64) -> Result<()> {
    let suite = match suite {
        SuiteArg::Paper => Suite::Paper,
        SuiteArg::Random => Suite::Random,
    };
    let results = run_suite(suite, seed);
    if as_json {
        writeln!(out, "{}", serde_json::to_string_pretty(&results)?)?;
    } else {
        for r in &results {
            writeln!(out, "{r}")?;
        }
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    if failed > 0 {
        bail!(ChecksFailed(failed));
    }
    Ok(())
}
