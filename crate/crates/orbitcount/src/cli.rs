//! Command-line interface.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use orbitcount_core::apollonian::{
    default_root, descartes_value, root_reduce, CirclePlan, DescartesQuadruple, PackingKind,
};
use orbitcount_core::form::FormKind;
use orbitcount_core::orbit::{
    count_series, default_base_point, group_growth, Cone, GeneratorSet, Norm, OrbitVector, WalkOptions,
};
use orbitcount_core::powerfit::{fit_exponential, fit_power_law, geometric_points, linear_grid, CountSeries};
use orbitcount_core::{Error as CoreError, Limits};

use crate::error::{CliError, CliResult};
use crate::genfile::GenFile;
use crate::verify::{run_suites, Suite, VerifyConfig};
use crate::{parallel, report, series_csv};

/// Environment variable capping frontier memory, in MiB.
pub const MEM_LIMIT_ENV: &str = "ORBITCOUNT_MEM_LIMIT_MB";

/// Rough size of one live frontier entry, used to turn the memory cap into
/// an entry count.
const FRONTIER_ENTRY_BYTES: usize = 128;

/// Minimum number of points in a count grid.
pub const MIN_GRID_POINTS: usize = 8;

#[derive(Debug, Parser)]
#[command(
    name = "orbitcount",
    version,
    about = "Count orbit points of Apollonian and hyperbolic reflection groups"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate N(T), the number of circles with |curvature| < T, as CSV.
    Count(CountArgs),
    /// Fit N(T) ~ c T^alpha to a CSV table and report JSON.
    Fit(FitArgs),
    /// Count orbit vectors w0 g with ||w0 g|| < T, optionally within a cone.
    Orbit(OrbitArgs),
    /// Estimate the critical exponent from ball growth and report JSON.
    Exponent(ExponentArgs),
    /// Run the invariant suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long, default_value_t = 100.0)]
    pub tmin: f64,
    #[arg(long, default_value_t = 1e6)]
    pub tmax: f64,
    /// Number of geometrically spaced grid points.
    #[arg(long, default_value_t = 32)]
    pub grid: usize,
}

impl GridArgs {
    fn points(&self) -> CliResult<Vec<f64>> {
        if self.grid < MIN_GRID_POINTS {
            return Err(CliError::invalid(format!("--grid must be at least {MIN_GRID_POINTS}")));
        }
        Ok(geometric_points(self.tmin, self.tmax, self.grid)?)
    }
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[arg(long, default_value = "euclidean")]
    pub kind: String,
    /// Comma-separated curvatures; defaults to -1,2,2,3 (euclidean) or 0,0,0,2 (hyperbolic).
    #[arg(long, allow_hyphen_values = true)]
    pub root: Option<String>,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// Output CSV; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// CSV table with header `T,N`.
    #[arg(long)]
    pub input: PathBuf,
    /// Fit window `lo:hi`; defaults to dropping the first decade.
    #[arg(long)]
    pub window: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OrbitArgs {
    /// Generator file; the Apollonian swaps when absent.
    #[arg(long)]
    pub gens: Option<PathBuf>,
    /// Starting vector; defaults to -1,2,2,3 for the Descartes form.
    #[arg(long, allow_hyphen_values = true)]
    pub w0: Option<String>,
    #[arg(long, default_value = "max")]
    pub norm: String,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Cone axis, comma-separated.
    #[arg(long, allow_hyphen_values = true, requires = "cone_radius")]
    pub cone_axis: Option<String>,
    /// Cone angular radius in radians.
    #[arg(long, requires = "cone_axis")]
    pub cone_radius: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExponentArgs {
    /// Generator file; the Apollonian swaps when absent.
    #[arg(long)]
    pub gens: Option<PathBuf>,
    #[arg(long, default_value_t = 4.0)]
    pub rmin: f64,
    #[arg(long, default_value_t = 11.0)]
    pub rmax: f64,
    #[arg(long, default_value_t = 0.5)]
    pub rstep: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Suites to run (repeatable); all when absent.
    #[arg(long, value_enum)]
    pub suite: Vec<Suite>,
    /// Check these generators in the form and involution suites.
    #[arg(long)]
    pub gens: Option<PathBuf>,
    /// Seed for randomized sampling.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Frontier limits, honouring the memory cap in the environment.
pub fn limits_from_env() -> CliResult<Limits> {
    match std::env::var(MEM_LIMIT_ENV) {
        Ok(v) => {
            let mb: usize = v
                .trim()
                .parse()
                .map_err(|_| CliError::invalid(format!("{MEM_LIMIT_ENV} must be a whole number of MiB, got `{v}`")))?;
            Ok(Limits {
                max_frontier: (mb << 20) / FRONTIER_ENTRY_BYTES,
            })
        }
        Err(_) => Ok(Limits::default()),
    }
}

fn parse_ints(s: &str, what: &str) -> CliResult<Vec<BigInt>> {
    s.split(',')
        .map(|x| x.trim().parse::<BigInt>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::invalid(format!("{what} must be comma-separated integers, got `{s}`")))
}

fn parse_floats(s: &str, what: &str) -> CliResult<Vec<f64>> {
    s.split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::invalid(format!("{what} must be comma-separated numbers, got `{s}`")))
}

pub fn parse_window(s: &str) -> CliResult<(f64, f64)> {
    let bad = || CliError::invalid(format!("window must be `lo:hi`, got `{s}`"));
    let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(bad());
    }
    Ok((lo, hi))
}

/// Parse and check a root quadruple against the form value of its kind.
pub fn parse_root(kind: PackingKind, root: Option<&str>) -> CliResult<DescartesQuadruple> {
    let Some(text) = root else {
        return default_root(kind).ok_or_else(|| CliError::invalid(format!("--root is required for {kind} packings")));
    };
    let v = parse_ints(text, "--root")?;
    let c: [BigInt; 4] = v
        .try_into()
        .map_err(|v: Vec<BigInt>| CliError::invalid(format!("--root needs 4 curvatures, got {}", v.len())))?;
    let q = descartes_value(&c);
    DescartesQuadruple::new(c, kind).map_err(|_| {
        CliError::invalid(format!(
            "root ({text}) has Q = {q}, but {kind} packings need Q = q(*) = {}",
            kind.target()
        ))
    })
}

fn write_csv(series: &CountSeries, out: Option<&Path>) -> CliResult<()> {
    match out {
        Some(p) => series_csv::save(p, series),
        None => {
            let stdout = std::io::stdout();
            series_csv::write_series(stdout.lock(), series).map_err(|e| CliError::Io(format!("stdout: {e}")))
        }
    }
}

fn load_gens(path: Option<&Path>) -> CliResult<GeneratorSet> {
    match path {
        Some(p) => GenFile::load(p)?.generator_set(),
        None => Ok(GeneratorSet::apollonian()),
    }
}

fn memory_hint(e: CoreError) -> CliError {
    match e {
        CoreError::MemoryGuard { .. } => CliError::invalid(format!("{e}; raise {MEM_LIMIT_ENV} or lower --tmax")),
        e => e.into(),
    }
}

pub fn cmd_count(args: &CountArgs) -> CliResult<()> {
    let kind: PackingKind = args.kind.parse()?;
    let given = parse_root(kind, args.root.as_deref())?;
    let root = root_reduce(&given)?;
    if args.threads == 0 {
        return Err(CliError::invalid("--threads must be at least 1"));
    }
    let grid = args.grid.points()?;
    let limits = limits_from_env()?;
    let start = Instant::now();
    let plan = CirclePlan::new(root.clone(), &grid)?;
    let (series, stats) = parallel::run_plan(&plan, args.threads, &limits).map_err(memory_hint)?;
    write_csv(&series, args.out.as_deref())?;
    let mut err = std::io::stderr().lock();
    let _ = writeln!(
        err,
        "root {root} ({kind}): {} circles below T = {}; runtime {:.3} s; peak frontier {}; nodes {}",
        series.counts().last().copied().unwrap_or(0),
        series_csv::format_t(*grid.last().expect("non-empty")),
        start.elapsed().as_secs_f64(),
        stats.peak_frontier,
        stats.nodes,
    );
    Ok(())
}

pub fn cmd_fit(args: &FitArgs) -> CliResult<()> {
    let series = series_csv::load(&args.input)?;
    let window = args.window.as_deref().map(parse_window).transpose()?;
    let fit = fit_power_law(&series, window)?;
    report::emit(&report::fit_json(&series, &fit), args.out.as_deref())
}

pub fn cmd_orbit(args: &OrbitArgs) -> CliResult<()> {
    let gens = load_gens(args.gens.as_deref())?;
    let w0 = match &args.w0 {
        Some(s) => OrbitVector::Exact(parse_ints(s, "--w0")?),
        None if gens.form().kind() == FormKind::Descartes => {
            OrbitVector::Exact([-1, 2, 2, 3].into_iter().map(BigInt::from).collect())
        }
        None => return Err(CliError::invalid("--w0 is required for this form")),
    };
    let norm: Norm = args.norm.parse()?;
    let cone = match (&args.cone_axis, args.cone_radius) {
        (Some(axis), Some(r)) => Some(Cone::new(parse_floats(axis, "--cone-axis")?, r)?),
        _ => None,
    };
    let grid = args.grid.points()?;
    let opts = WalkOptions {
        limits: limits_from_env()?,
        ..WalkOptions::default()
    };
    let series = count_series(&gens, &w0, norm, &grid, cone.as_ref(), &opts).map_err(memory_hint)?;
    write_csv(&series, args.out.as_deref())
}

pub fn cmd_exponent(args: &ExponentArgs) -> CliResult<()> {
    let gens = load_gens(args.gens.as_deref())?;
    let grid = linear_grid(args.rmin, args.rmax, args.rstep)?;
    if grid.len() < 4 {
        return Err(CliError::invalid("radius grid needs at least 4 points"));
    }
    let opts = WalkOptions {
        limits: limits_from_env()?,
        ..WalkOptions::default()
    };
    let o = default_base_point(gens.form());
    let series = group_growth(&gens, &o, &grid, &opts).map_err(memory_hint)?;
    let fit = fit_exponential(&series, None)?;
    report::emit(&report::exponent_json(&series, &fit), args.out.as_deref())
}

pub fn cmd_verify(args: &VerifyArgs) -> CliResult<()> {
    let gens = args.gens.as_deref().map(GenFile::load).transpose()?;
    let cfg = VerifyConfig { seed: args.seed, gens };
    let suites = if args.suite.is_empty() {
        Suite::ALL.to_vec()
    } else {
        args.suite.clone()
    };
    let outcomes = run_suites(&suites, &cfg);
    for o in &outcomes {
        println!("{o}");
    }
    let failed: Vec<&str> = outcomes
        .iter()
        .filter(|o| !o.passed())
        .map(|o| o.suite.name())
        .collect();
    if failed.is_empty() {
        println!("all {} suites passed", outcomes.len());
        Ok(())
    } else {
        Err(CliError::Verification(format!("failing suites: {}", failed.join(", "))))
    }
}

pub fn run(config: &RunConfig) -> CliResult<()> {
    match &config.command {
        Command::Count(a) => cmd_count(a),
        Command::Fit(a) => cmd_fit(a),
        Command::Orbit(a) => cmd_orbit(a),
        Command::Exponent(a) => cmd_exponent(a),
        Command::Verify(a) => cmd_verify(a),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_validation_names_target() {
        let err = parse_root(PackingKind::Hyperbolic, Some("-1,2,2,3")).unwrap_err();
        let msg = err.to_string();
        assert_eq!(err.exit_code(), 2);
        assert!(msg.contains("Q = 0") && msg.contains("= 4"), "{msg}");
        assert!(parse_root(PackingKind::Euclidean, Some("-1,2,2")).is_err());
        assert!(parse_root(PackingKind::Spherical, None).is_err());
        assert!(parse_root(PackingKind::Spherical, Some("0,1,1,2")).is_ok());
    }

    #[test]
    fn window_parsing() {
        assert_eq!(parse_window("1e4:1e6").unwrap(), (1e4, 1e6));
        assert!(parse_window("1e6:1e4").is_err());
        assert!(parse_window("1e4").is_err());
        assert!(parse_window("a:b").is_err());
    }

    #[test]
    fn negative_root_parses_as_value() {
        let cfg = RunConfig::try_parse_from(["orbitcount", "count", "--root", "-1,2,2,3", "--grid", "8"]).unwrap();
        let Command::Count(a) = cfg.command else { panic!() };
        assert_eq!(a.root.as_deref(), Some("-1,2,2,3"));
    }

    #[test]
    fn small_grids_rejected() {
        let g = GridArgs {
            tmin: 10.0,
            tmax: 100.0,
            grid: 7,
        };
        assert!(g.points().is_err());
    }
}
