//! `radon`: sieve tables, collision census, kernel checks, transform series
//! and level-set probes from the command line.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod output;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::Result;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use radon_census::arith::{cache, ArithFn, ArithName, ArithTable, FnSpec};
use radon_census::census::{census_grid, star_report, strip_bounds};
use radon_census::kernel::{DyadicKernel, KernelPiece, Smoothing};
use radon_census::par::{self, Exec};
use radon_census::probe::{
    geometric_lambdas, level_sets, maximal_operator, reachable_window, v_census_bound, v_exact,
    Window,
};
use radon_census::signal::{CauchyProfile, CompactSignal, Signal};
use radon_census::transform::{figure_series, tail_budget};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use output::{emit, Cell, Format, Table};

#[derive(Parser)]
#[command(name = "radon", version, about)]
struct Cli {
    /// Worker threads for parallel stages (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
    /// Output encoding.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Seed for randomly drawn signals.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate an arithmetic function as `n,value`.
    Sieve(SieveArgs),
    /// Collision counts over dyadic strips as `j1,j2,M,N,count,ratio`.
    Census(CensusArgs),
    /// Telescoping check or the scale-j multiplier `xi,eta,re,im`.
    Kernel(KernelArgs),
    /// Truncated transform on a grid as `x,re,im,tail_bound`.
    Transform(TransformArgs),
    /// Level sets, the V functional, or the maximal average.
    #[command(subcommand)]
    Probe(ProbeCommand),
}

#[derive(Args)]
struct SieveArgs {
    /// One of phi, pi, d, mu, omega, omega_distinct.
    #[arg(long = "fn", value_name = "NAME")]
    name: ArithName,
    /// Largest n tabulated.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    limit: u64,
    /// Output file, `-` for stdout.
    #[arg(long, default_value = "-")]
    out: PathBuf,
}

#[derive(Args)]
struct CensusArgs {
    /// Table name (phi, pi, d, mu, omega, omega_distinct) or raw name
    /// (identity, negidentity, square, zero).
    #[arg(long = "fn", value_name = "NAME")]
    name: String,
    /// Extension to negative m for table functions [default: even].
    #[arg(long, value_enum)]
    parity: Option<ParityArg>,
    /// Largest strip exponent; the grid is j1, j2 in 1..=jmax.
    #[arg(long, required_unless_present = "star", value_parser = clap::value_parser!(u32).range(1..=40))]
    jmax: Option<u32>,
    /// Exponent delta of the density ratio.
    #[arg(long, default_value_t = 1.0)]
    delta: f64,
    /// Report bounded-multiplicity constants as one JSON line instead.
    #[arg(long, requires = "limit", conflicts_with = "jmax")]
    star: bool,
    /// Range 1..=limit scanned by --star.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    limit: Option<u64>,
    /// Output file, `-` for stdout.
    #[arg(long, default_value = "-")]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum ParityArg {
    Even,
    Signodd,
}

#[derive(Args)]
struct KernelArgs {
    /// Print the max telescoping error over [1, 2^(J-1)].
    #[arg(long, requires = "levels", conflicts_with = "sigma")]
    check_telescope: bool,
    /// Number of scales J in the telescoping sum.
    #[arg(long = "J", value_name = "J", value_parser = clap::value_parser!(u32).range(1..=60))]
    levels: Option<u32>,
    /// Evaluate the multiplier of scale j on a G x G grid.
    #[arg(long, value_name = "j", required_unless_present = "check_telescope")]
    sigma: Option<u32>,
    /// Grid size G per axis.
    #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..=4096))]
    grid: u64,
    /// First curve component.
    #[arg(long = "P", value_name = "NAME:PARITY", default_value = "phi:even", value_parser = parse_fn)]
    p: FnSpec,
    /// Second curve component.
    #[arg(long = "Q", value_name = "NAME:PARITY", default_value = "d:signodd", value_parser = parse_fn)]
    q: FnSpec,
    /// `inf` for the exp(-1/t) step or an integer k for a C^k step.
    #[arg(long, default_value = "inf", value_parser = parse_smoothing)]
    smoothing: Smoothing,
    /// Output file, `-` for stdout.
    #[arg(long, default_value = "-")]
    out: PathBuf,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SignalKind {
    /// 1 / (x^2 + 1).
    Cauchy,
    /// The Cauchy profile scaled to unit l2 norm on the integers.
    CauchyUnit,
    /// Gaussian values on [-support, support], unit l2 norm, from --seed.
    Random,
}

#[derive(Args)]
struct TransformArgs {
    #[arg(long = "P", value_name = "NAME:PARITY", value_parser = parse_fn)]
    p: FnSpec,
    #[arg(long = "Q", value_name = "NAME:PARITY", value_parser = parse_fn)]
    q: FnSpec,
    /// Input pair f = g.
    #[arg(long, value_enum, default_value_t = SignalKind::Cauchy)]
    signal: SignalKind,
    /// Half-width of the random signal support.
    #[arg(long, default_value_t = 8)]
    support: i64,
    #[arg(long, allow_negative_numbers = true, default_value_t = -15.0)]
    xmin: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 15.0)]
    xmax: f64,
    #[arg(long, default_value_t = 0.1)]
    step: f64,
    /// Truncation |m| <= T0.
    #[arg(long = "T0", value_name = "T0", default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    t0: u64,
    /// Output file, `-` for stdout.
    #[arg(long, default_value = "-")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum ProbeCommand {
    /// `lambda,size,envelope` for |E_lambda| of the truncated transform.
    LevelSets(LevelSetArgs),
    /// `eta,exact,bound` for the V integrand against its census majorant.
    V(VArgs),
    /// `n,value` for the maximal average over 1 <= M <= M_max.
    Maximal(MaximalArgs),
}

#[derive(Args)]
struct LevelSetArgs {
    #[arg(long = "P", value_name = "NAME:PARITY", default_value = "phi:even", value_parser = parse_fn)]
    p: FnSpec,
    #[arg(long = "Q", value_name = "NAME:PARITY", default_value = "d:signodd", value_parser = parse_fn)]
    q: FnSpec,
    #[arg(long, value_enum, default_value_t = SignalKind::Random)]
    signal: SignalKind,
    /// Half-width of the random signal support.
    #[arg(long, default_value_t = 8)]
    support: i64,
    #[arg(long = "T0", value_name = "T0", default_value_t = 4096, value_parser = clap::value_parser!(u64).range(1..))]
    t0: u64,
    #[arg(long, default_value_t = 0.9)]
    epsilon: f64,
    #[arg(long, default_value_t = 1e-3)]
    lambda_min: f64,
    #[arg(long, default_value_t = 1.0)]
    lambda_max: f64,
    /// Window start; random signals default to the reachable window.
    #[arg(long, allow_negative_numbers = true)]
    window_lo: Option<i64>,
    #[arg(long, allow_negative_numbers = true)]
    window_hi: Option<i64>,
    /// Output file, `-` for stdout.
    #[arg(long, default_value = "-")]
    out: PathBuf,
}

#[derive(Args)]
struct VArgs {
    #[arg(long = "P", value_name = "NAME:PARITY", value_parser = parse_fn)]
    p: FnSpec,
    #[arg(long = "Q", value_name = "NAME:PARITY", default_value = "d:signodd", value_parser = parse_fn)]
    q: FnSpec,
    /// Number of equispaced eta in [0, 1).
    #[arg(long, default_value_t = 1024, value_parser = clap::value_parser!(u64).range(1..))]
    eta_grid: u64,
    /// First scale kept.
    #[arg(long = "M", value_name = "M", default_value_t = 2)]
    m_start: u32,
    /// Last scale kept.
    #[arg(long = "Jmax", value_name = "J", default_value_t = 14, value_parser = clap::value_parser!(u32).range(0..=30))]
    j_max: u32,
    #[arg(long, default_value_t = 1.0)]
    delta: f64,
    /// Output file, `-` for stdout.
    #[arg(long, default_value = "-")]
    out: PathBuf,
}

#[derive(Args)]
struct MaximalArgs {
    #[arg(long = "P", value_name = "NAME:PARITY", default_value = "phi:even", value_parser = parse_fn)]
    p: FnSpec,
    #[arg(long = "Q", value_name = "NAME:PARITY", default_value = "d:signodd", value_parser = parse_fn)]
    q: FnSpec,
    #[arg(long, value_enum, default_value_t = SignalKind::Random)]
    signal: SignalKind,
    #[arg(long, default_value_t = 8)]
    support: i64,
    #[arg(long, allow_negative_numbers = true, default_value_t = -20)]
    n_min: i64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 20)]
    n_max: i64,
    #[arg(long = "M-max", value_name = "M", default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    m_max: u64,
    /// Output file, `-` for stdout.
    #[arg(long, default_value = "-")]
    out: PathBuf,
}

fn parse_fn(s: &str) -> std::result::Result<FnSpec, String> {
    s.parse().map_err(|e: radon_census::Error| e.to_string())
}

fn parse_smoothing(s: &str) -> std::result::Result<Smoothing, String> {
    match s {
        "inf" | "infinite" => Ok(Smoothing::Infinite),
        k => match k.parse::<u32>() {
            Ok(k) if k >= 1 => Ok(Smoothing::Finite(k)),
            _ => Err(format!("expected `inf` or a positive integer, got `{k}`")),
        },
    }
}

fn usage_error(msg: impl std::fmt::Display) -> ! {
    Cli::command()
        .error(clap::error::ErrorKind::ValueValidation, msg)
        .exit()
}

/// Sieve `name`, going through the on-disk cache when it is configured.
fn table(name: ArithName, limit: u64) -> Result<ArithTable> {
    match std::env::var_os(cache::CACHE_ENV) {
        Some(dir) if !dir.is_empty() => Ok(cache::load_or_sieve(Path::new(&dir), name, limit)?),
        _ => Ok(name.sieve(limit)?),
    }
}

fn build(spec: FnSpec, limit: u64) -> Result<ArithFn> {
    match spec {
        FnSpec::Table(name, _) => Ok(spec.build_with(Arc::new(table(name, limit)?))?),
        FnSpec::Raw(_) => Ok(spec.build(limit)?),
    }
}

fn make_signal(kind: SignalKind, seed: u64, support: i64, salt: u64) -> Signal {
    match kind {
        SignalKind::Cauchy => Signal::cauchy(),
        SignalKind::CauchyUnit => CauchyProfile::default().normalized().into(),
        SignalKind::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(salt));
            CompactSignal::random_unit(&mut rng, -support, support).into()
        }
    }
}

fn run_sieve(args: SieveArgs, format: Format) -> Result<()> {
    let t = table(args.name, args.limit)?;
    let mut out = Table::new(&["n", "value"]);
    for (i, &v) in t.values().iter().enumerate() {
        out.push(vec![Cell::from(i as u64 + 1), v.into()]);
    }
    emit(&out, format, &args.out)
}

fn run_census(args: CensusArgs, format: Format) -> Result<()> {
    let spec = match args.parity {
        Some(ParityArg::Even) => format!("{}:even", args.name),
        Some(ParityArg::Signodd) => format!("{}:signodd", args.name),
        None => args.name.clone(),
    };
    let spec: FnSpec = spec.parse().unwrap_or_else(|e| usage_error(e));
    if !(args.delta > 0.0) {
        usage_error("--delta must be positive");
    }
    if args.star {
        let limit = args.limit.expect("clap enforces --limit");
        let report = star_report(&build(spec, limit)?, limit)?;
        let mut out = output::open(&args.out)?;
        writeln!(out, "{}", serde_json::to_string(&report)?)?;
        out.flush()?;
        return Ok(());
    }
    let jmax = args.jmax.expect("clap enforces --jmax");
    let r = build(spec, strip_bounds(jmax).1)?;
    let mut out = Table::new(&["j1", "j2", "M", "N", "count", "ratio"]);
    for rec in census_grid(&r, jmax, args.delta)? {
        out.push(vec![
            rec.j1.into(),
            rec.j2.into(),
            rec.m_scale.into(),
            rec.n_scale.into(),
            rec.count.into(),
            rec.ratio.into(),
        ]);
    }
    emit(&out, format, &args.out)
}

fn run_kernel(args: KernelArgs, format: Format) -> Result<()> {
    let kernel = DyadicKernel::new(args.smoothing);
    if args.check_telescope {
        let levels = args.levels.expect("clap enforces --J");
        let err = kernel.max_telescope_error(levels, 10_000);
        let mut out = output::open(&args.out)?;
        writeln!(out, "{err:.16e}")?;
        out.flush()?;
        return Ok(());
    }
    let j = args.sigma.expect("clap enforces --sigma");
    if j > 40 {
        usage_error("--sigma must be at most 40");
    }
    let limit = 1u64 << (j + 1);
    let (p, q) = (build(args.p, limit)?, build(args.q, limit)?);
    let piece = KernelPiece::new(&kernel, j, &p, &q)?;
    let g = args.grid;
    let values = par::map_range(Exec::default(), 0..(g * g) as usize, |i| {
        let (a, b) = (i as u64 / g, i as u64 % g);
        let (xi, eta) = (a as f64 / g as f64, b as f64 / g as f64);
        (xi, eta, piece.sigma(xi, eta))
    });
    let mut out = Table::new(&["xi", "eta", "re", "im"]);
    for (xi, eta, v) in values {
        out.push(vec![xi.into(), eta.into(), v.re.into(), v.im.into()]);
    }
    emit(&out, format, &args.out)
}

fn run_transform(args: TransformArgs, format: Format, seed: u64) -> Result<()> {
    if !(args.step > 0.0) || args.xmin > args.xmax {
        usage_error("need --step > 0 and --xmin <= --xmax");
    }
    let (p, q) = (build(args.p, args.t0)?, build(args.q, args.t0)?);
    let f = make_signal(args.signal, seed, args.support, 0);
    let series = figure_series(&f, &f, &p, &q, args.xmin, args.xmax, args.step, args.t0)?;
    let tail = tail_budget(&f, &f, &p, &q, (args.xmin, args.xmax), args.t0)
        .map(|b| b.tail_bound)
        .unwrap_or(f64::INFINITY);
    let mut out = Table::new(&["x", "re", "im", "tail_bound"]);
    for (x, v) in series {
        out.push(vec![x.into(), v.re.into(), v.im.into(), tail.into()]);
    }
    emit(&out, format, &args.out)
}

fn run_level_sets(args: LevelSetArgs, format: Format, seed: u64) -> Result<()> {
    if !(args.lambda_min > 0.0 && args.lambda_max >= args.lambda_min) {
        usage_error("need 0 < --lambda-min <= --lambda-max");
    }
    let (p, q) = (build(args.p, args.t0)?, build(args.q, args.t0)?);
    let f = make_signal(args.signal, seed, args.support, 0);
    let g = make_signal(args.signal, seed, args.support, 1);
    let window = match (args.window_lo, args.window_hi, &f, &g) {
        (Some(lo), Some(hi), _, _) => Window::new(lo, hi)?,
        (None, None, Signal::Compact(a), Signal::Compact(b)) => {
            match reachable_window(a, b, &p, &q, args.t0)? {
                Some(w) => w,
                None => Window::new(0, 0)?,
            }
        }
        (None, None, _, _) => Window::new(-1000, 1000)?,
        _ => usage_error("give both --window-lo and --window-hi or neither"),
    };
    let lambdas = geometric_lambdas(args.lambda_min, args.lambda_max);
    let profile = level_sets(&f, &g, &p, &q, args.t0, window, &lambdas, args.epsilon)?;
    let mut out = Table::new(&["lambda", "size", "envelope"]);
    for (&l, &s) in profile.lambdas.iter().zip(&profile.sizes) {
        out.push(vec![
            l.into(),
            s.into(),
            (l.powf(1.0 + args.epsilon) * s as f64).into(),
        ]);
    }
    emit(&out, format, &args.out)
}

fn run_v(args: VArgs, format: Format) -> Result<()> {
    if args.m_start > args.j_max {
        usage_error("--M must not exceed --Jmax");
    }
    let limit = strip_bounds(args.j_max).1;
    let (p, q) = (build(args.p, limit)?, build(args.q, limit)?);
    let kernel = DyadicKernel::default();
    let bound = v_census_bound(&p, args.m_start, args.j_max, args.delta)?.grid_bound
        * kernel.sup_abs().powi(2);
    let g = args.eta_grid as usize;
    let exact: Vec<f64> = par::map_range(Exec::default(), 0..g, |k| {
        v_exact(
            &kernel,
            &p,
            &q,
            k as f64 / g as f64,
            args.m_start,
            args.j_max,
        )
        .map(|v| v.value)
        .expect("limits checked above")
    });
    let mut out = Table::new(&["eta", "exact", "bound"]);
    for (k, v) in exact.into_iter().enumerate() {
        out.push(vec![(k as f64 / g as f64).into(), v.into(), bound.into()]);
    }
    emit(&out, format, &args.out)
}

fn run_maximal(args: MaximalArgs, format: Format, seed: u64) -> Result<()> {
    if args.n_min > args.n_max {
        usage_error("--n-min must not exceed --n-max");
    }
    let (p, q) = (build(args.p, args.m_max)?, build(args.q, args.m_max)?);
    let f = make_signal(args.signal, seed, args.support, 0);
    let g = make_signal(args.signal, seed, args.support, 1);
    let ns: Vec<i64> = (args.n_min..=args.n_max).collect();
    let values = par::map_slice(Exec::default(), &ns, |&n| {
        maximal_operator(&f, &g, &p, &q, n as f64, args.m_max)
    });
    let mut out = Table::new(&["n", "value"]);
    for (n, v) in ns.into_iter().zip(values) {
        out.push(vec![n.into(), v?.into()]);
    }
    emit(&out, format, &args.out)
}

fn configure_threads(threads: Option<usize>) -> Result<()> {
    #[cfg(feature = "parallel")]
    if let Some(n) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(anyhow::Error::from)
            .map_err(|e| e.context("configuring the thread pool"))?;
    }
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    if cli.threads == Some(0) {
        usage_error("--threads must be at least 1");
    }
    configure_threads(cli.threads)?;
    let (format, seed) = (cli.format, cli.seed);
    match cli.command {
        Command::Sieve(a) => run_sieve(a, format),
        Command::Census(a) => run_census(a, format),
        Command::Kernel(a) => run_kernel(a, format),
        Command::Transform(a) => run_transform(a, format, seed),
        Command::Probe(ProbeCommand::LevelSets(a)) => run_level_sets(a, format, seed),
        Command::Probe(ProbeCommand::V(a)) => run_v(a, format),
        Command::Probe(ProbeCommand::Maximal(a)) => run_maximal(a, format, seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let chain: Vec<String> = e.chain().map(|c| c.to_string()).collect();
            eprintln!("radon: {}", chain.join(": "));
            ExitCode::from(1)
        }
    }
}
