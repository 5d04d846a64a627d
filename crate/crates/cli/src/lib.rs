//! `fgn-toolkit`: synthesize, estimate, analyze and convert FGN traces.
//!
//! Exit codes: 0 success, 2 bad arguments, 3 I/O or parse failure, 4
//! degenerate trace, 5 Whittle minimizer at a search boundary, 6 clamp
//! fraction above 10% with `--strict`. Data and summaries go to stdout,
//! diagnostics to stderr.

pub mod error;
pub mod tracefile;

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fgn_core::analyze::{
    ad_normality_test, default_m_levels, qq_points, qq_r_squared, variance_time_curve,
    AD_CRITICAL_5PCT,
};
use fgn_core::oracle::sample_autocorrelation;
use fgn_core::spectrum::{fgn_power_spectrum, spectrum_b};
use fgn_core::traffic::{counts_to_interarrivals, exp2_transform, to_integer_counts, SpreadMode};
use fgn_core::{
    rescale_trace, synthesize_fgn, whittle_estimate, BMode, FgnError, HurstParam, RngStream, Trace,
};

pub use error::CliError;
use tracefile::{read_trace, render_text, write_bytes, write_trace, TraceFormat};

#[derive(Debug, Parser)]
#[command(name = "fgn-toolkit", version, about = "Fractional Gaussian noise traffic toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Synthesize an approximate FGN sample path.
    Synth(SynthArgs),
    /// Whittle estimate of the Hurst parameter of a trace.
    Estimate(EstimateArgs),
    /// Variance-time, normality, Q-Q or autocorrelation data for a trace.
    Analyze(AnalyzeArgs),
    /// Convert a trace into arrival counts or interarrival times.
    Convert(ConvertArgs),
    /// Tabulate the FGN power spectrum and its approximation error.
    Spectrum(SpectrumArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Input trace file.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Input file format.
    #[arg(long = "in-format", value_enum, default_value_t = TraceFormat::Text)]
    pub in_format: TraceFormat,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Number of samples (even, at least 4).
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub hurst: f64,
    /// Random seed; drawn from system entropy when omitted.
    #[arg(long)]
    pub seed: Option<u64>,
    /// fast | exact | prime | doubleprime | partial:<N> | k:<K>
    #[arg(long, default_value = "fast", value_parser = parse_mode)]
    pub mode: BMode,
    /// Target sample mean (defaults to the synthesized mean, about 0).
    #[arg(long)]
    pub mean: Option<f64>,
    /// Target sample standard deviation.
    #[arg(long)]
    pub sd: Option<f64>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = TraceFormat::Text)]
    pub format: TraceFormat,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// fast | exact | partial:<N> | k:<K> | prime | doubleprime
    #[arg(long, default_value = "fast", value_parser = parse_mode)]
    pub mode: BMode,
    /// Golden-section bracket width at which to stop.
    #[arg(long, default_value_t = fgn_core::DEFAULT_TOLERANCE)]
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Analysis {
    Vt,
    Normality,
    Qq,
    Acf,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum)]
    pub what: Analysis,
    /// CSV output path.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Largest lag for `--what acf`.
    #[arg(long, default_value_t = 100)]
    pub max_lag: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Transform {
    Linear,
    Exp2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Counts,
    Interarrivals,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Spread {
    Uniform,
    Even,
}

/// Where `--mean`/`--sd` apply when `--transform exp2` is used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScaleDomain {
    /// Rescale the input, then take `2^x` (moments are log-domain moments).
    Log,
    /// Take `2^x`, then rescale (moments are those of the rates).
    Linear,
}

#[derive(Debug, Args)]
pub struct ConvertArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum, default_value_t = Transform::Linear)]
    pub transform: Transform,
    #[arg(long)]
    pub mean: Option<f64>,
    #[arg(long)]
    pub sd: Option<f64>,
    #[arg(long, value_enum, default_value_t = ScaleDomain::Log)]
    pub scale_domain: ScaleDomain,
    /// Bin duration in seconds.
    #[arg(long, default_value_t = 1.0)]
    pub bin_width: f64,
    #[arg(long, value_enum, default_value_t = Emit::Counts)]
    pub emit: Emit,
    #[arg(long, value_enum, default_value_t = Spread::Uniform)]
    pub spread: Spread,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Fail (exit 6) when more than 10% of bins clamp to zero.
    #[arg(long)]
    pub strict: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[arg(long)]
    pub hurst: f64,
    /// `start:stop:steps`, inclusive and evenly spaced; `pi` is accepted.
    #[arg(long, value_parser = parse_grid)]
    pub lambda_grid: LambdaGrid,
    #[arg(long, default_value = "fast", value_parser = parse_mode)]
    pub mode: BMode,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LambdaGrid {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl LambdaGrid {
    pub fn points(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        let dx = (self.stop - self.start) / (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| if i + 1 == self.steps { self.stop } else { self.start + dx * i as f64 })
            .collect()
    }
}

fn parse_mode(s: &str) -> Result<BMode, String> {
    s.parse().map_err(|e: FgnError| e.to_string())
}

fn parse_angle(s: &str) -> Result<f64, String> {
    match s {
        "pi" => Ok(PI),
        _ => s.parse().map_err(|_| format!("not a number: {s:?}")),
    }
}

fn parse_grid(s: &str) -> Result<LambdaGrid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [start, stop, steps] = parts[..] else {
        return Err("expected start:stop:steps".into());
    };
    let steps: usize = steps.parse().map_err(|_| format!("bad step count {steps:?}"))?;
    if steps == 0 {
        return Err("step count must be at least 1".into());
    }
    Ok(LambdaGrid { start: parse_angle(start)?, stop: parse_angle(stop)?, steps })
}

/// Runs one command, writing summaries to `stdout` and diagnostics to `stderr`.
pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Synth(args) => cmd_synth(args, stderr),
        Command::Estimate(args) => cmd_estimate(args, stdout, stderr),
        Command::Analyze(args) => cmd_analyze(args, stdout),
        Command::Convert(args) => cmd_convert(args, stdout, stderr),
        Command::Spectrum(args) => cmd_spectrum(args),
    }
}

fn diag(w: &mut dyn Write, msg: std::fmt::Arguments<'_>) {
    // diagnostics are best effort
    let _ = writeln!(w, "{msg}");
}

fn rng_for(seed: Option<u64>) -> RngStream {
    seed.map_or_else(RngStream::from_entropy, RngStream::from_seed)
}

fn load_input(input: &InputArgs) -> Result<Trace, CliError> {
    let trace = read_trace(&input.input, input.in_format)?;
    if trace.len() < 4 {
        return Err(CliError::Degenerate(format!("{} samples", trace.len())));
    }
    trace.ensure_nondegenerate()?;
    Ok(trace)
}

fn rescale_partial(t: &Trace, mean: Option<f64>, sd: Option<f64>) -> Result<Trace, CliError> {
    if mean.is_none() && sd.is_none() {
        return Ok(t.clone());
    }
    Ok(rescale_trace(t, mean.unwrap_or_else(|| t.mean()), sd.unwrap_or_else(|| t.std_dev()))?)
}

pub fn cmd_synth(args: SynthArgs, stderr: &mut dyn Write) -> Result<(), CliError> {
    if args.n < 4 || !args.n.is_multiple_of(2) {
        return Err(CliError::Usage(format!("--n {} invalid: n must be even and at least 4", args.n)));
    }
    let h = HurstParam::new(args.hurst)
        .map_err(|_| CliError::Usage(format!("--hurst {} must satisfy 0.5 < H < 1", args.hurst)))?;
    let seed = rng_for(args.seed).seed();
    let start = Instant::now();
    let trace = synthesize_fgn(h, args.n, seed, args.mode)?;
    let trace = rescale_partial(&trace, args.mean, args.sd)?;
    let elapsed = start.elapsed().as_secs_f64();
    write_trace(&args.out, &trace, args.format)?;
    diag(
        stderr,
        format_args!("n={} h={} seed={seed} mode={} elapsed={elapsed:.3}s", args.n, h, args.mode),
    );
    Ok(())
}

pub fn cmd_estimate(
    args: EstimateArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    let trace = load_input(&args.input)?;
    let start = Instant::now();
    let r = whittle_estimate(&trace, args.mode, args.tol)?;
    let elapsed = start.elapsed().as_secs_f64();
    writeln!(stdout, "h_hat={:.6} sigma_h={:.6} mode={} n={}", r.h_hat, r.sigma_h, r.mode, r.n)
        .map_err(|e| CliError::io(Path::new("<stdout>"), e))?;
    diag(stderr, format_args!("elapsed={elapsed:.3}s evaluations_width={:.2e}", r.bracket_width));
    if r.at_boundary {
        diag(
            stderr,
            format_args!("warning: h_hat={:.6} is within tol of the search boundary", r.h_hat),
        );
        return Err(CliError::Boundary(r.h_hat));
    }
    Ok(())
}

fn csv<R: IntoIterator<Item = String>>(header: &str, rows: R) -> String {
    let mut out = String::from(header);
    out.push('\n');
    for row in rows {
        out.push_str(&row);
        out.push('\n');
    }
    out
}

fn emit(stdout: &mut dyn Write, line: String) -> Result<(), CliError> {
    writeln!(stdout, "{line}").map_err(|e| CliError::io(Path::new("<stdout>"), e))
}

pub fn cmd_analyze(args: AnalyzeArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let trace = load_input(&args.input)?;
    let (summary, table) = match args.what {
        Analysis::Vt => {
            let vt = variance_time_curve(&trace, &default_m_levels(trace.len()))?;
            let rows = vt.m_levels.iter().zip(&vt.norm_vars).map(|(m, v)| format!("{m},{v:e}"));
            (
                format!("implied_h={:.4} slope={:.4} levels={}", vt.implied_h, vt.fitted_slope, vt.m_levels.len()),
                csv("m,norm_var", rows),
            )
        }
        Analysis::Normality => {
            let r = ad_normality_test(&trace)?;
            (
                format!(
                    "a2={:.4} critical_5pct={AD_CRITICAL_5PCT} pass={} n={}",
                    r.a2_statistic, r.pass_at_5pct, r.n
                ),
                csv(
                    "a2,critical_5pct,pass",
                    [format!("{},{AD_CRITICAL_5PCT},{}", r.a2_statistic, r.pass_at_5pct)],
                ),
            )
        }
        Analysis::Qq => {
            let pts = qq_points(&trace)?;
            (
                format!("r2={:.6} n={}", qq_r_squared(&pts), pts.len()),
                csv("theoretical,sample", pts.iter().map(|(x, y)| format!("{x:e},{y:e}"))),
            )
        }
        Analysis::Acf => {
            let max_lag = args.max_lag.min(trace.len() / 4 - 1);
            let rho = sample_autocorrelation(&trace, max_lag)?;
            let rho1 = rho.get(1).copied().unwrap_or(f64::NAN);
            (
                format!("rho1={rho1:.4} max_lag={max_lag}"),
                csv("lag,rho", rho.iter().enumerate().map(|(k, r)| format!("{k},{r:e}"))),
            )
        }
    };
    if let Some(out) = &args.out {
        write_bytes(out, table.as_bytes())?;
    }
    emit(stdout, summary)
}

pub fn cmd_convert(
    args: ConvertArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    let trace = read_trace(&args.input.input, args.input.in_format)?;
    let rates = match (args.transform, args.scale_domain) {
        (Transform::Linear, _) => rescale_partial(&trace, args.mean, args.sd)?,
        (Transform::Exp2, ScaleDomain::Log) => {
            exp2_transform(&rescale_partial(&trace, args.mean, args.sd)?)?
        }
        (Transform::Exp2, ScaleDomain::Linear) => {
            rescale_partial(&exp2_transform(&trace)?, args.mean, args.sd)?
        }
    };
    let counts = to_integer_counts(&rates, args.bin_width)?;
    diag(stderr, format_args!("clamp_fraction={:.4}", counts.clamp_fraction()));
    if counts.is_suspect() {
        diag(
            stderr,
            format_args!("warning: more than 10% of bins were negative; the Gaussian model is suspect"),
        );
        if args.strict {
            return Err(CliError::Suspect(counts.clamp_fraction()));
        }
    }
    let meta = vec![("bin_width", args.bin_width.to_string())];
    let (body, summary) = match args.emit {
        Emit::Counts => (
            render_text(&meta, counts.counts().iter()),
            format!("bins={} total={}", counts.counts().len(), counts.total()),
        ),
        Emit::Interarrivals => {
            let mut rng = rng_for(args.seed);
            let mode = match args.spread {
                Spread::Uniform => SpreadMode::Uniform,
                Spread::Even => SpreadMode::Even,
            };
            let seq = counts_to_interarrivals(&counts, mode, &mut rng);
            diag(stderr, format_args!("seed={}", rng.seed()));
            let mut meta = meta;
            meta.push(("seed", rng.seed().to_string()));
            (render_text(&meta, seq.times().iter()), format!("events={} total={}", seq.len(), counts.total()))
        }
    };
    write_bytes(&args.out, body.as_bytes())?;
    emit(stdout, summary)
}

pub fn cmd_spectrum(args: SpectrumArgs) -> Result<(), CliError> {
    let h = HurstParam::permissive(args.hurst)
        .map_err(|_| CliError::Usage(format!("--hurst {} must satisfy 0.5 <= H < 1", args.hurst)))?;
    let lambdas = args.lambda_grid.points();
    if let Some(bad) = lambdas.iter().find(|&&l| !(l > 0.0 && l <= PI)) {
        return Err(CliError::Usage(format!("lambda {bad} outside (0, pi]")));
    }
    let mut out = String::from("lambda,f,B,rel_err_vs_partial10000\n");
    for &l in &lambdas {
        let f = fgn_power_spectrum(h, l, args.mode)?;
        let b = spectrum_b(h, l, args.mode)?;
        let reference = spectrum_b(h, l, BMode::REFERENCE)?;
        let _ = writeln!(out, "{l:e},{f:e},{b:e},{:e}", (b - reference) / reference);
    }
    write_bytes(&args.out, out.as_bytes())
}
