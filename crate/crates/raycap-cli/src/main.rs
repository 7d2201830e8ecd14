//! raycap — directional MIMO capacity and satellite coverage from the
//! command line.
//!
//! Subcommands: `capacity` (single evaluation), `sweep` (parameter sweeps
//! as CSV/JSON), `sphere` (cap coverage tables), `diagnose` (Gram-matrix
//! diagnostics). Exit codes: 0 success, 2 usage or validation error,
//! 3 output I/O error.

mod config;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use raycap::capacity::{capacity, CapacityConfig, CapacityResult, PowerSetup};
use raycap::channel::{build_channel, gram_diagnostic, RayFan};
use raycap::geometry::{ArrayGeometry, ArrayParams};
use raycap::sphere;
use raycap::sweep::{
    compare_linear_square, sweep_antennas, sweep_phi, sweep_rays, sweep_snr_vs_siso, SweepSeries,
};

use config::{require, resolve, resolve_or, CliError, Settings};

const DEFAULT_LAMBDA: f64 = 1.0;

#[derive(Parser, Debug)]
#[command(
    name = "raycap",
    version,
    about = "Directional MIMO channel capacity and satellite coverage toolkit",
    after_help = "Defaults: wavelength lambda = 1 m, element spacing d = lambda/2, noise power \
                  sigma^2 = 1 (SNR is given in dB). All angles are degrees. Values may also come \
                  from --config (flat `key = value` lines mirroring the flag names, plus `command` \
                  and `sweep` to pick what runs); explicit flags override the file."
)]
struct Cli {
    /// Flat key = value config file; flags override file values.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Output format.
    #[arg(long, global = true, value_enum, value_name = "FMT")]
    format: Option<OutputFormat>,

    /// Omit the timestamp line so identical runs emit identical bytes.
    #[arg(long, global = true)]
    reproducible: bool,

    /// Worker threads for sweep points (0 = all cores); the output is
    /// identical for every thread count.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Channel capacity of one array/fan/power configuration.
    Capacity(CapacityArgs),
    /// Parameter sweeps emitting tabular series.
    #[command(subcommand)]
    Sweep(SweepCommand),
    /// Spherical-cap coverage statistics for N satellites.
    Sphere(SphereArgs),
    /// Gram-matrix diagnostics: distance of H*H'/n_T from the identity.
    Diagnose(DiagnoseArgs),
}

#[derive(Args, Debug, Default, Clone)]
struct GeometryArgs {
    /// Linear array with N elements.
    #[arg(long, value_name = "N")]
    linear: Option<usize>,

    /// Planar array as ROWSxCOLS, e.g. 4x4.
    #[arg(long, value_name = "RxC")]
    planar: Option<String>,
}

#[derive(Args, Debug, Default, Clone)]
struct WaveArgs {
    /// Carrier wavelength in meters [default: 1].
    #[arg(long, value_name = "M")]
    lambda: Option<f64>,

    /// Element spacing in meters [default: lambda/2].
    #[arg(long, value_name = "M")]
    spacing: Option<f64>,
}

#[derive(Args, Debug, Default)]
struct CapacityArgs {
    #[command(flatten)]
    geometry: GeometryArgs,

    #[command(flatten)]
    wave: WaveArgs,

    /// Number of rays n_T in the equal-angle fan.
    #[arg(long, value_name = "N")]
    rays: Option<usize>,

    /// SNR P/sigma^2 in dB [default: 0].
    #[arg(long, value_name = "DB", allow_negative_numbers = true)]
    snr_db: Option<f64>,

    /// Power setup: std, 1 or 2 [default: 2].
    #[arg(long, value_name = "SETUP")]
    setup: Option<String>,

    /// Evaluate all three setups side by side.
    #[arg(long)]
    all_setups: bool,

    /// Fan azimuth phi in degrees [default: 0].
    #[arg(long, value_name = "DEG", allow_negative_numbers = true)]
    phi: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum SweepCommand {
    /// Capacity of a linear array vs its element count, rays fixed.
    Antennas(SweepAntennasArgs),
    /// Capacity of a linear array vs the ray count, elements fixed.
    Rays(SweepRaysArgs),
    /// MIMO capacity vs SNR next to the SISO AWGN baseline.
    Snr(SweepSnrArgs),
    /// Square-array capacity vs the fan azimuth phi.
    Phi(SweepPhiArgs),
    /// Linear vs square array with the same element count at phi = 90 deg.
    LinearVsSquare(SweepLinearVsSquareArgs),
}

#[derive(Args, Debug, Default)]
struct RangeArgs {
    /// First swept value.
    #[arg(long, value_name = "V", allow_negative_numbers = true)]
    from: Option<f64>,

    /// Last swept value (inclusive).
    #[arg(long, value_name = "V", allow_negative_numbers = true)]
    to: Option<f64>,

    /// Step between swept values.
    #[arg(long, value_name = "V")]
    step: Option<f64>,
}

#[derive(Args, Debug, Default)]
struct SweepAntennasArgs {
    #[command(flatten)]
    wave: WaveArgs,

    /// Fixed ray count n_T.
    #[arg(long, value_name = "N")]
    rays: Option<usize>,

    /// Swept antenna counts [default: 1 to 50 step 1].
    #[command(flatten)]
    range: RangeArgs,

    /// SNR in dB [default: 0].
    #[arg(long, value_name = "DB", allow_negative_numbers = true)]
    snr_db: Option<f64>,

    /// Power setup: std, 1 or 2 [default: 2].
    #[arg(long, value_name = "SETUP")]
    setup: Option<String>,

    /// Fan azimuth phi in degrees [default: 0].
    #[arg(long, value_name = "DEG", allow_negative_numbers = true)]
    phi: Option<f64>,
}

#[derive(Args, Debug, Default)]
struct SweepRaysArgs {
    #[command(flatten)]
    wave: WaveArgs,

    /// Fixed antenna count n_R.
    #[arg(long, value_name = "N")]
    antennas: Option<usize>,

    /// Swept ray counts [default: 1 to 50 step 1].
    #[command(flatten)]
    range: RangeArgs,

    /// SNR in dB [default: 0].
    #[arg(long, value_name = "DB", allow_negative_numbers = true)]
    snr_db: Option<f64>,

    /// Power setup: std, 1 or 2 [default: 2].
    #[arg(long, value_name = "SETUP")]
    setup: Option<String>,

    /// Fan azimuth phi in degrees [default: 0].
    #[arg(long, value_name = "DEG", allow_negative_numbers = true)]
    phi: Option<f64>,
}

#[derive(Args, Debug, Default)]
struct SweepSnrArgs {
    #[command(flatten)]
    wave: WaveArgs,

    /// Antenna count n_R.
    #[arg(long, value_name = "N")]
    antennas: Option<usize>,

    /// Ray count n_T.
    #[arg(long, value_name = "N")]
    rays: Option<usize>,

    /// Swept SNR grid in dB [default: -10 to 30 step 1].
    #[command(flatten)]
    range: RangeArgs,

    /// Power setup: std, 1 or 2 [default: 2].
    #[arg(long, value_name = "SETUP")]
    setup: Option<String>,
}

#[derive(Args, Debug, Default)]
struct SweepPhiArgs {
    #[command(flatten)]
    wave: WaveArgs,

    /// Square side S (an S x S array).
    #[arg(long, value_name = "S")]
    side: Option<usize>,

    /// Ray count n_T.
    #[arg(long, value_name = "N")]
    rays: Option<usize>,

    /// Swept azimuth grid in degrees [default: 0 to 90 step 5].
    #[command(flatten)]
    range: RangeArgs,

    /// SNR in dB [default: 0].
    #[arg(long, value_name = "DB", allow_negative_numbers = true)]
    snr_db: Option<f64>,

    /// Power setup: std, 1 or 2 [default: 2].
    #[arg(long, value_name = "SETUP")]
    setup: Option<String>,
}

#[derive(Args, Debug, Default)]
struct SweepLinearVsSquareArgs {
    #[command(flatten)]
    wave: WaveArgs,

    /// Total element count; must be a perfect square.
    #[arg(long, value_name = "N")]
    elements: Option<usize>,

    /// Ray count n_T.
    #[arg(long, value_name = "N")]
    rays: Option<usize>,

    /// Swept SNR grid in dB [default: -10 to 30 step 1].
    #[command(flatten)]
    range: RangeArgs,

    /// Power setup: std, 1 or 2 [default: 2].
    #[arg(long, value_name = "SETUP")]
    setup: Option<String>,
}

#[derive(Args, Debug, Default)]
struct SphereArgs {
    /// Single configuration size N (4..=17).
    #[arg(long, value_name = "N")]
    n: Option<u32>,

    /// Range start [default: 4].
    #[arg(long, value_name = "N")]
    from: Option<u32>,

    /// Range end, inclusive [default: 17].
    #[arg(long, value_name = "N")]
    to: Option<u32>,

    /// Append the published table values and the deviation of the
    /// recomputed ones.
    #[arg(long)]
    compare_paper: bool,
}

#[derive(Args, Debug, Default)]
struct DiagnoseArgs {
    #[command(flatten)]
    geometry: GeometryArgs,

    #[command(flatten)]
    wave: WaveArgs,

    /// Number of rays n_T in the equal-angle fan.
    #[arg(long, value_name = "N")]
    rays: Option<usize>,

    /// Fan azimuth phi in degrees [default: 0].
    #[arg(long, value_name = "DEG", allow_negative_numbers = true)]
    phi: Option<f64>,

    /// Compare off-diagonals against the Bessel limit (linear arrays only;
    /// on by default for them).
    #[arg(long)]
    bessel: bool,
}

struct OutputOpts {
    out: Option<PathBuf>,
    format: OutputFormat,
    reproducible: bool,
    threads: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let settings = match &cli.config {
        Some(path) => Settings::load(path)?,
        None => Settings::empty(),
    };

    let out = cli.out.or_else(|| settings.raw("out").map(PathBuf::from));
    let format = match cli.format {
        Some(f) => f,
        None => match settings.raw("format") {
            None | Some("csv") => OutputFormat::Csv,
            Some("json") => OutputFormat::Json,
            Some(other) => {
                return Err(CliError::usage(format!(
                    "config key 'format': expected csv or json, got '{other}'"
                )))
            }
        },
    };
    let opts = OutputOpts {
        out,
        format,
        reproducible: cli.reproducible || settings.get_flag("reproducible")?,
        threads: resolve_or(cli.threads, &settings, "threads", 1)?,
    };

    let command = match cli.command {
        Some(c) => c,
        None => command_from_settings(&settings)?,
    };

    match command {
        Command::Capacity(args) => cmd_capacity(args, &settings, &opts),
        Command::Sweep(sub) => cmd_sweep(sub, &settings, &opts),
        Command::Sphere(args) => cmd_sphere(args, &settings, &opts),
        Command::Diagnose(args) => cmd_diagnose(args, &settings, &opts),
    }
}

/// Dispatch from `command =` / `sweep =` keys when no subcommand is given.
fn command_from_settings(settings: &Settings) -> Result<Command, CliError> {
    match settings.raw("command") {
        None => Err(CliError::usage(
            "no command given; pass a subcommand or set 'command' in the config file \
             (see --help)",
        )),
        Some("capacity") => Ok(Command::Capacity(CapacityArgs::default())),
        Some("sphere") => Ok(Command::Sphere(SphereArgs::default())),
        Some("diagnose") => Ok(Command::Diagnose(DiagnoseArgs::default())),
        Some("sweep") => match settings.raw("sweep") {
            Some("antennas") => Ok(Command::Sweep(SweepCommand::Antennas(Default::default()))),
            Some("rays") => Ok(Command::Sweep(SweepCommand::Rays(Default::default()))),
            Some("snr") => Ok(Command::Sweep(SweepCommand::Snr(Default::default()))),
            Some("phi") => Ok(Command::Sweep(SweepCommand::Phi(Default::default()))),
            Some("linear-vs-square") => Ok(Command::Sweep(SweepCommand::LinearVsSquare(
                Default::default(),
            ))),
            Some(other) => Err(CliError::usage(format!(
                "config key 'sweep': unknown sweep '{other}'"
            ))),
            None => Err(CliError::usage(
                "config 'command = sweep' also needs 'sweep = antennas|rays|snr|phi|linear-vs-square'",
            )),
        },
        Some(other) => Err(CliError::usage(format!(
            "config key 'command': unknown command '{other}'"
        ))),
    }
}

fn write_output(out: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        None => io::stdout()
            .write_all(content.as_bytes())
            .map_err(|e| CliError::io(format!("stdout: {e}"))),
        Some(path) => fs::write(path, content)
            .map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display()))),
    }
}

fn parse_setup(s: &str) -> Result<PowerSetup, CliError> {
    match s {
        "1" | "setup1" => Ok(PowerSetup::Setup1),
        "2" | "setup2" => Ok(PowerSetup::Setup2),
        "std" | "standard" => Ok(PowerSetup::StandardEqualPower),
        other => Err(CliError::usage(format!(
            "--setup: unknown setup '{other}' (use std, 1 or 2)"
        ))),
    }
}

fn resolve_setup(flag: Option<String>, settings: &Settings) -> Result<PowerSetup, CliError> {
    match flag.as_deref().or_else(|| settings.raw("setup")) {
        None => Ok(PowerSetup::Setup2),
        Some(s) => parse_setup(s),
    }
}

fn resolve_wave(wave: &WaveArgs, settings: &Settings) -> Result<ArrayParams, CliError> {
    let wavelength = resolve_or(wave.lambda, settings, "lambda", DEFAULT_LAMBDA)?;
    if !wavelength.is_finite() || wavelength <= 0.0 {
        return Err(CliError::usage(format!(
            "--lambda must be positive and finite, got {wavelength}"
        )));
    }
    let spacing = resolve_or(wave.spacing, settings, "spacing", wavelength / 2.0)?;
    if !spacing.is_finite() || spacing <= 0.0 {
        return Err(CliError::usage(format!(
            "--spacing must be positive and finite, got {spacing}"
        )));
    }
    Ok(ArrayParams {
        wavelength,
        spacing,
    })
}

fn parse_grid(s: &str) -> Result<(usize, usize), CliError> {
    let bad = || {
        CliError::usage(format!(
            "--planar must look like ROWSxCOLS (e.g. 4x4), got '{s}'"
        ))
    };
    let (rows, cols) = s.split_once(['x', 'X']).ok_or_else(bad)?;
    let rows: usize = rows.trim().parse().map_err(|_| bad())?;
    let cols: usize = cols.trim().parse().map_err(|_| bad())?;
    if rows == 0 || cols == 0 {
        return Err(CliError::usage("--planar dimensions must be at least 1x1"));
    }
    Ok((rows, cols))
}

fn resolve_geometry(
    geometry: &GeometryArgs,
    wave: &WaveArgs,
    settings: &Settings,
) -> Result<(ArrayGeometry, ArrayParams), CliError> {
    let params = resolve_wave(wave, settings)?;
    let linear = resolve(geometry.linear, settings, "linear")?;
    let planar = geometry
        .planar
        .clone()
        .or_else(|| settings.raw("planar").map(String::from));
    let geom = match (linear, planar) {
        (Some(_), Some(_)) => {
            return Err(CliError::usage(
                "--linear and --planar are mutually exclusive",
            ))
        }
        (None, None) => {
            return Err(CliError::usage(
                "specify the array geometry with --linear or --planar",
            ))
        }
        (Some(n), None) => {
            if n == 0 {
                return Err(CliError::usage("--linear must be at least 1"));
            }
            ArrayGeometry::linear(n, params.wavelength, params.spacing)?
        }
        (None, Some(spec)) => {
            let (rows, cols) = parse_grid(&spec)?;
            ArrayGeometry::planar(
                rows,
                cols,
                params.wavelength,
                params.spacing,
                params.spacing,
            )?
        }
    };
    Ok((geom, params))
}

fn resolve_rays(flag: Option<usize>, settings: &Settings) -> Result<usize, CliError> {
    let rays = require(flag, settings, "rays", "--rays")?;
    if rays == 0 {
        return Err(CliError::usage("--rays must be at least 1"));
    }
    Ok(rays)
}

/// Integer sweep range (antenna/ray counts).
fn count_range(
    range: &RangeArgs,
    settings: &Settings,
    default_from: usize,
    default_to: usize,
) -> Result<Vec<usize>, CliError> {
    let from = resolve_or(range.from, settings, "from", default_from as f64)?;
    let to = resolve_or(range.to, settings, "to", default_to as f64)?;
    let step = resolve_or(range.step, settings, "step", 1.0)?;
    for (name, v) in [("--from", from), ("--to", to), ("--step", step)] {
        if !v.is_finite() || v.fract() != 0.0 || v < 1.0 {
            return Err(CliError::usage(format!(
                "{name} must be a positive integer for this sweep, got {v}"
            )));
        }
    }
    if from > to {
        return Err(CliError::usage(format!(
            "--from ({from}) must not exceed --to ({to})"
        )));
    }
    Ok((from as usize..=to as usize)
        .step_by(step as usize)
        .collect())
}

/// Float sweep range (SNR in dB, phi in degrees).
fn float_range(
    range: &RangeArgs,
    settings: &Settings,
    defaults: (f64, f64, f64),
) -> Result<Vec<f64>, CliError> {
    let from = resolve_or(range.from, settings, "from", defaults.0)?;
    let to = resolve_or(range.to, settings, "to", defaults.1)?;
    let step = resolve_or(range.step, settings, "step", defaults.2)?;
    if !from.is_finite() || !to.is_finite() {
        return Err(CliError::usage("--from and --to must be finite"));
    }
    if !step.is_finite() || step <= 0.0 {
        return Err(CliError::usage(format!(
            "--step must be positive, got {step}"
        )));
    }
    if from > to {
        return Err(CliError::usage(format!(
            "--from ({from}) must not exceed --to ({to})"
        )));
    }
    let count = ((to - from) / step + 1e-9).floor() as usize;
    Ok((0..=count).map(|i| from + i as f64 * step).collect())
}

fn unix_now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

// ── capacity ────────────────────────────────────────────────────────────

fn cmd_capacity(
    args: CapacityArgs,
    settings: &Settings,
    opts: &OutputOpts,
) -> Result<(), CliError> {
    let (geom, params) = resolve_geometry(&args.geometry, &args.wave, settings)?;
    let rays = resolve_rays(args.rays, settings)?;
    let snr_db = resolve_or(args.snr_db, settings, "snr-db", 0.0)?;
    let phi = resolve_or(args.phi, settings, "phi", 0.0)?;
    let all_setups = args.all_setups || settings.get_flag("all-setups")?;
    let setup = resolve_setup(args.setup, settings)?;

    let fan = RayFan::equal_angle(rays, phi)?;
    let h = build_channel(&geom, &fan);
    let setups: Vec<PowerSetup> = if all_setups {
        vec![
            PowerSetup::StandardEqualPower,
            PowerSetup::Setup1,
            PowerSetup::Setup2,
        ]
    } else {
        vec![setup]
    };
    let results: Vec<(PowerSetup, CapacityResult)> = setups
        .iter()
        .map(|&s| {
            let cfg = CapacityConfig::from_snr_db(snr_db, s).expect("dB conversion is positive");
            (s, capacity(&h, &cfg))
        })
        .collect();

    let content = match opts.format {
        OutputFormat::Csv => {
            let mut text = String::new();
            text.push_str("# raycap capacity v1\n");
            text.push_str(&format!(
                "# lambda={} spacing={} geometry={} n_t={} snr_db={} phi={} sigma2=1\n",
                params.wavelength, params.spacing, geom, rays, snr_db, phi
            ));
            text.push_str("setup,scale,capacity_bits\n");
            for (s, r) in &results {
                text.push_str(&format!("{},{:.8e},{:.6}\n", s, r.scale_used(), r.bits()));
            }
            text
        }
        OutputFormat::Json => {
            let results: Vec<serde_json::Value> = results
                .iter()
                .map(|(s, r)| {
                    json!({
                        "setup": s.name(),
                        "scale": r.scale_used(),
                        "capacity_bits": r.bits(),
                        "singular_values": r.singular_values(),
                    })
                })
                .collect();
            let mut text = json!({
                "format": "raycap capacity v1",
                "lambda": params.wavelength,
                "spacing": params.spacing,
                "geometry": geom.to_string(),
                "n_t": rays,
                "snr_db": snr_db,
                "phi": phi,
                "results": results,
            })
            .to_string();
            text.push('\n');
            text
        }
    };
    write_output(&opts.out, &content)
}

// ── sweep ───────────────────────────────────────────────────────────────

fn cmd_sweep(sub: SweepCommand, settings: &Settings, opts: &OutputOpts) -> Result<(), CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.threads)
        .build()
        .map_err(|e| CliError::usage(format!("--threads: {e}")))?;
    let mut series = pool.install(|| build_series(sub, settings))?;
    if series.spec.swept == raycap::sweep::SweptVariable::PhiDeg {
        // How flat the azimuth dependence is, kept out of the data stream.
        if let Some((min, max)) = series.y_extent(0) {
            eprintln!("phi capacity spread (max - min) = {:.6} bits", max - min);
        }
    }
    if !opts.reproducible {
        series.metadata.timestamp = Some(unix_now());
    }
    let content = match opts.format {
        OutputFormat::Csv => series.to_csv_string(),
        OutputFormat::Json => {
            let mut s = series.to_json_string();
            s.push('\n');
            s
        }
    };
    write_output(&opts.out, &content)
}

fn build_series(sub: SweepCommand, settings: &Settings) -> Result<SweepSeries, CliError> {
    match sub {
        SweepCommand::Antennas(a) => {
            let params = resolve_wave(&a.wave, settings)?;
            let rays = resolve_rays(a.rays, settings)?;
            let values = count_range(&a.range, settings, 1, 50)?;
            let snr_db = resolve_or(a.snr_db, settings, "snr-db", 0.0)?;
            let setup = resolve_setup(a.setup, settings)?;
            let phi = resolve_or(a.phi, settings, "phi", 0.0)?;
            let cfg = CapacityConfig::from_snr_db(snr_db, setup)?;
            Ok(sweep_antennas(params, rays, &values, &cfg, phi)?)
        }
        SweepCommand::Rays(a) => {
            let params = resolve_wave(&a.wave, settings)?;
            let antennas = require(a.antennas, settings, "antennas", "--antennas")?;
            if antennas == 0 {
                return Err(CliError::usage("--antennas must be at least 1"));
            }
            let values = count_range(&a.range, settings, 1, 50)?;
            let snr_db = resolve_or(a.snr_db, settings, "snr-db", 0.0)?;
            let setup = resolve_setup(a.setup, settings)?;
            let phi = resolve_or(a.phi, settings, "phi", 0.0)?;
            let cfg = CapacityConfig::from_snr_db(snr_db, setup)?;
            Ok(sweep_rays(params, antennas, &values, &cfg, phi)?)
        }
        SweepCommand::Snr(a) => {
            let params = resolve_wave(&a.wave, settings)?;
            let antennas = require(a.antennas, settings, "antennas", "--antennas")?;
            if antennas == 0 {
                return Err(CliError::usage("--antennas must be at least 1"));
            }
            let rays = resolve_rays(a.rays, settings)?;
            let values = float_range(&a.range, settings, (-10.0, 30.0, 1.0))?;
            let setup = resolve_setup(a.setup, settings)?;
            Ok(sweep_snr_vs_siso(params, antennas, rays, &values, setup)?)
        }
        SweepCommand::Phi(a) => {
            let params = resolve_wave(&a.wave, settings)?;
            let side = require(a.side, settings, "side", "--side")?;
            if side == 0 {
                return Err(CliError::usage("--side must be at least 1"));
            }
            let rays = resolve_rays(a.rays, settings)?;
            let values = float_range(&a.range, settings, (0.0, 90.0, 5.0))?;
            let snr_db = resolve_or(a.snr_db, settings, "snr-db", 0.0)?;
            let setup = resolve_setup(a.setup, settings)?;
            let cfg = CapacityConfig::from_snr_db(snr_db, setup)?;
            Ok(sweep_phi(params, side, rays, &values, &cfg)?)
        }
        SweepCommand::LinearVsSquare(a) => {
            let params = resolve_wave(&a.wave, settings)?;
            let elements = require(a.elements, settings, "elements", "--elements")?;
            if elements == 0 {
                return Err(CliError::usage("--elements must be at least 1"));
            }
            let rays = resolve_rays(a.rays, settings)?;
            let values = float_range(&a.range, settings, (-10.0, 30.0, 1.0))?;
            let setup = resolve_setup(a.setup, settings)?;
            Ok(compare_linear_square(
                params, elements, rays, &values, setup,
            )?)
        }
    }
}

// ── sphere ──────────────────────────────────────────────────────────────

fn cmd_sphere(args: SphereArgs, settings: &Settings, opts: &OutputOpts) -> Result<(), CliError> {
    let n = resolve(args.n, settings, "n")?;
    let (from, to) = match n {
        Some(v) => (v, v),
        None => (
            resolve_or(args.from, settings, "from", sphere::MIN_N)?,
            resolve_or(args.to, settings, "to", sphere::MAX_N)?,
        ),
    };
    if from < sphere::MIN_N || to > sphere::MAX_N || from > to {
        let flag = if n.is_some() { "--n" } else { "--from/--to" };
        return Err(CliError::usage(format!(
            "{flag}: N must lie in {}..={}, got {}..={}",
            sphere::MIN_N,
            sphere::MAX_N,
            from,
            to
        )));
    }
    let compare = args.compare_paper || settings.get_flag("compare-paper")?;

    let content = match opts.format {
        OutputFormat::Csv => {
            let mut text = String::new();
            text.push_str("# raycap sphere v1\n");
            text.push_str("N,d_N_deg,r_N_deg,packing_coverage,covering_density");
            if compare {
                text.push_str(
                    ",published_packing,packing_deviation,published_density,density_deviation",
                );
            }
            text.push('\n');
            for n in from..=to {
                let entry = sphere::entry(n)?;
                let packing = sphere::packing_coverage(n)?.coverage_fraction;
                let density = sphere::covering_density(n)?.coverage_fraction;
                text.push_str(&format!(
                    "{},{:.7},{:.4},{:.4},{:.4}",
                    n, entry.tammes_separation_deg, entry.covering_radius_deg, packing, density
                ));
                if compare {
                    let pub_packing = sphere::published_packing_coverage(n)?;
                    let pub_density = sphere::published_covering_density(n)?;
                    text.push_str(&format!(
                        ",{:.4},{:.4},{:.4},{:.4}",
                        pub_packing,
                        (packing - pub_packing).abs(),
                        pub_density,
                        (density - pub_density).abs()
                    ));
                }
                text.push('\n');
            }
            text
        }
        OutputFormat::Json => {
            let rows: Vec<serde_json::Value> = (from..=to)
                .map(|n| {
                    let entry = sphere::entry(n).expect("range checked");
                    let packing = sphere::packing_coverage(n).expect("range checked");
                    let density = sphere::covering_density(n).expect("range checked");
                    let mut row = json!({
                        "n": n,
                        "d_n_deg": entry.tammes_separation_deg,
                        "r_n_deg": entry.covering_radius_deg,
                        "packing_coverage": packing.coverage_fraction,
                        "covering_density": density.coverage_fraction,
                    });
                    if compare {
                        let pub_packing =
                            sphere::published_packing_coverage(n).expect("range checked");
                        let pub_density =
                            sphere::published_covering_density(n).expect("range checked");
                        row["published_packing"] = json!(pub_packing);
                        row["packing_deviation"] =
                            json!((packing.coverage_fraction - pub_packing).abs());
                        row["published_density"] = json!(pub_density);
                        row["density_deviation"] =
                            json!((density.coverage_fraction - pub_density).abs());
                    }
                    row
                })
                .collect();
            let mut text = json!({ "format": "raycap sphere v1", "rows": rows }).to_string();
            text.push('\n');
            text
        }
    };
    write_output(&opts.out, &content)
}

// ── diagnose ────────────────────────────────────────────────────────────

fn cmd_diagnose(
    args: DiagnoseArgs,
    settings: &Settings,
    opts: &OutputOpts,
) -> Result<(), CliError> {
    let (geom, params) = resolve_geometry(&args.geometry, &args.wave, settings)?;
    let rays = resolve_rays(args.rays, settings)?;
    let phi = resolve_or(args.phi, settings, "phi", 0.0)?;
    let bessel = args.bessel || settings.get_flag("bessel")?;

    let is_linear = matches!(geom.layout(), raycap::geometry::ArrayLayout::Linear { .. });
    if bessel && !is_linear {
        return Err(CliError::usage(
            "--bessel requires a linear geometry; the Bessel limit is not defined for --planar",
        ));
    }

    let fan = RayFan::equal_angle(rays, phi)?;
    let h = build_channel(&geom, &fan);
    let diag = gram_diagnostic(&h, &geom)?;

    let content = match opts.format {
        OutputFormat::Csv => {
            let mut text = String::new();
            text.push_str("# raycap diagnose v1\n");
            text.push_str(&format!(
                "# lambda={} spacing={} geometry={} n_t={}\n",
                params.wavelength, params.spacing, geom, rays
            ));
            text.push_str("metric,value\n");
            text.push_str(&format!("max_diag_error,{:.8e}\n", diag.max_diag_error()));
            text.push_str(&format!(
                "max_offdiag_over_nt,{:.8e}\n",
                diag.max_offdiag_modulus()
            ));
            if let Some(dev) = diag.max_bessel_deviation() {
                text.push_str(&format!("max_bessel_deviation,{:.8e}\n", dev));
            }
            text
        }
        OutputFormat::Json => {
            let mut obj = json!({
                "format": "raycap diagnose v1",
                "lambda": params.wavelength,
                "spacing": params.spacing,
                "geometry": geom.to_string(),
                "n_t": rays,
                "max_diag_error": diag.max_diag_error(),
                "max_offdiag_over_nt": diag.max_offdiag_modulus(),
            });
            if let Some(dev) = diag.max_bessel_deviation() {
                obj["max_bessel_deviation"] = json!(dev);
            }
            let mut text = obj.to_string();
            text.push('\n');
            text
        }
    };
    write_output(&opts.out, &content)
}
