//! Command-line front end: sampling, potentials, certification, inradius
//! estimation, experiment campaigns, and figure generation.
//!
//! Exit codes: 0 success, 1 runtime error, 2 usage error. Randomness always
//! comes from `--seed`; without it a fresh seed is drawn and logged to
//! stderr so stdout stays reproducible.

use std::io::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use lemni::experiments::{self, ExperimentConfig};
use lemni::measures::{self, MeasureSpec};
use lemni::polynomial::{certify_disk, ZeroSet};
use lemni::raster::{
    contour_svg, distance_transform, inradius_estimate, rasterize, write_grid_csv, Bounds,
    OverlayCircle, StrokeStyle,
};
use lemni::{gaussian, Error, Result};

#[derive(Parser)]
#[command(
    name = "lemni",
    about = "Random polynomial lemniscates: sampling, certification, inradius statistics",
    version
)]
struct Cli {
    /// Worker threads for parallel sections (default: all cores; env
    /// LEMNI_THREADS as fallback).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw zeros from a measure and write them as `re im` lines.
    Sample(SampleArgs),
    /// Evaluate the logarithmic potential of a measure at a point.
    Potential(PotentialArgs),
    /// Rasterize a lemniscate to PGM (and optionally its distance field).
    Lemniscate(LemniscateArgs),
    /// Estimate the inradius of a rasterized lemniscate.
    Inradius(InradiusArgs),
    /// Certify that a disk lies inside a lemniscate.
    Certify(CertifyArgs),
    /// Run an experiment campaign from a JSON config.
    Experiment(ExperimentArgs),
    /// Emit a contour figure (SVG) for a sampled lemniscate.
    Figure(FigureArgs),
    /// Sample the circle-case Gaussian limit field.
    LimitField(LimitFieldArgs),
}

#[derive(Args)]
struct SampleArgs {
    /// Measure: disk:R | circle | ginibre | file:PATH
    #[arg(long)]
    measure: String,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    seed: Option<u64>,
    /// Output path (stdout if omitted).
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct PotentialArgs {
    #[arg(long)]
    measure: String,
    /// Point as `re` or `re,im`.
    #[arg(long)]
    z: String,
    /// Use the Monte Carlo estimator instead of the closed form.
    #[arg(long)]
    mc: bool,
    /// Monte Carlo sample count.
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct LemniscateArgs {
    /// Zeros: roots-of-unity:N | origin:N | file:PATH
    #[arg(long)]
    zeros: String,
    #[arg(long, default_value_t = 0.005)]
    h: f64,
    /// Window as `xmin,xmax,ymin,ymax` (default: fits the zeros).
    #[arg(long, name = "box")]
    bounds: Option<String>,
    /// PGM output path.
    #[arg(long)]
    out: Option<String>,
    /// Distance-field CSV output path.
    #[arg(long)]
    distance_csv: Option<String>,
}

#[derive(Args)]
struct InradiusArgs {
    #[arg(long)]
    zeros: String,
    #[arg(long, default_value_t = 0.005)]
    h: f64,
    #[arg(long, name = "box")]
    bounds: Option<String>,
}

#[derive(Args)]
struct CertifyArgs {
    #[arg(long)]
    zeros: String,
    /// Disk center as `re` or `re,im`.
    #[arg(long, default_value = "0")]
    center: String,
    #[arg(long)]
    radius: f64,
}

#[derive(Args)]
struct ExperimentArgs {
    /// JSON config path.
    #[arg(long)]
    config: String,
    /// Override the config's output_path.
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct FigureArgs {
    #[arg(long)]
    measure: String,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    seed: Option<u64>,
    /// SVG output path.
    #[arg(long)]
    out: String,
    #[arg(long, default_value_t = 0.005)]
    h: f64,
}

#[derive(Args)]
struct LimitFieldArgs {
    /// Series truncation.
    #[arg(long, default_value_t = 500)]
    k: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 0.005)]
    h: f64,
    #[arg(long, default_value_t = 0.98)]
    box_radius: f64,
    /// Field snapshot CSV output path.
    #[arg(long)]
    out: Option<String>,
}

fn parse_measure(text: &str) -> Result<MeasureSpec> {
    if text == "circle" {
        return Ok(MeasureSpec::UniformCircle);
    }
    if text == "ginibre" {
        return Ok(MeasureSpec::GinibreNormalized);
    }
    if let Some(r) = text.strip_prefix("disk:") {
        let radius: f64 = r
            .parse()
            .map_err(|e| Error::Config(format!("bad disk radius `{r}`: {e}")))?;
        return MeasureSpec::uniform_disk(radius);
    }
    if let Some(path) = text.strip_prefix("file:") {
        let zeros = ZeroSet::load(path)?;
        return MeasureSpec::empirical(zeros.into_zeros());
    }
    Err(Error::Config(format!(
        "unknown measure `{text}`; expected disk:R, circle, ginibre, or file:PATH"
    )))
}

fn parse_zeros(text: &str) -> Result<ZeroSet> {
    if let Some(n) = text.strip_prefix("roots-of-unity:") {
        let n: usize = n
            .parse()
            .map_err(|e| Error::Config(format!("bad count `{n}`: {e}")))?;
        return ZeroSet::roots_of_unity(n);
    }
    if let Some(n) = text.strip_prefix("origin:") {
        let n: usize = n
            .parse()
            .map_err(|e| Error::Config(format!("bad count `{n}`: {e}")))?;
        return ZeroSet::repeated(Complex64::new(0.0, 0.0), n);
    }
    if let Some(path) = text.strip_prefix("file:") {
        return ZeroSet::load(path);
    }
    Err(Error::Config(format!(
        "unknown zero set `{text}`; expected roots-of-unity:N, origin:N, or file:PATH"
    )))
}

fn parse_complex(text: &str) -> Result<Complex64> {
    let parts: Vec<&str> = text.split(',').collect();
    let parse = |s: &str| -> Result<f64> {
        s.trim()
            .parse()
            .map_err(|e| Error::Config(format!("bad number `{s}`: {e}")))
    };
    match parts.as_slice() {
        [re] => Ok(Complex64::new(parse(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(parse(re)?, parse(im)?)),
        _ => Err(Error::Config(format!("bad complex `{text}`; expected `re` or `re,im`"))),
    }
}

fn parse_bounds(text: &str) -> Result<Bounds> {
    let vals: Vec<f64> = text
        .split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|e| Error::Config(format!("bad bound `{s}`: {e}")))
        })
        .collect::<Result<_>>()?;
    match vals.as_slice() {
        [a, b, c, d] => Bounds::new(*a, *b, *c, *d),
        _ => Err(Error::Config("box needs xmin,xmax,ymin,ymax".into())),
    }
}

/// Window that encloses the lemniscate of the given zeros: every point
/// farther than 1 from all zeros is outside, so max |zero| + 1 suffices.
fn bounds_for_zeros(zeros: &ZeroSet, h: f64) -> Result<Bounds> {
    let max_r = zeros.zeros().iter().map(|z| z.norm()).fold(0.0, f64::max);
    // round the half-width up to a multiple of h to keep the grid aligned
    let half = (((max_r + 1.0) / h).ceil()) * h;
    Bounds::square(half)
}

fn seed_or_entropy(seed: Option<u64>) -> u64 {
    match seed {
        Some(s) => s,
        None => {
            let s = rand::random::<u64>();
            eprintln!("generated seed: {s}");
            s
        }
    }
}

fn write_or_stdout(path: &Option<String>, content: &[u8]) -> Result<()> {
    match path {
        Some(p) => {
            if let Some(parent) = std::path::Path::new(p).parent() {
                if !parent.as_os_str().is_empty() {
                    std::fs::create_dir_all(parent)?;
                }
            }
            std::fs::write(p, content)?;
            Ok(())
        }
        None => {
            std::io::stdout().write_all(content)?;
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let threads = cli
        .threads
        .or_else(|| std::env::var("LEMNI_THREADS").ok().and_then(|v| v.parse().ok()));
    if let Some(t) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    }

    match cli.command {
        Command::Sample(args) => {
            let measure = parse_measure(&args.measure)?;
            let seed = seed_or_entropy(args.seed);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let zeros = measures::sample(&measure, args.n, &mut rng)?;
            let mut buf = Vec::new();
            zeros.write_text(&mut buf)?;
            write_or_stdout(&args.out, &buf)
        }
        Command::Potential(args) => {
            let measure = parse_measure(&args.measure)?;
            let z = parse_complex(&args.z)?;
            if args.mc {
                let seed = seed_or_entropy(args.seed);
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let est = measures::potential_mc(&measure, z, args.samples, &mut rng)?;
                println!("{} {}", est.value, est.stderr);
            } else {
                let est = measures::potential(&measure, z)?;
                println!("{}", est.value);
            }
            Ok(())
        }
        Command::Lemniscate(args) => {
            let zeros = parse_zeros(&args.zeros)?;
            let bounds = match &args.bounds {
                Some(b) => parse_bounds(b)?,
                None => bounds_for_zeros(&zeros, args.h)?,
            };
            let raster = rasterize(&zeros, bounds, args.h)?;
            if let Some(out) = &args.out {
                raster.save_pgm(out)?;
            }
            if let Some(path) = &args.distance_csv {
                let dist = distance_transform(&raster);
                let mut buf = Vec::new();
                write_grid_csv(&mut buf, &dist, raster.nx())?;
                write_or_stdout(&Some(path.clone()), &buf)?;
            }
            println!(
                "cells {} occupied {} fraction {:.6}",
                raster.cells(),
                raster.occupied_count(),
                raster.occupied_count() as f64 / raster.cells() as f64
            );
            Ok(())
        }
        Command::Inradius(args) => {
            let zeros = parse_zeros(&args.zeros)?;
            let bounds = match &args.bounds {
                Some(b) => parse_bounds(b)?,
                None => bounds_for_zeros(&zeros, args.h)?,
            };
            let raster = rasterize(&zeros, bounds, args.h)?;
            let est = inradius_estimate(&raster);
            println!(
                "rho_hat {} +/- {} center {} {} occupied {}",
                est.rho_hat, est.half_cell_error, est.center.re, est.center.im,
                est.grid_points_inside
            );
            Ok(())
        }
        Command::Certify(args) => {
            let zeros = parse_zeros(&args.zeros)?;
            let center = parse_complex(&args.center)?;
            let cert = certify_disk(&zeros, center, args.radius);
            println!("{}", serde_json::to_string_pretty(&cert).map_err(Error::Json)?);
            Ok(())
        }
        Command::Experiment(args) => {
            let mut config = ExperimentConfig::load(&args.config)?;
            if let Some(out) = args.out {
                config.output_path = out;
            }
            let output = experiments::run(&config)?;
            let paths = experiments::persist(&output, &config.output_path)?;
            println!("summary {}", paths.json.display());
            println!("trials {}", paths.csv.display());
            for p in &paths.histograms {
                println!("histogram {}", p.display());
            }
            for per_n in &output.summary.per_n {
                let mut line = format!("n {} trials {}", per_n.n, per_n.trials);
                if let (Some(f), Some(lo), Some(hi)) =
                    (per_n.frequency, per_n.wilson_low, per_n.wilson_high)
                {
                    line += &format!(" frequency {f:.4} wilson [{lo:.4}, {hi:.4}]");
                }
                if let Some(m) = per_n.median_rho {
                    line += &format!(" median_rho {m:.4}");
                }
                println!("{line}");
            }
            if let Some(ks) = output.summary.ks_statistic {
                println!("ks {ks:.4}");
            }
            if let Some(report) = &output.summary.bennett {
                println!(
                    "bennett empirical {} bound {:.3e} pass {}",
                    report.empirical, report.bound, report.pass
                );
            }
            Ok(())
        }
        Command::Figure(args) => {
            let measure = parse_measure(&args.measure)?;
            let seed = seed_or_entropy(args.seed);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let zeros = measures::sample(&measure, args.n, &mut rng)?;
            let bounds = Bounds::for_measure(&measure)?;
            let mut overlays = Vec::new();
            match &measure {
                MeasureSpec::UniformDisk { .. } => {
                    // dotted circle at the negative-set inradius, suppressed
                    // when it degenerates to a point
                    let rc = measures::negative_set_inradius(&measure)?;
                    if rc > 0.0 {
                        overlays.push(OverlayCircle {
                            center: Complex64::new(0.0, 0.0),
                            radius: rc,
                            style: StrokeStyle::Dotted,
                        });
                    }
                }
                MeasureSpec::UniformCircle | MeasureSpec::GinibreNormalized => {
                    overlays.push(OverlayCircle {
                        center: Complex64::new(0.0, 0.0),
                        radius: 1.0,
                        style: StrokeStyle::Dashed,
                    });
                }
                MeasureSpec::Empirical { .. } => {}
            }
            let svg = contour_svg(&zeros, bounds, args.h, &overlays)?;
            write_or_stdout(&Some(args.out.clone()), svg.as_bytes())?;
            println!("figure {}", args.out);
            Ok(())
        }
        Command::LimitField(args) => {
            let seed = seed_or_entropy(args.seed);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let sample = gaussian::sample_g(args.k, &mut rng)?;
            if let Some(out) = &args.out {
                let half = ((args.box_radius / args.h).ceil()) * args.h;
                let n_side = (2.0 * half / args.h).round() as usize;
                let mut values = Vec::with_capacity(n_side * n_side);
                for iy in 0..n_side {
                    let y = -half + (iy as f64 + 0.5) * args.h;
                    for ix in 0..n_side {
                        let x = -half + (ix as f64 + 0.5) * args.h;
                        let z = Complex64::new(x, y);
                        values.push(if z.norm() <= args.box_radius {
                            gaussian::evaluate_g(&sample, z)?
                        } else {
                            0.0
                        });
                    }
                }
                let mut buf = Vec::new();
                write_grid_csv(&mut buf, &values, n_side)?;
                write_or_stdout(&Some(out.clone()), &buf)?;
            }
            let rho = gaussian::limit_inradius_of_sample(&sample, args.box_radius, args.h)?;
            println!("limit_inradius {rho}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
