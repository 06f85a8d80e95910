//! Campaign runners: one function per experiment kind, a dispatcher, and the
//! shared trial loop.

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use rayon::prelude::*;

use super::{
    derive_seed, histogram, ExperimentConfig, ExperimentKind, ExperimentOutput, PerNSummary,
    Summary, TailCheck, TrialRecord,
};
use crate::concentration;
use crate::gaussian;
use crate::measures::{self, MeasureSpec};
use crate::polynomial::{certify_disk, inf_bound_on_circle, log_modulus, Verdict};
use crate::raster::{connected_components, inradius_estimate, rasterize};
use crate::{Error, Result};

/// Runs the campaign described by the config and returns its outputs;
/// nothing is written to disk here (see [`super::persist`]).
pub fn run(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    config.validate()?;
    match config.kind {
        ExperimentKind::Containment => run_containment(config),
        ExperimentKind::Exclusion => run_exclusion(config),
        ExperimentKind::InradiusDistribution => run_inradius_distribution(config),
        ExperimentKind::GinibreSandwich => run_ginibre_sandwich(config),
        ExperimentKind::SmallComponents => run_small_components(config),
        ExperimentKind::BennettCheck => run_bennett_check(config),
        ExperimentKind::LimitComparison => run_limit_comparison(config),
    }
}

/// Parallel trial sweep in deterministic (n, trial_index) output order.
fn sweep<F>(config: &ExperimentConfig, per_trial: F) -> Vec<TrialRecord>
where
    F: Fn(usize, usize, u64, &mut ChaCha8Rng) -> TrialRecord + Sync,
{
    let kind_tag = config.kind.tag();
    let jobs: Vec<(usize, usize)> = config
        .n_values
        .iter()
        .flat_map(|&n| (0..config.trials).map(move |t| (n, t)))
        .collect();
    jobs.into_par_iter()
        .map(|(n, trial)| {
            let seed = derive_seed(config.master_seed, kind_tag, n as u64, trial as u64);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let start = std::time::Instant::now();
            let mut record = per_trial(n, trial, seed, &mut rng);
            record.wall_time = start.elapsed().as_secs_f64();
            record
        })
        .collect()
}

fn flag_summary(config: &ExperimentConfig, records: &[TrialRecord]) -> Vec<PerNSummary> {
    config
        .n_values
        .iter()
        .map(|&n| {
            let successes = records
                .iter()
                .filter(|r| r.n == n && r.flag == Some(true))
                .count();
            PerNSummary::new(n, config.trials).with_successes(successes)
        })
        .collect()
}

fn target_disk(config: &ExperimentConfig) -> (Complex64, f64) {
    let c = config.target_center.unwrap_or([0.0, 0.0]);
    (
        Complex64::new(c[0], c[1]),
        config.target_radius.unwrap_or(0.0),
    )
}

/// Probes the closed-form potential at equispaced points of a circle and
/// demands a strict sign.
fn check_potential_sign_on_circle(
    measure: &MeasureSpec,
    center: Complex64,
    radius: f64,
    want_negative: bool,
) -> Result<()> {
    for k in 0..32 {
        let theta = std::f64::consts::TAU * k as f64 / 32.0;
        let z = center + Complex64::from_polar(radius, theta);
        let u = measures::potential(measure, z)?.value;
        let ok = if want_negative { u < 0.0 } else { u > 0.0 };
        if !ok {
            return Err(Error::Precondition(format!(
                "potential at boundary probe {z} is {u}, expected {} zero",
                if want_negative { "below" } else { "above" },
            )));
        }
    }
    Ok(())
}

/// Certified containment of a fixed disk: frequency of `certify_disk =
/// certified_inside` per degree.
fn run_containment(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    let (center, radius) = target_disk(config);
    if radius <= 0.0 {
        return Err(Error::Config("containment target radius must be positive".into()));
    }
    let rc = measures::negative_set_inradius(&config.measure)?;
    if center.norm() + radius >= rc {
        return Err(Error::Precondition(format!(
            "target disk (|c| + a = {}) must sit strictly inside the negative set (r_c = {rc})",
            center.norm() + radius
        )));
    }
    check_potential_sign_on_circle(&config.measure, center, radius, true)?;

    let records = sweep(config, |n, trial, seed, rng| {
        let mut record = TrialRecord::new(n, trial, seed);
        let zeros = measures::sample(&config.measure, n, rng).expect("validated");
        let cert = certify_disk(&zeros, center, radius);
        record.flag = Some(cert.verdict == Verdict::CertifiedInside);
        record
    });
    let mut summary = Summary::new(config);
    summary.per_n = flag_summary(config, &records);
    Ok(ExperimentOutput {
        summary,
        records,
        histograms: Vec::new(),
    })
}

/// Certified exclusion on a probe circle in the positive set: frequency of
/// a positive lower bound for `log|p|` on the circle.
fn run_exclusion(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    let probe_radius = config.probe_radius.expect("validated");
    let support = config.measure.support_radius();
    if probe_radius <= support + 1e-6 {
        return Err(Error::Precondition(format!(
            "probe circle radius {probe_radius} must clear the support radius {support}"
        )));
    }
    check_potential_sign_on_circle(
        &config.measure,
        Complex64::new(0.0, 0.0),
        probe_radius,
        false,
    )?;

    let records = sweep(config, |n, trial, seed, rng| {
        let mut record = TrialRecord::new(n, trial, seed);
        let zeros = measures::sample(&config.measure, n, rng).expect("validated");
        let mut excluded = false;
        let mut points = 256;
        while points <= (1 << 16) {
            match inf_bound_on_circle(&zeros, Complex64::new(0.0, 0.0), probe_radius, points) {
                Ok(bound) if bound > 0.0 => {
                    excluded = true;
                    break;
                }
                Ok(_) => points *= 2,
                Err(_) => break, // a zero strayed onto the probe circle
            }
        }
        record.flag = Some(excluded);
        record
    });
    let mut summary = Summary::new(config);
    summary.per_n = flag_summary(config, &records);
    Ok(ExperimentOutput {
        summary,
        records,
        histograms: Vec::new(),
    })
}

fn rho_stats(per_n: &mut PerNSummary, rhos: &[f64]) {
    per_n.median_rho = Some(crate::stats::median(rhos));
    per_n.mean_rho = Some(crate::stats::mean(rhos));
    per_n.std_rho = Some(crate::stats::sample_stddev(rhos));
}

/// Circle-case inradius distribution: full-window `rho_hat` samples per
/// degree, plus truncated-limit-field samples and the KS distance between
/// the two at the largest degree.
fn run_inradius_distribution(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    if config.measure != MeasureSpec::UniformCircle {
        return Err(Error::Precondition(
            "inradius_distribution is defined for the uniform circle measure".into(),
        ));
    }
    let window = config.window()?;
    let records = sweep(config, |n, trial, seed, rng| {
        let mut record = TrialRecord::new(n, trial, seed);
        let zeros = measures::sample(&config.measure, n, rng).expect("validated");
        let raster = rasterize(&zeros, window, config.h).expect("window validated");
        let est = inradius_estimate(&raster);
        record.rho_hat = Some(est.rho_hat);
        record.occupied_cells = Some(est.grid_points_inside);
        record
    });

    // limit-field samples on their own seed stream (kind tag of the
    // limit_comparison campaign, n = 0)
    let k_truncation = config.k_truncation.unwrap_or(500);
    let box_radius = config.box_radius.unwrap_or(0.98);
    let limit_samples: Vec<f64> = (0..config.trials as u64)
        .into_par_iter()
        .map(|t| {
            let seed = derive_seed(
                config.master_seed,
                ExperimentKind::LimitComparison.tag(),
                0,
                t,
            );
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            gaussian::limit_inradius_sample(k_truncation, box_radius, config.h, &mut rng)
                .expect("parameters validated")
        })
        .collect();

    let mut summary = Summary::new(config);
    for &n in &config.n_values {
        let rhos: Vec<f64> = records
            .iter()
            .filter(|r| r.n == n)
            .filter_map(|r| r.rho_hat)
            .collect();
        let mut per_n = PerNSummary::new(n, config.trials);
        rho_stats(&mut per_n, &rhos);
        summary.per_n.push(per_n);
    }
    let n_max = *config.n_values.last().expect("nonempty");
    let rhos_max: Vec<f64> = records
        .iter()
        .filter(|r| r.n == n_max)
        .filter_map(|r| r.rho_hat)
        .collect();
    summary.ks_statistic = Some(crate::stats::ks_statistic(&rhos_max, &limit_samples));

    let hist_hi = 0.6;
    let histograms = vec![
        ("rho_hist".to_string(), histogram(&rhos_max, 30, 0.0, hist_hi)),
        (
            "limit_hist".to_string(),
            histogram(&limit_samples, 30, 0.0, hist_hi),
        ),
    ];
    Ok(ExperimentOutput {
        summary,
        records,
        histograms,
    })
}

/// Ginibre sandwich: joint frequency of certified `D(0, r)` containment and
/// a grid check that the lemniscate stays inside `D(0, s)`.
fn run_ginibre_sandwich(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    if config.measure != MeasureSpec::GinibreNormalized {
        return Err(Error::Precondition(
            "ginibre_sandwich is defined for the normalized Ginibre measure".into(),
        ));
    }
    let r = config.inner_radius.unwrap_or(0.8);
    let s = config.outer_radius.unwrap_or(1.2);
    if !(0.0 < r && r < 1.0 && 1.0 < s) {
        return Err(Error::Config(format!(
            "sandwich radii need 0 < r < 1 < s, got r = {r}, s = {s}"
        )));
    }
    // annulus that catches any lemniscate point outside D_s: when every zero
    // sits in D_s, the lemniscate is inside D_{s+1}
    let outer = s + 1.0;
    let annulus_cells: Vec<Complex64> = {
        let cells_per_side = (2.0 * outer / config.h).ceil() as usize;
        let mut cells = Vec::new();
        for iy in 0..cells_per_side {
            for ix in 0..cells_per_side {
                let x = -outer + (ix as f64 + 0.5) * config.h;
                let y = -outer + (iy as f64 + 0.5) * config.h;
                let rad = x.hypot(y);
                if rad >= s && rad <= outer {
                    cells.push(Complex64::new(x, y));
                }
            }
        }
        cells
    };

    let records = sweep(config, |n, trial, seed, rng| {
        let mut record = TrialRecord::new(n, trial, seed);
        let zeros = measures::sample(&config.measure, n, rng).expect("validated");
        let cert = certify_disk(&zeros, Complex64::new(0.0, 0.0), r);
        let inside_ok = cert.verdict == Verdict::CertifiedInside;
        let zeros_ok = zeros.zeros().iter().all(|z| z.norm() <= s);
        let grid_ok = zeros_ok
            && annulus_cells
                .iter()
                .all(|&c| !log_modulus(&zeros, c).is_negative());
        record.flag = Some(inside_ok && grid_ok);
        record
    });
    let mut summary = Summary::new(config);
    summary.per_n = flag_summary(config, &records);
    Ok(ExperimentOutput {
        summary,
        records,
        histograms: Vec::new(),
    })
}

/// Fragmentation regime: per-degree medians of `rho_hat`, the fraction of
/// occupied cells within `3h` of a zero, and component statistics.
fn run_small_components(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    match &config.measure {
        MeasureSpec::UniformDisk { radius } if *radius >= measures::SQRT_E => {}
        other => {
            return Err(Error::Precondition(format!(
                "small_components needs a uniform disk of radius >= sqrt(e), got {}",
                other.label()
            )));
        }
    }
    let window = config.window()?;
    let near = 3.0 * config.h;
    let records = sweep(config, |n, trial, seed, rng| {
        let mut record = TrialRecord::new(n, trial, seed);
        let zeros = measures::sample(&config.measure, n, rng).expect("validated");
        let raster = rasterize(&zeros, window, config.h).expect("window validated");
        let est = inradius_estimate(&raster);
        let comps = connected_components(&raster, &zeros);
        let occupied = est.grid_points_inside;
        let mut near_count = 0usize;
        for iy in 0..raster.ny() {
            for ix in 0..raster.nx() {
                if !raster.occupied(ix, iy) {
                    continue;
                }
                let c = raster.cell_center(ix, iy);
                if zeros.zeros().iter().any(|z| (z - c).norm() <= near) {
                    near_count += 1;
                }
            }
        }
        record.rho_hat = Some(est.rho_hat);
        record.occupied_cells = Some(occupied);
        record.near_zero_fraction = Some(if occupied == 0 {
            1.0
        } else {
            near_count as f64 / occupied as f64
        });
        record.component_count = Some(comps.len());
        record.max_component_diameter = Some(
            comps
                .iter()
                .map(|c| c.diameter)
                .fold(0.0, f64::max),
        );
        record
    });

    let mut summary = Summary::new(config);
    for &n in &config.n_values {
        let of_n: Vec<&TrialRecord> = records.iter().filter(|r| r.n == n).collect();
        let rhos: Vec<f64> = of_n.iter().filter_map(|r| r.rho_hat).collect();
        let mut per_n = PerNSummary::new(n, config.trials);
        rho_stats(&mut per_n, &rhos);
        let total_occ: usize = of_n.iter().filter_map(|r| r.occupied_cells).sum();
        let total_near: f64 = of_n
            .iter()
            .filter_map(|r| Some(r.near_zero_fraction? * r.occupied_cells? as f64))
            .sum();
        per_n.near_zero_fraction = Some(if total_occ == 0 {
            1.0
        } else {
            total_near / total_occ as f64
        });
        per_n.median_component_count = Some(crate::stats::median(
            &of_n
                .iter()
                .filter_map(|r| r.component_count.map(|c| c as f64))
                .collect::<Vec<_>>(),
        ));
        summary.per_n.push(per_n);
    }
    Ok(ExperimentOutput {
        summary,
        records,
        histograms: Vec::new(),
    })
}

/// Bennett harness: synthetic bounded-uniform tail checks plus the
/// containment-tail verification at the configured point.
fn run_bennett_check(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    let zp = config.z_point.expect("validated");
    let z = Complex64::new(zp[0], zp[1]);
    let n = *config.n_values.first().expect("nonempty");
    let report = concentration::verify_containment_bound(
        &config.measure,
        z,
        n,
        config.trials,
        config.master_seed,
    )?;

    // synthetic check: X_i uniform on [-1, 1], n = 100
    let synth_n = 100;
    let synth_trials = 100_000;
    let nu = synth_n as f64 / 3.0;
    let sums: Vec<f64> = (0..synth_trials as u64)
        .into_par_iter()
        .map(|t| {
            let seed = derive_seed(config.master_seed, config.kind.tag(), u64::MAX, t);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..synth_n)
                .map(|_| 2.0 * rand::Rng::random::<f64>(&mut rng) - 1.0)
                .sum()
        })
        .collect();
    let tail_checks: Vec<TailCheck> = [2.0, 5.0, 10.0, 20.0]
        .iter()
        .map(|&t| {
            let exceed = sums.iter().filter(|&&v| v > t).count();
            let empirical = exceed as f64 / synth_trials as f64;
            let bound = concentration::bennett_bound(nu, 1.0, t)
                .expect("positive parameters")
                .bound;
            let se = crate::stats::binomial_stderr(exceed, synth_trials);
            TailCheck {
                t,
                empirical,
                bound,
                pass: empirical <= bound + 3.0 * se,
            }
        })
        .collect();

    let mut summary = Summary::new(config);
    summary.per_n = vec![PerNSummary::new(n, config.trials)];
    summary.bennett = Some(report);
    summary.tail_checks = Some(tail_checks);
    Ok(ExperimentOutput {
        summary,
        records: Vec::new(),
        histograms: Vec::new(),
    })
}

/// Limit-field-only campaign: samples of the inradius of `{g < 0}` with the
/// support and tail-mass summaries of the limiting law.
fn run_limit_comparison(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    let k_truncation = config.k_truncation.unwrap_or(500);
    let box_radius = config.box_radius.unwrap_or(0.98);
    let records: Vec<TrialRecord> = (0..config.trials as u64)
        .into_par_iter()
        .map(|t| {
            let seed = derive_seed(config.master_seed, config.kind.tag(), 0, t);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let start = std::time::Instant::now();
            let rho = gaussian::limit_inradius_sample(k_truncation, box_radius, config.h, &mut rng)
                .expect("parameters validated");
            let mut record = TrialRecord::new(0, t as usize, seed);
            record.rho_hat = Some(rho);
            record.wall_time = start.elapsed().as_secs_f64();
            record
        })
        .collect();
    let rhos: Vec<f64> = records.iter().filter_map(|r| r.rho_hat).collect();
    let slack = 2.0 * config.h * std::f64::consts::SQRT_2;
    let in_range = rhos.iter().filter(|&&r| r > 0.0 && r < 0.5 + slack).count();

    let mut summary = Summary::new(config);
    let mut per_n = PerNSummary::new(0, config.trials);
    rho_stats(&mut per_n, &rhos);
    summary.per_n = vec![per_n];
    summary.limit_samples_in_range = Some(in_range);
    summary.limit_mass_below_01 =
        Some(rhos.iter().filter(|&&r| r < 0.1).count() as f64 / rhos.len().max(1) as f64);
    summary.limit_mass_above_04 =
        Some(rhos.iter().filter(|&&r| r > 0.4).count() as f64 / rhos.len().max(1) as f64);
    let histograms = vec![(
        "limit_hist".to_string(),
        histogram(&rhos, 30, 0.0, 0.6),
    )];
    Ok(ExperimentOutput {
        summary,
        records,
        histograms,
    })
}
