//! Seeded Monte Carlo campaigns over random lemniscates, with JSON + CSV
//! persistence.
//!
//! Every trial draws its RNG from `derive_seed(master_seed, kind, n,
//! trial_index)`, so any single trial can be replayed in isolation and the
//! whole campaign is reproducible bit for bit. Runners parallelize over
//! trials and reduce in deterministic (n, trial_index) order.

mod runners;

pub use runners::run;

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::concentration::ContainmentReport;
use crate::measures::MeasureSpec;
use crate::raster::Bounds;
use crate::{Error, Result};

/// Campaign flavors. The u64 tag feeds the per-trial seed derivation, so
/// renumbering would silently change every derived stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Containment,
    Exclusion,
    InradiusDistribution,
    GinibreSandwich,
    SmallComponents,
    BennettCheck,
    LimitComparison,
}

impl ExperimentKind {
    pub fn tag(self) -> u64 {
        match self {
            ExperimentKind::Containment => 1,
            ExperimentKind::Exclusion => 2,
            ExperimentKind::InradiusDistribution => 3,
            ExperimentKind::GinibreSandwich => 4,
            ExperimentKind::SmallComponents => 5,
            ExperimentKind::BennettCheck => 6,
            ExperimentKind::LimitComparison => 7,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Containment => "containment",
            ExperimentKind::Exclusion => "exclusion",
            ExperimentKind::InradiusDistribution => "inradius_distribution",
            ExperimentKind::GinibreSandwich => "ginibre_sandwich",
            ExperimentKind::SmallComponents => "small_components",
            ExperimentKind::BennettCheck => "bennett_check",
            ExperimentKind::LimitComparison => "limit_comparison",
        }
    }
}

/// Campaign configuration. Loaded from JSON; `validate` must pass before a
/// run. Kind-specific knobs are optional fields with documented defaults.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub measure: MeasureSpec,
    pub n_values: Vec<usize>,
    pub trials: usize,
    /// Raster cell size for kinds that rasterize.
    #[serde(default = "default_h")]
    pub h: f64,
    /// Raster window; defaults to the measure's support radius plus one.
    #[serde(default, rename = "box")]
    pub bounds: Option<Bounds>,
    pub master_seed: u64,
    /// Output basename; `.json`, `.csv` (and histogram `.csv`s) are
    /// appended.
    pub output_path: String,

    // containment
    #[serde(default)]
    pub target_center: Option<[f64; 2]>,
    #[serde(default)]
    pub target_radius: Option<f64>,
    // exclusion
    #[serde(default)]
    pub probe_radius: Option<f64>,
    // ginibre sandwich
    #[serde(default)]
    pub inner_radius: Option<f64>,
    #[serde(default)]
    pub outer_radius: Option<f64>,
    // bennett check
    #[serde(default)]
    pub z_point: Option<[f64; 2]>,
    // limit field
    #[serde(default)]
    pub k_truncation: Option<usize>,
    #[serde(default)]
    pub box_radius: Option<f64>,
}

fn default_h() -> f64 {
    0.005
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: ExperimentConfig = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn load<P: AsRef<Path>>(path: P) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        self.measure.validate()?;
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.n_values.is_empty() {
            return Err(Error::Config("n_values must be nonempty".into()));
        }
        if !self.n_values.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Config("n_values must be strictly increasing".into()));
        }
        if !self.h.is_finite() || self.h <= 0.0 {
            return Err(Error::Config(format!("h must be positive, got {}", self.h)));
        }
        if self.output_path.is_empty() {
            return Err(Error::Config("output_path must be nonempty".into()));
        }
        match self.kind {
            ExperimentKind::Containment => {
                if self.target_radius.is_none() {
                    return Err(Error::Config("containment needs target_radius".into()));
                }
            }
            ExperimentKind::Exclusion => {
                if self.probe_radius.is_none() {
                    return Err(Error::Config("exclusion needs probe_radius".into()));
                }
            }
            ExperimentKind::BennettCheck => {
                if self.z_point.is_none() {
                    return Err(Error::Config("bennett_check needs z_point".into()));
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// Raster window: explicit `box` or the measure default.
    pub fn window(&self) -> Result<Bounds> {
        match self.bounds {
            Some(b) => Bounds::new(b.xmin, b.xmax, b.ymin, b.ymax),
            None => Bounds::for_measure(&self.measure),
        }
    }
}

/// 64-bit finalizer from SplitMix64.
pub fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Per-trial seed: SplitMix64 chained over (master, kind, n, trial_index).
/// Any (n, trial) pair can be replayed without running its neighbors.
pub fn derive_seed(master_seed: u64, kind_tag: u64, n: u64, trial_index: u64) -> u64 {
    const GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;
    let mut s = master_seed;
    for x in [kind_tag, n, trial_index] {
        s = splitmix64(s.wrapping_add(GAMMA).wrapping_add(x));
    }
    s
}

/// One trial's persisted record. `wall_time` stays in memory only: persisted
/// artifacts must be byte-identical across reruns of the same config.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialRecord {
    pub n: usize,
    pub trial_index: usize,
    pub derived_seed: u64,
    /// Kind-specific success flag (certified / excluded / sandwiched).
    pub flag: Option<bool>,
    pub rho_hat: Option<f64>,
    pub component_count: Option<usize>,
    pub max_component_diameter: Option<f64>,
    pub occupied_cells: Option<usize>,
    /// Fraction of occupied cells within 3h of some zero.
    pub near_zero_fraction: Option<f64>,
    /// Seconds spent on this trial (not persisted).
    pub wall_time: f64,
}

impl TrialRecord {
    pub fn new(n: usize, trial_index: usize, derived_seed: u64) -> Self {
        TrialRecord {
            n,
            trial_index,
            derived_seed,
            flag: None,
            rho_hat: None,
            component_count: None,
            max_component_diameter: None,
            occupied_cells: None,
            near_zero_fraction: None,
            wall_time: 0.0,
        }
    }
}

/// Per-degree aggregates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerNSummary {
    pub n: usize,
    pub trials: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub successes: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frequency: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wilson_low: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wilson_high: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub median_rho: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_rho: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub std_rho: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub near_zero_fraction: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub median_component_count: Option<f64>,
}

impl PerNSummary {
    fn new(n: usize, trials: usize) -> Self {
        PerNSummary {
            n,
            trials,
            successes: None,
            frequency: None,
            wilson_low: None,
            wilson_high: None,
            median_rho: None,
            mean_rho: None,
            std_rho: None,
            near_zero_fraction: None,
            median_component_count: None,
        }
    }

    fn with_successes(mut self, successes: usize) -> Self {
        let (lo, hi) = crate::stats::wilson_interval(successes, self.trials, 1.96);
        self.successes = Some(successes);
        self.frequency = Some(successes as f64 / self.trials.max(1) as f64);
        self.wilson_low = Some(lo);
        self.wilson_high = Some(hi);
        self
    }
}

/// Synthetic bounded-variable tail check at one threshold.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailCheck {
    pub t: f64,
    pub empirical: f64,
    pub bound: f64,
    pub pass: bool,
}

/// Histogram bin for the persisted inradius histograms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub bin_left: f64,
    pub bin_right: f64,
    pub count: usize,
}

pub fn histogram(samples: &[f64], bins: usize, lo: f64, hi: f64) -> Vec<HistogramBin> {
    let width = (hi - lo) / bins as f64;
    let mut out: Vec<HistogramBin> = (0..bins)
        .map(|i| HistogramBin {
            bin_left: lo + i as f64 * width,
            bin_right: lo + (i + 1) as f64 * width,
            count: 0,
        })
        .collect();
    for &s in samples {
        if s < lo || s >= hi {
            continue;
        }
        let idx = (((s - lo) / width) as usize).min(bins - 1);
        out[idx].count += 1;
    }
    out
}

/// Campaign summary, the JSON artifact.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub schema_version: u32,
    pub kind: ExperimentKind,
    pub measure: MeasureSpec,
    pub master_seed: u64,
    pub trials_per_n: usize,
    pub per_n: Vec<PerNSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ks_statistic: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bennett: Option<ContainmentReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tail_checks: Option<Vec<TailCheck>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub limit_samples_in_range: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub limit_mass_below_01: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub limit_mass_above_04: Option<f64>,
}

pub const SCHEMA_VERSION: u32 = 1;

impl Summary {
    fn new(config: &ExperimentConfig) -> Self {
        Summary {
            schema_version: SCHEMA_VERSION,
            kind: config.kind,
            measure: config.measure.clone(),
            master_seed: config.master_seed,
            trials_per_n: config.trials,
            per_n: Vec::new(),
            ks_statistic: None,
            bennett: None,
            tail_checks: None,
            limit_samples_in_range: None,
            limit_mass_below_01: None,
            limit_mass_above_04: None,
        }
    }
}

/// Everything a runner produces.
#[derive(Clone, Debug)]
pub struct ExperimentOutput {
    pub summary: Summary,
    pub records: Vec<TrialRecord>,
    /// (suffix, bins) pairs written as `{output_path}_{suffix}.csv`.
    pub histograms: Vec<(String, Vec<HistogramBin>)>,
}

/// Paths written by [`persist`].
#[derive(Clone, Debug)]
pub struct PersistedPaths {
    pub json: PathBuf,
    pub csv: PathBuf,
    pub histograms: Vec<PathBuf>,
}

fn fmt_opt<T: std::fmt::Display>(v: &Option<T>) -> String {
    match v {
        Some(x) => x.to_string(),
        None => String::new(),
    }
}

fn records_csv(records: &[TrialRecord]) -> String {
    let mut out = String::from(
        "n,trial_index,derived_seed,flag,rho_hat,component_count,max_component_diameter,occupied_cells,near_zero_fraction\n",
    );
    for r in records {
        let flag = match r.flag {
            Some(true) => "1",
            Some(false) => "0",
            None => "",
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.n,
            r.trial_index,
            r.derived_seed,
            flag,
            fmt_opt(&r.rho_hat),
            fmt_opt(&r.component_count),
            fmt_opt(&r.max_component_diameter),
            fmt_opt(&r.occupied_cells),
            fmt_opt(&r.near_zero_fraction),
        ));
    }
    out
}

fn histogram_csv(bins: &[HistogramBin]) -> String {
    let mut out = String::from("bin_left,bin_right,count\n");
    for b in bins {
        out.push_str(&format!("{},{},{}\n", b.bin_left, b.bin_right, b.count));
    }
    out
}

/// Writes `{output_path}.json`, `{output_path}.csv`, and any histogram CSVs,
/// creating parent directories. Output bytes depend only on the config.
pub fn persist(output: &ExperimentOutput, output_path: &str) -> Result<PersistedPaths> {
    let base = PathBuf::from(output_path);
    if let Some(parent) = base.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    let json_path = base.with_file_name(format!(
        "{}.json",
        base.file_name().unwrap_or_default().to_string_lossy()
    ));
    let csv_path = base.with_file_name(format!(
        "{}.csv",
        base.file_name().unwrap_or_default().to_string_lossy()
    ));
    let mut json = serde_json::to_string_pretty(&output.summary)?;
    json.push('\n');
    std::fs::write(&json_path, json)?;
    std::fs::write(&csv_path, records_csv(&output.records))?;
    let mut hist_paths = Vec::new();
    for (suffix, bins) in &output.histograms {
        let p = base.with_file_name(format!(
            "{}_{suffix}.csv",
            base.file_name().unwrap_or_default().to_string_lossy()
        ));
        std::fs::write(&p, histogram_csv(bins))?;
        hist_paths.push(p);
    }
    Ok(PersistedPaths {
        json: json_path,
        csv: csv_path,
        histograms: hist_paths,
    })
}

/// Reads a summary back, for round-trip checks and downstream tooling.
pub fn load_summary<P: AsRef<Path>>(path: P) -> Result<Summary> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}
