//! Sampling measures for polynomial zeros and their logarithmic potentials.
//!
//! Each measure is a compactly supported Borel probability law on the plane.
//! The logarithmic potential `U(z) = ∫ log|z - w| dμ(w)` controls where the
//! lemniscate of a degree-`n` polynomial with μ-sampled zeros settles: the
//! negative set of `U` fills up, the positive set empties out.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::polynomial::{Provenance, ZeroSet};
use crate::{ginibre, Error, Result};

/// `sqrt(e)`, the radius at which the uniform-disk family's negative set
/// shrinks to a point.
pub const SQRT_E: f64 = 1.6487212707001282;

/// A sampling law for polynomial zeros.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MeasureSpec {
    /// Normalized area measure on the disk of the given radius.
    UniformDisk { radius: f64 },
    /// Uniform (arclength) measure on the unit circle.
    UniformCircle,
    /// Spectrum of `A / sqrt(n)` for an n×n i.i.d. complex Gaussian matrix.
    /// Potential-level quantities use the circular-law limit, i.e. the
    /// uniform unit disk.
    GinibreNormalized,
    /// Uniform measure on an explicit finite point set.
    Empirical { points: Vec<Complex64> },
}

impl MeasureSpec {
    pub fn uniform_disk(radius: f64) -> Result<Self> {
        let m = MeasureSpec::UniformDisk { radius };
        m.validate()?;
        Ok(m)
    }

    pub fn empirical(points: Vec<Complex64>) -> Result<Self> {
        let m = MeasureSpec::Empirical { points };
        m.validate()?;
        Ok(m)
    }

    /// Checks the variant invariants. Configs deserialized from JSON must be
    /// run through this before use.
    pub fn validate(&self) -> Result<()> {
        match self {
            MeasureSpec::UniformDisk { radius } => {
                if !radius.is_finite() || *radius <= 0.0 {
                    return Err(Error::InvalidMeasure(format!(
                        "uniform disk radius must be positive and finite, got {radius}"
                    )));
                }
            }
            MeasureSpec::Empirical { points } => {
                if points.is_empty() {
                    return Err(Error::InvalidMeasure(
                        "empirical measure needs at least one point".into(),
                    ));
                }
                if points.iter().any(|p| !p.re.is_finite() || !p.im.is_finite()) {
                    return Err(Error::InvalidMeasure(
                        "empirical measure contains a non-finite point".into(),
                    ));
                }
            }
            MeasureSpec::UniformCircle | MeasureSpec::GinibreNormalized => {}
        }
        Ok(())
    }

    /// Radius of a closed disk around the origin containing the support.
    ///
    /// For the normalized Ginibre spectrum this is the circular-law support;
    /// finite-n eigenvalues exceed it only by an exponentially rare margin.
    pub fn support_radius(&self) -> f64 {
        match self {
            MeasureSpec::UniformDisk { radius } => *radius,
            MeasureSpec::UniformCircle => 1.0,
            MeasureSpec::GinibreNormalized => 1.0,
            MeasureSpec::Empirical { points } => {
                points.iter().map(|p| p.norm()).fold(0.0, f64::max)
            }
        }
    }

    /// Short human-readable label, used in CSV columns and log lines.
    pub fn label(&self) -> String {
        match self {
            MeasureSpec::UniformDisk { radius } => format!("disk:{radius}"),
            MeasureSpec::UniformCircle => "circle".into(),
            MeasureSpec::GinibreNormalized => "ginibre".into(),
            MeasureSpec::Empirical { points } => format!("empirical:{}", points.len()),
        }
    }

    fn variant_name(&self) -> &'static str {
        match self {
            MeasureSpec::UniformDisk { .. } => "uniform_disk",
            MeasureSpec::UniformCircle => "uniform_circle",
            MeasureSpec::GinibreNormalized => "ginibre_normalized",
            MeasureSpec::Empirical { .. } => "empirical",
        }
    }
}

/// How a potential-type value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PotentialMethod {
    ClosedForm,
    MonteCarlo,
}

/// A potential (or second-moment) value with its statistical error.
///
/// Closed-form values carry `stderr = 0`. Monte Carlo values report the
/// standard error of the mean; it is 0 only in the degenerate case of a
/// constant integrand (e.g. the circle measure at the origin).
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct PotentialValue {
    pub value: f64,
    pub stderr: f64,
    pub method: PotentialMethod,
}

impl PotentialValue {
    fn closed(value: f64) -> Self {
        PotentialValue {
            value,
            stderr: 0.0,
            method: PotentialMethod::ClosedForm,
        }
    }
}

/// Draws `n` i.i.d. zeros from the measure (one joint spectrum draw for the
/// Ginibre variant). Deterministic given the RNG state.
pub fn sample<R: Rng + ?Sized>(measure: &MeasureSpec, n: usize, rng: &mut R) -> Result<ZeroSet> {
    measure.validate()?;
    if n == 0 {
        return Err(Error::Precondition("sample size must be at least 1".into()));
    }
    let zeros = match measure {
        MeasureSpec::UniformDisk { radius } => (0..n)
            .map(|_| {
                let rho = radius * rng.random::<f64>().sqrt();
                let theta = std::f64::consts::TAU * rng.random::<f64>();
                Complex64::from_polar(rho, theta)
            })
            .collect(),
        MeasureSpec::UniformCircle => (0..n)
            .map(|_| {
                let theta = std::f64::consts::TAU * rng.random::<f64>();
                Complex64::from_polar(1.0, theta)
            })
            .collect(),
        MeasureSpec::GinibreNormalized => {
            return ginibre::normalized_spectrum(n, rng);
        }
        MeasureSpec::Empirical { points } => (0..n)
            .map(|_| points[rng.random_range(0..points.len())])
            .collect(),
    };
    ZeroSet::with_provenance(zeros, Provenance::Measure(measure.clone()))
}

/// Closed-form logarithmic potential `U(z)`.
///
/// Supported for the disk family (both branches of the area-measure
/// potential), the circle (`log_+ |z|`), and the normalized Ginibre spectrum
/// (circular-law limit, i.e. the unit-disk potential). The empirical variant
/// has no closed form here; use [`potential_mc`].
pub fn potential(measure: &MeasureSpec, z: Complex64) -> Result<PotentialValue> {
    measure.validate()?;
    let value = match measure {
        MeasureSpec::UniformDisk { radius } => disk_potential(*radius, z),
        MeasureSpec::GinibreNormalized => disk_potential(1.0, z),
        MeasureSpec::UniformCircle => {
            let r = z.norm();
            if r >= 1.0 {
                r.ln()
            } else {
                0.0
            }
        }
        MeasureSpec::Empirical { .. } => {
            return Err(Error::UnsupportedClosedForm(measure.variant_name()));
        }
    };
    Ok(PotentialValue::closed(value))
}

fn disk_potential(radius: f64, z: Complex64) -> f64 {
    let r = z.norm();
    if r >= radius {
        r.ln()
    } else {
        (r * r - radius * radius) / (2.0 * radius * radius) + radius.ln()
    }
}

/// Monte Carlo estimate of `U(z)` from `m` draws of the measure.
///
/// Returns the sample mean of `log|z - W|` with the standard error computed
/// from the unbiased sample variance. Draws that collide with `z` exactly
/// (a probability-zero event) are redrawn and logged.
pub fn potential_mc<R: Rng + ?Sized>(
    measure: &MeasureSpec,
    z: Complex64,
    m: usize,
    rng: &mut R,
) -> Result<PotentialValue> {
    mc_moment(measure, z, m, rng, |log_d| log_d)
}

/// Monte Carlo estimate of the second moment `∫ (log|z - w|)^2 dμ(w)`.
///
/// This is the per-summand variance proxy entering the concentration bounds;
/// by Cauchy–Schwarz it dominates `U(z)^2`.
pub fn variance_sigma2<R: Rng + ?Sized>(
    measure: &MeasureSpec,
    z: Complex64,
    m: usize,
    rng: &mut R,
) -> Result<PotentialValue> {
    mc_moment(measure, z, m, rng, |log_d| log_d * log_d)
}

fn mc_moment<R: Rng + ?Sized>(
    measure: &MeasureSpec,
    z: Complex64,
    m: usize,
    rng: &mut R,
    f: impl Fn(f64) -> f64,
) -> Result<PotentialValue> {
    measure.validate()?;
    if m < 100 {
        return Err(Error::Precondition(format!(
            "Monte Carlo sample count must be at least 100, got {m}"
        )));
    }
    let draws = draw_points(measure, m, rng)?;
    let mut values = Vec::with_capacity(m);
    for mut w in draws {
        let mut d = (z - w).norm();
        let mut retries = 0;
        while d == 0.0 {
            log::warn!("Monte Carlo draw coincided with evaluation point {z}; resampling");
            retries += 1;
            if retries > 64 {
                return Err(Error::CoincidentPoint);
            }
            w = draw_points(measure, 1, rng)?[0];
            d = (z - w).norm();
        }
        values.push(f(d.ln()));
    }
    let mean = crate::stats::mean(&values);
    let stderr = crate::stats::standard_error(&values);
    Ok(PotentialValue {
        value: mean,
        stderr,
        method: PotentialMethod::MonteCarlo,
    })
}

fn draw_points<R: Rng + ?Sized>(
    measure: &MeasureSpec,
    m: usize,
    rng: &mut R,
) -> Result<Vec<Complex64>> {
    Ok(sample(measure, m, rng)?.into_zeros())
}

/// Inradius `r_c` of the negative set of the potential.
///
/// Uniform disk of radius `r`: 1 for `r <= 1`, `r sqrt(1 - 2 log r)` up to
/// `sqrt(e)`, then 0. Circle and normalized Ginibre: 1, the unit disk being
/// the region the lemniscate fills in the limit.
pub fn negative_set_inradius(measure: &MeasureSpec) -> Result<f64> {
    measure.validate()?;
    match measure {
        MeasureSpec::UniformDisk { radius } => Ok(disk_rc(*radius)),
        MeasureSpec::UniformCircle | MeasureSpec::GinibreNormalized => Ok(1.0),
        MeasureSpec::Empirical { .. } => Err(Error::UnsupportedClosedForm(measure.variant_name())),
    }
}

// The discriminant 1 - 2 log r equals -2 U(0)/1 for the interior branch, so
// the guard below stays consistent with the potential at the branch point
// r = sqrt(e) even under floating-point rounding of log r.
fn disk_rc(radius: f64) -> f64 {
    if radius <= 1.0 {
        return 1.0;
    }
    let disc = 1.0 - 2.0 * radius.ln();
    if disc <= 0.0 {
        0.0
    } else {
        radius * disc.sqrt()
    }
}
