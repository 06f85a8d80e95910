//! The Gaussian limit field for circle-sampled zeros.
//!
//! With zeros uniform on the unit circle, `g_n(z) = n^{-1/2} log|p_n(z)|`
//! has mean zero on the open disk and converges to the mean-zero Gaussian
//! field `g(z) = Re Σ_{k≥1} (1/k) a_k z^k` with i.i.d. standard complex
//! Gaussian coefficients (`E|a_k|^2 = 1`). Its covariance kernel has both a
//! series and an integral form,
//!
//! `K(z, w) = (1/2π) ∫ log|z - e^{iθ}| log|w - e^{iθ}| dθ
//!          = (1/4) Σ_{k≥1} (z^k conj(w)^k + w^k conj(z)^k) / k^2`,
//!
//! cross-checked against each other here; the empirical variance of `g_n`
//! pins the normalization. The inradius of `{g < 0}` is the distributional
//! limit of the lemniscate inradius (and is insensitive to the overall
//! scale of `g`).

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use crate::polynomial::{log_modulus, ZeroSet};
use crate::raster::{inradius_estimate, Bounds, Raster};
use crate::{Error, Result};

/// Truncated coefficient vector realizing a sample of the limit field.
#[derive(Clone, Debug)]
pub struct GaussianFieldSample {
    /// `a_k`, i.i.d. standard complex Gaussian (`E|a_k|^2 = 1`), `k = 1..=K`.
    coefficients: Vec<Complex64>,
}

impl GaussianFieldSample {
    /// Builds a sample from explicit coefficients (mainly for tests).
    pub fn from_coefficients(coefficients: Vec<Complex64>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::Precondition("truncation must be at least 1".into()));
        }
        Ok(GaussianFieldSample { coefficients })
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn truncation(&self) -> usize {
        self.coefficients.len()
    }

    /// Envelope on the truncation tail at modulus `r`: the dropped part of
    /// the series is `Re Σ_{k>K} (a_k/k) z^k`, and this reports the
    /// conservative `Σ_{k>K} r^k / k` coefficient envelope.
    pub fn tail_envelope(&self, r: f64) -> f64 {
        let k = self.truncation() as f64;
        if r >= 1.0 {
            return f64::INFINITY;
        }
        // Σ_{k>K} r^k / k <= r^{K+1} / ((K+1)(1 - r))
        r.powf(k + 1.0) / ((k + 1.0) * (1.0 - r))
    }
}

/// The normalized empirical field `g_n(z) = n^{-1/2} Σ log|z - X_k|` for
/// circle zeros, on the open unit disk.
pub fn g_n_field(zeros: &ZeroSet, z: Complex64) -> Result<f64> {
    if z.norm() >= 1.0 {
        return Err(Error::Domain(format!(
            "g_n is defined on the open unit disk; |z| = {}",
            z.norm()
        )));
    }
    let off_circle = zeros
        .zeros()
        .iter()
        .map(|x| (x.norm() - 1.0).abs())
        .fold(0.0, f64::max);
    if off_circle > 1e-9 {
        return Err(Error::Precondition(format!(
            "zeros must lie on the unit circle (max deviation {off_circle:.3e})"
        )));
    }
    match log_modulus(zeros, z) {
        crate::polynomial::LogModulus::Finite(v) => Ok(v / (zeros.len() as f64).sqrt()),
        // impossible for |z| < 1 and zeros on the circle
        crate::polynomial::LogModulus::NegInfinity => {
            Err(Error::Domain("evaluation point coincides with a zero".into()))
        }
    }
}

/// Kernel value with its truncation tail bound.
#[derive(Clone, Copy, Debug)]
pub struct KernelValue {
    pub value: f64,
    pub tail_bound: f64,
}

/// Series form of the covariance kernel:
/// `K(z, w) = (1/4) Σ_{k≥1} (z^k conj(w)^k + w^k conj(z)^k) / k^2
///          = (1/2) Σ_{k≥1} Re((z conj(w))^k) / k^2`,
/// truncated at `k_terms`, with the geometric tail bound reported
/// alongside. Matches the quadrature form of the kernel (and the empirical
/// covariance of `g_n`).
pub fn covariance_series(z: Complex64, w: Complex64, k_terms: usize) -> Result<KernelValue> {
    if z.norm() >= 1.0 || w.norm() >= 1.0 {
        return Err(Error::Domain("kernel arguments must be inside the unit disk".into()));
    }
    if k_terms == 0 {
        return Err(Error::Precondition("series needs at least one term".into()));
    }
    let zw = z * w.conj();
    let mut power = Complex64::new(1.0, 0.0);
    let mut value = 0.0;
    for k in 1..=k_terms {
        power *= zw;
        value += 0.5 * power.re / (k as f64 * k as f64);
    }
    let q = zw.norm();
    let kp1 = (k_terms + 1) as f64;
    let tail_bound = if q < 1.0 {
        0.5 * q.powf(kp1) / (kp1 * kp1 * (1.0 - q))
    } else {
        f64::INFINITY
    };
    Ok(KernelValue { value, tail_bound })
}

/// Integral form of the covariance kernel:
/// `K(z, w) = (2π)^{-1} ∫ log|z - e^{iθ}| log|w - e^{iθ}| dθ` by the
/// trapezoid rule, which is spectrally accurate for this periodic integrand.
pub fn covariance_quadrature(z: Complex64, w: Complex64, m_points: usize) -> Result<f64> {
    if z.norm() >= 1.0 || w.norm() >= 1.0 {
        return Err(Error::Domain("kernel arguments must be inside the unit disk".into()));
    }
    if m_points < 64 {
        return Err(Error::Precondition(format!(
            "quadrature needs at least 64 points, got {m_points}"
        )));
    }
    let mut acc = 0.0;
    for j in 0..m_points {
        let theta = std::f64::consts::TAU * j as f64 / m_points as f64;
        let e = Complex64::from_polar(1.0, theta);
        acc += (z - e).norm().ln() * (w - e).norm().ln();
    }
    Ok(acc / m_points as f64)
}

/// Draws a truncated sample of the limit field.
pub fn sample_g<R: Rng + ?Sized>(k_truncation: usize, rng: &mut R) -> Result<GaussianFieldSample> {
    if k_truncation == 0 {
        return Err(Error::Precondition("truncation must be at least 1".into()));
    }
    let normal = Normal::new(0.0, std::f64::consts::FRAC_1_SQRT_2).expect("valid scale");
    GaussianFieldSample::from_coefficients(
        (0..k_truncation)
            .map(|_| Complex64::new(normal.sample(rng), normal.sample(rng)))
            .collect(),
    )
}

/// Evaluates the truncated field `Re Σ (a_k / k) z^k` by Horner's rule.
/// Defined for `|z| <= 0.99`; the boundary needs the untruncated series.
pub fn evaluate_g(sample: &GaussianFieldSample, z: Complex64) -> Result<f64> {
    if z.norm() > 0.99 {
        return Err(Error::Domain(format!(
            "field evaluation capped at |z| <= 0.99; |z| = {}",
            z.norm()
        )));
    }
    Ok(horner(sample, z))
}

#[inline]
fn horner(sample: &GaussianFieldSample, z: Complex64) -> f64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, a) in sample.coefficients.iter().enumerate().rev() {
        let c = a / (k as f64 + 1.0);
        acc = (acc + c) * z;
    }
    acc.re
}

/// One sample of the limit inradius: rasterizes `{g < 0}` on the disk of
/// `box_radius` (cells outside the disk are unoccupied) and returns the
/// inradius estimate.
pub fn limit_inradius_sample<R: Rng + ?Sized>(
    k_truncation: usize,
    box_radius: f64,
    h: f64,
    rng: &mut R,
) -> Result<f64> {
    let sample = sample_g(k_truncation, rng)?;
    limit_inradius_of_sample(&sample, box_radius, h)
}

/// Deterministic part of [`limit_inradius_sample`], reusable across a batch
/// of pre-drawn samples.
pub fn limit_inradius_of_sample(
    sample: &GaussianFieldSample,
    box_radius: f64,
    h: f64,
) -> Result<f64> {
    if !(0.0..=0.99).contains(&box_radius) || box_radius <= 0.0 {
        return Err(Error::Precondition(format!(
            "box radius must be in (0, 0.99], got {box_radius}"
        )));
    }
    let bounds = Bounds::square(box_radius)?;
    let raster = rasterize_field(sample, bounds, h, box_radius)?;
    Ok(inradius_estimate(&raster).rho_hat)
}

fn rasterize_field(
    sample: &GaussianFieldSample,
    bounds: Bounds,
    h: f64,
    disk_radius: f64,
) -> Result<Raster> {
    let mut raster = Raster::empty(bounds, h)?;
    let nx = raster.nx();
    let b = raster.bounds();
    let rows: Vec<Vec<bool>> = (0..raster.ny())
        .into_par_iter()
        .map(|iy| {
            let y = b.ymin + (iy as f64 + 0.5) * h;
            (0..nx)
                .map(|ix| {
                    let x = b.xmin + (ix as f64 + 0.5) * h;
                    if x.hypot(y) > disk_radius {
                        false
                    } else {
                        horner(sample, Complex64::new(x, y)) < 0.0
                    }
                })
                .collect()
        })
        .collect();
    for (iy, row) in rows.into_iter().enumerate() {
        for (ix, v) in row.into_iter().enumerate() {
            raster.set_occupied(ix, iy, v);
        }
    }
    Ok(raster)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{sample, MeasureSpec};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn g_n_vanishes_at_the_origin() {
        let mut r = rng(1);
        for _ in 0..5 {
            let zs = sample(&MeasureSpec::UniformCircle, 100, &mut r).unwrap();
            let v = g_n_field(&zs, Complex64::new(0.0, 0.0)).unwrap();
            // each summand is log|X_k| = 0 up to one rounding of norm()
            assert!(v.abs() < 1e-12, "g_n(0) = {v}");
        }
    }

    #[test]
    fn g_n_on_roots_of_unity_uses_the_product_formula() {
        // |p(z)| = |z^n - 1|, so g_n(0.5) = log|0.5^n - 1| / sqrt(n) -> 0
        for n in [10usize, 100, 1000] {
            let zs = ZeroSet::roots_of_unity(n).unwrap();
            let v = g_n_field(&zs, Complex64::new(0.5, 0.0)).unwrap();
            let expect = (0.5f64.powi(n as i32) - 1.0).abs().ln() / (n as f64).sqrt();
            assert!((v - expect).abs() < 1e-10);
        }
        let big = ZeroSet::roots_of_unity(1000).unwrap();
        assert!(g_n_field(&big, Complex64::new(0.5, 0.0)).unwrap().abs() < 1e-4);
    }

    #[test]
    fn g_n_domain_checks() {
        let zs = ZeroSet::roots_of_unity(8).unwrap();
        assert!(g_n_field(&zs, Complex64::new(1.0, 0.0)).is_err());
        assert!(g_n_field(&zs, Complex64::new(0.0, 1.5)).is_err());
        let off = ZeroSet::new(vec![Complex64::new(0.5, 0.0)]).unwrap();
        assert!(g_n_field(&off, Complex64::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn series_spot_values_and_symmetry() {
        // K(z, 0) = 0
        let v = covariance_series(Complex64::new(0.3, 0.2), Complex64::new(0.0, 0.0), 100).unwrap();
        assert_eq!(v.value, 0.0);

        // K(0.5, 0.5) = (1/2) Σ 0.25^k / k^2 = Li_2(1/4) / 2
        let v = covariance_series(Complex64::new(0.5, 0.0), Complex64::new(0.5, 0.0), 200).unwrap();
        assert!((v.value - 0.5353052781654652 / 4.0).abs() < 1e-12, "{}", v.value);

        // swap symmetry
        let z = Complex64::new(0.5, 0.0);
        let w = Complex64::new(0.0, 0.5);
        let a = covariance_series(z, w, 200).unwrap().value;
        let b = covariance_series(w, z, 200).unwrap().value;
        assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn quadrature_matches_series() {
        let z = Complex64::new(0.5, 0.0);
        let q = covariance_quadrature(z, z, 4096).unwrap();
        let s = covariance_series(z, z, 200).unwrap();
        assert!((q - s.value).abs() < 1e-10, "quad {q} vs series {}", s.value);

        // harder case near the boundary needs more of both
        let z9 = Complex64::new(0.9, 0.0);
        let q9 = covariance_quadrature(z9, z9, 1 << 16).unwrap();
        let s9 = covariance_series(z9, z9, 10_000).unwrap();
        assert!((q9 - s9.value).abs() < 1e-6, "quad {q9} vs series {}", s9.value);
        assert!(covariance_quadrature(z, z, 10).is_err());
    }

    #[test]
    fn kernel_identity_on_a_grid() {
        for i in 0..5 {
            for j in 0..5 {
                let z = Complex64::from_polar(0.18 * i as f64, 1.1 * i as f64);
                let w = Complex64::from_polar(0.18 * j as f64, 0.7 * j as f64 + 0.3);
                let s = covariance_series(z, w, 10_000).unwrap();
                let q = covariance_quadrature(z, w, 1 << 16).unwrap();
                assert!(
                    (s.value - q).abs() <= 1e-8,
                    "mismatch at ({i},{j}): {} vs {q}",
                    s.value
                );
            }
        }
    }

    #[test]
    fn evaluate_g_hand_cases() {
        // a_1 = 1, rest 0: g(z) = Re(z)
        let s = GaussianFieldSample::from_coefficients(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
        ])
        .unwrap();
        assert_eq!(evaluate_g(&s, Complex64::new(0.5, 0.0)).unwrap(), 0.5);

        // all zero coefficients
        let z =
            GaussianFieldSample::from_coefficients(vec![Complex64::new(0.0, 0.0); 5]).unwrap();
        assert_eq!(evaluate_g(&z, Complex64::new(0.3, 0.4)).unwrap(), 0.0);

        // a_2 = i only: g(0.5) = Re(i) * (1/2) * 0.25 = 0
        let s2 = GaussianFieldSample::from_coefficients(vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 1.0),
        ])
        .unwrap();
        assert_eq!(evaluate_g(&s2, Complex64::new(0.5, 0.0)).unwrap(), 0.0);

        // domain cap
        assert!(evaluate_g(&s, Complex64::new(0.995, 0.0)).is_err());
    }

    #[test]
    fn sampled_field_vanishes_at_zero_and_matches_kernel_variance() {
        let mut r = rng(2);
        let z = Complex64::new(0.5, 0.0);
        let kzz = covariance_series(z, z, 2000).unwrap().value;
        let mut vals = Vec::with_capacity(10_000);
        for _ in 0..10_000 {
            let s = sample_g(200, &mut r).unwrap();
            assert_eq!(evaluate_g(&s, Complex64::new(0.0, 0.0)).unwrap(), 0.0);
            vals.push(evaluate_g(&s, z).unwrap());
        }
        let second_moment: Vec<f64> = vals.iter().map(|v| v * v).collect();
        let m2 = crate::stats::mean(&second_moment);
        let se = crate::stats::standard_error(&second_moment);
        assert!((m2 - kzz).abs() < 4.0 * se, "E g^2 = {m2} vs K = {kzz} (se {se})");
    }

    #[test]
    fn sampled_cross_moment_matches_kernel() {
        let mut r = rng(3);
        let z = Complex64::new(0.4, 0.0);
        let k = covariance_series(z, -z, 2000).unwrap().value;
        let prods: Vec<f64> = (0..10_000)
            .map(|_| {
                let s = sample_g(200, &mut r).unwrap();
                evaluate_g(&s, z).unwrap() * evaluate_g(&s, -z).unwrap()
            })
            .collect();
        let m = crate::stats::mean(&prods);
        let se = crate::stats::standard_error(&prods);
        assert!((m - k).abs() < 4.0 * se, "E g(z)g(-z) = {m} vs {k}");
    }

    #[test]
    fn empirical_field_variance_approaches_kernel() {
        // var of g_n(0.3) over draws at n = 200 vs K(0.3, 0.3)
        let z = Complex64::new(0.3, 0.0);
        let k = covariance_series(z, z, 2000).unwrap().value;
        let mut r = rng(4);
        let vals: Vec<f64> = (0..10_000)
            .map(|_| {
                let zs = sample(&MeasureSpec::UniformCircle, 200, &mut r).unwrap();
                g_n_field(&zs, z).unwrap()
            })
            .collect();
        let var = crate::stats::sample_variance(&vals);
        assert!((var - k).abs() < 0.05 * k, "var {var} vs kernel {k}");
    }

    #[test]
    fn limit_inradius_stays_inside_the_window() {
        let mut r = rng(5);
        for _ in 0..10 {
            let rho = limit_inradius_sample(100, 0.9, 0.01, &mut r).unwrap();
            assert!(rho < 0.9);
            assert!(rho >= 0.0);
        }
    }

    #[test]
    fn limit_inradius_respects_the_half_radius_law() {
        // deterministic zero of g at the origin caps the inradius near 1/2
        let mut r = rng(6);
        let h = 0.01;
        let slack = 2.0 * h * std::f64::consts::SQRT_2;
        let samples: Vec<f64> = (0..60)
            .map(|_| limit_inradius_sample(300, 0.98, h, &mut r).unwrap())
            .collect();
        for &s in &samples {
            assert!(s > 0.0 && s < 0.5 + slack, "sample {s}");
        }
        assert!(crate::stats::sample_stddev(&samples) > 0.01);
    }

    #[test]
    fn tail_envelope_is_small_at_default_truncation() {
        let mut r = rng(7);
        let s = sample_g(500, &mut r).unwrap();
        assert!(s.tail_envelope(0.98) < 1e-4, "{}", s.tail_envelope(0.98));
    }
}
