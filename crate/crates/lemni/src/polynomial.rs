//! Zero sets, stable evaluation of `log |p|`, and rigorous circle bounds.
//!
//! Everything works on the zeros directly; the polynomial is never expanded
//! into coefficients. `log |p(z)| = Σ log|z - X_k|` is accumulated as a
//! product of squared distances with explicit power-of-two exponent tracking,
//! which keeps a single rounding per factor and never overflows.

use std::fmt;
use std::io::{BufRead, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::measures::MeasureSpec;
use crate::{Error, Result};

/// Where a zero set came from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Provenance {
    Measure(MeasureSpec),
    Explicit,
}

/// The multiset of zeros defining `p(z) = Π (z - X_k)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroSet {
    zeros: Vec<Complex64>,
    provenance: Provenance,
}

impl ZeroSet {
    /// Builds an explicit zero set. Fails on empty input or non-finite
    /// entries.
    pub fn new(zeros: Vec<Complex64>) -> Result<Self> {
        Self::with_provenance(zeros, Provenance::Explicit)
    }

    pub fn with_provenance(zeros: Vec<Complex64>, provenance: Provenance) -> Result<Self> {
        if zeros.is_empty() {
            return Err(Error::EmptyZeroSet);
        }
        if let Some(bad) = zeros.iter().find(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite(format!("zero {bad}")));
        }
        Ok(ZeroSet { zeros, provenance })
    }

    /// The `n`-th roots of unity, zeros of `z^n - 1`.
    pub fn roots_of_unity(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyZeroSet);
        }
        Self::new(
            (0..n)
                .map(|k| Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64))
                .collect(),
        )
    }

    /// `n` zeros stacked at a single point, giving `p(z) = (z - c)^n`.
    pub fn repeated(c: Complex64, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyZeroSet);
        }
        Self::new(vec![c; n])
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    pub fn into_zeros(self) -> Vec<Complex64> {
        self.zeros
    }

    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        false // the constructor rejects empty sets
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Writes one zero per line as `re im`.
    pub fn write_text<W: Write>(&self, mut w: W) -> Result<()> {
        for z in &self.zeros {
            writeln!(w, "{} {}", z.re, z.im)?;
        }
        Ok(())
    }

    pub fn save<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        if let Some(parent) = path.as_ref().parent() {
            if !parent.as_os_str().is_empty() {
                std::fs::create_dir_all(parent)?;
            }
        }
        self.write_text(std::io::BufWriter::new(std::fs::File::create(path)?))
    }

    /// Reads the `re im` line format. Blank lines and `#` comments are
    /// skipped.
    pub fn read_text<R: BufRead>(r: R) -> Result<Self> {
        let mut zeros = Vec::new();
        for (idx, line) in r.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let (re, im) = match (parts.next(), parts.next(), parts.next()) {
                (Some(re), Some(im), None) => (re, im),
                _ => {
                    return Err(Error::Domain(format!(
                        "line {}: expected `re im`, got `{line}`",
                        idx + 1
                    )))
                }
            };
            let re: f64 = re
                .parse()
                .map_err(|e| Error::Domain(format!("line {}: {e}", idx + 1)))?;
            let im: f64 = im
                .parse()
                .map_err(|e| Error::Domain(format!("line {}: {e}", idx + 1)))?;
            zeros.push(Complex64::new(re, im));
        }
        Self::new(zeros)
    }

    pub fn load<P: AsRef<Path>>(path: P) -> Result<Self> {
        Self::read_text(std::io::BufReader::new(std::fs::File::open(path)?))
    }
}

/// `log |p(z)|` as an extended real. The negative-infinity case (z hits a
/// zero exactly) is a distinguished variant rather than an IEEE special, so
/// ordering and comparisons stay total.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LogModulus {
    NegInfinity,
    Finite(f64),
}

impl LogModulus {
    /// True when the point is in the open lemniscate `{ log|p| < 0 }`.
    pub fn is_negative(self) -> bool {
        match self {
            LogModulus::NegInfinity => true,
            LogModulus::Finite(v) => v < 0.0,
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            LogModulus::NegInfinity => None,
            LogModulus::Finite(v) => Some(v),
        }
    }

    /// Finite value or the given substitute for the `-∞` case.
    pub fn finite_or(self, neg_inf: f64) -> f64 {
        self.finite().unwrap_or(neg_inf)
    }
}

impl fmt::Display for LogModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogModulus::NegInfinity => write!(f, "-inf"),
            LogModulus::Finite(v) => write!(f, "{v}"),
        }
    }
}

const MANTISSA_LO: f64 = 1e-128;
const MANTISSA_HI: f64 = 1e128;

/// Splits a positive finite f64 into mantissa in [0.5, 1) and a power of two.
fn frexp(x: f64) -> (f64, i64) {
    debug_assert!(x.is_finite() && x > 0.0);
    let bits = x.to_bits();
    let raw_exp = ((bits >> 52) & 0x7ff) as i64;
    if raw_exp == 0 {
        // subnormal: renormalize through a 2^64 scale
        let (m, e) = frexp(x * 2f64.powi(64));
        (m, e - 64)
    } else {
        let mantissa = f64::from_bits((bits & !(0x7ffu64 << 52)) | (1022u64 << 52));
        (mantissa, raw_exp - 1022)
    }
}

/// Running product of squared distances with exponent tracking.
///
/// Accumulates `Σ log|z - X_k|` as `0.5 * log(Π |z - X_k|^2)` with one
/// floating multiply per zero; the mantissa is kept inside [1e-128, 1e128]
/// so the product can neither overflow nor underflow.
#[derive(Clone, Debug)]
pub struct LogProduct {
    mantissa: f64,
    exp2: i64,
    extra_log: f64,
    hit_zero: bool,
}

impl LogProduct {
    pub fn new() -> Self {
        LogProduct {
            mantissa: 1.0,
            exp2: 0,
            extra_log: 0.0,
            hit_zero: false,
        }
    }

    /// Multiplies in the squared distance `dre^2 + dim^2` for the offset
    /// `z - X = dre + i dim`.
    #[inline]
    pub fn push_offset(&mut self, dre: f64, dim: f64) {
        self.push_squared_offset(dre * dre + dim * dim, dre, dim);
    }

    /// Same as [`push_offset`](Self::push_offset) with the squared distance
    /// already at hand (row kernels hoist the `dim^2` term); `d2` must equal
    /// `dre^2 + dim^2`.
    #[inline]
    pub fn push_squared_offset(&mut self, d2: f64, dre: f64, dim: f64) {
        if d2 == 0.0 {
            if dre == 0.0 && dim == 0.0 {
                self.hit_zero = true;
            } else {
                // squared distance underflowed; hypot still resolves it
                self.extra_log += 2.0 * dre.hypot(dim).ln();
            }
            return;
        }
        if !d2.is_finite() {
            self.extra_log += 2.0 * dre.abs().max(dim.abs()).ln();
            return;
        }
        let mut f = d2;
        if !(MANTISSA_LO..=MANTISSA_HI).contains(&f) {
            let (m, e) = frexp(f);
            f = m;
            self.exp2 += e;
        }
        self.mantissa *= f;
        if !(MANTISSA_LO..=MANTISSA_HI).contains(&self.mantissa) {
            let (m, e) = frexp(self.mantissa);
            self.mantissa = m;
            self.exp2 += e;
        }
    }

    pub fn value(&self) -> LogModulus {
        if self.hit_zero {
            LogModulus::NegInfinity
        } else {
            LogModulus::Finite(
                0.5 * (self.mantissa.ln() + self.exp2 as f64 * std::f64::consts::LN_2
                    + self.extra_log),
            )
        }
    }
}

impl Default for LogProduct {
    fn default() -> Self {
        Self::new()
    }
}

/// `log |p(z)| = Σ log|z - X_k|`, with `-∞` when `z` is a zero.
pub fn log_modulus(zeros: &ZeroSet, z: Complex64) -> LogModulus {
    let mut acc = LogProduct::new();
    for x in zeros.zeros() {
        acc.push_offset(z.re - x.re, z.im - x.im);
    }
    acc.value()
}

/// `p'(z)/p(z) = Σ 1/(z - X_k)`, the complex gradient of `log |p|`.
///
/// Its modulus bounds the local Lipschitz constant of `log |p|`.
pub fn log_gradient(zeros: &ZeroSet, z: Complex64) -> Result<Complex64> {
    let mut sum = Complex64::new(0.0, 0.0);
    for x in zeros.zeros() {
        let d = z - x;
        if d.norm() < 1e-300 {
            return Err(Error::CoincidentPoint);
        }
        sum += d.inv();
    }
    Ok(sum)
}

/// Smallest distance from any zero to the circle `|z - center| = radius`.
fn min_distance_to_circle(zeros: &ZeroSet, center: Complex64, radius: f64) -> f64 {
    zeros
        .zeros()
        .iter()
        .map(|x| ((x - center).norm() - radius).abs())
        .fold(f64::INFINITY, f64::min)
}

/// Floating-point slack added to every certified bound: n ulp-scale log
/// errors, the one stated source of non-rigor in the certificates.
fn float_slack(n: usize) -> f64 {
    n as f64 * 1e-12
}

fn net_extrema(
    zeros: &ZeroSet,
    center: Complex64,
    radius: f64,
    num_points: usize,
) -> (f64, f64) {
    use rayon::prelude::*;
    let eval = |k: usize| {
        let theta = std::f64::consts::TAU * k as f64 / num_points as f64;
        let z = center + Complex64::from_polar(radius, theta);
        // a zero exactly on the net is excluded by the d_min precondition,
        // so the value is always finite here
        log_modulus(zeros, z).finite_or(f64::NEG_INFINITY)
    };
    if num_points * zeros.len() > 1 << 16 {
        (0..num_points)
            .into_par_iter()
            .map(eval)
            .fold(
                || (f64::NEG_INFINITY, f64::INFINITY),
                |(mx, mn), v| (mx.max(v), mn.min(v)),
            )
            .reduce(
                || (f64::NEG_INFINITY, f64::INFINITY),
                |(amx, amn), (bmx, bmn)| (amx.max(bmx), amn.min(bmn)),
            )
    } else {
        (0..num_points).map(eval).fold(
            (f64::NEG_INFINITY, f64::INFINITY),
            |(mx, mn), v| (mx.max(v), mn.min(v)),
        )
    }
}

fn check_circle_args(
    zeros: &ZeroSet,
    center: Complex64,
    radius: f64,
    num_points: usize,
) -> Result<f64> {
    if !center.re.is_finite() || !center.im.is_finite() || !radius.is_finite() || radius <= 0.0 {
        return Err(Error::Domain(format!(
            "degenerate circle: center {center}, radius {radius}"
        )));
    }
    if num_points < 8 {
        return Err(Error::Precondition(format!(
            "circle net needs at least 8 points, got {num_points}"
        )));
    }
    let d_min = min_distance_to_circle(zeros, center, radius);
    if d_min < 1e-9 {
        return Err(Error::ZeroOnCircle { d_min });
    }
    Ok(d_min)
}

/// Upper bound on `sup { log|p(z)| : |z - center| = radius }`.
///
/// Evaluates `log |p|` on `num_points` equispaced net points and pads by the
/// Lipschitz term `(n / d_min) * (half arc spacing)`, where `d_min` is the
/// distance from the zeros to the circle, plus the floating slack.
pub fn sup_bound_on_circle(
    zeros: &ZeroSet,
    center: Complex64,
    radius: f64,
    num_points: usize,
) -> Result<f64> {
    let d_min = check_circle_args(zeros, center, radius, num_points)?;
    let (net_max, _) = net_extrema(zeros, center, radius, num_points);
    let half_spacing = std::f64::consts::PI * radius / num_points as f64;
    Ok(net_max + (zeros.len() as f64 / d_min) * half_spacing + float_slack(zeros.len()))
}

/// Lower bound on `inf { log|p(z)| : |z - center| = radius }`; the mirror
/// image of [`sup_bound_on_circle`].
pub fn inf_bound_on_circle(
    zeros: &ZeroSet,
    center: Complex64,
    radius: f64,
    num_points: usize,
) -> Result<f64> {
    let d_min = check_circle_args(zeros, center, radius, num_points)?;
    let (_, net_min) = net_extrema(zeros, center, radius, num_points);
    let half_spacing = std::f64::consts::PI * radius / num_points as f64;
    Ok(net_min - (zeros.len() as f64 / d_min) * half_spacing - float_slack(zeros.len()))
}

/// Outcome of a disk certification attempt.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// The closed disk lies in the lemniscate: the certified sup bound on the
    /// boundary circle is negative, and the maximum principle extends the
    /// bound to the interior.
    CertifiedInside,
    /// A net point on the boundary circle has `log|p| >= 0`, witnessing that
    /// the closed disk is not contained in the lemniscate.
    CertifiedOutside,
    /// Refinement hit its cap, or the inputs were degenerate.
    Inconclusive,
}

/// Proof object for disk-in-lemniscate containment.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiskCertificate {
    pub center: Complex64,
    pub radius: f64,
    /// Net size at the final refinement stage.
    pub net_size: usize,
    /// Max of `log|p|` over that net.
    pub net_max_log_modulus: f64,
    /// Lipschitz constant bound `n / d_min` used for the padding, in nats per
    /// unit length.
    pub lipschitz_bound: f64,
    /// Slack of the certified inequality: `-(net max + Lipschitz padding +
    /// float slack)`. Positive exactly when the disk is certified inside.
    pub margin: f64,
    pub verdict: Verdict,
    /// Populated when the verdict is inconclusive.
    pub reason: Option<String>,
}

const NET_CAP: usize = 1 << 20;

/// Tries to certify that the closed disk `D(center, radius)` lies inside the
/// lemniscate, doubling the boundary net from 64 points up to 2^20 until the
/// padded sup bound goes negative (inside), a net witness with
/// `log|p| >= 0` appears (outside), or the cap is reached (inconclusive).
pub fn certify_disk(zeros: &ZeroSet, center: Complex64, radius: f64) -> DiskCertificate {
    let inconclusive = |reason: String, net_size: usize, net_max: f64, lip: f64, margin: f64| {
        DiskCertificate {
            center,
            radius,
            net_size,
            net_max_log_modulus: net_max,
            lipschitz_bound: lip,
            margin,
            verdict: Verdict::Inconclusive,
            reason: Some(reason),
        }
    };

    if !center.re.is_finite() || !center.im.is_finite() || !radius.is_finite() || radius <= 0.0 {
        return inconclusive(
            format!("degenerate disk: center {center}, radius {radius}"),
            0,
            f64::NAN,
            f64::NAN,
            f64::NAN,
        );
    }
    let d_min = min_distance_to_circle(zeros, center, radius);
    if d_min < 1e-9 {
        return inconclusive(
            format!("a zero lies within {d_min:.3e} of the boundary circle"),
            0,
            f64::NAN,
            f64::NAN,
            f64::NAN,
        );
    }

    let n = zeros.len();
    let lip = n as f64 / d_min;
    let slack = float_slack(n);
    let mut num_points = 64;
    loop {
        let (net_max, _) = net_extrema(zeros, center, radius, num_points);
        let padding = lip * std::f64::consts::PI * radius / num_points as f64;
        let bound = net_max + padding + slack;
        if net_max >= 0.0 {
            // witness on the boundary: the closed disk pokes out of the
            // lemniscate no matter how fine the net gets
            return DiskCertificate {
                center,
                radius,
                net_size: num_points,
                net_max_log_modulus: net_max,
                lipschitz_bound: lip,
                margin: -bound,
                verdict: Verdict::CertifiedOutside,
                reason: None,
            };
        }
        if bound < 0.0 {
            return DiskCertificate {
                center,
                radius,
                net_size: num_points,
                net_max_log_modulus: net_max,
                lipschitz_bound: lip,
                margin: -bound,
                verdict: Verdict::CertifiedInside,
                reason: None,
            };
        }
        if num_points >= NET_CAP {
            return inconclusive(
                format!("net cap {NET_CAP} reached with certified bound {bound:.3e} >= 0"),
                num_points,
                net_max,
                lip,
                -bound,
            );
        }
        num_points *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fifth_roots() -> ZeroSet {
        ZeroSet::roots_of_unity(5).unwrap()
    }

    // Brute-force oracle: extrema of log|p| over a dense circle scan.
    fn circle_scan(zeros: &ZeroSet, center: Complex64, radius: f64, points: usize) -> (f64, f64) {
        let mut max = f64::NEG_INFINITY;
        let mut min = f64::INFINITY;
        for k in 0..points {
            let theta = std::f64::consts::TAU * k as f64 / points as f64;
            let z = center + Complex64::from_polar(radius, theta);
            let v = zeros
                .zeros()
                .iter()
                .map(|x| (z - x).norm().ln())
                .sum::<f64>();
            max = max.max(v);
            min = min.min(v);
        }
        (max, min)
    }

    #[test]
    fn log_modulus_repeated_zero() {
        let zs = ZeroSet::repeated(Complex64::new(0.0, 0.0), 7).unwrap();
        let z = Complex64::new(0.3, 0.4); // |z| = 0.5
        let v = log_modulus(&zs, z).finite().unwrap();
        assert!((v - 7.0 * 0.5_f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn log_modulus_roots_of_unity_matches_product_formula() {
        // p(z) = z^5 - 1
        let zs = fifth_roots();
        let at0 = log_modulus(&zs, Complex64::new(0.0, 0.0)).finite().unwrap();
        assert!(at0.abs() < 1e-12, "log|p(0)| = {at0}");
        let at2 = log_modulus(&zs, Complex64::new(2.0, 0.0)).finite().unwrap();
        assert!((at2 - 31.0_f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn log_modulus_hits_zero_exactly() {
        let zs = fifth_roots();
        assert_eq!(
            log_modulus(&zs, Complex64::new(1.0, 0.0)),
            LogModulus::NegInfinity
        );
        assert!(log_modulus(&zs, Complex64::new(1.0, 0.0)).is_negative());
    }

    #[test]
    fn log_modulus_survives_extreme_degree_and_scale() {
        // 10^4 zeros: the naive product would overflow long before this
        let zs = ZeroSet::repeated(Complex64::new(0.0, 0.0), 10_000).unwrap();
        let v = log_modulus(&zs, Complex64::new(2.0, 0.0)).finite().unwrap();
        assert!((v - 10_000.0 * 2.0_f64.ln()).abs() < 1e-7);
        let w = log_modulus(&zs, Complex64::new(0.5, 0.0)).finite().unwrap();
        assert!((w + 10_000.0 * 2.0_f64.ln()).abs() < 1e-7);
    }

    #[test]
    fn gradient_spot_values() {
        let zs = ZeroSet::repeated(Complex64::new(0.0, 0.0), 9).unwrap();
        let g = log_gradient(&zs, Complex64::new(2.0, 0.0)).unwrap();
        assert!((g - Complex64::new(4.5, 0.0)).norm() < 1e-12);

        let pm = ZeroSet::new(vec![Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0)]).unwrap();
        let g0 = log_gradient(&pm, Complex64::new(0.0, 0.0)).unwrap();
        assert!(g0.norm() < 1e-15);

        // p'/p for z^5 - 1 at z = 2: 5 * 16 / 31
        let g2 = log_gradient(&fifth_roots(), Complex64::new(2.0, 0.0)).unwrap();
        assert!((g2 - Complex64::new(80.0 / 31.0, 0.0)).norm() < 1e-12);

        assert!(matches!(
            log_gradient(&fifth_roots(), Complex64::new(1.0, 0.0)),
            Err(Error::CoincidentPoint)
        ));
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..20 {
            let zeros: Vec<Complex64> = (0..12)
                .map(|_| Complex64::new(rng.random::<f64>() * 2.0 - 1.0, rng.random::<f64>() * 2.0 - 1.0))
                .collect();
            let zs = ZeroSet::new(zeros).unwrap();
            let z = Complex64::new(1.7 + rng.random::<f64>(), 1.3 + rng.random::<f64>());
            let g = log_gradient(&zs, z).unwrap();
            let h = 1e-6;
            let f = |p: Complex64| log_modulus(&zs, p).finite().unwrap();
            let fd_x = (f(z + Complex64::new(h, 0.0)) - f(z - Complex64::new(h, 0.0))) / (2.0 * h);
            let fd_y = (f(z + Complex64::new(0.0, h)) - f(z - Complex64::new(0.0, h))) / (2.0 * h);
            // grad log|p| = (Re S, -Im S) for S = p'/p
            assert!((fd_x - g.re).abs() / g.norm().max(1.0) < 1e-4);
            assert!((fd_y + g.im).abs() / g.norm().max(1.0) < 1e-4);
        }
    }

    #[test]
    fn sup_bound_constant_modulus_case() {
        let zs = ZeroSet::repeated(Complex64::new(0.0, 0.0), 10).unwrap();
        let u = sup_bound_on_circle(&zs, Complex64::new(0.0, 0.0), 0.9, 64).unwrap();
        let exact = 10.0 * 0.9_f64.ln();
        assert!(u >= exact);
        let padding = (10.0 / 0.1) * std::f64::consts::PI * 0.9 / 64.0;
        assert!(u <= exact + padding + 1e-9, "u = {u}");
        assert!(u < 0.0, "certifies sup < 0");
    }

    #[test]
    fn sup_bound_tightens_under_refinement() {
        let zs = ZeroSet::new(vec![Complex64::new(0.0, 0.0)]).unwrap();
        // log|p| = log|z| is identically 0 on the unit circle
        let mut prev = f64::INFINITY;
        for k in [8, 16, 64, 256, 1024, 4096] {
            let u = sup_bound_on_circle(&zs, Complex64::new(0.0, 0.0), 1.0, k).unwrap();
            assert!(u >= 0.0);
            assert!(u <= prev + 1e-15);
            prev = u;
        }
        assert!(prev < 1e-3);
    }

    #[test]
    fn circle_bounds_match_scan_oracle_for_roots_of_unity() {
        let zs = fifth_roots();
        let c = Complex64::new(0.0, 0.0);
        let n = zs.len() as f64;

        // sharp guarantee: oracle <= bound <= oracle + Lipschitz padding
        let (oracle_max, _) = circle_scan(&zs, c, 0.5, 1_000_000);
        let u = sup_bound_on_circle(&zs, c, 0.5, 10_000).unwrap();
        let padding = (n / 0.5) * std::f64::consts::PI * 0.5 / 10_000.0;
        assert!(u >= oracle_max - 1e-12);
        assert!(u <= oracle_max + padding + 1e-9, "u={u} oracle={oracle_max}");
        // and the gap closes to the stated 1e-3 with a denser net
        let u_fine = sup_bound_on_circle(&zs, c, 0.5, 100_000).unwrap();
        assert!((u_fine - oracle_max).abs() < 1e-3, "u={u_fine} oracle={oracle_max}");

        let (_, oracle_min) = circle_scan(&zs, c, 3.0, 1_000_000);
        let l = inf_bound_on_circle(&zs, c, 3.0, 10_000).unwrap();
        let padding_inf = (n / 2.0) * std::f64::consts::PI * 3.0 / 10_000.0;
        assert!(l <= oracle_min + 1e-12);
        assert!(l >= oracle_min - padding_inf - 1e-9, "l={l} oracle={oracle_min}");
        let l_fine = inf_bound_on_circle(&zs, c, 3.0, 100_000).unwrap();
        assert!((l_fine - oracle_min).abs() < 1e-3, "l={l_fine} oracle={oracle_min}");
    }

    #[test]
    fn inf_bound_spot_values() {
        let zs = ZeroSet::repeated(Complex64::new(0.0, 0.0), 10).unwrap();
        let l = inf_bound_on_circle(&zs, Complex64::new(0.0, 0.0), 2.0, 64).unwrap();
        let exact = 10.0 * 2.0_f64.ln();
        let padding = (10.0 / 1.0) * std::f64::consts::PI * 2.0 / 64.0;
        assert!(l >= exact - padding - 1e-9 && l <= exact);

        let one = ZeroSet::new(vec![Complex64::new(0.0, 0.0)]).unwrap();
        let l2 = inf_bound_on_circle(&one, Complex64::new(3.0, 0.0), 1.0, 64).unwrap();
        assert!(l2 <= 2.0_f64.ln());
        assert!(l2 >= 2.0_f64.ln() - 0.1);
    }

    #[test]
    fn zero_on_circle_is_rejected() {
        let zs = fifth_roots();
        assert!(matches!(
            sup_bound_on_circle(&zs, Complex64::new(0.0, 0.0), 1.0, 64),
            Err(Error::ZeroOnCircle { .. })
        ));
        assert!(matches!(
            inf_bound_on_circle(&zs, Complex64::new(0.0, 0.0), 1.0 + 1e-10, 64),
            Err(Error::ZeroOnCircle { .. })
        ));
        assert!(sup_bound_on_circle(&zs, Complex64::new(0.0, 0.0), 0.5, 7).is_err());
    }

    #[test]
    fn certify_repeated_zero_disks() {
        let zs = ZeroSet::repeated(Complex64::new(0.0, 0.0), 10).unwrap();
        let inside = certify_disk(&zs, Complex64::new(0.0, 0.0), 0.9);
        assert_eq!(inside.verdict, Verdict::CertifiedInside);
        assert!(inside.margin > 0.0);

        let outside = certify_disk(&zs, Complex64::new(0.0, 0.0), 1.1);
        assert_ne!(outside.verdict, Verdict::CertifiedInside);
        assert_eq!(outside.verdict, Verdict::CertifiedOutside);
    }

    #[test]
    fn certify_degenerate_inputs_are_inconclusive() {
        let zs = fifth_roots();
        let c = certify_disk(&zs, Complex64::new(0.0, 0.0), -1.0);
        assert_eq!(c.verdict, Verdict::Inconclusive);
        assert!(c.reason.is_some());
        let on_zero = certify_disk(&zs, Complex64::new(0.0, 0.0), 1.0);
        assert_eq!(on_zero.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn certify_matches_grid_oracle_for_z20_disks() {
        // D(0, 0.7) against { |z^20 - 1| < 1 }: wherever Re z^20 < 0 the
        // modulus |z^20 - 1| exceeds 1, so no centered disk is contained and
        // both the certificate and the dense grid oracle must say so.
        let zs = ZeroSet::roots_of_unity(20).unwrap();
        let grid_oracle_inside = |center: Complex64, radius: f64| -> bool {
            let n_grid = 1200;
            for i in 0..n_grid {
                for j in 0..n_grid {
                    let x = center.re - radius + 2.0 * radius * (i as f64 + 0.5) / n_grid as f64;
                    let y = center.im - radius + 2.0 * radius * (j as f64 + 0.5) / n_grid as f64;
                    let z = Complex64::new(x, y);
                    if (z - center).norm() <= radius && !log_modulus(&zs, z).is_negative() {
                        return false;
                    }
                }
            }
            true
        };

        let cert = certify_disk(&zs, Complex64::new(0.0, 0.0), 0.7);
        assert!(!grid_oracle_inside(Complex64::new(0.0, 0.0), 0.7));
        assert_ne!(cert.verdict, Verdict::CertifiedInside);

        // a small disk inside the petal around the root z = 1 is certifiable
        // and the oracle agrees: |z^20 - 1| <= 1.02^20 - 1 < 0.49 there
        let petal = certify_disk(&zs, Complex64::new(1.0, 0.0), 0.02);
        assert_eq!(petal.verdict, Verdict::CertifiedInside);
        assert!(petal.margin > 0.0);
        assert!(grid_oracle_inside(Complex64::new(1.0, 0.0), 0.02));
    }

    #[test]
    fn certification_soundness_randomized_against_grid() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let mut certified = 0;
        let mut attempts = 0;
        while certified < 30 && attempts < 400 {
            attempts += 1;
            let n = rng.random_range(5..30);
            let zeros: Vec<Complex64> = (0..n)
                .map(|_| {
                    Complex64::from_polar(
                        0.9 * rng.random::<f64>().sqrt(),
                        std::f64::consts::TAU * rng.random::<f64>(),
                    )
                })
                .collect();
            let zs = ZeroSet::new(zeros).unwrap();
            let radius = 0.2 + 0.5 * rng.random::<f64>();
            let cert = certify_disk(&zs, Complex64::new(0.0, 0.0), radius);
            if cert.verdict != Verdict::CertifiedInside {
                continue;
            }
            certified += 1;
            let g = 400;
            for i in 0..g {
                for j in 0..g {
                    let x = -radius + 2.0 * radius * (i as f64 + 0.5) / g as f64;
                    let y = -radius + 2.0 * radius * (j as f64 + 0.5) / g as f64;
                    let z = Complex64::new(x, y);
                    if z.norm() <= radius {
                        assert!(
                            log_modulus(&zs, z).is_negative(),
                            "certified disk contains grid point with log|p| >= 0"
                        );
                    }
                }
            }
        }
        assert!(certified >= 30, "only {certified} certified in {attempts} attempts");
    }

    #[test]
    fn zeroset_text_round_trip() {
        let zs = fifth_roots();
        let mut buf = Vec::new();
        zs.write_text(&mut buf).unwrap();
        let back = ZeroSet::read_text(buf.as_slice()).unwrap();
        assert_eq!(zs.zeros(), back.zeros());

        let junk = ZeroSet::read_text("1.0\n".as_bytes());
        assert!(junk.is_err());
        let empty = ZeroSet::read_text("# just a comment\n".as_bytes());
        assert!(empty.is_err());
    }

    proptest! {
        // exp(log|p|) equals the direct product of distances
        #[test]
        fn product_identity(seed in 0u64..500, n in 1usize..50) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let zeros: Vec<Complex64> = (0..n)
                .map(|_| Complex64::new(4.0 * rng.random::<f64>() - 2.0, 4.0 * rng.random::<f64>() - 2.0))
                .collect();
            let zs = ZeroSet::new(zeros).unwrap();
            let z = Complex64::new(4.0 * rng.random::<f64>() - 2.0, 4.0 * rng.random::<f64>() - 2.0);
            let direct: f64 = zs.zeros().iter().map(|x| (z - x).norm()).product();
            prop_assume!(direct > 1e-280 && direct < 1e280);
            let via_log = log_modulus(&zs, z).finite().unwrap().exp();
            prop_assert!((via_log - direct).abs() <= 1e-9 * direct.max(1e-300));
        }

        // net refinement tightens bounds; the scan oracle stays inside them
        #[test]
        fn bounds_are_sound_and_monotone(seed in 0u64..200) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e3779b97f4a7c15));
            let n = rng.random_range(2..20);
            let zeros: Vec<Complex64> = (0..n)
                .map(|_| Complex64::new(2.0 * rng.random::<f64>() - 1.0, 2.0 * rng.random::<f64>() - 1.0))
                .collect();
            let zs = ZeroSet::new(zeros).unwrap();
            let center = Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
            let radius = 0.3 + rng.random::<f64>();
            prop_assume!(min_distance_to_circle(&zs, center, radius) > 1e-3);

            let coarse_sup = sup_bound_on_circle(&zs, center, radius, 128).unwrap();
            let fine_sup = sup_bound_on_circle(&zs, center, radius, 256).unwrap();
            let coarse_inf = inf_bound_on_circle(&zs, center, radius, 128).unwrap();
            let fine_inf = inf_bound_on_circle(&zs, center, radius, 256).unwrap();
            prop_assert!(fine_sup <= coarse_sup + 1e-12);
            prop_assert!(fine_inf >= coarse_inf - 1e-12);

            let (scan_max, scan_min) = circle_scan(&zs, center, radius, 4096);
            prop_assert!(scan_max <= fine_sup + 1e-12);
            prop_assert!(scan_min >= fine_inf - 1e-12);
        }
    }
}
