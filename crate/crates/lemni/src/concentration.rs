//! Bennett's inequality and empirical verification of the containment
//! concentration step at finite degree.
//!
//! For independent variables bounded above by `b` with `ν = Σ E X_i^2`, the
//! centered sum satisfies `P(S > t) <= exp(-(ν/b²) h(bt/ν))` with
//! `h(u) = (1+u) log(1+u) - u`.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::measures::{self, MeasureSpec};
use crate::polynomial::log_modulus;
use crate::{Error, Result};

/// `h(u) = (1+u) log(1+u) - u`: zero at zero, convex, increasing.
pub fn bennett_h(u: f64) -> Result<f64> {
    if !u.is_finite() || u < 0.0 {
        return Err(Error::Domain(format!("h is defined for u >= 0, got {u}")));
    }
    Ok((1.0 + u) * u.ln_1p() - u)
}

/// A fully evaluated Bennett tail bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BennettBound {
    /// Sum of second moments `Σ E X_i^2`.
    pub nu: f64,
    /// Almost-sure upper bound on each summand.
    pub b: f64,
    /// Tail threshold.
    pub t: f64,
    /// `exp(-(ν/b²) h(bt/ν))`, in (0, 1].
    pub bound: f64,
}

/// Evaluates the Bennett tail bound `P(S > t) <= exp(-(ν/b²) h(bt/ν))`.
pub fn bennett_bound(nu: f64, b: f64, t: f64) -> Result<BennettBound> {
    for (name, v) in [("nu", nu), ("b", b), ("t", t)] {
        if !v.is_finite() || v <= 0.0 {
            return Err(Error::Domain(format!(
                "Bennett bound needs positive finite {name}, got {v}"
            )));
        }
    }
    let h = bennett_h(b * t / nu)?;
    Ok(BennettBound {
        nu,
        b,
        t,
        bound: (-(nu / (b * b)) * h).exp(),
    })
}

/// Report of an empirical containment-tail check at a fixed point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContainmentReport {
    /// Empirical frequency of `log|p_n(z)| > -log 2` across trials.
    pub empirical: f64,
    /// Bennett bound on that probability.
    pub bound: f64,
    pub nu: f64,
    pub b: f64,
    pub t: f64,
    pub trials: usize,
    pub pass: bool,
}

/// Checks the pointwise containment tail: for `z` with `U(z) < 0`, the event
/// `log|p_n(z)| > -log 2` should be rarer than the Bennett bound computed
/// from `b >= sup log|z - w|` and `ν = n σ_z²` (σ² estimated by Monte
/// Carlo). Passes when the empirical frequency is at most bound plus three
/// binomial standard errors.
pub fn verify_containment_bound(
    measure: &MeasureSpec,
    z: Complex64,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<ContainmentReport> {
    if trials < 100 {
        return Err(Error::Precondition(format!(
            "need at least 100 trials, got {trials}"
        )));
    }
    if n < 2 {
        return Err(Error::Precondition("need degree n >= 2".into()));
    }
    let u = measures::potential(measure, z)?.value;
    if u >= 0.0 {
        return Err(Error::Precondition(format!(
            "z = {z} is not in the negative set: U(z) = {u}"
        )));
    }

    // b must be a positive a.s. upper bound on log|z - X|. The natural
    // choice log(|z| + support radius) can be <= 0 (e.g. unit disk at the
    // origin); any larger b is still valid, so floor it at log 2.
    let b = (z.norm() + measure.support_radius())
        .ln()
        .max(std::f64::consts::LN_2);
    let sigma2 = measures::variance_sigma2(
        measure,
        z,
        100_000,
        &mut ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0001),
    )?
    .value;
    let nu = n as f64 * sigma2;
    let t = -(n as f64) * u - std::f64::consts::LN_2;
    if t <= 0.0 {
        return Err(Error::Precondition(format!(
            "threshold t = {t} not positive; increase n"
        )));
    }
    let bound = bennett_bound(nu, b, t)?.bound;

    let exceed: usize = (0..trials as u64)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (k.wrapping_mul(0x9e37_79b9_7f4a_7c15)));
            let zeros = measures::sample(measure, n, &mut rng).expect("measure validated above");
            let v = log_modulus(&zeros, z).finite_or(f64::NEG_INFINITY);
            usize::from(v > -std::f64::consts::LN_2)
        })
        .sum();
    let empirical = exceed as f64 / trials as f64;
    let stderr = crate::stats::binomial_stderr(exceed, trials);
    Ok(ContainmentReport {
        empirical,
        bound,
        nu,
        b,
        t,
        trials,
        pass: empirical <= bound + 3.0 * stderr,
    })
}
