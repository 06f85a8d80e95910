//! Random polynomial lemniscates: sampling, certification, and desk-scale
//! statistics.
//!
//! A degree-`n` polynomial `p(z) = (z - X_1)...(z - X_n)` has the filled
//! lemniscate `{ z : |p(z)| < 1 }`. This crate samples the zeros `X_k` from
//! compactly supported measures (uniform disk, uniform circle, normalized
//! Ginibre spectra), evaluates `log |p|` stably at degree up to 10^4,
//! certifies disk containment in the lemniscate with net + Lipschitz bounds,
//! rasterizes the lemniscate and measures its inradius and component
//! structure, and runs seeded Monte Carlo campaigns that probe the limiting
//! behaviour of the inradius.
//!
//! Modules map one-to-one onto the moving parts:
//!
//! * [`measures`] — sampling laws and their logarithmic potentials.
//! * [`polynomial`] — zero sets, stable `log |p|`, circle bounds, disk
//!   certificates.
//! * [`ginibre`] — Ginibre matrices, an in-crate complex eigensolver, and
//!   Kostlan's radial representation.
//! * [`raster`] — occupancy grids, exact distance transforms, inradius
//!   estimates, components, contours.
//! * [`gaussian`] — the circle-case Gaussian limit field and its kernel.
//! * [`concentration`] — Bennett's inequality and empirical tail checks.
//! * [`experiments`] — reproducible campaign runners with JSON/CSV output.

pub mod concentration;
pub mod experiments;
pub mod gaussian;
pub mod ginibre;
pub mod measures;
pub mod polynomial;
pub mod raster;
pub mod stats;

pub use measures::{MeasureSpec, PotentialMethod, PotentialValue};
pub use polynomial::{DiskCertificate, LogModulus, Verdict, ZeroSet};
pub use raster::{Bounds, InradiusEstimate, Raster};

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("no closed-form potential for the {0} measure; use the Monte Carlo estimator")]
    UnsupportedClosedForm(&'static str),
    #[error("zero set must contain at least one point")]
    EmptyZeroSet,
    #[error("non-finite input: {0}")]
    NonFinite(String),
    #[error("a zero lies within {d_min:.3e} of the evaluation circle (minimum 1e-9)")]
    ZeroOnCircle { d_min: f64 },
    #[error("evaluation point coincides with a zero")]
    CoincidentPoint,
    #[error("grid of {cells} cells exceeds the {limit}-cell guard")]
    GridTooLarge { cells: u128, limit: u64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("matrix dimension {n} outside supported range 1..={max}")]
    MatrixSize { n: usize, max: usize },
    #[error("eigenvalue iteration did not converge: {0}")]
    EigenConvergence(ginibre::IterationLog),
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
