//! Ginibre ensemble sampling: matrices of i.i.d. standard complex Gaussians,
//! their spectra via the in-crate eigensolver, and Kostlan's radial
//! representation of the squared eigenvalue moduli.
//!
//! Normalization: "standard complex Gaussian" means independent real and
//! imaginary parts of variance 1/2 each, so E|g|^2 = 1. This matches the
//! ensemble's joint density exponent `exp(-Σ |λ_k|^2)`.

mod eigen;

pub use eigen::eigenvalues as matrix_eigenvalues;

use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Gamma, Normal};

use crate::measures::MeasureSpec;
use crate::polynomial::{Provenance, ZeroSet};
use crate::{Error, Result};

/// Desk-scale cap on matrix dimension.
pub const MAX_DIM: usize = 2000;

/// Dense square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(n: usize) -> Self {
        ComplexMatrix {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n + j] = v;
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }
}

/// Diagnostic payload for a failed QR iteration.
#[derive(Clone, Debug)]
pub struct IterationLog {
    pub iterations: usize,
    pub max_iterations: usize,
    pub active_lo: usize,
    pub active_hi: usize,
    pub last_subdiag: f64,
}

impl fmt::Display for IterationLog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} iterations (cap {}), active block [{}, {}], last subdiagonal {:.3e}",
            self.iterations, self.max_iterations, self.active_lo, self.active_hi, self.last_subdiag
        )
    }
}

/// Squared eigenvalue moduli in Kostlan's representation: entry `j`
/// (1-based) is distributed as a sum of `j` unit-rate exponentials.
#[derive(Clone, Debug)]
pub struct KostlanSample {
    pub squared_moduli: Vec<f64>,
}

/// Draws an n×n matrix of i.i.d. standard complex Gaussian entries.
pub fn sample_ginibre_matrix<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<ComplexMatrix> {
    if n == 0 || n > MAX_DIM {
        return Err(Error::MatrixSize { n, max: MAX_DIM });
    }
    let normal = Normal::new(0.0, std::f64::consts::FRAC_1_SQRT_2).expect("valid scale");
    let mut m = ComplexMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            m.set(i, j, Complex64::new(normal.sample(rng), normal.sample(rng)));
        }
    }
    Ok(m)
}

/// Eigenvalues of the matrix as a zero set (multiplicities kept).
pub fn eigenvalues(matrix: &ComplexMatrix) -> Result<ZeroSet> {
    ZeroSet::with_provenance(eigen::eigenvalues(matrix)?, Provenance::Explicit)
}

/// Spectrum of a fresh Ginibre matrix scaled by `1/sqrt(n)`; the zero set of
/// a characteristic polynomial whose lemniscate hugs the unit disk.
pub fn normalized_spectrum<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<ZeroSet> {
    let m = sample_ginibre_matrix(n, rng)?;
    let scale = 1.0 / (n as f64).sqrt();
    let eigs = eigen::eigenvalues(&m)?;
    ZeroSet::with_provenance(
        eigs.into_iter().map(|l| l * scale).collect(),
        Provenance::Measure(MeasureSpec::GinibreNormalized),
    )
}

/// Kostlan's radial representation: the multiset of squared moduli of an
/// (un-normalized) Ginibre spectrum equals, in distribution, independent
/// draws `Y_j ~ Gamma(j, 1)`, `j = 1..n`. Only the multiset matches; the
/// joint law of the angles is not represented, so this is used for radial
/// statistics and validation, never to synthesize spectra.
pub fn sample_kostlan_moduli<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<KostlanSample> {
    if n == 0 {
        return Err(Error::Precondition("Kostlan sample needs n >= 1".into()));
    }
    let squared_moduli = (1..=n)
        .map(|j| Gamma::new(j as f64, 1.0).expect("valid shape").sample(rng))
        .collect();
    Ok(KostlanSample { squared_moduli })
}
