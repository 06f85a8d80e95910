//! C ABI for the lemniscate library: opaque handles, status codes, and a
//! value-level surface covering sampling, potentials, certification, and
//! inradius estimation. The header is generated by cbindgen into
//! `include/lemni.h` at build time.
//!
//! Conventions: every function returns a `LemniStatus`; results come back
//! through out-pointers. Handles are created and destroyed by this library
//! only (`*_free` functions accept null). Pointers must be valid for the
//! duration of the call; no ownership is transferred through arguments.

use std::panic::{catch_unwind, AssertUnwindSafe};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use lemni::measures::{self, MeasureSpec};
use lemni::polynomial::{self, ZeroSet};
use lemni::raster::{self, Bounds};

/// Status codes returned by every entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LemniStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Unsupported = 3,
    RuntimeError = 4,
    Panic = 5,
}

/// Opaque zero-set handle.
pub struct LemniZeroSet {
    inner: ZeroSet,
}

/// Opaque raster handle.
pub struct LemniRaster {
    inner: raster::Raster,
}

/// Disk certificate verdicts (mirrors the library enum).
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LemniVerdict {
    CertifiedInside = 0,
    CertifiedOutside = 1,
    Inconclusive = 2,
}

/// Flattened disk certificate.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct LemniDiskCertificate {
    pub center_re: f64,
    pub center_im: f64,
    pub radius: f64,
    pub net_size: usize,
    pub net_max_log_modulus: f64,
    pub lipschitz_bound: f64,
    pub margin: f64,
    pub verdict: LemniVerdict,
}

/// Inradius estimate of a raster.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct LemniInradius {
    pub rho_hat: f64,
    pub center_re: f64,
    pub center_im: f64,
    pub half_cell_error: f64,
    pub grid_points_inside: usize,
}

fn map_err(e: &lemni::Error) -> LemniStatus {
    match e {
        lemni::Error::UnsupportedClosedForm(_) => LemniStatus::Unsupported,
        lemni::Error::InvalidMeasure(_)
        | lemni::Error::EmptyZeroSet
        | lemni::Error::NonFinite(_)
        | lemni::Error::Domain(_)
        | lemni::Error::Precondition(_)
        | lemni::Error::Config(_)
        | lemni::Error::MatrixSize { .. }
        | lemni::Error::GridTooLarge { .. } => LemniStatus::InvalidArgument,
        _ => LemniStatus::RuntimeError,
    }
}

fn guarded<F: FnOnce() -> LemniStatus>(f: F) -> LemniStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => LemniStatus::Panic,
    }
}

unsafe fn write_out<T>(out: *mut T, value: T) -> LemniStatus {
    if out.is_null() {
        return LemniStatus::NullPointer;
    }
    unsafe { out.write(value) };
    LemniStatus::Ok
}

fn new_zeroset(out: *mut *mut LemniZeroSet, result: lemni::Result<ZeroSet>) -> LemniStatus {
    if out.is_null() {
        return LemniStatus::NullPointer;
    }
    match result {
        Ok(inner) => {
            let handle = Box::into_raw(Box::new(LemniZeroSet { inner }));
            unsafe { out.write(handle) };
            LemniStatus::Ok
        }
        Err(e) => map_err(&e),
    }
}

/// Library version as a static C string.
#[no_mangle]
pub extern "C" fn lemni_version() -> *const std::os::raw::c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const std::os::raw::c_char
}

/// Samples `n` zeros uniformly from the disk of the given radius.
#[no_mangle]
pub extern "C" fn lemni_zeroset_sample_disk(
    radius: f64,
    n: usize,
    seed: u64,
    out: *mut *mut LemniZeroSet,
) -> LemniStatus {
    guarded(|| {
        let measure = match MeasureSpec::uniform_disk(radius) {
            Ok(m) => m,
            Err(e) => return map_err(&e),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        new_zeroset(out, measures::sample(&measure, n, &mut rng))
    })
}

/// Samples `n` zeros uniformly from the unit circle.
#[no_mangle]
pub extern "C" fn lemni_zeroset_sample_circle(
    n: usize,
    seed: u64,
    out: *mut *mut LemniZeroSet,
) -> LemniStatus {
    guarded(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        new_zeroset(out, measures::sample(&MeasureSpec::UniformCircle, n, &mut rng))
    })
}

/// Normalized Ginibre spectrum of dimension `n` (eigenvalues of A/sqrt(n)).
#[no_mangle]
pub extern "C" fn lemni_zeroset_sample_ginibre(
    n: usize,
    seed: u64,
    out: *mut *mut LemniZeroSet,
) -> LemniStatus {
    guarded(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        new_zeroset(
            out,
            measures::sample(&MeasureSpec::GinibreNormalized, n, &mut rng),
        )
    })
}

/// Builds a zero set from parallel re/im arrays of length `len`.
#[no_mangle]
pub extern "C" fn lemni_zeroset_from_points(
    re: *const f64,
    im: *const f64,
    len: usize,
    out: *mut *mut LemniZeroSet,
) -> LemniStatus {
    guarded(|| {
        if re.is_null() || im.is_null() {
            return LemniStatus::NullPointer;
        }
        let res = unsafe { std::slice::from_raw_parts(re, len) };
        let ims = unsafe { std::slice::from_raw_parts(im, len) };
        let zeros = res
            .iter()
            .zip(ims)
            .map(|(&a, &b)| Complex64::new(a, b))
            .collect();
        new_zeroset(out, ZeroSet::new(zeros))
    })
}

/// Number of zeros in the set.
#[no_mangle]
pub extern "C" fn lemni_zeroset_len(
    handle: *const LemniZeroSet,
    out: *mut usize,
) -> LemniStatus {
    guarded(|| {
        if handle.is_null() {
            return LemniStatus::NullPointer;
        }
        let len = unsafe { &*handle }.inner.len();
        unsafe { write_out(out, len) }
    })
}

/// Copies zero `index` into the out-pointers.
#[no_mangle]
pub extern "C" fn lemni_zeroset_get(
    handle: *const LemniZeroSet,
    index: usize,
    out_re: *mut f64,
    out_im: *mut f64,
) -> LemniStatus {
    guarded(|| {
        if handle.is_null() || out_re.is_null() || out_im.is_null() {
            return LemniStatus::NullPointer;
        }
        let zs = &unsafe { &*handle }.inner;
        match zs.zeros().get(index) {
            Some(z) => {
                unsafe {
                    out_re.write(z.re);
                    out_im.write(z.im);
                }
                LemniStatus::Ok
            }
            None => LemniStatus::InvalidArgument,
        }
    })
}

/// Frees a zero set; null is a no-op.
#[no_mangle]
pub extern "C" fn lemni_zeroset_free(handle: *mut LemniZeroSet) {
    if !handle.is_null() {
        drop(unsafe { Box::from_raw(handle) });
    }
}

/// `log |p(z)|`. `*out_is_neg_inf` is set to 1 when z hits a zero exactly
/// (then `*out` is negative infinity).
#[no_mangle]
pub extern "C" fn lemni_log_modulus(
    handle: *const LemniZeroSet,
    z_re: f64,
    z_im: f64,
    out: *mut f64,
    out_is_neg_inf: *mut i32,
) -> LemniStatus {
    guarded(|| {
        if handle.is_null() || out.is_null() || out_is_neg_inf.is_null() {
            return LemniStatus::NullPointer;
        }
        let zs = &unsafe { &*handle }.inner;
        match polynomial::log_modulus(zs, Complex64::new(z_re, z_im)) {
            polynomial::LogModulus::Finite(v) => unsafe {
                out.write(v);
                out_is_neg_inf.write(0);
                LemniStatus::Ok
            },
            polynomial::LogModulus::NegInfinity => unsafe {
                out.write(f64::NEG_INFINITY);
                out_is_neg_inf.write(1);
                LemniStatus::Ok
            },
        }
    })
}

/// Closed-form potential of the uniform disk measure at z.
#[no_mangle]
pub extern "C" fn lemni_potential_disk(
    radius: f64,
    z_re: f64,
    z_im: f64,
    out: *mut f64,
) -> LemniStatus {
    guarded(|| {
        let measure = match MeasureSpec::uniform_disk(radius) {
            Ok(m) => m,
            Err(e) => return map_err(&e),
        };
        match measures::potential(&measure, Complex64::new(z_re, z_im)) {
            Ok(v) => unsafe { write_out(out, v.value) },
            Err(e) => map_err(&e),
        }
    })
}

/// Negative-set inradius r_c of the uniform disk measure family.
#[no_mangle]
pub extern "C" fn lemni_negative_set_inradius_disk(radius: f64, out: *mut f64) -> LemniStatus {
    guarded(|| {
        let measure = match MeasureSpec::uniform_disk(radius) {
            Ok(m) => m,
            Err(e) => return map_err(&e),
        };
        match measures::negative_set_inradius(&measure) {
            Ok(v) => unsafe { write_out(out, v) },
            Err(e) => map_err(&e),
        }
    })
}

/// Bennett's `h(u) = (1+u) log(1+u) - u`.
#[no_mangle]
pub extern "C" fn lemni_bennett_h(u: f64, out: *mut f64) -> LemniStatus {
    guarded(|| match lemni::concentration::bennett_h(u) {
        Ok(v) => unsafe { write_out(out, v) },
        Err(e) => map_err(&e),
    })
}

/// Bennett tail bound `exp(-(nu/b^2) h(b t / nu))`.
#[no_mangle]
pub extern "C" fn lemni_bennett_bound(nu: f64, b: f64, t: f64, out: *mut f64) -> LemniStatus {
    guarded(|| match lemni::concentration::bennett_bound(nu, b, t) {
        Ok(v) => unsafe { write_out(out, v.bound) },
        Err(e) => map_err(&e),
    })
}

/// Attempts to certify `D(center, radius)` inside the lemniscate.
#[no_mangle]
pub extern "C" fn lemni_certify_disk(
    handle: *const LemniZeroSet,
    center_re: f64,
    center_im: f64,
    radius: f64,
    out: *mut LemniDiskCertificate,
) -> LemniStatus {
    guarded(|| {
        if handle.is_null() {
            return LemniStatus::NullPointer;
        }
        let zs = &unsafe { &*handle }.inner;
        let cert = polynomial::certify_disk(zs, Complex64::new(center_re, center_im), radius);
        let verdict = match cert.verdict {
            polynomial::Verdict::CertifiedInside => LemniVerdict::CertifiedInside,
            polynomial::Verdict::CertifiedOutside => LemniVerdict::CertifiedOutside,
            polynomial::Verdict::Inconclusive => LemniVerdict::Inconclusive,
        };
        unsafe {
            write_out(
                out,
                LemniDiskCertificate {
                    center_re: cert.center.re,
                    center_im: cert.center.im,
                    radius: cert.radius,
                    net_size: cert.net_size,
                    net_max_log_modulus: cert.net_max_log_modulus,
                    lipschitz_bound: cert.lipschitz_bound,
                    margin: cert.margin,
                    verdict,
                },
            )
        }
    })
}

/// Rasterizes the lemniscate over `[xmin, xmax] x [ymin, ymax]` with cell
/// size `h`.
#[no_mangle]
pub extern "C" fn lemni_rasterize(
    handle: *const LemniZeroSet,
    xmin: f64,
    xmax: f64,
    ymin: f64,
    ymax: f64,
    h: f64,
    out: *mut *mut LemniRaster,
) -> LemniStatus {
    guarded(|| {
        if handle.is_null() || out.is_null() {
            return LemniStatus::NullPointer;
        }
        let zs = &unsafe { &*handle }.inner;
        let bounds = match Bounds::new(xmin, xmax, ymin, ymax) {
            Ok(b) => b,
            Err(e) => return map_err(&e),
        };
        match raster::rasterize(zs, bounds, h) {
            Ok(inner) => {
                let raster = Box::into_raw(Box::new(LemniRaster { inner }));
                unsafe { out.write(raster) };
                LemniStatus::Ok
            }
            Err(e) => map_err(&e),
        }
    })
}

/// Grid dimensions of a raster.
#[no_mangle]
pub extern "C" fn lemni_raster_shape(
    handle: *const LemniRaster,
    out_nx: *mut usize,
    out_ny: *mut usize,
) -> LemniStatus {
    guarded(|| {
        if handle.is_null() || out_nx.is_null() || out_ny.is_null() {
            return LemniStatus::NullPointer;
        }
        let r = &unsafe { &*handle }.inner;
        unsafe {
            out_nx.write(r.nx());
            out_ny.write(r.ny());
        }
        LemniStatus::Ok
    })
}

/// Inradius estimate of a raster.
#[no_mangle]
pub extern "C" fn lemni_inradius(
    handle: *const LemniRaster,
    out: *mut LemniInradius,
) -> LemniStatus {
    guarded(|| {
        if handle.is_null() {
            return LemniStatus::NullPointer;
        }
        let r = &unsafe { &*handle }.inner;
        let est = raster::inradius_estimate(r);
        unsafe {
            write_out(
                out,
                LemniInradius {
                    rho_hat: est.rho_hat,
                    center_re: est.center.re,
                    center_im: est.center.im,
                    half_cell_error: est.half_cell_error,
                    grid_points_inside: est.grid_points_inside,
                },
            )
        }
    })
}

/// Frees a raster; null is a no-op.
#[no_mangle]
pub extern "C" fn lemni_raster_free(handle: *mut LemniRaster) {
    if !handle.is_null() {
        drop(unsafe { Box::from_raw(handle) });
    }
}

/// One sample of the limit inradius for circle-sampled zeros: rasterizes
/// `{g < 0}` for a truncated Gaussian field draw and returns its inradius.
#[no_mangle]
pub extern "C" fn lemni_limit_inradius_sample(
    k_truncation: usize,
    box_radius: f64,
    h: f64,
    seed: u64,
    out: *mut f64,
) -> LemniStatus {
    guarded(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        match lemni::gaussian::limit_inradius_sample(k_truncation, box_radius, h, &mut rng) {
            Ok(v) => unsafe { write_out(out, v) },
            Err(e) => map_err(&e),
        }
    })
}
