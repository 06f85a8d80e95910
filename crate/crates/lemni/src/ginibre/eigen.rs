//! Dense complex eigensolver: Householder reduction to upper Hessenberg form
//! followed by explicitly shifted QR iteration with Wilkinson shifts and 2×2
//! deflation. Eigenvalues only; no eigenvectors.
//!
//! Kept in-crate so the spectra feeding the experiments are auditable end to
//! end. Accuracy is the usual backward-stable ~n·ulp·‖A‖ of shifted QR.

use num_complex::Complex64;

use crate::ginibre::{ComplexMatrix, IterationLog};
use crate::{Error, Result};

/// Eigenvalues of a general complex square matrix, with multiplicity, in
/// deflation order.
pub fn eigenvalues(matrix: &ComplexMatrix) -> Result<Vec<Complex64>> {
    let n = matrix.dim();
    if n == 0 {
        return Err(Error::MatrixSize { n: 0, max: usize::MAX });
    }
    if matrix.data().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite("matrix entry".into()));
    }
    if n == 1 {
        return Ok(vec![matrix.get(0, 0)]);
    }
    let mut h = matrix.clone();
    hessenberg_in_place(&mut h);
    shifted_qr(&mut h)
}

/// In-place unitary similarity reduction to upper Hessenberg form via
/// complex Householder reflectors.
fn hessenberg_in_place(a: &mut ComplexMatrix) {
    let n = a.dim();
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n.saturating_sub(2) {
        // reflector for column k, rows k+1..n
        let mut norm_sq = 0.0;
        for i in k + 1..n {
            norm_sq += a.get(i, k).norm_sqr();
        }
        let norm_x = norm_sq.sqrt();
        if norm_x == 0.0 {
            continue;
        }
        let x0 = a.get(k + 1, k);
        let alpha = if x0 == Complex64::new(0.0, 0.0) {
            Complex64::new(norm_x, 0.0)
        } else {
            (x0 / x0.norm()) * norm_x
        };
        v[k + 1] = x0 + alpha;
        for i in k + 2..n {
            v[i] = a.get(i, k);
        }
        let vnorm_sq: f64 = (k + 1..n).map(|i| v[i].norm_sqr()).sum();
        if vnorm_sq == 0.0 {
            continue;
        }
        let scale = 2.0 / vnorm_sq;

        // left: rows k+1..n, all columns k..n
        for j in k..n {
            let mut w = Complex64::new(0.0, 0.0);
            for i in k + 1..n {
                w += v[i].conj() * a.get(i, j);
            }
            w *= scale;
            for i in k + 1..n {
                let val = a.get(i, j) - w * v[i];
                a.set(i, j, val);
            }
        }
        // right: all rows, columns k+1..n
        for i in 0..n {
            let mut w = Complex64::new(0.0, 0.0);
            for j in k + 1..n {
                w += a.get(i, j) * v[j];
            }
            w *= scale;
            for j in k + 1..n {
                let val = a.get(i, j) - w * v[j].conj();
                a.set(i, j, val);
            }
        }
        a.set(k + 1, k, -alpha);
        for i in k + 2..n {
            a.set(i, k, Complex64::new(0.0, 0.0));
        }
    }
}

/// Complex Givens rotation `G = [[c, s], [-conj(s), c]]` with real `c`,
/// `c^2 + |s|^2 = 1`, such that `G · (a, b)^T = (r, 0)^T`.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    if b == Complex64::new(0.0, 0.0) {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    if a == Complex64::new(0.0, 0.0) {
        return (0.0, Complex64::new(1.0, 0.0));
    }
    let na = a.norm();
    let t = (a.norm_sqr() + b.norm_sqr()).sqrt();
    let c = na / t;
    let s = (a / na) * b.conj() / t;
    (c, s)
}

/// Eigenvalues of `[[a, b], [c, d]]`, the second being the one closer to `d`.
fn eig2x2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> (Complex64, Complex64) {
    let m = (a + d) * 0.5;
    let p = (a - d) * 0.5;
    let q = (p * p + b * c).sqrt();
    let (e1, e2) = (m + q, m - q);
    if (e1 - d).norm() <= (e2 - d).norm() {
        (e2, e1)
    } else {
        (e1, e2)
    }
}

fn shifted_qr(h: &mut ComplexMatrix) -> Result<Vec<Complex64>> {
    let n = h.dim();
    let eps = f64::EPSILON;
    // absolute floor for negligibility tests when the local diagonal vanishes
    let hnorm: f64 = h.data().iter().map(|z| z.norm()).fold(0.0, f64::max);
    let floor = eps * hnorm.max(f64::MIN_POSITIVE);

    let mut eigs = vec![Complex64::new(0.0, 0.0); n];
    let mut hi = n - 1;
    let mut total_iters = 0usize;
    let max_iters = 100 * n;
    let mut iters_since_deflation = 0usize;

    loop {
        // deflate trailing 1×1 and 2×2 blocks as far as possible
        loop {
            if hi == 0 {
                eigs[0] = h.get(0, 0);
                return Ok(eigs);
            }
            let sub = h.get(hi, hi - 1).norm();
            let tol = (eps * (h.get(hi - 1, hi - 1).norm() + h.get(hi, hi).norm())).max(floor);
            if sub <= tol {
                eigs[hi] = h.get(hi, hi);
                h.set(hi, hi - 1, Complex64::new(0.0, 0.0));
                hi -= 1;
                iters_since_deflation = 0;
                continue;
            }
            if hi >= 1 {
                let sub2 = if hi >= 2 { h.get(hi - 1, hi - 2).norm() } else { 0.0 };
                let tol2 = if hi >= 2 {
                    (eps * (h.get(hi - 2, hi - 2).norm() + h.get(hi - 1, hi - 1).norm())).max(floor)
                } else {
                    0.0
                };
                if hi == 1 || sub2 <= tol2 {
                    // isolated trailing 2×2 block
                    let (e1, e2) = eig2x2(
                        h.get(hi - 1, hi - 1),
                        h.get(hi - 1, hi),
                        h.get(hi, hi - 1),
                        h.get(hi, hi),
                    );
                    eigs[hi - 1] = e1;
                    eigs[hi] = e2;
                    if hi >= 2 {
                        h.set(hi - 1, hi - 2, Complex64::new(0.0, 0.0));
                    }
                    if hi == 1 {
                        return Ok(eigs);
                    }
                    hi -= 2;
                    iters_since_deflation = 0;
                    continue;
                }
            }
            break;
        }

        // active block [lo..=hi]
        let mut lo = hi;
        while lo > 0 {
            let sub = h.get(lo, lo - 1).norm();
            let tol = (eps * (h.get(lo - 1, lo - 1).norm() + h.get(lo, lo).norm())).max(floor);
            if sub <= tol {
                h.set(lo, lo - 1, Complex64::new(0.0, 0.0));
                break;
            }
            lo -= 1;
        }

        total_iters += 1;
        iters_since_deflation += 1;
        if total_iters > max_iters {
            return Err(Error::EigenConvergence(IterationLog {
                iterations: total_iters,
                max_iterations: max_iters,
                active_lo: lo,
                active_hi: hi,
                last_subdiag: h.get(hi, hi - 1).norm(),
            }));
        }

        let shift = if iters_since_deflation % 10 == 0 {
            // exceptional shift to break rare shift cycles
            h.get(hi, hi) + Complex64::new(0.75 * h.get(hi, hi - 1).norm(), 0.0)
        } else {
            let (_, wilkinson) = eig2x2(
                h.get(hi - 1, hi - 1),
                h.get(hi - 1, hi),
                h.get(hi, hi - 1),
                h.get(hi, hi),
            );
            wilkinson
        };

        qr_step(h, lo, hi, shift);
    }
}

/// One explicit shifted QR sweep on the active block: factor `H - σI = QR`
/// with Givens rotations, form `RQ + σI`.
fn qr_step(h: &mut ComplexMatrix, lo: usize, hi: usize, shift: Complex64) {
    for i in lo..=hi {
        let d = h.get(i, i) - shift;
        h.set(i, i, d);
    }
    let mut rots = Vec::with_capacity(hi - lo);
    for i in lo..hi {
        let (c, s) = givens(h.get(i, i), h.get(i + 1, i));
        rots.push((c, s));
        for j in i..=hi {
            let t1 = h.get(i, j);
            let t2 = h.get(i + 1, j);
            h.set(i, j, c * t1 + s * t2);
            h.set(i + 1, j, -s.conj() * t1 + c * t2);
        }
    }
    for (idx, &(c, s)) in rots.iter().enumerate() {
        let i = lo + idx;
        let row_end = (i + 1).min(hi);
        for r in lo..=row_end {
            let t1 = h.get(r, i);
            let t2 = h.get(r, i + 1);
            h.set(r, i, c * t1 + s.conj() * t2);
            h.set(r, i + 1, -s * t1 + c * t2);
        }
    }
    for i in lo..=hi {
        let d = h.get(i, i) + shift;
        h.set(i, i, d);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn matrix_from_rows(rows: &[&[Complex64]]) -> ComplexMatrix {
        let n = rows.len();
        let mut m = ComplexMatrix::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    // LU determinant with partial pivoting, the independent oracle.
    fn lu_determinant(m: &ComplexMatrix) -> Complex64 {
        let n = m.dim();
        let mut a = m.clone();
        let mut det = Complex64::new(1.0, 0.0);
        for k in 0..n {
            let pivot = (k..n)
                .max_by(|&i, &j| a.get(i, k).norm().total_cmp(&a.get(j, k).norm()))
                .unwrap();
            if a.get(pivot, k).norm() == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            if pivot != k {
                for j in 0..n {
                    let tmp = a.get(k, j);
                    a.set(k, j, a.get(pivot, j));
                    a.set(pivot, j, tmp);
                }
                det = -det;
            }
            det *= a.get(k, k);
            for i in k + 1..n {
                let factor = a.get(i, k) / a.get(k, k);
                for j in k..n {
                    let val = a.get(i, j) - factor * a.get(k, j);
                    a.set(i, j, val);
                }
            }
        }
        det
    }

    fn sorted_by_re_im(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn diagonal_matrix() {
        let m = matrix_from_rows(&[
            &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
            &[c(0.0, 0.0), c(0.0, 2.0), c(0.0, 0.0)],
            &[c(0.0, 0.0), c(0.0, 0.0), c(-3.0, 0.0)],
        ]);
        let eigs = sorted_by_re_im(eigenvalues(&m).unwrap());
        let expect = sorted_by_re_im(vec![c(1.0, 0.0), c(0.0, 2.0), c(-3.0, 0.0)]);
        for (e, x) in eigs.iter().zip(&expect) {
            assert!((e - x).norm() < 1e-10, "{e} vs {x}");
        }
    }

    #[test]
    fn swap_matrix() {
        let m = matrix_from_rows(&[&[c(0.0, 0.0), c(1.0, 0.0)], &[c(1.0, 0.0), c(0.0, 0.0)]]);
        let eigs = sorted_by_re_im(eigenvalues(&m).unwrap());
        assert!((eigs[0] - c(-1.0, 0.0)).norm() < 1e-14);
        assert!((eigs[1] - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn one_by_one() {
        let m = matrix_from_rows(&[&[c(2.5, -1.5)]]);
        assert_eq!(eigenvalues(&m).unwrap(), vec![c(2.5, -1.5)]);
    }

    #[test]
    fn upper_triangular_eigenvalues_are_the_diagonal() {
        let m = matrix_from_rows(&[
            &[c(1.0, 1.0), c(5.0, 0.0), c(-2.0, 3.0)],
            &[c(0.0, 0.0), c(2.0, -1.0), c(7.0, 0.0)],
            &[c(0.0, 0.0), c(0.0, 0.0), c(3.0, 0.5)],
        ]);
        let eigs = sorted_by_re_im(eigenvalues(&m).unwrap());
        let expect = sorted_by_re_im(vec![c(1.0, 1.0), c(2.0, -1.0), c(3.0, 0.5)]);
        for (e, x) in eigs.iter().zip(&expect) {
            assert!((e - x).norm() < 1e-10);
        }
    }

    #[test]
    fn defective_jordan_block() {
        // [[0,1],[0,0]] has the double eigenvalue 0
        let m = matrix_from_rows(&[&[c(0.0, 0.0), c(1.0, 0.0)], &[c(0.0, 0.0), c(0.0, 0.0)]]);
        let eigs = eigenvalues(&m).unwrap();
        for e in eigs {
            assert!(e.norm() < 1e-10);
        }
    }

    #[test]
    fn random_matrices_satisfy_trace_and_determinant_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        for trial in 0..20 {
            let n = 20;
            let mut m = ComplexMatrix::zeros(n);
            for i in 0..n {
                for j in 0..n {
                    m.set(i, j, c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
                }
            }
            let eigs = eigenvalues(&m).unwrap();
            assert_eq!(eigs.len(), n);

            let trace: Complex64 = (0..n).map(|i| m.get(i, i)).sum();
            let eig_sum: Complex64 = eigs.iter().sum();
            assert!(
                (trace - eig_sum).norm() <= 1e-8 * trace.norm().max(1.0),
                "trial {trial}: trace {trace} vs {eig_sum}"
            );

            let det = lu_determinant(&m);
            let eig_prod: Complex64 = eigs.iter().product();
            assert!(
                (det - eig_prod).norm() <= 1e-8 * det.norm().max(1.0),
                "trial {trial}: det {det} vs {eig_prod}"
            );
        }
    }

    #[test]
    fn hessenberg_preserves_similarity_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 12;
        let mut m = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
            }
        }
        let mut h = m.clone();
        hessenberg_in_place(&mut h);
        // Hessenberg shape
        for i in 0..n {
            for j in 0..n {
                if i > j + 1 {
                    assert_eq!(h.get(i, j), c(0.0, 0.0));
                }
            }
        }
        // trace preserved by unitary similarity
        let tm: Complex64 = (0..n).map(|i| m.get(i, i)).sum();
        let th: Complex64 = (0..n).map(|i| h.get(i, i)).sum();
        assert!((tm - th).norm() < 1e-12 * tm.norm().max(1.0));
        // determinant preserved
        let dm = lu_determinant(&m);
        let dh = lu_determinant(&h);
        assert!((dm - dh).norm() < 1e-10 * dm.norm().max(1.0));
    }

    #[test]
    fn givens_zeroes_second_component() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let a = c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
            let b = c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
            let (cc, s) = givens(a, b);
            let r_low = -s.conj() * a + cc * b;
            assert!(r_low.norm() < 1e-14, "low entry {r_low}");
            assert!((cc * cc + s.norm_sqr() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_nonfinite_entries() {
        let m = matrix_from_rows(&[&[c(f64::NAN, 0.0)]]);
        assert!(eigenvalues(&m).is_err());
    }
}
