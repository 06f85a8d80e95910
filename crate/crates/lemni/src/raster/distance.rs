//! Exact Euclidean distance transform and the inradius estimate built on it.
//!
//! The transform is the separable two-pass parabolic-envelope algorithm on
//! squared distances, computed in cell units where the arithmetic is exact,
//! then scaled by `h` and clipped to the distance to the box boundary. The
//! box edge acts as unoccupied space, so an inscribed disk never extends
//! past the window.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::Raster;

// Plays the role of infinity in the envelope scan; any squared cell distance
// in a valid grid is below 2e8, so this never shadows a real parabola.
const BIG: f64 = 1e20;

/// Lower envelope scan of Felzenszwalb–Huttenlocher along one line.
/// `f` holds per-site costs, `d` receives `min_q ((p-q)^2 + f(q))`.
fn dt_line(f: &[f64], d: &mut [f64], v: &mut [usize], z: &mut [f64]) {
    let n = f.len();
    debug_assert!(d.len() == n && v.len() >= n && z.len() >= n + 1);
    let intersect = |q: usize, p: usize| -> f64 {
        let (qf, pf) = (q as f64, p as f64);
        ((f[q] + qf * qf) - (f[p] + pf * pf)) / (2.0 * qf - 2.0 * pf)
    };
    let mut k = 0usize;
    v[0] = 0;
    z[0] = f64::NEG_INFINITY;
    z[1] = f64::INFINITY;
    for q in 1..n {
        let mut s = intersect(q, v[k]);
        while s <= z[k] {
            k -= 1;
            s = intersect(q, v[k]);
        }
        k += 1;
        v[k] = q;
        z[k] = s;
        z[k + 1] = f64::INFINITY;
    }
    k = 0;
    for q in 0..n {
        while z[k + 1] < q as f64 {
            k += 1;
        }
        let dq = q as f64 - v[k] as f64;
        d[q] = dq * dq + f[v[k]];
    }
}

/// Exact Euclidean distance transform, in box units.
///
/// Occupied cells map to the distance from their center to the nearest
/// unoccupied cell center or to the box boundary, whichever is closer;
/// unoccupied cells map to 0. Returned row-major like the raster.
pub fn distance_transform(raster: &Raster) -> Vec<f64> {
    let (nx, ny) = (raster.nx(), raster.ny());
    let h = raster.h();
    let bounds = raster.bounds();

    // pass 1 along columns, in a column-major buffer so lines are contiguous
    let mut colwise = vec![0.0f64; nx * ny];
    colwise
        .par_chunks_mut(ny)
        .enumerate()
        .for_each(|(ix, col)| {
            let mut f = vec![0.0f64; ny];
            for iy in 0..ny {
                f[iy] = if raster.occupied(ix, iy) { BIG } else { 0.0 };
            }
            let mut v = vec![0usize; ny];
            let mut z = vec![0.0f64; ny + 1];
            dt_line(&f, col, &mut v, &mut z);
        });

    // pass 2 along rows, back in row-major order
    let mut dist2 = vec![0.0f64; nx * ny];
    dist2
        .par_chunks_mut(nx)
        .enumerate()
        .for_each(|(iy, row)| {
            let f: Vec<f64> = (0..nx).map(|ix| colwise[ix * ny + iy]).collect();
            let mut v = vec![0usize; nx];
            let mut z = vec![0.0f64; nx + 1];
            dt_line(&f, row, &mut v, &mut z);
        });

    dist2
        .par_iter()
        .enumerate()
        .map(|(idx, &d2)| {
            let (ix, iy) = (idx % nx, idx / nx);
            if !raster.occupied(ix, iy) {
                return 0.0;
            }
            let c = raster.cell_center(ix, iy);
            let edge = bounds.edge_distance(c.re, c.im);
            (h * d2.sqrt()).min(edge)
        })
        .collect()
}

/// Inradius estimate of a rasterized region.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct InradiusEstimate {
    /// Max of the distance transform: the radius of the largest disk of
    /// grid-resolved interior around a cell center.
    pub rho_hat: f64,
    /// Center of that disk (the argmax cell center; ties broken by
    /// lexicographic (x, y) order).
    pub center: Complex64,
    /// `h * sqrt(2)`: the grid can misplace the true inradius of the
    /// rasterized region by at most one cell diagonal.
    pub half_cell_error: f64,
    /// Number of occupied cells.
    pub grid_points_inside: usize,
}

/// Largest-inscribed-disk estimate: argmax of the distance transform.
pub fn inradius_estimate(raster: &Raster) -> InradiusEstimate {
    let occupied = raster.occupied_count();
    let half_cell_error = raster.h() * std::f64::consts::SQRT_2;
    if occupied == 0 {
        let b = raster.bounds();
        return InradiusEstimate {
            rho_hat: 0.0,
            center: Complex64::new(0.5 * (b.xmin + b.xmax), 0.5 * (b.ymin + b.ymax)),
            half_cell_error,
            grid_points_inside: 0,
        };
    }
    let dist = distance_transform(raster);
    let (nx, ny) = (raster.nx(), raster.ny());
    let mut best = f64::NEG_INFINITY;
    let mut best_cell = (0usize, 0usize);
    // x-major scan gives lexicographic (x, y) tie-breaking
    for ix in 0..nx {
        for iy in 0..ny {
            let d = dist[iy * nx + ix];
            if d > best {
                best = d;
                best_cell = (ix, iy);
            }
        }
    }
    InradiusEstimate {
        rho_hat: best.max(0.0),
        center: raster.cell_center(best_cell.0, best_cell.1),
        half_cell_error,
        grid_points_inside: occupied,
    }
}
