//! Connected component labeling (8-connectivity) with per-component size,
//! diameter bound, and zero membership.

use serde::{Deserialize, Serialize};

use super::Raster;
use crate::polynomial::ZeroSet;

/// One 8-connected component of occupied cells.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComponentSummary {
    /// Label in scan order (row-major discovery), starting at 0.
    pub label: usize,
    pub cell_count: usize,
    /// Upper bound on the diameter of the union of cells: max pairwise
    /// distance between cell centers plus one cell diagonal.
    pub diameter: f64,
    /// Indices into the zero set of the zeros whose cell lies in this
    /// component. Zeros outside the box (or on cells the grid did not
    /// resolve as occupied) appear in no component.
    pub contains_zero_indices: Vec<usize>,
}

/// Labels the occupied cells of the raster under 8-connectivity.
///
/// Thin necks at cell scale are connectivity-dependent; 8-connectivity is
/// the permissive choice, merging diagonal touches.
pub fn connected_components(raster: &Raster, zeros: &ZeroSet) -> Vec<ComponentSummary> {
    let (nx, ny) = (raster.nx(), raster.ny());
    const UNLABELED: u32 = u32::MAX;
    let mut labels = vec![UNLABELED; nx * ny];
    let mut summaries: Vec<ComponentSummary> = Vec::new();
    let mut stack: Vec<(usize, usize)> = Vec::new();

    for iy in 0..ny {
        for ix in 0..nx {
            if !raster.occupied(ix, iy) || labels[iy * nx + ix] != UNLABELED {
                continue;
            }
            let label = summaries.len();
            // flood fill; record per-row x extremes for the diameter bound
            let mut cell_count = 0usize;
            let mut row_extremes: Vec<(usize, usize, usize)> = Vec::new(); // (iy, min_ix, max_ix)
            stack.push((ix, iy));
            labels[iy * nx + ix] = label as u32;
            while let Some((cx, cy)) = stack.pop() {
                cell_count += 1;
                match row_extremes.iter_mut().find(|e| e.0 == cy) {
                    Some(e) => {
                        e.1 = e.1.min(cx);
                        e.2 = e.2.max(cx);
                    }
                    None => row_extremes.push((cy, cx, cx)),
                }
                for dy in -1i64..=1 {
                    for dx in -1i64..=1 {
                        if dx == 0 && dy == 0 {
                            continue;
                        }
                        let (qx, qy) = (cx as i64 + dx, cy as i64 + dy);
                        if qx < 0 || qy < 0 || qx >= nx as i64 || qy >= ny as i64 {
                            continue;
                        }
                        let (qx, qy) = (qx as usize, qy as usize);
                        if raster.occupied(qx, qy) && labels[qy * nx + qx] == UNLABELED {
                            labels[qy * nx + qx] = label as u32;
                            stack.push((qx, qy));
                        }
                    }
                }
            }
            summaries.push(ComponentSummary {
                label,
                cell_count,
                diameter: diameter_bound(raster, &row_extremes),
                contains_zero_indices: Vec::new(),
            });
        }
    }

    for (k, z) in zeros.zeros().iter().enumerate() {
        if let Some((ix, iy)) = raster.locate(*z) {
            let lab = labels[iy * nx + ix];
            if lab != UNLABELED {
                summaries[lab as usize].contains_zero_indices.push(k);
            }
        }
    }
    summaries
}

// The farthest pair of cell centers has both ends at per-row x extremes
// (distance is convex in x along a row), so a quadratic scan over the
// extremes is exact.
fn diameter_bound(raster: &Raster, row_extremes: &[(usize, usize, usize)]) -> f64 {
    let mut pts: Vec<(f64, f64)> = Vec::with_capacity(2 * row_extremes.len());
    for &(iy, min_ix, max_ix) in row_extremes {
        let a = raster.cell_center(min_ix, iy);
        pts.push((a.re, a.im));
        if max_ix != min_ix {
            let b = raster.cell_center(max_ix, iy);
            pts.push((b.re, b.im));
        }
    }
    let mut best = 0.0f64;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let d2 = (pts[i].0 - pts[j].0).powi(2) + (pts[i].1 - pts[j].1).powi(2);
            best = best.max(d2);
        }
    }
    best.sqrt() + raster.h() * std::f64::consts::SQRT_2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::raster::{rasterize, Bounds, Raster};
    use num_complex::Complex64;

    #[test]
    fn two_isolated_cells_are_two_small_components() {
        let mut r = Raster::empty(Bounds::square(1.0).unwrap(), 0.25).unwrap();
        r.set_occupied(1, 1, true);
        r.set_occupied(6, 6, true);
        let zs = ZeroSet::new(vec![Complex64::new(0.0, 0.0)]).unwrap();
        let comps = connected_components(&r, &zs);
        assert_eq!(comps.len(), 2);
        for c in &comps {
            assert_eq!(c.cell_count, 1);
            assert!(c.diameter <= 0.25 * (1.0 + std::f64::consts::SQRT_2) + 1e-12);
        }
    }

    #[test]
    fn diagonal_touch_merges_under_8_connectivity() {
        let mut r = Raster::empty(Bounds::square(1.0).unwrap(), 0.25).unwrap();
        r.set_occupied(2, 2, true);
        r.set_occupied(3, 3, true);
        let zs = ZeroSet::new(vec![Complex64::new(0.0, 0.0)]).unwrap();
        let comps = connected_components(&r, &zs);
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].cell_count, 2);
    }

    #[test]
    fn unit_disk_is_one_component_of_diameter_two() {
        let zs = ZeroSet::repeated(Complex64::new(0.0, 0.0), 4).unwrap();
        let r = rasterize(&zs, Bounds::square(1.5).unwrap(), 0.01).unwrap();
        let comps = connected_components(&r, &zs);
        assert_eq!(comps.len(), 1);
        let slack = 2.0 * 0.01 * std::f64::consts::SQRT_2;
        assert!((comps[0].diameter - 2.0).abs() <= slack, "diameter {}", comps[0].diameter);
        assert_eq!(comps[0].contains_zero_indices, vec![0, 1, 2, 3]);
    }

    #[test]
    fn quintic_component_count_matches_finer_grid_oracle() {
        let zs = ZeroSet::roots_of_unity(5).unwrap();
        let coarse = rasterize(&zs, Bounds::square(2.0).unwrap(), 0.005).unwrap();
        let fine = rasterize(&zs, Bounds::square(2.0).unwrap(), 0.00125).unwrap();
        let n_coarse = connected_components(&coarse, &zs).len();
        let n_fine = connected_components(&fine, &zs).len();
        assert_eq!(n_coarse, n_fine, "coarse {n_coarse} vs fine oracle {n_fine}");
    }

    #[test]
    fn component_count_stable_under_refinement_for_root_lemniscates() {
        // The petals of {|z^n - 1| < 1} pinch at the origin, where the field
        // is ~|z|^n and drops below f64 resolution inside |z| ~ 1e-15^(1/n);
        // h must keep the near-origin cells outside that noise disk (0.013
        // for n = 8), which these resolutions do.
        for n in [3usize, 5, 8] {
            let zs = ZeroSet::roots_of_unity(n).unwrap();
            let a = rasterize(&zs, Bounds::square(2.0).unwrap(), 0.025).unwrap();
            let b = rasterize(&zs, Bounds::square(2.0).unwrap(), 0.0125).unwrap();
            assert_eq!(
                connected_components(&a, &zs).len(),
                connected_components(&b, &zs).len(),
                "count changed under refinement for n = {n}"
            );
        }
    }

    #[test]
    fn labels_partition_the_occupied_cells() {
        let zs = ZeroSet::roots_of_unity(8).unwrap();
        let r = rasterize(&zs, Bounds::square(2.0).unwrap(), 0.02).unwrap();
        let comps = connected_components(&r, &zs);
        let total: usize = comps.iter().map(|c| c.cell_count).sum();
        assert_eq!(total, r.occupied_count());
        for (i, c) in comps.iter().enumerate() {
            assert_eq!(c.label, i);
        }
    }
}
