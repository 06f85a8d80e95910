//! Occupancy grids for lemniscates and the geometry measured on them:
//! exact Euclidean distance transforms, inradius estimates, connected
//! components, and contour extraction.

mod components;
mod contour;
mod distance;

pub use components::{connected_components, ComponentSummary};
pub use contour::{contour_svg, OverlayCircle, StrokeStyle};
pub use distance::{distance_transform, inradius_estimate, InradiusEstimate};

use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::polynomial::{LogProduct, ZeroSet};
use crate::{Error, Result};

/// Guard against runaway grids.
pub const MAX_CELLS: u64 = 100_000_000;

/// Axis-aligned bounding box.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
}

impl Bounds {
    pub fn new(xmin: f64, xmax: f64, ymin: f64, ymax: f64) -> Result<Self> {
        let b = Bounds { xmin, xmax, ymin, ymax };
        if ![xmin, xmax, ymin, ymax].iter().all(|v| v.is_finite()) || xmin >= xmax || ymin >= ymax {
            return Err(Error::Domain(format!("degenerate bounds {b:?}")));
        }
        Ok(b)
    }

    /// Square box `[-half, half]^2`.
    pub fn square(half: f64) -> Result<Self> {
        Bounds::new(-half, half, -half, half)
    }

    /// Default window for a measure: support radius plus one on every side.
    /// Any point farther than 1 from all zeros has `|p(z)| >= 1`, so the
    /// lemniscate of zeros drawn inside the support is enclosed.
    pub fn for_measure(measure: &crate::measures::MeasureSpec) -> Result<Self> {
        Bounds::square(measure.support_radius() + 1.0)
    }

    pub fn width(&self) -> f64 {
        self.xmax - self.xmin
    }

    pub fn height(&self) -> f64 {
        self.ymax - self.ymin
    }

    /// Distance from an interior point to the box edge (negative outside).
    pub fn edge_distance(&self, x: f64, y: f64) -> f64 {
        (x - self.xmin)
            .min(self.xmax - x)
            .min(y - self.ymin)
            .min(self.ymax - y)
    }
}

/// Boolean occupancy grid over a bounding box with square cells of side `h`.
/// Row-major, `iy * nx + ix`; cell `(ix, iy)` is centered at
/// `(xmin + (ix + 0.5) h, ymin + (iy + 0.5) h)`.
#[derive(Clone, Debug)]
pub struct Raster {
    bounds: Bounds,
    h: f64,
    nx: usize,
    ny: usize,
    occupancy: Vec<bool>,
}

impl Raster {
    /// Builds an empty raster. The box sides must be integer multiples of
    /// `h` (to 1e-6 relative) with at least 8 cells each way.
    pub fn empty(bounds: Bounds, h: f64) -> Result<Self> {
        if !h.is_finite() || h <= 0.0 {
            return Err(Error::Domain(format!("cell size must be positive, got {h}")));
        }
        let nx = Self::side_cells(bounds.width(), h)?;
        let ny = Self::side_cells(bounds.height(), h)?;
        let cells = nx as u64 * ny as u64;
        if cells > MAX_CELLS {
            return Err(Error::GridTooLarge {
                cells: cells as u128,
                limit: MAX_CELLS,
            });
        }
        Ok(Raster {
            bounds,
            h,
            nx,
            ny,
            occupancy: vec![false; nx * ny],
        })
    }

    fn side_cells(extent: f64, h: f64) -> Result<usize> {
        let ratio = extent / h;
        let cells = ratio.round();
        if (ratio - cells).abs() > 1e-6 * cells.max(1.0) {
            return Err(Error::Domain(format!(
                "box side {extent} is not an integer multiple of h = {h}"
            )));
        }
        let cells = cells as usize;
        if cells < 8 {
            return Err(Error::Domain(format!(
                "box side {extent} at h = {h} gives {cells} cells; need at least 8"
            )));
        }
        Ok(cells)
    }

    /// Builds a raster from an arbitrary per-cell predicate on cell centers,
    /// parallel over rows.
    pub fn from_predicate<F>(bounds: Bounds, h: f64, predicate: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> bool + Sync,
    {
        let mut raster = Self::empty(bounds, h)?;
        let nx = raster.nx;
        let (b, hh) = (raster.bounds, raster.h);
        raster
            .occupancy
            .par_chunks_mut(nx)
            .enumerate()
            .for_each(|(iy, row)| {
                let y = b.ymin + (iy as f64 + 0.5) * hh;
                for (ix, cell) in row.iter_mut().enumerate() {
                    let x = b.xmin + (ix as f64 + 0.5) * hh;
                    *cell = predicate(x, y);
                }
            });
        Ok(raster)
    }

    pub fn bounds(&self) -> Bounds {
        self.bounds
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn cells(&self) -> usize {
        self.nx * self.ny
    }

    #[inline]
    pub fn occupied(&self, ix: usize, iy: usize) -> bool {
        self.occupancy[iy * self.nx + ix]
    }

    pub fn set_occupied(&mut self, ix: usize, iy: usize, value: bool) {
        self.occupancy[iy * self.nx + ix] = value;
    }

    pub fn occupancy(&self) -> &[bool] {
        &self.occupancy
    }

    pub fn occupied_count(&self) -> usize {
        self.occupancy.iter().filter(|&&b| b).count()
    }

    #[inline]
    pub fn cell_center(&self, ix: usize, iy: usize) -> Complex64 {
        Complex64::new(
            self.bounds.xmin + (ix as f64 + 0.5) * self.h,
            self.bounds.ymin + (iy as f64 + 0.5) * self.h,
        )
    }

    /// Grid cell containing a point, if inside the box.
    pub fn locate(&self, p: Complex64) -> Option<(usize, usize)> {
        let fx = (p.re - self.bounds.xmin) / self.h;
        let fy = (p.im - self.bounds.ymin) / self.h;
        if fx < 0.0 || fy < 0.0 {
            return None;
        }
        let (ix, iy) = (fx as usize, fy as usize);
        if ix >= self.nx || iy >= self.ny {
            return None;
        }
        Some((ix, iy))
    }

    /// Raster dump as binary PGM (P5, maxval 255, occupied = 255). Rows are
    /// written top-down, so the image has y increasing upward.
    pub fn write_pgm<W: Write>(&self, mut w: W) -> Result<()> {
        write!(w, "P5\n{} {}\n255\n", self.nx, self.ny)?;
        let mut row = vec![0u8; self.nx];
        for iy in (0..self.ny).rev() {
            for ix in 0..self.nx {
                row[ix] = if self.occupied(ix, iy) { 255 } else { 0 };
            }
            w.write_all(&row)?;
        }
        Ok(())
    }

    pub fn save_pgm<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        if let Some(parent) = path.as_ref().parent() {
            if !parent.as_os_str().is_empty() {
                std::fs::create_dir_all(parent)?;
            }
        }
        self.write_pgm(std::io::BufWriter::new(std::fs::File::create(path)?))
    }
}

/// Writes a scalar grid (e.g. a distance field) as CSV, one row per `iy` in
/// increasing y order.
pub fn write_grid_csv<W: Write>(mut w: W, values: &[f64], nx: usize) -> Result<()> {
    for row in values.chunks(nx) {
        let mut first = true;
        for v in row {
            if !first {
                write!(w, ",")?;
            }
            write!(w, "{v}")?;
            first = false;
        }
        writeln!(w)?;
    }
    Ok(())
}

/// Rasterizes the lemniscate `{ log|p| < 0 }`: a cell is occupied when
/// `log|p|` at its center is negative. Cells whose center hits a zero
/// exactly count as occupied.
pub fn rasterize(zeros: &ZeroSet, bounds: Bounds, h: f64) -> Result<Raster> {
    let mut raster = Raster::empty(bounds, h)?;
    let nx = raster.nx;
    let b = raster.bounds;
    let zs: Vec<(f64, f64)> = zeros.zeros().iter().map(|z| (z.re, z.im)).collect();
    raster
        .occupancy
        .par_chunks_mut(nx)
        .enumerate()
        .for_each(|(iy, row)| {
            let y = b.ymin + (iy as f64 + 0.5) * h;
            // hoist the y-offsets for the whole row
            let dy: Vec<(f64, f64)> = zs
                .iter()
                .map(|&(_, zy)| (y - zy, (y - zy) * (y - zy)))
                .collect();
            for (ix, cell) in row.iter_mut().enumerate() {
                let x = b.xmin + (ix as f64 + 0.5) * h;
                let mut acc = LogProduct::new();
                for (&(zx, _), &(dyk, dy2k)) in zs.iter().zip(&dy) {
                    let dx = x - zx;
                    acc.push_squared_offset(dx * dx + dy2k, dx, dyk);
                }
                *cell = acc.value().is_negative();
            }
        });
    Ok(raster)
}
