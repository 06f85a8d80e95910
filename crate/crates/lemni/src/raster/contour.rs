//! Marching-squares extraction of the level curve `log|p| = 0` and SVG
//! rendering with zero markers and reference circles.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;

use super::Bounds;
use crate::polynomial::{log_modulus, ZeroSet};
use crate::Result;

/// Stroke style for overlay circles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StrokeStyle {
    Solid,
    Dashed,
    Dotted,
}

/// A reference circle drawn on top of the contour plot.
#[derive(Clone, Copy, Debug)]
pub struct OverlayCircle {
    pub center: Complex64,
    pub radius: f64,
    pub style: StrokeStyle,
}

/// A chained contour line; `closed` loops back to the first point.
#[derive(Clone, Debug)]
pub struct Polyline {
    pub points: Vec<(f64, f64)>,
    pub closed: bool,
}

// Edge of the node grid: (node ix, node iy, horizontal?). A horizontal edge
// runs from node (ix, iy) to (ix+1, iy); a vertical one to (ix, iy+1).
type EdgeKey = (usize, usize, bool);

/// Extracts the zero level set of `log|p|` over the box as chained
/// polylines. Field values live on grid nodes spaced `h` apart; crossings
/// are linearly interpolated. Deterministic for fixed inputs.
pub fn contour_polylines(zeros: &ZeroSet, bounds: Bounds, h: f64) -> Result<Vec<Polyline>> {
    // reuse the raster validation for the grid shape
    let raster = super::Raster::empty(bounds, h)?;
    let (ncx, ncy) = (raster.nx(), raster.ny());
    let (nnx, nny) = (ncx + 1, ncy + 1);

    // field at nodes; -inf clamps to a deep negative so interpolation pulls
    // the crossing onto the far node
    let node_x = |i: usize| bounds.xmin + i as f64 * h;
    let node_y = |j: usize| bounds.ymin + j as f64 * h;
    let mut field = vec![0.0f64; nnx * nny];
    field
        .par_chunks_mut(nnx)
        .enumerate()
        .for_each(|(j, row)| {
            let y = node_y(j);
            for (i, v) in row.iter_mut().enumerate() {
                *v = log_modulus(zeros, Complex64::new(node_x(i), y)).finite_or(-1e12);
            }
        });
    let value = |i: usize, j: usize| field[j * nnx + i];
    let inside = |i: usize, j: usize| value(i, j) < 0.0;

    // crossing point on an edge, cached so shared edges match bit for bit
    let mut crossings: HashMap<EdgeKey, (f64, f64)> = HashMap::new();
    let mut crossing = |key: EdgeKey| -> (f64, f64) {
        *crossings.entry(key).or_insert_with(|| {
            let (i, j, horizontal) = key;
            let (v0, v1) = if horizontal {
                (value(i, j), value(i + 1, j))
            } else {
                (value(i, j), value(i, j + 1))
            };
            let t = (v0 / (v0 - v1)).clamp(0.0, 1.0);
            if horizontal {
                (node_x(i) + t * h, node_y(j))
            } else {
                (node_x(i), node_y(j) + t * h)
            }
        })
    };

    // segment soup in deterministic cell order
    let mut segments: Vec<(EdgeKey, EdgeKey)> = Vec::new();
    for cy in 0..ncy {
        for cx in 0..ncx {
            let code = (inside(cx, cy) as u8)
                | (inside(cx + 1, cy) as u8) << 1
                | (inside(cx + 1, cy + 1) as u8) << 2
                | (inside(cx, cy + 1) as u8) << 3;
            let bottom: EdgeKey = (cx, cy, true);
            let top: EdgeKey = (cx, cy + 1, true);
            let left: EdgeKey = (cx, cy, false);
            let right: EdgeKey = (cx + 1, cy, false);
            let mut push = |a: EdgeKey, b: EdgeKey| segments.push((a, b));
            match code {
                0 | 15 => {}
                1 => push(left, bottom),
                2 => push(bottom, right),
                3 => push(left, right),
                4 => push(top, right),
                6 => push(bottom, top),
                7 => push(left, top),
                8 => push(top, left),
                9 => push(bottom, top),
                11 => push(top, right),
                12 => push(left, right),
                13 => push(bottom, right),
                14 => push(left, bottom),
                5 | 10 => {
                    // saddle: split by the sign of the center average
                    let center = 0.25
                        * (value(cx, cy)
                            + value(cx + 1, cy)
                            + value(cx + 1, cy + 1)
                            + value(cx, cy + 1));
                    let center_inside = center < 0.0;
                    if (code == 5) == center_inside {
                        push(left, top);
                        push(bottom, right);
                    } else {
                        push(left, bottom);
                        push(top, right);
                    }
                }
                _ => unreachable!(),
            }
        }
    }

    // chain segments into polylines via shared edge keys
    let mut by_edge: HashMap<EdgeKey, Vec<usize>> = HashMap::new();
    for (idx, (a, b)) in segments.iter().enumerate() {
        by_edge.entry(*a).or_default().push(idx);
        by_edge.entry(*b).or_default().push(idx);
    }
    let mut used = vec![false; segments.len()];
    let mut polylines = Vec::new();
    for start in 0..segments.len() {
        if used[start] {
            continue;
        }
        used[start] = true;
        let (a0, b0) = segments[start];
        let mut keys = vec![a0, b0];
        // extend forward from the tail, then backward from the head
        loop {
            let tail = *keys.last().expect("nonempty");
            let next = by_edge[&tail].iter().copied().find(|&s| !used[s]);
            match next {
                Some(s) => {
                    used[s] = true;
                    let (a, b) = segments[s];
                    keys.push(if a == tail { b } else { a });
                }
                None => break,
            }
        }
        let closed = keys.len() > 2 && keys.first() == keys.last();
        if !closed {
            loop {
                let head = *keys.first().expect("nonempty");
                let next = by_edge[&head].iter().copied().find(|&s| !used[s]);
                match next {
                    Some(s) => {
                        used[s] = true;
                        let (a, b) = segments[s];
                        keys.insert(0, if a == head { b } else { a });
                    }
                    None => break,
                }
            }
        }
        let mut points: Vec<(f64, f64)> = keys.iter().map(|&k| crossing(k)).collect();
        if closed {
            points.pop(); // drop the duplicated closing point
        }
        polylines.push(Polyline { points, closed });
    }
    Ok(polylines)
}

/// Renders the lemniscate boundary as an SVG document: contour paths, zero
/// markers, and overlay circles (dashed/dotted reference circles).
/// Output is deterministic for fixed inputs.
pub fn contour_svg(
    zeros: &ZeroSet,
    bounds: Bounds,
    h: f64,
    overlays: &[OverlayCircle],
) -> Result<String> {
    let polylines = contour_polylines(zeros, bounds, h)?;

    let pad = 20.0;
    let target = 760.0;
    let scale = target / bounds.width().max(bounds.height());
    let svg_w = bounds.width() * scale + 2.0 * pad;
    let svg_h = bounds.height() * scale + 2.0 * pad;
    let tx = |x: f64| (x - bounds.xmin) * scale + pad;
    let ty = |y: f64| (bounds.ymax - y) * scale + pad;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{svg_w:.0}\" height=\"{svg_h:.0}\" \
         viewBox=\"0 0 {svg_w:.0} {svg_h:.0}\">"
    );
    let _ = writeln!(
        svg,
        "  <rect width=\"{svg_w:.0}\" height=\"{svg_h:.0}\" fill=\"white\"/>"
    );

    for overlay in overlays {
        let dash = match overlay.style {
            StrokeStyle::Solid => String::new(),
            StrokeStyle::Dashed => " stroke-dasharray=\"8 5\"".into(),
            StrokeStyle::Dotted => " stroke-dasharray=\"2 4\"".into(),
        };
        let _ = writeln!(
            svg,
            "  <circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"{:.3}\" fill=\"none\" stroke=\"#666666\" \
             stroke-width=\"1.2\"{dash}/>",
            tx(overlay.center.re),
            ty(overlay.center.im),
            overlay.radius * scale
        );
    }

    for line in &polylines {
        if line.points.is_empty() {
            continue;
        }
        let mut d = String::new();
        for (k, (x, y)) in line.points.iter().enumerate() {
            let cmd = if k == 0 { 'M' } else { 'L' };
            let _ = write!(d, "{cmd}{:.3} {:.3} ", tx(*x), ty(*y));
        }
        if line.closed {
            d.push('Z');
        }
        let _ = writeln!(
            svg,
            "  <path d=\"{}\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\"/>",
            d.trim_end()
        );
    }

    for z in zeros.zeros() {
        let _ = writeln!(
            svg,
            "  <circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"2.5\" fill=\"#333333\"/>",
            tx(z.re),
            ty(z.im)
        );
    }

    svg.push_str("</svg>\n");
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::raster::{connected_components, rasterize};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_zero_gives_one_closed_loop_near_the_unit_circle() {
        let zs = ZeroSet::new(vec![Complex64::new(0.0, 0.0)]).unwrap();
        let lines = contour_polylines(&zs, Bounds::square(2.0).unwrap(), 0.025).unwrap();
        assert_eq!(lines.len(), 1);
        assert!(lines[0].closed);
        for (x, y) in &lines[0].points {
            let r = x.hypot(*y);
            assert!((r - 1.0).abs() < 0.025, "contour point at radius {r}");
        }
    }

    #[test]
    fn svg_for_single_zero_has_exactly_one_path() {
        let zs = ZeroSet::new(vec![Complex64::new(0.0, 0.0)]).unwrap();
        let svg = contour_svg(&zs, Bounds::square(2.0).unwrap(), 0.025, &[]).unwrap();
        assert_eq!(svg.matches("<path").count(), 1);
        assert_eq!(svg.matches("<circle").count(), 1); // the zero marker
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn svg_output_is_deterministic() {
        let zs = ZeroSet::roots_of_unity(5).unwrap();
        let overlays = [OverlayCircle {
            center: Complex64::new(0.0, 0.0),
            radius: 1.0,
            style: StrokeStyle::Dotted,
        }];
        let b = Bounds::square(2.0).unwrap();
        let a = contour_svg(&zs, b, 0.05, &overlays).unwrap();
        let b2 = contour_svg(&zs, b, 0.05, &overlays).unwrap();
        assert_eq!(a, b2);
        assert!(a.contains("stroke-dasharray=\"2 4\""));
    }

    #[test]
    fn fragmented_lemniscate_yields_many_loops() {
        // wide-disk zeros at small n: specks around the zeros. Loop and
        // component counts need not agree exactly (single-cell components
        // can lack a surrounding node contour), but both show fragmentation.
        let m = crate::measures::MeasureSpec::UniformDisk { radius: 1.7 };
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let zs = crate::measures::sample(&m, 15, &mut rng).unwrap();
        let bounds = Bounds::square(2.7).unwrap();
        let lines = contour_polylines(&zs, bounds, 0.0045).unwrap();
        let raster = rasterize(&zs, bounds, 0.0045).unwrap();
        let comps = connected_components(&raster, &zs);
        assert!(comps.len() >= 4, "expected fragmentation, got {}", comps.len());
        let closed = lines.iter().filter(|l| l.closed).count();
        assert!(closed >= 4, "{closed} loops for {} components", comps.len());
    }

    #[test]
    fn loop_count_matches_components_for_disjoint_ovals() {
        // p = (z - 1.2)(z + 1.2): two disjoint ovals, no pinch points, so
        // loop and component counts agree exactly
        let zs = ZeroSet::new(vec![Complex64::new(1.2, 0.0), Complex64::new(-1.2, 0.0)]).unwrap();
        let bounds = Bounds::square(2.4).unwrap();
        let lines = contour_polylines(&zs, bounds, 0.012).unwrap();
        let raster = rasterize(&zs, bounds, 0.012).unwrap();
        let comps = connected_components(&raster, &zs);
        assert!(lines.iter().all(|l| l.closed));
        assert_eq!(lines.len(), 2);
        assert_eq!(comps.len(), 2);
    }

    #[test]
    fn quintic_rose_contours_are_closed_and_interior() {
        let zs = ZeroSet::roots_of_unity(5).unwrap();
        let bounds = Bounds::square(2.0).unwrap();
        let lines = contour_polylines(&zs, bounds, 0.0125).unwrap();
        assert!(lines.iter().all(|l| l.closed));
        assert!(!lines.is_empty() && lines.len() <= 10, "{} loops", lines.len());
        for line in &lines {
            for (x, y) in &line.points {
                assert!(x.hypot(*y) < 1.5, "contour escaped the lemniscate region");
            }
        }
    }
}
