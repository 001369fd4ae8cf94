//! Numerical checks of the two polygon-layout lemmas: square centres are far
//! from the neighbouring fan chords, and no line meets many squares.

use std::f64::consts::{PI, SQRT_2};

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::polygon::PolygonGeometry;
use super::{ConstructionKind, ConstructionLayout};
use crate::geometry::{Line, Point};
use crate::{Error, Result};

fn polygon_geometry(layout: &ConstructionLayout) -> Result<PolygonGeometry> {
    if layout.kind != ConstructionKind::Polygon {
        return Err(Error::InvalidInput("lemma checks need a polygon layout".into()));
    }
    let geom = PolygonGeometry::new(layout.params.n)?;
    if geom.vertices.as_slice() != layout.base_points.points()
        || geom.q_points.len() != layout.squares.len()
    {
        return Err(Error::InvalidInput(
            "layout does not match the polygon construction for its n".into(),
        ));
    }
    Ok(geom)
}

fn point_line_distance(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    ((p.0 - a.0) * dy - (p.1 - a.1) * dx).abs() / dx.hypot(dy)
}

#[derive(Clone, Debug, Serialize)]
pub struct SeparationPointReport {
    pub triangle: usize,
    pub j: usize,
    pub k: usize,
    /// Smallest distance from the unrounded `p_{j,k}` to `e_{j±1}`, `f_{k±1}`.
    pub min_distance: f64,
    /// Smallest gap between the placed square and the rounded neighbour chords.
    pub post_rounding_gap: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SeparationReport {
    pub m: usize,
    pub side_length: u64,
    pub ell: u64,
    /// `tan(π/m)·(√2−1)·L`.
    pub bound: f64,
    pub bound_over_ell: f64,
    /// Limit of `bound / ℓ` as `m` grows: `(√2−1)π`.
    pub limit_constant: f64,
    pub min_distance: f64,
    pub min_post_rounding_gap: f64,
    /// `L·sin(π/8)/sin(5π/8+π/m)`: distance from `p_{m/8, m/4−1}` to `v_i`.
    pub reference_distance_to_vertex: f64,
    /// Family point closest to `v_i` within a triangle, and its distance.
    pub closest_to_vertex: (usize, usize),
    pub closest_distance_to_vertex: f64,
    pub failures: usize,
    pub pass: bool,
    pub points: Vec<SeparationPointReport>,
}

/// Distances from every square centre to its four neighbouring fan chords,
/// against `tan(π/m)(√2−1)L`, and the post-rounding gap (must exceed one unit).
pub fn check_lemma_separation(layout: &ConstructionLayout) -> Result<SeparationReport> {
    let g = polygon_geometry(layout)?;
    let l = g.side_length as f64;
    let bound = g.gamma.tan() * (SQRT_2 - 1.0) * l;

    let mut points = Vec::with_capacity(g.q_points.len());
    let mut closest = ((0, 0), f64::INFINITY);
    for q in &g.q_points {
        let chords = [
            g.e(q.triangle, q.j - 1),
            g.e(q.triangle, q.j + 1),
            g.f(q.triangle, q.k - 1),
            g.f(q.triangle, q.k + 1),
        ];
        let min_distance = chords
            .iter()
            .map(|&(a, b)| point_line_distance(q.real, g.real_vertices[a], g.real_vertices[b]))
            .fold(f64::INFINITY, f64::min);

        let square = &layout.squares[q.square];
        let mut gap_ok = true;
        let mut gap = f64::INFINITY;
        for &(a, b) in &chords {
            let line = Line::through(&g.vertices[a], &g.vertices[b]);
            match line.square_gap_squared(square) {
                Some((num, den)) => {
                    gap_ok &= num > den;
                    let d = (num.to_f64().unwrap_or(f64::INFINITY) / den.to_f64().unwrap_or(1.0)).sqrt();
                    gap = gap.min(d);
                }
                None => {
                    gap_ok = false;
                    gap = 0.0;
                }
            }
        }

        if q.triangle == 1 {
            let v = g.real_vertices[1 % g.m];
            let d = (q.real.0 - v.0).hypot(q.real.1 - v.1);
            if d < closest.1 {
                closest = ((q.j, q.k), d);
            }
        }

        points.push(SeparationPointReport {
            triangle: q.triangle,
            j: q.j,
            k: q.k,
            min_distance,
            post_rounding_gap: gap,
            pass: min_distance > bound && gap_ok,
        });
    }

    let failures = points.iter().filter(|p| !p.pass).count();
    let mf = g.m as f64;
    Ok(SeparationReport {
        m: g.m,
        side_length: g.side_length,
        ell: g.ell,
        bound,
        bound_over_ell: bound / g.ell as f64,
        limit_constant: (SQRT_2 - 1.0) * PI,
        min_distance: points.iter().map(|p| p.min_distance).fold(f64::INFINITY, f64::min),
        min_post_rounding_gap: points.iter().map(|p| p.post_rounding_gap).fold(f64::INFINITY, f64::min),
        reference_distance_to_vertex: l * (PI / 8.0).sin() / (5.0 * PI / 8.0 + PI / mf).sin(),
        closest_to_vertex: closest.0,
        closest_distance_to_vertex: closest.1,
        failures,
        pass: failures == 0,
        points,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct LineSquaresReport {
    pub m: usize,
    /// `m^{3/2}/4`.
    pub bound: f64,
    /// `⌊m^{3/2}/4⌋`, the largest admissible count.
    pub bound_floor: u64,
    pub lines_checked: usize,
    pub max_count: usize,
    pub max_line: Option<(Point, Point)>,
    pub failures: usize,
    pub pass: bool,
}

/// Largest `c` with `16c² ≤ m³`, i.e. `⌊m^{3/2}/4⌋`.
pub(crate) fn line_square_bound(m: u64) -> u64 {
    let cube = (m as u128).pow(3);
    let mut c = ((cube as f64).sqrt() / 4.0) as u128;
    while 16 * (c + 1) * (c + 1) <= cube {
        c += 1;
    }
    while 16 * c * c > cube {
        c -= 1;
    }
    c as u64
}

/// Counts, for each line, the squares it meets; every count must be at most
/// `m^{3/2}/4`.
pub fn check_lemma_line_squares(
    layout: &ConstructionLayout,
    lines: &[(Point, Point)],
) -> Result<LineSquaresReport> {
    use rayon::prelude::*;

    let m = match (layout.kind, layout.params.m) {
        (ConstructionKind::Polygon, Some(m)) => m,
        _ => return Err(Error::InvalidInput("lemma checks need a polygon layout".into())),
    };
    let bound_floor = line_square_bound(m);
    let counts: Vec<usize> = lines
        .par_iter()
        .map(|(a, b)| {
            let line = Line::through(a, b);
            layout.squares.iter().filter(|s| line.intersects_square(s)).count()
        })
        .collect();
    let (max_idx, max_count) = counts
        .iter()
        .enumerate()
        .max_by_key(|&(i, c)| (*c, std::cmp::Reverse(i)))
        .map(|(i, &c)| (Some(i), c))
        .unwrap_or((None, 0));
    let failures = counts.iter().filter(|&&c| c as u64 > bound_floor).count();
    Ok(LineSquaresReport {
        m: m as usize,
        bound: (m as f64).powf(1.5) / 4.0,
        bound_floor,
        lines_checked: lines.len(),
        max_count,
        max_line: max_idx.map(|i| lines[i].clone()),
        failures,
        pass: failures == 0,
    })
}

/// Every line through two base points.
pub fn base_pair_lines(layout: &ConstructionLayout) -> Vec<(Point, Point)> {
    let pts = layout.base_points.points();
    let mut out = Vec::with_capacity(pts.len() * pts.len().saturating_sub(1) / 2);
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            out.push((pts[i].clone(), pts[j].clone()));
        }
    }
    out
}

/// `count` lines through two lattice points drawn uniformly from the annulus
/// between the inner circle and the circumcircle (ChaCha8, seeded).
pub fn annulus_random_lines(
    layout: &ConstructionLayout,
    count: usize,
    seed: u64,
) -> Result<Vec<(Point, Point)>> {
    let g = polygon_geometry(layout)?;
    let c = g.center.x.to_i64().expect("centre fits i64");
    let (r_in, r_out) = (g.inner_radius, g.circumradius);
    let span = r_out.ceil() as i64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sample = |rng: &mut ChaCha8Rng| loop {
        let dx = rng.gen_range(-span..=span);
        let dy = rng.gen_range(-span..=span);
        let d = (dx as f64).hypot(dy as f64);
        if d > r_in && d < r_out {
            return Point::new(c + dx, c + dy);
        }
    };
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let a = sample(&mut rng);
        let b = sample(&mut rng);
        if a != b {
            out.push((a, b));
        }
    }
    Ok(out)
}

/// `count` lattice approximations of lines tangent to the inner circle, at
/// evenly spaced angles, with endpoints on the circumcircle.
pub fn tangent_lines(layout: &ConstructionLayout, count: usize) -> Result<Vec<(Point, Point)>> {
    let g = polygon_geometry(layout)?;
    let c = g.center.x.to_f64().expect("centre fits f64");
    let (r, big_r) = (g.inner_radius, g.circumradius);
    let half = (big_r * big_r - r * r).sqrt();
    Ok((0..count)
        .map(|t| {
            let theta = 2.0 * PI * t as f64 / count as f64;
            let (ux, uy) = (theta.cos(), theta.sin());
            let (tx, ty) = (c + r * ux, c + r * uy);
            let a = Point::new((tx - half * uy).round() as i64, (ty + half * ux).round() as i64);
            let b = Point::new((tx + half * uy).round() as i64, (ty - half * ux).round() as i64);
            (a, b)
        })
        .collect())
}
