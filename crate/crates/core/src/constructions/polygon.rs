use std::f64::consts::PI;

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;

use super::{grid_extent, verify_layout, ConstructionKind, ConstructionLayout, ConstructionParams, LAYOUT_FORMAT};
use crate::geometry::{segment_intersection, IsotheticSquare, LineSegment, Point, PointSet, RationalPoint};
use crate::{Error, Result};

/// Coordinates beyond this magnitude are rejected: `f64` vertex positions
/// then carry an absolute error far below 1/4 before rounding.
const MAX_COORDINATE: f64 = (1u64 << 40) as f64;

/// Smallest multiple of 16 strictly greater than `n / ln n`.
pub(crate) fn polygon_m(n: u64) -> u64 {
    let x = n as f64 / (n as f64).ln();
    16 * ((x / 16.0).floor() as u64 + 1)
}

/// `⌈64 n² / √m⌉`, computed exactly as the least `L` with `L²·m ≥ 4096 n⁴`.
pub(crate) fn polygon_side(n: u64, m: u64) -> u64 {
    let n = n as u128;
    let m = m as u128;
    let target = 4096 * n * n * n * n;
    let need = target.div_ceil(m);
    let mut l = need.sqrt();
    while l * l < need {
        l += 1;
    }
    l as u64
}

/// One square centre of the family: the crossing of the fan chords `e_j`
/// (from `v_{i−1}`) and `f_k` (from `v_i`) inside triangle `i`.
#[derive(Clone, Debug)]
pub struct QPoint {
    /// Triangle index `1..=m`; the triangle is `(v_{i−1}, v_i, q*)`.
    pub triangle: usize,
    pub j: usize,
    pub k: usize,
    /// Crossing computed from the unrounded vertices.
    pub real: (f64, f64),
    /// Exact crossing of the chords through the rounded vertices.
    pub exact: RationalPoint,
    /// Index of the square centred here in the layout's square list.
    pub square: usize,
}

/// Geometry of the regular-polygon layout before and after rounding.
///
/// Vertices run clockwise, `v_0` at the top. For triangle `i` the fan chord
/// `e_j` joins `v_{i−1}` to `v_{i+j}` and makes angle `jγ` with the edge
/// `v_{i−1}v_i`; `f_k` joins `v_i` to `v_{i−1−k}`, angle `kγ`. `γ = π/m`.
#[derive(Clone, Debug)]
pub struct PolygonGeometry {
    pub n: u64,
    pub m: usize,
    pub side_length: u64,
    pub ell: u64,
    pub center: Point,
    pub circumradius: f64,
    pub inner_radius: f64,
    pub gamma: f64,
    pub real_vertices: Vec<(f64, f64)>,
    pub vertices: Vec<Point>,
    pub q_points: Vec<QPoint>,
}

impl PolygonGeometry {
    pub fn new(n: u64) -> Result<Self> {
        if n < 3 {
            return Err(Error::TooSmall {
                n,
                reason: "need n ≥ 3".into(),
            });
        }
        let m = polygon_m(n);
        if m < 32 {
            return Err(Error::TooSmall {
                n,
                reason: format!("m = {m}, need m ≥ 32"),
            });
        }
        if m > n {
            return Err(Error::TooSmall {
                n,
                reason: format!("base polygon has m = {m} > n vertices"),
            });
        }
        let side = polygon_side(n, m);
        let mu = m as usize;
        let mf = m as f64;
        let gamma = PI / mf;
        let l = side as f64;
        let circumradius = l / (2.0 * gamma.sin());
        let inner_radius = l / 2.0 * (1.0 / gamma.tan() - 1.0);
        let c = circumradius.ceil() + 2.0;
        if 2.0 * c > MAX_COORDINATE {
            return Err(Error::PrecisionExceeded(format!(
                "polygon coordinates reach {:.3e}",
                2.0 * c
            )));
        }

        let real_vertices: Vec<(f64, f64)> = (0..mu)
            .map(|i| {
                let theta = PI / 2.0 - 2.0 * PI * i as f64 / mf;
                (c + circumradius * theta.cos(), c + circumradius * theta.sin())
            })
            .collect();
        let vertices: Vec<Point> = real_vertices
            .iter()
            .map(|&(x, y)| Point::new(x.round() as i64, y.round() as i64))
            .collect();

        let ell = side / m;
        let mut q_points = Vec::new();
        for i in 1..=mu {
            for j in (mu / 8..mu / 4).step_by(2) {
                for k in (mu / 8..mu / 4).step_by(2) {
                    let (e0, e1) = fan_e(mu, i, j);
                    let (f0, f1) = fan_f(mu, i, k);
                    let real = real_intersection(
                        real_vertices[e0],
                        real_vertices[e1],
                        real_vertices[f0],
                        real_vertices[f1],
                    );
                    let e = LineSegment::new(vertices[e0].clone(), vertices[e1].clone())?;
                    let f = LineSegment::new(vertices[f0].clone(), vertices[f1].clone())?;
                    let exact = segment_intersection(&e, &f)?.ok_or_else(|| {
                        Error::Internal(format!("chords e_{j}, f_{k} of triangle {i} do not cross"))
                    })?;
                    let square = q_points.len();
                    q_points.push(QPoint {
                        triangle: i,
                        j,
                        k,
                        real,
                        exact,
                        square,
                    });
                }
            }
        }

        Ok(PolygonGeometry {
            n,
            m: mu,
            side_length: side,
            ell,
            center: Point::new(c as i64, c as i64),
            circumradius,
            inner_radius,
            gamma,
            real_vertices,
            vertices,
            q_points,
        })
    }

    /// Endpoint indices of `e_j` in triangle `i`.
    pub fn e(&self, i: usize, j: usize) -> (usize, usize) {
        fan_e(self.m, i, j)
    }

    /// Endpoint indices of `f_k` in triangle `i`.
    pub fn f(&self, i: usize, k: usize) -> (usize, usize) {
        fan_f(self.m, i, k)
    }

    /// Square of side `ℓ` centred (to the nearest lattice anchor) on `q`.
    pub fn square_at(&self, q: &QPoint) -> IsotheticSquare {
        let half = BigRational::new(BigInt::from(self.ell), BigInt::from(2));
        let corner = RationalPoint::new(&q.exact.x - &half, &q.exact.y - &half);
        IsotheticSquare::new(corner.round(), self.ell)
    }

    /// Chosen separating lines: every chord `v_a v_{a+s}` with even span
    /// `m/8 + 2 ≤ s ≤ m/2`. Diameters (`s = m/2`) are listed once.
    pub fn chosen_chords(&self) -> Vec<(usize, usize)> {
        let m = self.m;
        let mut out = Vec::new();
        for s in (m / 8 + 2..=m / 2).step_by(2) {
            let starts = if s == m / 2 { m / 2 } else { m };
            out.extend((0..starts).map(|a| (a, (a + s) % m)));
        }
        out
    }
}

fn fan_e(m: usize, i: usize, j: usize) -> (usize, usize) {
    ((i - 1) % m, (i + j) % m)
}

fn fan_f(m: usize, i: usize, k: usize) -> (usize, usize) {
    (i % m, (i + 2 * m - 1 - k) % m)
}

fn real_intersection(a: (f64, f64), b: (f64, f64), c: (f64, f64), d: (f64, f64)) -> (f64, f64) {
    let r = (b.0 - a.0, b.1 - a.1);
    let s = (d.0 - c.0, d.1 - c.1);
    let denom = r.0 * s.1 - r.1 * s.0;
    let t = ((c.0 - a.0) * s.1 - (c.1 - a.1) * s.0) / denom;
    (a.0 + t * r.0, a.1 + t * r.1)
}

/// Regular-polygon configuration: `m` rounded vertices of a regular polygon
/// with side `L`, and `m³/256` squares of side `⌊L/m⌋` centred on the fan
/// crossings `p_{j,k}` (`j, k` even, `m/8 ≤ j, k < m/4`) of every triangle.
pub fn build_polygon(n: u64) -> Result<ConstructionLayout> {
    Ok(build_polygon_with_geometry(n)?.0)
}

pub(crate) fn build_polygon_with_geometry(n: u64) -> Result<(ConstructionLayout, PolygonGeometry)> {
    let geom = PolygonGeometry::new(n)?;
    let base_points = PointSet::new(geom.vertices.clone())?;
    let squares = geom.q_points.iter().map(|q| geom.square_at(q)).collect();
    let layout = ConstructionLayout {
        format: LAYOUT_FORMAT,
        kind: ConstructionKind::Polygon,
        params: ConstructionParams {
            n,
            p: None,
            k: None,
            m: Some(geom.m as u64),
            side_length: Some(geom.side_length),
            ell: geom.ell,
            grid_extent: grid_extent(&base_points),
        },
        base_points,
        chosen_lines: geom.chosen_chords(),
        squares,
    };
    verify_layout(&layout)?;
    Ok((layout, geom))
}
