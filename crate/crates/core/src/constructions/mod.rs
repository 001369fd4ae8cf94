//! Base configurations and their square families.
//!
//! A [`ConstructionLayout`] bundles a base point set, the "chosen" lines
//! through pairs of base points and a family of isothetic squares. Every two
//! squares lie strictly on opposite sides of at least one chosen line, so any
//! two points placed in different squares extend the base set to different
//! labeled order types.

mod cross;
mod lemmas;
mod polygon;

use std::collections::HashMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::geometry::{find_collinear_triple, is_prime, IsotheticSquare, Line, Point, PointSet};
use crate::{Error, Result};

pub use cross::build_cross;
pub(crate) use cross::cross_prime;
pub(crate) use polygon::polygon_m;
pub use lemmas::{
    annulus_random_lines, base_pair_lines, check_lemma_line_squares, check_lemma_separation,
    tangent_lines, LineSquaresReport, SeparationPointReport, SeparationReport,
};
pub use polygon::{build_polygon, PolygonGeometry, QPoint};

/// Current layout JSON format version.
pub const LAYOUT_FORMAT: u32 = 1;

/// Erdős's no-three-in-line set `{(i, i² mod p) : 0 ≤ i < p}`.
pub fn erdos_parabola(p: u64) -> Result<PointSet> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let s = PointSet::new(
        (0..p)
            .map(|i| Point::new(i, (i as u128 * i as u128 % p as u128) as u64))
            .collect(),
    )?;
    if let Some(w) = find_collinear_triple(s.points()) {
        return Err(Error::DegenerateConfig(w));
    }
    Ok(s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstructionKind {
    Cross,
    Polygon,
}

/// Parameters of a built layout. Fields that do not apply to a kind are `None`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionParams {
    pub n: u64,
    pub p: Option<u64>,
    pub k: Option<u64>,
    pub m: Option<u64>,
    #[serde(rename = "L")]
    pub side_length: Option<u64>,
    pub ell: u64,
    #[serde(with = "bigint_string")]
    pub grid_extent: BigInt,
}

mod bigint_string {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(|_| serde::de::Error::custom("bad integer"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionLayout {
    pub format: u32,
    pub kind: ConstructionKind,
    pub params: ConstructionParams,
    pub base_points: PointSet,
    /// Separating lines as label pairs into `base_points`.
    pub chosen_lines: Vec<(usize, usize)>,
    pub squares: Vec<IsotheticSquare>,
}

impl ConstructionLayout {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("layout serializes")
    }

    /// Parses and re-verifies a layout document.
    pub fn from_json(text: &str) -> Result<Self> {
        let layout: ConstructionLayout = serde_json::from_str(text)?;
        if layout.format != LAYOUT_FORMAT {
            return Err(Error::Parse(format!(
                "unsupported layout format {}",
                layout.format
            )));
        }
        verify_layout(&layout)?;
        Ok(layout)
    }

    pub fn chosen_line(&self, idx: usize) -> Line {
        let (a, b) = self.chosen_lines[idx];
        Line::through(&self.base_points[a], &self.base_points[b])
    }

    /// Normalized chosen lines, in `chosen_lines` order.
    pub fn chosen_line_set(&self) -> Vec<Line> {
        (0..self.chosen_lines.len()).map(|i| self.chosen_line(i)).collect()
    }

    /// Index of a chosen line strictly separating squares `s` and `t`.
    pub fn separating_line(&self, s: usize, t: usize) -> Option<usize> {
        (0..self.chosen_lines.len()).find(|&i| {
            let l = self.chosen_line(i);
            match (l.square_side(&self.squares[s]), l.square_side(&self.squares[t])) {
                (Some(a), Some(b)) => a != b,
                _ => false,
            }
        })
    }
}

/// Axis-aligned bounding box `(min, max)` of a non-empty point set.
pub fn bounding_box(points: &PointSet) -> (Point, Point) {
    let mut it = points.iter();
    let first = it.next().expect("non-empty point set").clone();
    it.fold((first.clone(), first), |(lo, hi), p| {
        (
            Point::new((&lo.x).min(&p.x).clone(), (&lo.y).min(&p.y).clone()),
            Point::new((&hi.x).max(&p.x).clone(), (&hi.y).max(&p.y).clone()),
        )
    })
}

/// Side of the smallest axis-aligned square grid containing `points`.
pub fn grid_extent(points: &PointSet) -> BigInt {
    let (lo, hi) = bounding_box(points);
    (&hi.x - &lo.x).max(&hi.y - &lo.y)
}

/// Checks every structural invariant of a layout:
///
/// - base points in general position ([`Error::DegenerateConfig`]);
/// - chosen-line labels valid, no chosen line meets any square;
/// - every square inside the base bounding box;
/// - every pair of squares strictly separated by some chosen line
///   ([`Error::SeparationViolated`]).
pub fn verify_layout(layout: &ConstructionLayout) -> Result<()> {
    let base = &layout.base_points;
    if base.is_empty() {
        return Err(Error::InvalidInput("layout has no base points".into()));
    }
    if let Some(w) = find_collinear_triple(base.points()) {
        return Err(Error::DegenerateConfig(w));
    }
    if layout.params.grid_extent != grid_extent(base) {
        return Err(Error::InvalidInput(format!(
            "declared grid extent {} does not match base points ({})",
            layout.params.grid_extent,
            grid_extent(base)
        )));
    }
    for &(a, b) in &layout.chosen_lines {
        if a >= base.len() || b >= base.len() || a == b {
            return Err(Error::InvalidInput(format!("bad chosen line ({a}, {b})")));
        }
    }
    let (lo, hi) = bounding_box(base);
    for (i, sq) in layout.squares.iter().enumerate() {
        if sq.side != layout.params.ell {
            return Err(Error::InvalidInput(format!(
                "square {i} has side {}, expected {}",
                sq.side, layout.params.ell
            )));
        }
        let far = &sq.anchor.x + BigInt::from(sq.side);
        let top = &sq.anchor.y + BigInt::from(sq.side);
        if sq.anchor.x < lo.x || sq.anchor.y < lo.y || far > hi.x || top > hi.y {
            return Err(Error::InvalidInput(format!("square {i} leaves the grid")));
        }
    }

    // Side pattern of each square across all chosen lines. No zero entries are
    // allowed, so two squares are separated iff their patterns differ.
    let lines = layout.chosen_line_set();
    let mut patterns: HashMap<Vec<bool>, usize> = HashMap::with_capacity(layout.squares.len());
    for (s, sq) in layout.squares.iter().enumerate() {
        let mut pattern = Vec::with_capacity(lines.len());
        for (li, line) in lines.iter().enumerate() {
            match line.square_side(sq) {
                Some(o) => pattern.push(o.sign() > 0),
                None => {
                    let (a, b) = layout.chosen_lines[li];
                    return Err(Error::SeparationViolated(format!(
                        "chosen line ({a}, {b}) meets square {s}"
                    )));
                }
            }
        }
        if let Some(t) = patterns.insert(pattern, s) {
            return Err(Error::SeparationViolated(format!(
                "squares {t} and {s} are not separated by any chosen line"
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::is_general_position;

    #[test]
    fn parabola_examples() {
        let q5 = erdos_parabola(5).unwrap();
        assert_eq!(q5, PointSet::from_coords(&[(0, 0), (1, 1), (2, 4), (3, 4), (4, 1)]).unwrap());
        assert_eq!(erdos_parabola(2).unwrap(), PointSet::from_coords(&[(0, 0), (1, 1)]).unwrap());
        let q13 = erdos_parabola(13).unwrap();
        assert_eq!(q13.len(), 13);
        assert!(is_general_position(&q13));
        assert!(matches!(erdos_parabola(10), Err(Error::NotPrime(10))));
        assert!(matches!(erdos_parabola(1), Err(Error::NotPrime(1))));
    }

    #[test]
    fn parabola_general_position_small_primes() {
        for p in (2..120).filter(|&p| is_prime(p)) {
            assert!(is_general_position(&erdos_parabola(p).unwrap()), "p = {p}");
        }
    }

    #[test]
    fn bounding_helpers() {
        let s = PointSet::from_coords(&[(3, -1), (-2, 4), (0, 0)]).unwrap();
        let (lo, hi) = bounding_box(&s);
        assert_eq!((lo, hi), (Point::new(-2, -1), Point::new(3, 4)));
        assert_eq!(grid_extent(&s), BigInt::from(5));
    }
}
