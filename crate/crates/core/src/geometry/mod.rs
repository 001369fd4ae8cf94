//! Exact integer geometry: points, segments, squares and the predicates every
//! other module is built on.
//!
//! "Above the directed line from p to q" is fixed throughout the crate as
//! "strictly left of p→q", i.e. [`Orientation::CounterClockwise`].

mod io;
mod line;
mod predicates;
mod primes;

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use io::{parse_point_file, write_point_file};
pub use line::Line;
pub use predicates::{
    find_collinear_triple, is_general_position, line_intersects_square, orientation,
    segment_intersection, Orientation,
};
pub use primes::{is_prime, next_prime};

/// A lattice point with arbitrary-precision coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: BigInt,
    pub y: BigInt,
}

impl Point {
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>) -> Self {
        Point {
            x: x.into(),
            y: y.into(),
        }
    }

    /// Both coordinates as `i64`, when they fit.
    #[inline]
    pub fn to_i64(&self) -> Option<(i64, i64)> {
        Some((self.x.to_i64()?, self.y.to_i64()?))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl From<(i64, i64)> for Point {
    fn from((x, y): (i64, i64)) -> Self {
        Point::new(x, y)
    }
}

/// Points are serialized as `["x", "y"]` so big integers survive JSON consumers.
impl Serialize for Point {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.x.to_string(), self.y.to_string()].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [x, y] = <[String; 2]>::deserialize(d)?;
        let parse = |v: &str| {
            v.parse::<BigInt>()
                .map_err(|_| serde::de::Error::custom(format!("bad integer {v:?}")))
        };
        Ok(Point {
            x: parse(&x)?,
            y: parse(&y)?,
        })
    }
}

/// An exact rational point, e.g. the crossing of two segments.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalPoint {
    pub x: BigRational,
    pub y: BigRational,
}

impl RationalPoint {
    pub fn new(x: BigRational, y: BigRational) -> Self {
        RationalPoint { x, y }
    }

    /// Nearest lattice point, ties rounded up.
    pub fn round(&self) -> Point {
        let half = BigRational::new(1.into(), 2.into());
        Point {
            x: (&self.x + &half).floor().to_integer(),
            y: (&self.y + &half).floor().to_integer(),
        }
    }
}

impl From<&Point> for RationalPoint {
    fn from(p: &Point) -> Self {
        RationalPoint {
            x: BigRational::from_integer(p.x.clone()),
            y: BigRational::from_integer(p.y.clone()),
        }
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// An ordered sequence of pairwise distinct points; labels are positions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(transparent)]
pub struct PointSet {
    points: Vec<Point>,
}

impl PointSet {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        let mut seen: HashMap<&Point, usize> = HashMap::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            if let Some(&j) = seen.get(p) {
                return Err(Error::DuplicatePoint(j, i));
            }
            seen.insert(p, i);
        }
        Ok(PointSet { points })
    }

    pub fn from_coords(coords: &[(i64, i64)]) -> Result<Self> {
        Self::new(coords.iter().map(|&c| Point::from(c)).collect())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn get(&self, label: usize) -> Option<&Point> {
        self.points.get(label)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Point> {
        self.points.iter()
    }

    pub fn into_points(self) -> Vec<Point> {
        self.points
    }

    /// Appends a point, rejecting duplicates.
    pub fn push(&mut self, p: Point) -> Result<()> {
        if let Some(j) = self.points.iter().position(|q| *q == p) {
            return Err(Error::DuplicatePoint(j, self.points.len()));
        }
        self.points.push(p);
        Ok(())
    }
}

impl std::ops::Index<usize> for PointSet {
    type Output = Point;

    fn index(&self, label: usize) -> &Point {
        &self.points[label]
    }
}

impl<'a> IntoIterator for &'a PointSet {
    type Item = &'a Point;
    type IntoIter = std::slice::Iter<'a, Point>;

    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}

impl<'de> Deserialize<'de> for PointSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let points = Vec::<Point>::deserialize(d)?;
        PointSet::new(points).map_err(serde::de::Error::custom)
    }
}

/// A closed segment with distinct endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineSegment {
    a: Point,
    b: Point,
}

impl LineSegment {
    pub fn new(a: Point, b: Point) -> Result<Self> {
        if a == b {
            return Err(Error::DegenerateSegment);
        }
        Ok(LineSegment { a, b })
    }

    pub fn a(&self) -> &Point {
        &self.a
    }

    pub fn b(&self) -> &Point {
        &self.b
    }
}

/// A closed axis-parallel square `[x, x+side] × [y, y+side]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IsotheticSquare {
    pub anchor: Point,
    pub side: u64,
}

impl IsotheticSquare {
    /// Panics if `side` is zero.
    pub fn new(anchor: Point, side: u64) -> Self {
        assert!(side >= 1, "square side must be positive");
        IsotheticSquare { anchor, side }
    }

    /// Corners in the order (x,y), (x+s,y), (x,y+s), (x+s,y+s).
    pub fn corners(&self) -> [Point; 4] {
        let s = BigInt::from(self.side);
        let (x, y) = (&self.anchor.x, &self.anchor.y);
        [
            Point::new(x.clone(), y.clone()),
            Point::new(x + &s, y.clone()),
            Point::new(x.clone(), y + &s),
            Point::new(x + &s, y + &s),
        ]
    }

    /// Closed containment test.
    pub fn contains(&self, p: &Point) -> bool {
        let s = BigInt::from(self.side);
        let (x, y) = (&self.anchor.x, &self.anchor.y);
        &p.x >= x && p.x <= x + &s && &p.y >= y && p.y <= y + &s
    }

    /// Number of lattice points in the closed square, `(side+1)²`.
    pub fn lattice_points(&self) -> u128 {
        let s = self.side as u128 + 1;
        s * s
    }
}
