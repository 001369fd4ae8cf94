use std::collections::HashMap;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{IsotheticSquare, LineSegment, Point, PointSet, RationalPoint};
use crate::{Error, Result};

/// Sign of the orientation determinant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orientation {
    Clockwise,
    Collinear,
    CounterClockwise,
}

impl Orientation {
    #[inline]
    pub fn from_sign(v: i128) -> Self {
        match v.signum() {
            1 => Orientation::CounterClockwise,
            -1 => Orientation::Clockwise,
            _ => Orientation::Collinear,
        }
    }

    #[inline]
    pub(crate) fn from_bigint(v: &BigInt) -> Self {
        match v.sign() {
            Sign::Plus => Orientation::CounterClockwise,
            Sign::Minus => Orientation::Clockwise,
            Sign::NoSign => Orientation::Collinear,
        }
    }

    /// −1, 0 or +1.
    #[inline]
    pub fn sign(self) -> i8 {
        match self {
            Orientation::Clockwise => -1,
            Orientation::Collinear => 0,
            Orientation::CounterClockwise => 1,
        }
    }

    pub fn reversed(self) -> Self {
        match self {
            Orientation::Clockwise => Orientation::CounterClockwise,
            Orientation::Collinear => Orientation::Collinear,
            Orientation::CounterClockwise => Orientation::Clockwise,
        }
    }
}

#[inline]
fn cross_small(p: (i64, i64), q: (i64, i64), r: (i64, i64)) -> Option<i128> {
    let (px, py) = (p.0 as i128, p.1 as i128);
    let dx1 = q.0 as i128 - px;
    let dy1 = q.1 as i128 - py;
    let dx2 = r.0 as i128 - px;
    let dy2 = r.1 as i128 - py;
    dx1.checked_mul(dy2)?.checked_sub(dy1.checked_mul(dx2)?)
}

fn cross_big(p: &Point, q: &Point, r: &Point) -> BigInt {
    (&q.x - &p.x) * (&r.y - &p.y) - (&q.y - &p.y) * (&r.x - &p.x)
}

/// Sign of `(q−p) × (r−p)`. Positive means `r` is strictly left of `p→q`.
pub fn orientation(p: &Point, q: &Point, r: &Point) -> Orientation {
    if let (Some(a), Some(b), Some(c)) = (p.to_i64(), q.to_i64(), r.to_i64()) {
        if let Some(v) = cross_small(a, b, c) {
            return Orientation::from_sign(v);
        }
    }
    Orientation::from_bigint(&cross_big(p, q, r))
}

/// Primitive direction of `q − p`, identified with its negation.
fn undirected(p: &Point, q: &Point) -> (BigInt, BigInt) {
    let mut dx = &q.x - &p.x;
    let mut dy = &q.y - &p.y;
    let g = dx.gcd(&dy);
    if !g.is_zero() {
        dx /= &g;
        dy /= &g;
    }
    if dx.is_negative() || (dx.is_zero() && dy.is_negative()) {
        dx = -dx;
        dy = -dy;
    }
    (dx, dy)
}

/// Lexicographically smallest collinear triple `(i, j, k)`, `i < j < k`.
///
/// Runs in O(n²) expected time: a triple through `i` is collinear iff two
/// later points share the same undirected direction from `p_i`.
pub fn find_collinear_triple(points: &[Point]) -> Option<[usize; 3]> {
    let mut dirs: HashMap<(BigInt, BigInt), usize> = HashMap::new();
    for i in 0..points.len() {
        dirs.clear();
        let mut best: Option<(usize, usize)> = None;
        for k in i + 1..points.len() {
            let d = undirected(&points[i], &points[k]);
            match dirs.get(&d) {
                Some(&j) => {
                    if best.is_none_or(|(bj, _)| j < bj) {
                        best = Some((j, k));
                    }
                }
                None => {
                    dirs.insert(d, k);
                }
            }
        }
        if let Some((j, k)) = best {
            return Some([i, j, k]);
        }
    }
    None
}

/// True iff no three points of `s` are collinear.
pub fn is_general_position(s: &PointSet) -> bool {
    find_collinear_triple(s.points()).is_none()
}

fn cross_rational(ax: &BigInt, ay: &BigInt, bx: &BigInt, by: &BigInt) -> BigInt {
    ax * by - ay * bx
}

/// Unique crossing point of two closed segments, `None` if they are disjoint.
///
/// Collinear segments that share exactly one endpoint meet in that point;
/// collinear segments sharing a run of positive length are an error.
pub fn segment_intersection(s1: &LineSegment, s2: &LineSegment) -> Result<Option<RationalPoint>> {
    let (a, b, c, d) = (s1.a(), s1.b(), s2.a(), s2.b());
    let rx = &b.x - &a.x;
    let ry = &b.y - &a.y;
    let sx = &d.x - &c.x;
    let sy = &d.y - &c.y;
    let qx = &c.x - &a.x;
    let qy = &c.y - &a.y;

    let denom = cross_rational(&rx, &ry, &sx, &sy);
    if denom.is_zero() {
        if !cross_rational(&rx, &ry, &qx, &qy).is_zero() {
            return Ok(None); // parallel, distinct lines
        }
        // Collinear: parametrize s2's endpoints along s1 by t = (·−a)·r / |r|².
        let rr = &rx * &rx + &ry * &ry;
        let t0 = BigRational::new(&qx * &rx + &qy * &ry, rr.clone());
        let t1 = BigRational::new((&d.x - &a.x) * &rx + (&d.y - &a.y) * &ry, rr);
        let (lo, hi) = if t0 <= t1 { (t0, t1) } else { (t1, t0) };
        let start = lo.max(BigRational::zero());
        let end = hi.min(BigRational::one());
        return match start.cmp(&end) {
            std::cmp::Ordering::Greater => Ok(None),
            std::cmp::Ordering::Less => Err(Error::CollinearOverlap),
            std::cmp::Ordering::Equal => {
                let ax = BigRational::from_integer(a.x.clone());
                let ay = BigRational::from_integer(a.y.clone());
                Ok(Some(RationalPoint::new(
                    ax + &start * BigRational::from_integer(rx),
                    ay + &start * BigRational::from_integer(ry),
                )))
            }
        };
    }

    let t_num = cross_rational(&qx, &qy, &sx, &sy);
    let u_num = cross_rational(&qx, &qy, &rx, &ry);
    let within = |num: &BigInt| {
        if denom.is_positive() {
            !num.is_negative() && num <= &denom
        } else {
            !num.is_positive() && num >= &denom
        }
    };
    if !within(&t_num) || !within(&u_num) {
        return Ok(None);
    }
    let t = BigRational::new(t_num, denom);
    let x = BigRational::from_integer(a.x.clone()) + &t * BigRational::from_integer(rx);
    let y = BigRational::from_integer(a.y.clone()) + &t * BigRational::from_integer(ry);
    Ok(Some(RationalPoint::new(x, y)))
}

/// Does the infinite line through `p` and `q` meet the closed square?
///
/// Decided by the orientation of the four corners: the line misses the square
/// iff all four corners lie strictly on the same side.
pub fn line_intersects_square(p: &Point, q: &Point, sq: &IsotheticSquare) -> bool {
    debug_assert!(p != q);
    let mut pos = false;
    let mut neg = false;
    for c in sq.corners() {
        match orientation(p, q, &c) {
            Orientation::Collinear => return true,
            Orientation::CounterClockwise => pos = true,
            Orientation::Clockwise => neg = true,
        }
    }
    pos && neg
}
