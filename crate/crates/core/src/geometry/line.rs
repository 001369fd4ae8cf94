use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{IsotheticSquare, Orientation, Point};

/// An infinite line `a·x + b·y + c = 0` through two lattice points, stored in
/// primitive form: `gcd(a, b) = 1` and `(a, b)` lexicographically positive.
///
/// Two point pairs span the same line iff their normalized lines are equal, so
/// `Line` is usable as a set key for deduplication.
#[derive(Clone, Debug)]
pub struct Line {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    small: Option<(i64, i64, i128)>,
}

impl PartialEq for Line {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.b == other.b && self.c == other.c
    }
}

impl Eq for Line {}

impl Hash for Line {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.a.hash(state);
        self.b.hash(state);
        self.c.hash(state);
    }
}

impl PartialOrd for Line {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Line {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (&self.a, &self.b, &self.c).cmp(&(&other.a, &other.b, &other.c))
    }
}

impl Line {
    /// The line through `p` and `q`.
    ///
    /// # Panics
    ///
    /// Panics if `p == q`.
    pub fn through(p: &Point, q: &Point) -> Line {
        assert!(p != q, "a line needs two distinct points");
        let mut a = &p.y - &q.y;
        let mut b = &q.x - &p.x;
        let g = a.gcd(&b);
        a /= &g;
        b /= &g;
        if a.is_negative() || (a.is_zero() && b.is_negative()) {
            a = -a;
            b = -b;
        }
        let c = -(&a * &p.x + &b * &p.y);
        Self::from_parts(a, b, c)
    }

    fn from_parts(a: BigInt, b: BigInt, c: BigInt) -> Line {
        let small = match (a.to_i64(), b.to_i64(), c.to_i128()) {
            (Some(a), Some(b), Some(c)) => Some((a, b, c)),
            _ => None,
        };
        Line { a, b, c, small }
    }

    pub fn coefficients(&self) -> (&BigInt, &BigInt, &BigInt) {
        (&self.a, &self.b, &self.c)
    }

    /// `a·x + b·y + c` evaluated exactly.
    pub fn eval(&self, p: &Point) -> BigInt {
        &self.a * &p.x + &self.b * &p.y + &self.c
    }

    #[inline]
    fn eval_small(&self, x: i64, y: i64) -> Option<i128> {
        let (a, b, c) = self.small?;
        (a as i128 * x as i128)
            .checked_add(b as i128 * y as i128)?
            .checked_add(c)
    }

    /// Which side of the normalized line `p` lies on.
    pub fn side(&self, p: &Point) -> Orientation {
        if let Some((x, y)) = p.to_i64() {
            if let Some(v) = self.eval_small(x, y) {
                return Orientation::from_sign(v);
            }
        }
        Orientation::from_bigint(&self.eval(p))
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.side(p) == Orientation::Collinear
    }

    /// Values of `a·x + b·y + c` at the four corners, when `i128` suffices.
    fn corner_values_small(&self, sq: &IsotheticSquare) -> Option<[i128; 4]> {
        let (x, y) = sq.anchor.to_i64()?;
        let s = i64::try_from(sq.side).ok()?;
        let (a, b, _) = self.small?;
        let v00 = self.eval_small(x, y)?;
        let da = (a as i128).checked_mul(s as i128)?;
        let db = (b as i128).checked_mul(s as i128)?;
        let v10 = v00.checked_add(da)?;
        let v01 = v00.checked_add(db)?;
        let v11 = v10.checked_add(db)?;
        Some([v00, v10, v01, v11])
    }

    fn corner_values(&self, sq: &IsotheticSquare) -> [BigInt; 4] {
        sq.corners().map(|c| self.eval(&c))
    }

    /// `Some(side)` if the closed square lies strictly on one side of the line,
    /// `None` if the line meets it.
    pub fn square_side(&self, sq: &IsotheticSquare) -> Option<Orientation> {
        let signs: [Orientation; 4] = match self.corner_values_small(sq) {
            Some(v) => v.map(Orientation::from_sign),
            None => self.corner_values(sq).map(|v| Orientation::from_bigint(&v)),
        };
        let first = signs[0];
        if first != Orientation::Collinear && signs.iter().all(|&s| s == first) {
            Some(first)
        } else {
            None
        }
    }

    /// Does the line meet the closed square?
    pub fn intersects_square(&self, sq: &IsotheticSquare) -> bool {
        self.square_side(sq).is_none()
    }

    /// Squared Euclidean distance numerator and denominator from the square to
    /// the line: `(min |a·x+b·y+c|², a²+b²)` over the corners, or `None` when
    /// the line meets the square.
    pub fn square_gap_squared(&self, sq: &IsotheticSquare) -> Option<(BigInt, BigInt)> {
        self.square_side(sq)?;
        let min = self
            .corner_values(sq)
            .into_iter()
            .map(|v| v.abs())
            .min()
            .unwrap_or_else(BigInt::zero);
        Some((&min * &min, &self.a * &self.a + &self.b * &self.b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_identifies_point_pairs_on_one_line() {
        let l1 = Line::through(&Point::new(0, 0), &Point::new(2, 4));
        let l2 = Line::through(&Point::new(3, 6), &Point::new(1, 2));
        assert_eq!(l1, l2);
        let (a, b, c) = l1.coefficients();
        assert_eq!((a, b, c), (&BigInt::from(2), &BigInt::from(-1), &BigInt::from(0)));
        assert_ne!(l1, Line::through(&Point::new(0, 1), &Point::new(2, 5)));
    }

    #[test]
    fn side_agrees_with_orientation_up_to_global_sign() {
        let p = Point::new(3, -2);
        let q = Point::new(-7, 11);
        let l = Line::through(&p, &q);
        let flip = super::super::orientation(&p, &q, &Point::new(100, 100)) != l.side(&Point::new(100, 100));
        for (x, y) in [(0, 0), (5, 5), (-9, 4), (13, -20), (-7, 11)] {
            let r = Point::new(x, y);
            let o = super::super::orientation(&p, &q, &r);
            let s = l.side(&r);
            assert_eq!(if flip { o.reversed() } else { o }, s);
        }
    }

    #[test]
    fn big_coefficients_use_exact_fallback() {
        let big: BigInt = BigInt::from(1) << 100;
        let p = Point::new(big.clone(), 0);
        let q = Point::new(0, big.clone());
        let l = Line::through(&p, &q);
        assert!(l.contains(&Point::new(big.clone() - 1, 1)));
        let sq = IsotheticSquare::new(Point::new(big.clone() - 5, 2), 3);
        assert!(l.intersects_square(&sq));
        let sq = IsotheticSquare::new(Point::new(big, 1), 3);
        assert!(!l.intersects_square(&sq));
    }

    #[test]
    fn square_gap() {
        let l = Line::through(&Point::new(0, 0), &Point::new(1, 0));
        let sq = IsotheticSquare::new(Point::new(5, 3), 2);
        let (num, den) = l.square_gap_squared(&sq).unwrap();
        assert_eq!((num, den), (BigInt::from(9), BigInt::from(1)));
        assert!(l.square_gap_squared(&IsotheticSquare::new(Point::new(5, -1), 2)).is_none());
    }
}
