use num_bigint::BigInt;

use super::{grid_extent, verify_layout, ConstructionKind, ConstructionLayout, ConstructionParams, LAYOUT_FORMAT};
use crate::geometry::{next_prime, IsotheticSquare, Point, PointSet};
use crate::{Error, Result};

/// Smallest prime strictly greater than `n / (4 ln n)`.
pub(crate) fn cross_prime(n: u64) -> u64 {
    let x = n as f64 / (4.0 * (n as f64).ln());
    next_prime(x.floor() as u64 + 1)
}

/// `⌈ln n⌉`.
pub(crate) fn ceil_ln(n: u64) -> u64 {
    (n as f64).ln().ceil() as u64
}

/// Cross configuration: four stretched copies of the parabola set arranged
/// around a `(p−1) × (p−1)` grid of rectangles cut out by `p` vertical and `p`
/// horizontal chosen lines, with one square of side `32pk²` per rectangle.
///
/// Base labels are `U` (`0..p`), `L` (`p..2p`), `R` (`2p..3p`), `D` (`3p..4p`).
pub fn build_cross(n: u64) -> Result<ConstructionLayout> {
    if n < 3 {
        return Err(Error::TooSmall {
            n,
            reason: "need n ≥ 3".into(),
        });
    }
    let p = cross_prime(n);
    if p < 3 {
        return Err(Error::TooSmall {
            n,
            reason: format!("p = {p}, need p ≥ 3"),
        });
    }
    if 4 * p > n {
        return Err(Error::TooSmall {
            n,
            reason: format!("base configuration has 4p = {} > n points", 4 * p),
        });
    }
    let k = ceil_ln(n);
    log::info!("cross layout: D uses index range 0 ≤ i < p (same as U)");

    let (pp, kk) = (BigInt::from(p), BigInt::from(k * k));
    let p2 = &pp * &pp;
    let unit = |v: BigInt| v * &kk;
    let sq_mod = |i: u64| -> BigInt { BigInt::from(i * i % p) };

    let mut u = Vec::with_capacity(p as usize);
    let mut l = Vec::with_capacity(p as usize);
    let mut r = Vec::with_capacity(p as usize);
    let mut d = Vec::with_capacity(p as usize);
    for i in 0..p {
        let bi = BigInt::from(i);
        let q: BigInt = sq_mod(i) * 34;
        let col = unit(&bi * 34 * &pp);
        let row = unit(&bi * 68 * &pp - &p2 * 238);
        u.push(Point::new(col.clone(), unit(q.clone())));
        l.push(Point::new(unit(&q - &p2 * 136), row.clone()));
        r.push(Point::new(unit(&q + &p2 * 153), row));
        d.push(Point::new(col, unit(&q - &p2 * 408)));
    }
    let pu = p as usize;
    let columns: Vec<BigInt> = u.iter().map(|pt| pt.x.clone()).collect();
    let rows: Vec<BigInt> = l.iter().map(|pt| pt.y.clone()).collect();

    let mut points = u;
    points.extend(l);
    points.extend(r);
    points.extend(d);
    let base_points = PointSet::new(points)?;

    let mut chosen_lines: Vec<(usize, usize)> = (0..pu).map(|i| (i, 3 * pu + i)).collect();
    chosen_lines.extend((0..pu).map(|i| (pu + i, 2 * pu + i)));

    // Rectangles are 34pk² wide and 68pk² tall; squares of side 32pk² sit in
    // the middle, leaving pk² and 18pk² margins.
    let ell = 32 * p * k * k;
    let dx = BigInt::from(p * k * k);
    let dy = BigInt::from(18 * p * k * k);
    let mut squares = Vec::with_capacity((pu - 1) * (pu - 1));
    for row in rows.windows(2) {
        for col in columns.windows(2) {
            squares.push(IsotheticSquare::new(
                Point::new(&col[0] + &dx, &row[0] + &dy),
                ell,
            ));
        }
    }

    let layout = ConstructionLayout {
        format: LAYOUT_FORMAT,
        kind: ConstructionKind::Cross,
        params: ConstructionParams {
            n,
            p: Some(p),
            k: Some(k),
            m: None,
            side_length: None,
            ell,
            grid_extent: grid_extent(&base_points),
        },
        base_points,
        chosen_lines,
        squares,
    };
    verify_layout(&layout)?;
    Ok(layout)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::bounding_box;
    use crate::geometry::is_general_position;

    #[test]
    fn parameters() {
        assert_eq!(cross_prime(60), 5);
        assert_eq!(ceil_ln(60), 5);
        assert_eq!(cross_prime(100), 7);
        assert_eq!(cross_prime(200), 11);
    }

    #[test]
    fn too_small() {
        for n in [0, 2, 5, 20, 26] {
            assert!(matches!(build_cross(n), Err(Error::TooSmall { .. })), "n = {n}");
        }
        assert!(build_cross(27).is_ok());
    }

    #[test]
    fn p5_layout() {
        let layout = build_cross(60).unwrap();
        let (p, k) = (5i64, 5i64);
        assert_eq!(layout.params.p, Some(5));
        assert_eq!(layout.params.ell, (32 * p * k * k) as u64);
        assert_eq!(layout.base_points.len(), 20);
        assert_eq!(layout.squares.len(), 16);
        assert!(is_general_position(&layout.base_points));
        // U at i = 1 is (34·5·k², 34·1·k²).
        assert_eq!(layout.base_points[1], Point::new(170 * k * k, 34 * k * k));
        // D at i = 0 exists (corrected index range).
        assert_eq!(layout.base_points[15], Point::new(0, -408 * p * p * k * k));
    }

    #[test]
    fn exact_bounding_box() {
        for n in [60u64, 100, 200] {
            let layout = build_cross(n).unwrap();
            let p = layout.params.p.unwrap() as i64;
            let k = layout.params.k.unwrap() as i64;
            let qmax = (0..p).map(|i| i * i % p).max().unwrap();
            let kk = k * k;
            let (lo, hi) = bounding_box(&layout.base_points);
            assert_eq!(lo, Point::new(-136 * p * p * kk, -408 * p * p * kk));
            assert_eq!(hi, Point::new((34 * qmax + 153 * p * p) * kk, 34 * qmax * kk));
            assert!(lo.x >= BigInt::from(-408 * p * p * kk));
            assert!(hi.x <= BigInt::from(187 * p * p * kk));
            // Θ(p²k²) extent: height dominates.
            assert_eq!(layout.params.grid_extent, BigInt::from((408 * p * p + 34 * qmax) * kk));
        }
    }

    #[test]
    fn every_square_pair_is_separated() {
        let layout = build_cross(100).unwrap();
        let t = layout.squares.len();
        assert_eq!(t, 36);
        for s in 0..t {
            for u in s + 1..t {
                assert!(layout.separating_line(s, u).is_some(), "{s} {u}");
            }
        }
    }
}
