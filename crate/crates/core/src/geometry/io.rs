//! Point-set text format: `n` on the first line, then `n` lines `x y`.
//! Every line ends in `\n`; no other whitespace is allowed.

use num_bigint::BigInt;

use super::{Point, PointSet};
use crate::{Error, Result};

pub fn write_point_file(s: &PointSet) -> String {
    let mut out = format!("{}\n", s.len());
    for p in s {
        out.push_str(&format!("{} {}\n", p.x, p.y));
    }
    out
}

fn parse_int(tok: &str, line: usize) -> Result<BigInt> {
    let digits = tok.strip_prefix('-').unwrap_or(tok);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("line {line}: bad integer {tok:?}")));
    }
    tok.parse()
        .map_err(|_| Error::Parse(format!("line {line}: bad integer {tok:?}")))
}

pub fn parse_point_file(text: &str) -> Result<PointSet> {
    let body = text
        .strip_suffix('\n')
        .ok_or_else(|| Error::Parse("file must end with a newline".into()))?;
    let mut lines = body.split('\n');
    let header = lines.next().unwrap_or("");
    if header.is_empty() || !header.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("line 1: bad point count {header:?}")));
    }
    let n: usize = header
        .parse()
        .map_err(|_| Error::Parse(format!("line 1: bad point count {header:?}")))?;
    let mut points = Vec::with_capacity(n);
    for (i, line) in lines.enumerate() {
        let lineno = i + 2;
        let mut toks = line.split(' ');
        let (Some(x), Some(y), None) = (toks.next(), toks.next(), toks.next()) else {
            return Err(Error::Parse(format!("line {lineno}: expected \"x y\"")));
        };
        points.push(Point::new(parse_int(x, lineno)?, parse_int(y, lineno)?));
    }
    if points.len() != n {
        return Err(Error::Parse(format!(
            "header declares {n} points, found {}",
            points.len()
        )));
    }
    PointSet::new(points)
}
