//! Brute-force ground truth and closed-form counts.
//!
//! - [`enumerate_grid_ordertypes`] counts labeled order types realizable on
//!   the `g × g` grid by exhaustive search over ordered tuples.
//! - [`arrangement_census`] counts the cells of the arrangement spanned by a
//!   point set via `cells = 1 + L + Σ_v (t_v − 1)`.
//! - [`zaslavsky_cells`] is the closed form that census should match on
//!   generic inputs.
//! - [`bound_formulas`] evaluates the leading terms of the counting bounds.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::constructions::{cross_prime, polygon_m};
use crate::geometry::{find_collinear_triple, Line, PointSet, RationalPoint};
use crate::ordertype::{signature_digest, signature_from_signs, SignatureDigest};
use crate::{Error, Result, TOOL_VERSION};

fn binom2(n: u128) -> u128 {
    if n < 2 {
        0
    } else {
        n * (n - 1) / 2
    }
}

/// `C(C(n,2),2) + C(n,2) + 1 − n·C(n−2,2)`: cells of the arrangement spanned
/// by `n` points with no parallel lines and no concurrences other than the
/// `n` points themselves.
pub fn zaslavsky_cells(n: u64) -> u128 {
    let n = n as u128;
    let lines = binom2(n);
    binom2(lines) + lines + 1 - n * binom2(n.saturating_sub(2))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusVertex {
    pub point: RationalPoint,
    /// Number of arrangement lines through the vertex.
    pub t: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrangementCensus {
    /// Distinct spanned lines, sorted.
    pub lines: Vec<Line>,
    /// Vertices sorted by `(x, y)`.
    pub vertices: Vec<CensusVertex>,
    pub parallel_pairs: usize,
    pub cell_count: u128,
    /// No parallel lines and every vertex of multiplicity above two is one of
    /// the input points.
    pub generic: bool,
}

/// Cells of the arrangement of all lines through two points of `s`.
pub fn arrangement_census(s: &PointSet) -> Result<ArrangementCensus> {
    if s.len() < 3 {
        return Err(Error::InvalidInput("census needs at least 3 points".into()));
    }
    if let Some(w) = find_collinear_triple(s.points()) {
        return Err(Error::Degenerate(w));
    }
    let pts = s.points();
    let mut set = BTreeSet::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            set.insert(Line::through(&pts[i], &pts[j]));
        }
    }
    let lines: Vec<Line> = set.into_iter().collect();

    let mut meets: BTreeMap<(BigRational, BigRational), BTreeSet<usize>> = BTreeMap::new();
    let mut parallel_pairs = 0;
    for i in 0..lines.len() {
        let (a1, b1, c1) = lines[i].coefficients();
        for (j, lj) in lines.iter().enumerate().skip(i + 1) {
            let (a2, b2, c2) = lj.coefficients();
            let det = a1 * b2 - a2 * b1;
            if det.is_zero() {
                parallel_pairs += 1;
                continue;
            }
            let x = BigRational::new(b1 * c2 - b2 * c1, det.clone());
            let y = BigRational::new(c1 * a2 - c2 * a1, det);
            let e = meets.entry((x, y)).or_default();
            e.insert(i);
            e.insert(j);
        }
    }

    let inputs: HashSet<(BigRational, BigRational)> = pts
        .iter()
        .map(|p| {
            let r = RationalPoint::from(p);
            (r.x, r.y)
        })
        .collect();
    let mut generic = parallel_pairs == 0;
    let mut cells = 1 + lines.len() as u128;
    let mut vertices = Vec::with_capacity(meets.len());
    for ((x, y), through) in meets {
        let t = through.len();
        cells += (t - 1) as u128;
        if t > 2 && !inputs.contains(&(x.clone(), y.clone())) {
            generic = false;
        }
        vertices.push(CensusVertex {
            point: RationalPoint::new(x, y),
            t,
        });
    }
    Ok(ArrangementCensus {
        lines,
        vertices,
        parallel_pairs,
        cell_count: cells,
        generic,
    })
}

#[derive(Serialize)]
struct CensusVertexJson {
    x: String,
    y: String,
    t: usize,
}

#[derive(Serialize)]
struct CensusJson {
    lines: Vec<[String; 3]>,
    vertices: Vec<CensusVertexJson>,
    cells: String,
}

impl ArrangementCensus {
    /// `{lines, vertices: [{x, y, t}], cells}`, numbers as decimal strings.
    pub fn to_json(&self) -> String {
        let doc = CensusJson {
            lines: self
                .lines
                .iter()
                .map(|l| {
                    let (a, b, c) = l.coefficients();
                    [a.to_string(), b.to_string(), c.to_string()]
                })
                .collect(),
            vertices: self
                .vertices
                .iter()
                .map(|v| CensusVertexJson {
                    x: v.point.x.to_string(),
                    y: v.point.y.to_string(),
                    t: v.t,
                })
                .collect(),
            cells: self.cell_count.to_string(),
        };
        serde_json::to_string_pretty(&doc).expect("census serializes")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridOrderTypeCount {
    pub n: usize,
    pub g: u64,
    /// `ln g / ln n`.
    pub alpha: f64,
    pub count: u64,
}

/// Cost estimate `(g²)ⁿ` of the exhaustive search, saturating.
pub fn enumeration_cost(n: usize, g: u64) -> u128 {
    let cells = (g as u128).saturating_mul(g as u128);
    (0..n).fold(1u128, |acc, _| acc.saturating_mul(cells))
}

/// Default cap on [`enumeration_cost`].
pub const DEFAULT_BUDGET: u128 = 100_000_000;

fn cross_i64(p: (i64, i64), q: (i64, i64), r: (i64, i64)) -> i64 {
    (q.0 - p.0) * (r.1 - p.1) - (q.1 - p.1) * (r.0 - p.0)
}

struct Search<'a> {
    grid: &'a [(i64, i64)],
    n: usize,
    tuple: Vec<(i64, i64)>,
    used: Vec<bool>,
    found: HashSet<SignatureDigest>,
}

impl Search<'_> {
    fn extend(&mut self) {
        if self.tuple.len() == self.n {
            let t = &self.tuple;
            let mut signs = Vec::with_capacity(self.n * (self.n - 1) * (self.n - 2) / 6);
            for i in 0..self.n {
                for j in i + 1..self.n {
                    for k in j + 1..self.n {
                        signs.push(cross_i64(t[i], t[j], t[k]).signum() as i8);
                    }
                }
            }
            self.found.insert(signature_digest(&signature_from_signs(self.n, signs)));
            return;
        }
        for c in 0..self.grid.len() {
            if self.used[c] {
                continue;
            }
            let cand = self.grid[c];
            // Tuples with a collinear triple are skipped whatever follows, so
            // cutting them here changes nothing.
            let t = &self.tuple;
            let collinear = (0..t.len())
                .any(|i| (i + 1..t.len()).any(|j| cross_i64(t[i], t[j], cand) == 0));
            if collinear {
                continue;
            }
            self.used[c] = true;
            self.tuple.push(cand);
            self.extend();
            self.tuple.pop();
            self.used[c] = false;
        }
    }
}

/// Number of distinct labeled order types of ordered `n`-tuples of distinct
/// points of `{0..g−1}²` in general position. Exhaustive; shards on the first
/// point and merges digest sets.
pub fn enumerate_grid_ordertypes(n: usize, g: u64, budget: u128) -> Result<GridOrderTypeCount> {
    if n < 3 {
        return Err(Error::InvalidInput(format!("need n ≥ 3, got {n}")));
    }
    if g == 0 || g > 1 << 20 {
        return Err(Error::InvalidInput(format!("grid side {g} out of range")));
    }
    let estimate = enumeration_cost(n, g);
    if estimate > budget {
        return Err(Error::BudgetExceeded { estimate, budget });
    }
    let gi = g as i64;
    let grid: Vec<(i64, i64)> = (0..gi).flat_map(|y| (0..gi).map(move |x| (x, y))).collect();
    let shards: Vec<HashSet<SignatureDigest>> = (0..grid.len())
        .into_par_iter()
        .map(|first| {
            let mut s = Search {
                grid: &grid,
                n,
                tuple: vec![grid[first]],
                used: vec![false; grid.len()],
                found: HashSet::new(),
            };
            s.used[first] = true;
            s.extend();
            s.found
        })
        .collect();
    let all: HashSet<SignatureDigest> = shards.into_iter().flatten().collect();
    Ok(GridOrderTypeCount {
        n,
        g,
        alpha: (g as f64).ln() / (n as f64).ln(),
        count: all.len() as u64,
    })
}

/// One frozen oracle value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridFixture {
    pub n: usize,
    pub g: u64,
    pub count: u64,
    pub tool_version: String,
}

/// `(n, g)` pairs stored in the fixtures file.
pub const FIXTURE_PARAMS: [(usize, u64); 8] =
    [(3, 2), (3, 3), (3, 4), (3, 5), (4, 3), (4, 4), (5, 3), (5, 4)];

pub fn parse_fixtures(text: &str) -> Result<Vec<GridFixture>> {
    Ok(serde_json::from_str(text)?)
}

/// Recompute every fixture from scratch.
pub fn regenerate_fixtures(params: &[(usize, u64)], budget: u128) -> Result<Vec<GridFixture>> {
    params
        .iter()
        .map(|&(n, g)| {
            Ok(GridFixture {
                n,
                g,
                count: enumerate_grid_ordertypes(n, g, budget)?.count,
                tool_version: TOOL_VERSION.to_string(),
            })
        })
        .collect()
}

pub fn fixtures_json(fixtures: &[GridFixture]) -> String {
    let mut s = serde_json::to_string_pretty(fixtures).expect("fixtures serialize");
    s.push('\n');
    s
}

/// Pairs `(a, b)` of fixtures with equal `n`, `a.g < b.g` but `a.count > b.count`.
pub fn monotonicity_violations(fixtures: &[GridFixture]) -> Vec<(GridFixture, GridFixture)> {
    let mut out = Vec::new();
    for a in fixtures {
        for b in fixtures {
            if a.n == b.n && a.g < b.g && a.count > b.count {
                out.push((a.clone(), b.clone()));
            }
        }
    }
    out
}

fn fixed6<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{v:.6}"))
}

fn fixed6_opt<S: Serializer>(v: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => fixed6(v, s),
        None => s.serialize_none(),
    }
}

/// Leading terms of the counting bounds (natural logarithms). Informational.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub n: u64,
    /// `n ln n − n`, leading terms of `ln (n−1)!`-type relabeling counts.
    #[serde(serialize_with = "fixed6")]
    pub n_ln_n_minus_n: f64,
    /// `2 n ln n`, exponent of the cross-layout lower bound.
    #[serde(serialize_with = "fixed6")]
    pub two_n_ln_n: f64,
    /// `3 n ln n`, exponent of the polygon-layout lower bound.
    #[serde(serialize_with = "fixed6")]
    pub three_n_ln_n: f64,
    /// `4 n ln n`, exponent of the upper bound on all order types.
    #[serde(serialize_with = "fixed6")]
    pub four_n_ln_n: f64,
    /// `n² / (32 ln² n)`: alive squares per step, cross layout.
    #[serde(serialize_with = "fixed6")]
    pub cross_step_bound: f64,
    /// `n³ / (512 ln³ n)`: alive squares per step, polygon layout.
    #[serde(serialize_with = "fixed6")]
    pub polygon_step_bound: f64,
    /// `(n − 4p) ln(n²/(32 ln² n))`, when the cross prime is defined.
    #[serde(serialize_with = "fixed6_opt")]
    pub cross_log_product: Option<f64>,
    /// `(n − m) ln(n³/(512 ln³ n))`, when `m ≤ n`.
    #[serde(serialize_with = "fixed6_opt")]
    pub polygon_log_product: Option<f64>,
}

pub fn bound_formulas(n: u64) -> Result<BoundReport> {
    if n < 3 {
        return Err(Error::InvalidInput(format!("need n ≥ 3, got {n}")));
    }
    let nf = n as f64;
    let ln = nf.ln();
    let cross_step_bound = nf * nf / (32.0 * ln * ln);
    let polygon_step_bound = nf * nf * nf / (512.0 * ln * ln * ln);
    let p = cross_prime(n);
    let m = polygon_m(n);
    Ok(BoundReport {
        n,
        n_ln_n_minus_n: nf * ln - nf,
        two_n_ln_n: 2.0 * nf * ln,
        three_n_ln_n: 3.0 * nf * ln,
        four_n_ln_n: 4.0 * nf * ln,
        cross_step_bound,
        polygon_step_bound,
        cross_log_product: (4 * p <= n).then(|| (n - 4 * p) as f64 * cross_step_bound.ln()),
        polygon_log_product: (m <= n).then(|| (n - m) as f64 * polygon_step_bound.ln()),
    })
}

/// `n⁴/8 ≤ cells` decided exactly, as `n⁴ ≤ 8·cells`.
pub fn zaslavsky_meets_quartic(n: u64) -> bool {
    let n = BigInt::from(n);
    let lhs = &n * &n * &n * &n;
    lhs <= zaslavsky_cells_big(&n) * 8
}

fn zaslavsky_cells_big(n: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    let c2 = |v: &BigInt| -> BigInt {
        if *v < two {
            BigInt::zero()
        } else {
            v * (v - 1) / 2
        }
    };
    let lines = c2(n);
    c2(&lines) + &lines + 1 - n * c2(&(n - 2))
}
