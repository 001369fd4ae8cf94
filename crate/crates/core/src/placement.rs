//! Alive/dead square placement engine.
//!
//! Starting from a layout's base points, each step picks an unchosen square
//! that fewer than `ℓ` placed-pair lines cross ("alive"), puts the first
//! admissible lattice point of that square into the set, and updates the
//! crossing counts of every square against the new lines. A square with
//! `(ℓ+1)²` lattice points crossed by fewer than `ℓ` lines always holds a
//! point off all of them, so an alive square never runs out of candidates.
//!
//! Random choices use `ChaCha8Rng::seed_from_u64(seed)`; each random step
//! consumes exactly one `next_u64` value `u` and picks position
//! `(u · len) >> 64` of the ascending alive list.

use std::collections::HashSet;

use num_bigint::{BigInt, BigUint};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constructions::ConstructionLayout;
use crate::geometry::{find_collinear_triple, Line, Point, PointSet};
use crate::ordertype::{digest_of, SignatureDigest};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SquareState {
    pub chosen: bool,
    /// Distinct non-chosen lines through two placed points meeting the square.
    pub crossing_count: usize,
}

pub struct PlacementEngine<'a> {
    layout: &'a ConstructionLayout,
    placed: PointSet,
    placed_set: HashSet<Point>,
    lines: HashSet<Line>,
    chosen_lines: HashSet<Line>,
    states: Vec<SquareState>,
    /// Σ over counted lines of the number of squares each one meets.
    incidences: u64,
    max_squares_per_line: usize,
    seed: u64,
    rng: ChaCha8Rng,
    random_draws: u64,
}

impl<'a> PlacementEngine<'a> {
    /// Fresh engine: base points placed, no square chosen, crossing counts
    /// taken over all base-pair lines except the chosen separating lines.
    pub fn new(layout: &'a ConstructionLayout, seed: u64) -> Self {
        let chosen_lines: HashSet<Line> = layout.chosen_line_set().into_iter().collect();
        let mut engine = PlacementEngine {
            layout,
            placed: PointSet::default(),
            placed_set: HashSet::new(),
            lines: HashSet::new(),
            chosen_lines,
            states: vec![SquareState::default(); layout.squares.len()],
            incidences: 0,
            max_squares_per_line: 0,
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
            random_draws: 0,
        };
        for p in layout.base_points.iter() {
            engine.add_point(p.clone());
        }
        engine
    }

    pub fn layout(&self) -> &ConstructionLayout {
        self.layout
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn placed(&self) -> &PointSet {
        &self.placed
    }

    pub fn states(&self) -> &[SquareState] {
        &self.states
    }

    pub fn ell(&self) -> usize {
        self.layout.params.ell as usize
    }

    /// Largest number of squares met by any counted line so far.
    pub fn max_squares_per_line(&self) -> usize {
        self.max_squares_per_line
    }

    pub fn line_count(&self) -> usize {
        self.lines.len()
    }

    fn is_alive(&self, s: &SquareState) -> bool {
        !s.chosen && s.crossing_count < self.ell()
    }

    /// Unchosen squares crossed by fewer than `ℓ` lines, ascending.
    pub fn alive_squares(&self) -> Vec<usize> {
        (0..self.states.len())
            .filter(|&i| self.is_alive(&self.states[i]))
            .collect()
    }

    pub fn unchosen(&self) -> usize {
        self.states.iter().filter(|s| !s.chosen).count()
    }

    /// Lower bound on the alive census from line incidences alone: a dead
    /// unchosen square absorbs at least `ℓ` incidences.
    pub fn census_floor(&self) -> i64 {
        self.unchosen() as i64 - (self.incidences / self.layout.params.ell) as i64
    }

    fn add_point(&mut self, c: Point) {
        for a in self.placed.iter() {
            let line = Line::through(a, &c);
            if self.chosen_lines.contains(&line) || self.lines.contains(&line) {
                self.lines.insert(line);
                continue;
            }
            let mut hits = 0;
            for (state, sq) in self.states.iter_mut().zip(&self.layout.squares) {
                if line.intersects_square(sq) {
                    state.crossing_count += 1;
                    hits += 1;
                }
            }
            self.incidences += hits as u64;
            self.max_squares_per_line = self.max_squares_per_line.max(hits);
            self.lines.insert(line);
        }
        self.placed_set.insert(c.clone());
        self.placed
            .push(c)
            .expect("admissible points are never already placed");
    }

    /// True iff `c` is not placed and lies on no line through two placed points.
    pub fn is_admissible(&self, c: &Point) -> bool {
        if self.placed_set.contains(c) {
            return false;
        }
        let mut seen = HashSet::with_capacity(self.placed.len());
        self.placed.iter().all(|a| seen.insert(Line::through(a, c)))
    }

    /// Place the first admissible lattice point of an alive square.
    ///
    /// Candidates are scanned ring by ring (Chebyshev distance from the
    /// square's centre lattice point), row-major within each ring.
    pub fn place_next(&mut self, square: usize) -> Result<Point> {
        let state = *self
            .states
            .get(square)
            .ok_or_else(|| Error::InvalidInput(format!("no square {square}")))?;
        if !self.is_alive(&state) {
            return Err(Error::SquareDead(square));
        }
        let sq = &self.layout.squares[square];
        let side = BigInt::from(sq.side);
        let half = sq.side / 2;
        let (x0, y0) = (&sq.anchor.x, &sq.anchor.y);
        let (cx, cy) = (x0 + BigInt::from(half), y0 + BigInt::from(half));
        let (x1, y1) = (x0 + &side, y0 + &side);

        let max_ring = (sq.side - half) as i64;
        let mut found = None;
        'rings: for d in 0..=max_ring {
            for dy in -d..=d {
                let y = &cy + dy;
                if &y < y0 || y > y1 {
                    continue;
                }
                let edge_row = dy.abs() == d;
                let mut dx = -d;
                while dx <= d {
                    let x = &cx + dx;
                    if &x >= x0 && x <= x1 {
                        let cand = Point::new(x, y.clone());
                        if self.is_admissible(&cand) {
                            found = Some(cand);
                            break 'rings;
                        }
                    }
                    dx += if edge_row || d == 0 { 1 } else { 2 * d };
                }
            }
        }
        let point = found.ok_or(Error::Exhausted(square))?;
        self.states[square].chosen = true;
        self.add_point(point.clone());
        Ok(point)
    }

    fn draw(&mut self, len: usize) -> usize {
        self.random_draws += 1;
        ((self.rng.next_u64() as u128 * len as u128) >> 64) as usize
    }

    /// Crossing counts rebuilt from scratch over all placed pairs.
    pub fn recompute_crossing_counts(&self) -> Vec<usize> {
        let pts = self.placed.points();
        let mut lines = HashSet::new();
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                let l = Line::through(&pts[i], &pts[j]);
                if !self.chosen_lines.contains(&l) {
                    lines.insert(l);
                }
            }
        }
        let mut counts = vec![0; self.layout.squares.len()];
        for l in &lines {
            for (c, sq) in counts.iter_mut().zip(&self.layout.squares) {
                if l.intersects_square(sq) {
                    *c += 1;
                }
            }
        }
        counts
    }

    /// Alive squares derived from [`Self::recompute_crossing_counts`].
    pub fn recompute_alive(&self) -> Vec<usize> {
        let counts = self.recompute_crossing_counts();
        (0..counts.len())
            .filter(|&i| !self.states[i].chosen && counts[i] < self.ell())
            .collect()
    }

    /// Apply recorded steps, checking each reproduces the recorded point.
    /// Random draws are re-consumed so a resumed run continues the stream.
    pub fn replay(&mut self, trace: &TraceFile) -> Result<Vec<TraceStep>> {
        let mut out = Vec::with_capacity(trace.steps.len());
        for (i, step) in trace.steps.iter().enumerate() {
            let alive = self.alive_squares();
            if alive.len() != step.alive {
                return Err(Error::InvalidInput(format!(
                    "trace step {i}: recorded {} alive squares, engine has {}",
                    step.alive,
                    alive.len()
                )));
            }
            if trace.policy == PolicyKind::Random {
                let pick = alive[self.draw(alive.len())];
                if pick != step.square {
                    return Err(Error::InvalidInput(format!(
                        "trace step {i}: seed {} picks square {pick}, trace has {}",
                        self.seed, step.square
                    )));
                }
            }
            let p = self.place_next(step.square)?;
            if p != step.point {
                return Err(Error::InvalidInput(format!(
                    "trace step {i}: placed {p}, trace has {}",
                    step.point
                )));
            }
            out.push(step.clone());
        }
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolicyKind {
    Random,
    Scripted,
}

/// How squares are chosen.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Policy {
    /// Uniform over the alive list, using the engine's seeded generator.
    Random,
    /// Fixed square indices; each must be alive at its turn.
    Scripted(Vec<usize>),
}

impl Policy {
    pub fn kind(&self) -> PolicyKind {
        match self {
            Policy::Random => PolicyKind::Random,
            Policy::Scripted(_) => PolicyKind::Scripted,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub alive: usize,
    pub square: usize,
    pub point: Point,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlacementTrace {
    pub seed: u64,
    pub policy: PolicyKind,
    pub steps: Vec<TraceStep>,
    pub final_points: PointSet,
    pub digest: SignatureDigest,
    /// `Σ ln(alive)` over the steps.
    pub log_lower_bound: f64,
    /// `Π alive`, exactly.
    pub alive_product: BigUint,
    pub max_squares_per_line: usize,
}

impl PlacementTrace {
    pub fn to_file(&self) -> TraceFile {
        TraceFile {
            seed: self.seed,
            policy: self.policy,
            steps: self.steps.clone(),
            digest: self.digest,
            log_lower_bound: format!("{:.6}", self.log_lower_bound),
        }
    }
}

/// Serialized trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceFile {
    pub seed: u64,
    pub policy: PolicyKind,
    pub steps: Vec<TraceStep>,
    pub digest: SignatureDigest,
    pub log_lower_bound: String,
}

fn finish(engine: &PlacementEngine<'_>, policy: PolicyKind, steps: Vec<TraceStep>) -> Result<PlacementTrace> {
    let final_points = engine.placed().clone();
    if let Some(w) = find_collinear_triple(final_points.points()) {
        return Err(Error::Internal(format!("placed set lost general position at {w:?}")));
    }
    let digest = digest_of(&final_points)?;
    let log_lower_bound = steps.iter().map(|s| (s.alive as f64).ln()).sum();
    let alive_product = steps.iter().map(|s| BigUint::from(s.alive)).product();
    Ok(PlacementTrace {
        seed: engine.seed(),
        policy,
        steps,
        final_points,
        digest,
        log_lower_bound,
        alive_product,
        max_squares_per_line: engine.max_squares_per_line(),
    })
}

fn step_once(engine: &mut PlacementEngine<'_>, policy: &Policy, step: usize) -> Result<TraceStep> {
    let alive = engine.alive_squares();
    if alive.is_empty() {
        return Err(Error::TooManySteps {
            requested: step + 1,
            available: step,
        });
    }
    if (alive.len() as i64) < engine.census_floor() {
        return Err(Error::Internal(format!(
            "alive census {} below incidence bound {}",
            alive.len(),
            engine.census_floor()
        )));
    }
    let square = match policy {
        Policy::Random => alive[engine.draw(alive.len())],
        Policy::Scripted(script) => {
            let s = *script.get(step).ok_or_else(|| {
                Error::InvalidInput(format!("script has no entry for step {step}"))
            })?;
            if alive.binary_search(&s).is_err() {
                return Err(Error::ScriptDeadSquare { step, square: s });
            }
            s
        }
    };
    let point = engine.place_next(square)?;
    Ok(TraceStep {
        alive: alive.len(),
        square,
        point,
    })
}

/// Perform `steps` placements and record the trace.
pub fn run(engine: &mut PlacementEngine<'_>, policy: &Policy, steps: usize) -> Result<PlacementTrace> {
    run_continuing(engine, policy, steps, Vec::new())
}

/// Like [`run`], prefixing the trace with already-applied steps (resume).
pub fn run_continuing(
    engine: &mut PlacementEngine<'_>,
    policy: &Policy,
    steps: usize,
    mut prefix: Vec<TraceStep>,
) -> Result<PlacementTrace> {
    let available = engine.unchosen();
    if steps > available {
        return Err(Error::TooManySteps {
            requested: steps,
            available,
        });
    }
    let offset = prefix.len();
    for t in 0..steps {
        let step = match policy {
            Policy::Scripted(_) => step_once(engine, policy, t)?,
            Policy::Random => step_once(engine, policy, offset + t)?,
        };
        prefix.push(step);
    }
    finish(engine, policy.kind(), prefix)
}

/// Independent random runs, one per seed, in seed order.
pub fn run_batch(layout: &ConstructionLayout, seeds: &[u64], steps: usize) -> Result<Vec<PlacementTrace>> {
    seeds
        .par_iter()
        .map(|&seed| {
            let mut engine = PlacementEngine::new(layout, seed);
            run(&mut engine, &Policy::Random, steps)
        })
        .collect()
}

/// Default step count: the points still missing after the base layout,
/// capped by the number of squares.
pub fn default_steps(layout: &ConstructionLayout) -> usize {
    let missing = (layout.params.n as usize).saturating_sub(layout.base_points.len());
    missing.min(layout.squares.len())
}
