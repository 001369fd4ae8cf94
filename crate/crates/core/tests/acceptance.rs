//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any fails. Pass a number or a name fragment to run a
//! subset, e.g. `cargo test --test acceptance -- 7`.

use std::collections::{HashMap, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use gridorder::constructions::{
    annulus_random_lines, base_pair_lines, build_cross, build_polygon, check_lemma_line_squares,
    check_lemma_separation, erdos_parabola, tangent_lines, ConstructionLayout,
};
use gridorder::geometry::{is_general_position, is_prime, orientation, Line, Point, PointSet};
use gridorder::oracles::{
    arrangement_census, enumerate_grid_ordertypes, fixtures_json, monotonicity_violations,
    parse_fixtures, regenerate_fixtures, zaslavsky_cells, zaslavsky_meets_quartic, DEFAULT_BUDGET,
    FIXTURE_PARAMS,
};
use gridorder::ordertype::{lambda_matrix, relabeling_order_types, signature, signature_digest};
use gridorder::placement::{run, run_batch, PlacementEngine, Policy};
use gridorder::Error;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn rng(tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed_0000 + tag)
}

/// Random general-position set of `n` distinct points of `{0..g−1}²`.
fn random_gp_set(rng: &mut ChaCha8Rng, n: usize, g: i64) -> PointSet {
    loop {
        let mut pts: Vec<Point> = Vec::with_capacity(n);
        while pts.len() < n {
            let p = Point::new(rng.gen_range(0..g), rng.gen_range(0..g));
            if !pts.contains(&p) {
                pts.push(p);
            }
        }
        let s = PointSet::new(pts).unwrap();
        if is_general_position(&s) {
            return s;
        }
    }
}

fn rational_det_sign(p: &Point, q: &Point, r: &Point) -> i8 {
    // Cofactor expansion of |x y 1| over the three rows, in exact rationals.
    let f = |v: &BigInt| BigRational::from_integer(v.clone());
    let (px, py, qx, qy, rx, ry) = (f(&p.x), f(&p.y), f(&q.x), f(&q.y), f(&r.x), f(&r.y));
    let det = &px * (&qy - &ry) - &py * (&qx - &rx) + (&qx * &ry - &rx * &qy);
    if det.is_zero() {
        0
    } else if det.is_positive() {
        1
    } else {
        -1
    }
}

fn criterion_1() -> Outcome {
    let mut rng = rng(1);
    let bound = 1i128 << 64;
    let mut zero = 0;
    for t in 0..100_000 {
        let mut c = || Point::new(rng.gen_range(-bound..=bound), rng.gen_range(-bound..=bound));
        let (p, q) = (c(), c());
        let r = if t % 10 == 0 {
            let s: i64 = rng.gen_range(-3..=3);
            Point::new(&p.x + (&q.x - &p.x) * s, &p.y + (&q.y - &p.y) * s)
        } else {
            c()
        };
        let o = orientation(&p, &q, &r).sign();
        let expect = rational_det_sign(&p, &q, &r);
        ensure!(o == expect, "triple {t}: orientation {o}, rational determinant {expect}");
        let cyc = [orientation(&q, &r, &p).sign(), orientation(&r, &p, &q).sign()];
        let swp = [
            orientation(&q, &p, &r).sign(),
            orientation(&p, &r, &q).sign(),
            orientation(&r, &q, &p).sign(),
        ];
        ensure!(cyc.iter().all(|&v| v == o), "triple {t}: cyclic shift changed sign");
        ensure!(swp.iter().all(|&v| v == -o), "triple {t}: transposition kept sign");
        zero += (o == 0) as usize;
    }
    Ok(format!("100000 triples agree, {zero} collinear"))
}

fn criterion_2() -> Outcome {
    let primes: Vec<u64> = (2..=500).filter(|&p| is_prime(p)).collect();
    let bad: Vec<(u64, usize)> = primes
        .par_iter()
        .map(|&p| {
            let s = erdos_parabola(p).expect("parabola builds");
            let c: Vec<(i128, i128)> = s
                .iter()
                .map(|pt| {
                    let (x, y) = pt.to_i64().unwrap();
                    (x as i128, y as i128)
                })
                .collect();
            let mut collinear = 0;
            for i in 0..c.len() {
                for j in i + 1..c.len() {
                    let (dx, dy) = (c[j].0 - c[i].0, c[j].1 - c[i].1);
                    for pk in &c[j + 1..] {
                        if dx * (pk.1 - c[i].1) == dy * (pk.0 - c[i].0) {
                            collinear += 1;
                        }
                    }
                }
            }
            (p, collinear)
        })
        .filter(|&(_, c)| c > 0)
        .collect();
    ensure!(bad.is_empty(), "collinear triples found: {bad:?}");
    Ok(format!("{} primes up to 499, 0 collinear triples", primes.len()))
}

fn criterion_3() -> Outcome {
    ensure!(zaslavsky_cells(3) == 7, "zaslavsky_cells(3) = {}", zaslavsky_cells(3));
    ensure!(zaslavsky_cells(4) == 18, "zaslavsky_cells(4) = {}", zaslavsky_cells(4));
    let mut rng = rng(3);
    let mut summary = Vec::new();
    for n in 3..=7usize {
        let (mut generic, mut excluded) = (0, 0);
        while generic < 100 {
            let s = random_gp_set(&mut rng, n, 1 << 20);
            let c = arrangement_census(&s).map_err(|e| e.to_string())?;
            if !c.generic {
                excluded += 1;
                ensure!(excluded < 10_000, "n = {n}: genericity filter rejects everything");
                continue;
            }
            ensure!(
                c.cell_count == zaslavsky_cells(n as u64),
                "n = {n}: census {} vs formula {}",
                c.cell_count,
                zaslavsky_cells(n as u64)
            );
            generic += 1;
        }
        summary.push(format!("n={n}: 100 equal, {excluded} filtered"));
    }
    let below: Vec<u64> = (3..=100).filter(|&n| !zaslavsky_meets_quartic(n)).collect();
    ensure!(
        below.is_empty(),
        "census = formula holds ({}), but zaslavsky_cells(n) < n^4/8 for {} of 98 values of n in 3..=100 \
         (n=3: 7 < 10.125; n=100: {} < 12500000)",
        summary.join("; "),
        below.len(),
        zaslavsky_cells(100)
    );
    Ok(summary.join("; "))
}

fn criterion_4() -> Outcome {
    let mut rng = rng(4);
    let mut sets = Vec::new();
    let (mut equal, mut unequal) = (0, 0);
    for t in 0..1500 {
        let n = rng.gen_range(3..=7);
        let a = random_gp_set(&mut rng, n, 5);
        let b = match t % 3 {
            0 => {
                let (dx, dy) = (rng.gen_range(-9i64..10), rng.gen_range(-9i64..10));
                PointSet::new(a.iter().map(|p| Point::new(&p.x + dx, &p.y + dy)).collect()).unwrap()
            }
            1 => random_gp_set(&mut rng, n, 5),
            _ => {
                let mut pts = a.points().to_vec();
                pts.swap(0, n - 1);
                PointSet::new(pts).unwrap()
            }
        };
        let (la, lb) = (lambda_matrix(&a).unwrap(), lambda_matrix(&b).unwrap());
        let (sa, sb) = (signature(&a).unwrap(), signature(&b).unwrap());
        ensure!((la == lb) == (sa == sb), "pair {t}: λ-equality {} but signature-equality {}", la == lb, sa == sb);
        if sa == sb {
            equal += 1;
        } else {
            unequal += 1;
        }
        for (s, l) in [(&a, &la), (&b, &lb)] {
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        ensure!(l.get(i, j) + l.get(j, i) == n as u32 - 2, "complement identity fails on {s:?}");
                    }
                }
            }
        }
        sets.push((la, signature_digest(&sa)));
        sets.push((lb, signature_digest(&sb)));
    }
    // The two partitions of all generated sets coincide.
    let mut by_lambda = HashMap::new();
    let mut by_digest = HashMap::new();
    for (l, d) in &sets {
        ensure!(*by_lambda.entry(l.clone()).or_insert(*d) == *d, "one λ-matrix, two signatures");
        ensure!(by_digest.entry(*d).or_insert_with(|| l.clone()) == l, "one signature, two λ-matrices");
    }
    ensure!(equal > 100 && unequal > 100, "degenerate sample: {equal} equal, {unequal} unequal");
    Ok(format!(
        "1500 pairs ({equal} equal, {unequal} unequal), {} sets in {} classes",
        sets.len(),
        by_digest.len()
    ))
}

fn criterion_5() -> Outcome {
    let mut rng = rng(5);
    let mut mins = Vec::new();
    for n in 3..=5usize {
        let fact: usize = (1..n).product();
        let mut min = usize::MAX;
        for _ in 0..20 {
            let s = random_gp_set(&mut rng, n, 50);
            let d = relabeling_order_types(&s).map_err(|e| e.to_string())?;
            ensure!(d >= fact, "n = {n}: {d} relabeled order types < {fact}");
            min = min.min(d);
        }
        mins.push(format!("n={n}: min {min} ≥ {fact}"));
    }
    Ok(mins.join("; "))
}

/// Largest number of squares met by a line through two points of `pts`.
fn max_squares_per_placed_line(layout: &ConstructionLayout, pts: &PointSet) -> usize {
    let p = pts.points();
    let mut lines = HashSet::new();
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            lines.insert(Line::through(&p[i], &p[j]));
        }
    }
    let lines: Vec<Line> = lines.into_iter().collect();
    lines
        .par_iter()
        .map(|l| layout.squares.iter().filter(|s| l.intersects_square(s)).count())
        .max()
        .unwrap_or(0)
}

fn criterion_6() -> Outcome {
    let mut notes = Vec::new();
    for (n, want_p, full) in [(60u64, 5u64, false), (100, 7, false), (138, 11, true)] {
        let layout = build_cross(n).map_err(|e| format!("n = {n}: {e}"))?;
        let p = layout.params.p.unwrap();
        ensure!(p == want_p, "n = {n}: p = {p}, expected {want_p}");
        let pu = p as usize;
        ensure!(layout.base_points.len() == 4 * pu, "n = {n}: base has {} points", layout.base_points.len());
        ensure!(is_general_position(&layout.base_points), "n = {n}: base not in general position");
        let t = layout.squares.len();
        ensure!(t == (pu - 1) * (pu - 1), "n = {n}: |T| = {t}");
        for s in 0..t {
            for u in s + 1..t {
                ensure!(layout.separating_line(s, u).is_some(), "n = {n}: squares {s}, {u} not separated");
            }
        }
        let want_steps = n as usize - 4 * pu;
        let steps = want_steps.min(t);
        ensure!(!full || steps == want_steps, "n = {n}: full run needs {want_steps} > |T| = {t}");
        let mut engine = PlacementEngine::new(&layout, n);
        let trace = run(&mut engine, &Policy::Random, steps).map_err(|e| format!("n = {n}: {}: {e}", e.code()))?;
        ensure!(is_general_position(&trace.final_points), "n = {n}: placed set degenerate");
        let exhaustive = max_squares_per_placed_line(&layout, &trace.final_points);
        ensure!(
            exhaustive < 2 * pu && trace.max_squares_per_line < 2 * pu,
            "n = {n}: a placed-pair line meets {exhaustive} squares, limit < {}",
            2 * p
        );
        notes.push(format!("p={p}: {steps}/{want_steps} steps, max {exhaustive} < {}", 2 * p));
    }
    Ok(notes.join("; "))
}

fn criterion_7() -> Outcome {
    let mut notes = Vec::new();
    for (n, m, floor) in [(100u64, 32u64, 45u64), (170, 48, 83)] {
        let layout = build_polygon(n).map_err(|e| format!("n = {n}: {e}"))?;
        ensure!(layout.params.m == Some(m), "n = {n}: m = {:?}", layout.params.m);
        let sep = check_lemma_separation(&layout).map_err(|e| e.to_string())?;
        let expect_bound = (std::f64::consts::PI / m as f64).tan()
            * (std::f64::consts::SQRT_2 - 1.0)
            * layout.params.side_length.unwrap() as f64;
        ensure!((sep.bound - expect_bound).abs() < 1e-6, "m = {m}: wrong separation bound");
        ensure!(
            sep.pass && sep.min_post_rounding_gap > 1.0,
            "m = {m}: {} separation failures, min distance {:.3} vs {:.3}, gap {:.3}",
            sep.failures,
            sep.min_distance,
            sep.bound,
            sep.min_post_rounding_gap
        );
        let mut lines = base_pair_lines(&layout);
        let base = lines.len();
        lines.extend(annulus_random_lines(&layout, 10_000, n).map_err(|e| e.to_string())?);
        lines.extend(tangent_lines(&layout, 1_000).map_err(|e| e.to_string())?);
        let ls = check_lemma_line_squares(&layout, &lines).map_err(|e| e.to_string())?;
        ensure!(ls.bound_floor == floor, "m = {m}: bound {} ≠ {floor}", ls.bound_floor);
        ensure!(ls.pass, "m = {m}: {} lines exceed {floor}, max {}", ls.failures, ls.max_count);
        notes.push(format!(
            "m={m}: gap {:.0} > 1, distance {:.0} > {:.0}, {} lines ({base} base) max {} ≤ {floor}",
            sep.min_post_rounding_gap, sep.min_distance, sep.bound, ls.lines_checked, ls.max_count
        ));
    }
    Ok(notes.join("; "))
}

fn scripted_pairs(layout: &ConstructionLayout, steps: usize, pairs: usize, tag: u64) -> Result<usize, String> {
    let mut rng = rng(tag);
    let t = layout.squares.len();
    let mut done = 0;
    while done < pairs {
        let mut order: Vec<usize> = (0..t).collect();
        order.shuffle(&mut rng);
        let a: Vec<usize> = order[..steps].to_vec();
        let at = rng.gen_range(0..steps);
        let mut b = a.clone();
        b[at] = order[rng.gen_range(steps..t)];
        let ra = run(&mut PlacementEngine::new(layout, 0), &Policy::Scripted(a.clone()), steps);
        let rb = run(&mut PlacementEngine::new(layout, 0), &Policy::Scripted(b.clone()), steps);
        match (ra, rb) {
            (Ok(x), Ok(y)) => {
                ensure!(x.digest != y.digest, "scripts {a:?} and {b:?} give equal digests");
                done += 1;
            }
            (Err(Error::ScriptDeadSquare { .. }), _) | (_, Err(Error::ScriptDeadSquare { .. })) => {}
            (Err(e), _) | (_, Err(e)) => return Err(e.to_string()),
        }
    }
    Ok(done)
}

fn criterion_8() -> Outcome {
    let seeds: Vec<u64> = (1000..1100).collect();
    let mut notes = Vec::new();
    for (name, layout, steps) in [
        ("cross n=60", build_cross(60).unwrap(), 16usize),
        ("polygon n=100", build_polygon(100).unwrap(), 68),
    ] {
        let traces = run_batch(&layout, &seeds, steps).map_err(|e| e.to_string())?;
        let distinct: HashSet<_> = traces.iter().map(|t| t.digest).collect();
        ensure!(distinct.len() == 100, "{name}: {} distinct digests over 100 seeds", distinct.len());
        let pairs = scripted_pairs(&layout, steps.min(12), 100, steps as u64)?;
        notes.push(format!("{name}: 100/100 seeds distinct, {pairs}/100 scripted pairs differ"));
    }
    Ok(notes.join("; "))
}

fn criterion_9() -> Outcome {
    let text = include_str!("../fixtures/grid_ordertypes.json");
    let frozen = parse_fixtures(text).map_err(|e| e.to_string())?;
    let find = |n, g| frozen.iter().find(|f| f.n == n && f.g == g).map(|f| f.count);
    ensure!(find(3, 2) == Some(2), "fixture (3, 2) must be 2, got {:?}", find(3, 2));
    for (n, g) in [(3, 3), (3, 4), (3, 5), (4, 3)] {
        ensure!(find(n, g).is_some(), "fixture ({n}, {g}) missing");
    }
    ensure!(find(4, 3).unwrap() >= 6, "(4, 3) below 3! = 6");
    let fresh = regenerate_fixtures(&FIXTURE_PARAMS, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    ensure!(fixtures_json(&fresh) == text, "regenerated fixtures differ from the frozen file");
    let v = monotonicity_violations(&frozen);
    ensure!(v.is_empty(), "count decreases in g: {v:?}");
    ensure!(
        matches!(enumerate_grid_ordertypes(7, 8, DEFAULT_BUDGET), Err(Error::BudgetExceeded { .. })),
        "budget guard did not fire"
    );
    let counts: Vec<String> = frozen.iter().map(|f| format!("({},{})={}", f.n, f.g, f.count)).collect();
    Ok(format!("{} fixtures reproduced: {}", frozen.len(), counts.join(" ")))
}

fn criterion_10() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_gridorder");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = |name: &str| dir.path().join(name).to_string_lossy().into_owned();
    std::fs::write(path("four.txt"), "4\n0 0\n5 1\n2 7\n1 3\n").unwrap();
    let setup: [&[&str]; 2] = [
        &["build", "--kind", "cross", "--n", "60", "--out", &path("cross.json")],
        &["build", "--kind", "polygon", "--n", "100", "--out", &path("poly.json")],
    ];
    for args in setup {
        let st = Command::new(bin).args(args).status().map_err(|e| e.to_string())?;
        ensure!(st.success(), "setup {args:?} failed");
    }
    let (cross, poly, four) = (path("cross.json"), path("poly.json"), path("four.txt"));
    let reports: Vec<Vec<&str>> = vec![
        vec!["gen-parabola", "--p", "13"],
        vec!["build", "--kind", "cross", "--n", "200"],
        vec!["build", "--kind", "polygon", "--n", "100", "--format", "text"],
        vec!["place", &cross, "--seed", "7", "--count", "10"],
        vec!["place", &cross, "--seed", "7", "--count", "10", "--format", "csv"],
        vec!["place", &poly, "--seed", "3", "--count", "4", "--steps", "20", "--format", "text"],
        vec!["verify", &poly, "--count", "2000"],
        vec!["verify", &cross, "--format", "text"],
        vec!["enumerate", "--n", "4", "--g", "3,4"],
        vec!["enumerate", "--n", "3", "--g", "2,3,4,5", "--format", "csv"],
        vec!["census", &four],
        vec!["census", &four, "--format", "text"],
        vec!["build", "--kind", "cross", "--n", "5"],
    ];
    for args in &reports {
        let a = Command::new(bin).args(args).output().map_err(|e| e.to_string())?;
        let b = Command::new(bin).args(args).output().map_err(|e| e.to_string())?;
        ensure!(a.stdout == b.stdout && a.stderr == b.stderr, "{args:?}: outputs differ between runs");
        ensure!(a.status.code() == b.status.code(), "{args:?}: exit codes differ");
        ensure!(!a.stdout.is_empty() || !a.stderr.is_empty(), "{args:?}: no output");
    }
    Ok(format!("{} reports byte-identical across two runs", reports.len()))
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn main() {
    let criteria = [
        Criterion { id: 1, name: "predicate soundness", limit: Duration::from_secs(30), run: criterion_1 },
        Criterion { id: 2, name: "parabola general position", limit: Duration::from_secs(300), run: criterion_2 },
        Criterion { id: 3, name: "zaslavsky cross-check", limit: Duration::from_secs(120), run: criterion_3 },
        Criterion { id: 4, name: "lambda-matrix equivalence", limit: Duration::from_secs(120), run: criterion_4 },
        Criterion { id: 5, name: "relabeling bound", limit: Duration::from_secs(60), run: criterion_5 },
        Criterion { id: 6, name: "cross construction", limit: Duration::from_secs(600), run: criterion_6 },
        Criterion { id: 7, name: "polygon construction", limit: Duration::from_secs(600), run: criterion_7 },
        Criterion { id: 8, name: "distinctness engine", limit: Duration::from_secs(600), run: criterion_8 },
        Criterion { id: 9, name: "grid order-type oracle", limit: Duration::from_secs(600), run: criterion_9 },
        Criterion { id: 10, name: "reproducibility", limit: Duration::from_secs(600), run: criterion_10 },
    ];
    let filters: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let selected = |c: &Criterion| {
        filters.is_empty() || filters.iter().any(|f| *f == c.id.to_string() || c.name.contains(f.as_str()))
    };

    let mut failed = 0;
    for c in criteria.iter().filter(|c| selected(c)) {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(_) if elapsed > c.limit => Err(format!("took {elapsed:.1?}, limit {:?}", c.limit)),
            o => o,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        println!("criterion {:>2} {:<26} {tag} [{elapsed:.1?}] {detail}", c.id, c.name);
        failed += outcome.is_err() as usize;
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
