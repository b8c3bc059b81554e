//! Rate regions of the two-receiver broadcast channel built from two BISO
//! channels with uniform input: time division (TD), superposition coding,
//! randomized time division (RTD) and the outer bound (OB).
//!
//! Every region here is a union of polytopes of the form
//! `{R1 <= r1_max, R2 <= r2_max, R1 + R2 <= sum_max}` indexed by auxiliary
//! parameters. Frontiers are the upper concave envelope of the polytope
//! vertices; the maximum sum rates are optimised separately on a grid with
//! local refinement, and the optimal vertex is added to the frontier.

use std::io::Write;

use serde::Serialize;

use crate::binmath::Tolerance;
use crate::channel::{ensure_equal_capacity, BisoChannel};
use crate::error::{Error, Result};
use crate::ordering::{more_capable_numeric, Dominant, Relation, DEFAULT_GRID};
use crate::par::{linspace, Exec};

/// Default number of `s` grid points on `[0, 1/2]`.
pub const PROFILE_GRID: usize = 257;
/// Default number of weights in the weighted-sum sweep.
pub const SWEEP_WEIGHTS: usize = 512;

/// `f(s)` sampled on a uniform grid of `[0, 1/2]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FProfile {
    pub label: String,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub capacity: f64,
    #[serde(skip)]
    channel: BisoChannel,
}

impl FProfile {
    pub fn channel(&self) -> &BisoChannel {
        &self.channel
    }

    /// `f` off the grid.
    pub fn eval(&self, s: f64) -> f64 {
        self.channel.f(s)
    }

    /// Endpoints `(C, 0)` and convexity on the grid, all within `abs_eps`.
    pub fn is_consistent(&self, abs_eps: f64) -> bool {
        let n = self.values.len();
        let ends = (self.values[0] - self.capacity).abs() <= abs_eps && self.values[n - 1].abs() <= abs_eps;
        let convex = self
            .values
            .windows(3)
            .all(|w| w[0] - 2.0 * w[1] + w[2] >= -abs_eps);
        ends && convex
    }
}

pub fn f_profile(ch: &BisoChannel, grid_n: usize) -> FProfile {
    f_profile_with(ch, grid_n, Exec::default())
}

pub fn f_profile_with(ch: &BisoChannel, grid_n: usize, exec: Exec) -> FProfile {
    let grid = linspace(0.0, 0.5, grid_n.max(3));
    let values = exec.map(grid.len(), |i| ch.f(grid[i]));
    FProfile {
        label: ch.label().to_string(),
        grid,
        values,
        capacity: ch.capacity(),
        channel: ch.clone(),
    }
}

/// Parameters that generate a rate point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "scheme", rename_all = "snake_case")]
pub enum Generator {
    TimeShare { alpha: f64 },
    Superposition { s: f64 },
    /// `P(W=0) = a`, `P(X=0|W=0) = 1 - s2`, `P(X=0|W=1) = s1`.
    Rtd { s1: f64, s2: f64, a: f64 },
    OuterBound { s1: f64, s2: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RatePoint {
    pub r1: f64,
    pub r2: f64,
    pub generator: Generator,
}

impl RatePoint {
    pub fn sum(&self) -> f64 {
        self.r1 + self.r2
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    TimeDivision,
    Superposition,
    Rtd,
    OuterBound,
}

impl Bound {
    pub fn name(self) -> &'static str {
        match self {
            Bound::TimeDivision => "td",
            Bound::Superposition => "sup",
            Bound::Rtd => "rtd",
            Bound::OuterBound => "ob",
        }
    }
}

/// Pareto frontier (R1 increasing, R2 decreasing) of a down-closed region.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RateRegion {
    pub bound: Bound,
    pub frontier: Vec<RatePoint>,
    pub max_sum_rate: f64,
}

impl RateRegion {
    fn from_candidates(bound: Bound, candidates: Vec<RatePoint>) -> Self {
        let frontier = pareto_frontier(candidates);
        let max_sum_rate = frontier.iter().map(RatePoint::sum).fold(0.0, f64::max);
        RateRegion {
            bound,
            frontier,
            max_sum_rate,
        }
    }

    /// The frontier point with the largest sum rate.
    pub fn best_sum_point(&self) -> Option<&RatePoint> {
        self.frontier
            .iter()
            .reduce(|a, b| if b.sum() > a.sum() { b } else { a })
    }
}

/// `{R1 <= r1_max, R2 <= r2_max, R1 + R2 <= sum_max}` in the positive quadrant.
#[derive(Clone, Copy, Debug)]
struct Pentagon {
    r1_max: f64,
    r2_max: f64,
    sum_max: f64,
}

impl Pentagon {
    fn max_sum(&self) -> f64 {
        (self.r1_max + self.r2_max).min(self.sum_max).max(0.0)
    }

    /// Every vertex that can be extreme for a nonnegative weight.
    fn vertices(&self, generator: Generator) -> [RatePoint; 4] {
        let a = self.r1_max.max(0.0);
        let b = self.r2_max.max(0.0);
        let s = self.sum_max.max(0.0);
        let p = |r1: f64, r2: f64| RatePoint { r1, r2, generator };
        [
            p(0.0, b.min(s)),
            p(a.min(s), 0.0),
            p(a.min(s), (s - a).clamp(0.0, b)),
            p((s - b).clamp(0.0, a), b.min(s)),
        ]
    }
}

/// Upper concave envelope of `points`, trimmed to its Pareto-efficient part.
pub fn pareto_frontier(mut points: Vec<RatePoint>) -> Vec<RatePoint> {
    points.retain(|p| p.r1.is_finite() && p.r2.is_finite());
    points.sort_by(|a, b| a.r1.total_cmp(&b.r1).then(b.r2.total_cmp(&a.r2)));
    points.dedup_by(|b, a| a.r1 == b.r1);

    let mut hull: Vec<RatePoint> = Vec::with_capacity(points.len());
    for p in points {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.r1 - a.r1) * (p.r2 - a.r2) - (b.r2 - a.r2) * (p.r1 - a.r1);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }

    let top = hull
        .iter()
        .map(|p| p.r2)
        .fold(f64::NEG_INFINITY, f64::max);
    let start = hull.iter().rposition(|p| p.r2 == top).unwrap_or(0);
    hull.drain(..start);
    hull
}

/// For each weight `w` on a uniform grid of `[0, 1]`, the candidate
/// maximising `w R1 + (1 - w) R2`; ties go to the earliest candidate.
/// `w = 1/2` is always included so the maximum sum rate is kept.
fn weighted_sweep(candidates: &[RatePoint], weights: usize, exec: Exec) -> Vec<RatePoint> {
    let mut ws = linspace(0.0, 1.0, weights.max(2));
    if !ws.contains(&0.5) {
        ws.push(0.5);
    }
    exec.map(ws.len(), |k| {
        let w = ws[k];
        let mut best = candidates[0];
        let mut best_v = w * best.r1 + (1.0 - w) * best.r2;
        for c in &candidates[1..] {
            let v = w * c.r1 + (1.0 - w) * c.r2;
            if v > best_v {
                best = *c;
                best_v = v;
            }
        }
        best
    })
}

/// The segment from `(0, C2)` to `(C1, 0)`.
pub fn td_region(c1: f64, c2: f64) -> RateRegion {
    RateRegion::from_candidates(
        Bound::TimeDivision,
        vec![
            RatePoint {
                r1: 0.0,
                r2: c2,
                generator: Generator::TimeShare { alpha: 0.0 },
            },
            RatePoint {
                r1: c1,
                r2: 0.0,
                generator: Generator::TimeShare { alpha: 1.0 },
            },
        ],
    )
}

/// Superposition coding with the `dominant` receiver decoding both messages
/// and `U -> X` a BSC(s) with uniform `U`.
pub fn superposition_region(
    ch1: &BisoChannel,
    ch2: &BisoChannel,
    dominant: Dominant,
    grid_n: usize,
) -> RateRegion {
    let (strong, weak) = match dominant {
        Dominant::First => (ch1, ch2),
        Dominant::Second => (ch2, ch1),
    };
    let c = strong.capacity();
    let grid = linspace(0.0, 0.5, grid_n.max(3));
    let mut candidates = Vec::with_capacity(4 * grid.len());
    for &s in &grid {
        let (fs, fw) = (strong.f(s), weak.f(s));
        let sum_max = (fw + c - fs).min(c);
        let pent = Pentagon {
            r1_max: sum_max,
            r2_max: fw,
            sum_max,
        };
        candidates.extend(pent.vertices(Generator::Superposition { s }));
    }
    if dominant == Dominant::Second {
        for p in &mut candidates {
            std::mem::swap(&mut p.r1, &mut p.r2);
        }
    }
    RateRegion::from_candidates(Bound::Superposition, candidates)
}

/// A maximum sum rate and the parameters attaining it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SumRate {
    pub value: f64,
    pub generator: Generator,
}

fn ensure_same_grid(p1: &FProfile, p2: &FProfile) -> Result<()> {
    if p1.grid != p2.grid {
        return Err(Error::Precondition(
            "profiles must be sampled on the same grid".into(),
        ));
    }
    Ok(())
}

fn rtd_a(s1: f64, s2: f64) -> Option<f64> {
    let den = 1.0 - s1 - s2;
    (den > 0.0).then(|| ((0.5 - s1) / den).clamp(0.0, 1.0))
}

/// `f` values are `[f1(s1), f2(s1), f1(s2), f2(s2)]`.
fn rtd_pentagon(f: [f64; 4], c1: f64, c2: f64, s1: f64, s2: f64) -> Option<(Pentagon, f64)> {
    let a = rtd_a(s1, s2)?;
    let [f1s1, f2s1, f1s2, f2s2] = f;
    let i1 = c1 - f1s2;
    let i2 = c2 - f2s1;
    let iw1 = a * f1s2 + (1.0 - a) * f1s1;
    let iw2 = a * f2s2 + (1.0 - a) * f2s1;
    Some((
        Pentagon {
            r1_max: iw1 + a * i1,
            r2_max: iw2 + (1.0 - a) * i2,
            sum_max: iw1.min(iw2) + a * i1 + (1.0 - a) * i2,
        },
        a,
    ))
}

/// Grid maximisation of `obj(s1, s2)` over `[0, 1/2]^2` followed by local
/// refinement around the best point. Ties go to the lowest grid index.
fn maximise2<F>(grid: &[f64], on_grid: F, off_grid: &(dyn Fn(f64, f64) -> f64 + Sync), exec: Exec) -> (f64, f64, f64)
where
    F: Fn(usize, usize) -> f64 + Sync,
{
    let n = grid.len();
    let rows = exec.map(n, |i| {
        let mut best = (f64::NEG_INFINITY, 0usize);
        for j in 0..n {
            let v = on_grid(i, j);
            if v > best.0 {
                best = (v, j);
            }
        }
        best
    });
    let (mut bv, mut b1, mut b2) = (f64::NEG_INFINITY, 0.0, 0.0);
    for (i, &(v, j)) in rows.iter().enumerate() {
        if v > bv {
            (bv, b1, b2) = (v, grid[i], grid[j]);
        }
    }

    let mut h = grid[1] - grid[0];
    for _ in 0..12 {
        let pts1 = linspace((b1 - h).max(0.0), (b1 + h).min(0.5), 17);
        let pts2 = linspace((b2 - h).max(0.0), (b2 + h).min(0.5), 17);
        for &x in &pts1 {
            for &y in &pts2 {
                let v = off_grid(x, y);
                if v > bv {
                    (bv, b1, b2) = (v, x, y);
                }
            }
        }
        h /= 4.0;
    }
    (bv, b1, b2)
}

/// Maximum RTD sum rate, equal to the maximum sum rate of Marton's inner
/// bound for binary inputs. Never below `max(C1, C2)`.
pub fn rtd_max_sum_rate(p1: &FProfile, p2: &FProfile, tol: &Tolerance) -> Result<SumRate> {
    rtd_max_sum_rate_with(p1, p2, tol, Exec::default())
}

pub fn rtd_max_sum_rate_with(p1: &FProfile, p2: &FProfile, tol: &Tolerance, exec: Exec) -> Result<SumRate> {
    ensure_equal_capacity(&p1.channel, &p2.channel, tol)?;
    ensure_same_grid(p1, p2)?;
    let (c1, c2) = (p1.capacity, p2.capacity);
    let sum = |f1s1: f64, f2s1: f64, f1s2: f64, f2s2: f64, s1: f64, s2: f64| match rtd_a(s1, s2) {
        Some(a) => (c1 + (1.0 - a) * (c2 - c1 + f1s1 - f2s1)).min(c2 + a * (c1 - c2 + f2s2 - f1s2)),
        None => f64::NEG_INFINITY,
    };
    let (g, v1, v2) = (&p1.grid, &p1.values, &p2.values);
    let on_grid = |i: usize, j: usize| sum(v1[i], v2[i], v1[j], v2[j], g[i], g[j]);
    let off_grid = |s1: f64, s2: f64| sum(p1.eval(s1), p2.eval(s1), p1.eval(s2), p2.eval(s2), s1, s2);
    let (value, s1, s2) = maximise2(g, on_grid, &off_grid, exec);

    let baseline = c1.max(c2);
    Ok(if value > baseline {
        SumRate {
            value,
            generator: Generator::Rtd {
                s1,
                s2,
                a: rtd_a(s1, s2).unwrap_or(0.5),
            },
        }
    } else {
        SumRate {
            value: baseline,
            generator: Generator::TimeShare {
                alpha: if c1 >= c2 { 1.0 } else { 0.0 },
            },
        }
    })
}

/// RTD frontier from a weighted sweep over the grid polytopes.
pub fn rtd_region(p1: &FProfile, p2: &FProfile, weights: usize, tol: &Tolerance) -> Result<RateRegion> {
    let best = rtd_max_sum_rate(p1, p2, tol)?;
    let (c1, c2) = (p1.capacity, p2.capacity);
    let (g, v1, v2) = (&p1.grid, &p1.values, &p2.values);
    let n = g.len();
    let mut candidates = td_region(c1, c2).frontier;
    for i in 0..n {
        for j in 0..n {
            if let Some((pent, a)) = rtd_pentagon([v1[i], v2[i], v1[j], v2[j]], c1, c2, g[i], g[j]) {
                candidates.extend(pent.vertices(Generator::Rtd { s1: g[i], s2: g[j], a }));
            }
        }
    }
    if let Generator::Rtd { s1, s2, .. } = best.generator {
        let f = [p1.eval(s1), p2.eval(s1), p1.eval(s2), p2.eval(s2)];
        if let Some((pent, a)) = rtd_pentagon(f, c1, c2, s1, s2) {
            candidates.extend(pent.vertices(Generator::Rtd { s1, s2, a }));
        }
    }
    let swept = weighted_sweep(&candidates, weights, Exec::default());
    Ok(RateRegion::from_candidates(Bound::Rtd, swept))
}

fn ob_pentagon(f1s1: f64, f2s1: f64, f1s2: f64, f2s2: f64, c1: f64, c2: f64) -> Pentagon {
    Pentagon {
        r1_max: f1s1,
        r2_max: f2s2,
        sum_max: (f1s1 + c2 - f2s1).min(f2s2 + c1 - f1s2),
    }
}

/// Maximum sum rate of the outer bound.
pub fn ob_max_sum_rate(p1: &FProfile, p2: &FProfile, tol: &Tolerance) -> Result<SumRate> {
    ob_max_sum_rate_with(p1, p2, tol, Exec::default())
}

pub fn ob_max_sum_rate_with(p1: &FProfile, p2: &FProfile, tol: &Tolerance, exec: Exec) -> Result<SumRate> {
    ensure_equal_capacity(&p1.channel, &p2.channel, tol)?;
    ensure_same_grid(p1, p2)?;
    let (c1, c2) = (p1.capacity, p2.capacity);
    let (g, v1, v2) = (&p1.grid, &p1.values, &p2.values);
    let on_grid = |i: usize, j: usize| ob_pentagon(v1[i], v2[i], v1[j], v2[j], c1, c2).max_sum();
    let off_grid = |s1: f64, s2: f64| {
        ob_pentagon(p1.eval(s1), p2.eval(s1), p1.eval(s2), p2.eval(s2), c1, c2).max_sum()
    };
    let (value, s1, s2) = maximise2(g, on_grid, &off_grid, exec);
    Ok(SumRate {
        value,
        generator: Generator::OuterBound { s1, s2 },
    })
}

/// Outer-bound frontier from a weighted sweep with `weights` weights.
pub fn ob_region(p1: &FProfile, p2: &FProfile, weights: usize, tol: &Tolerance) -> Result<RateRegion> {
    ob_region_with(p1, p2, weights, tol, Exec::default())
}

pub fn ob_region_with(p1: &FProfile, p2: &FProfile, weights: usize, tol: &Tolerance, exec: Exec) -> Result<RateRegion> {
    let best = ob_max_sum_rate_with(p1, p2, tol, exec)?;
    let (c1, c2) = (p1.capacity, p2.capacity);
    let (g, v1, v2) = (&p1.grid, &p1.values, &p2.values);
    let n = g.len();
    let mut candidates: Vec<RatePoint> = exec
        .map(n, |i| {
            let mut out = Vec::with_capacity(4 * n);
            for j in 0..n {
                let pent = ob_pentagon(v1[i], v2[i], v1[j], v2[j], c1, c2);
                out.extend(pent.vertices(Generator::OuterBound { s1: g[i], s2: g[j] }));
            }
            out
        })
        .into_iter()
        .flatten()
        .collect();
    if let Generator::OuterBound { s1, s2 } = best.generator {
        let pent = ob_pentagon(p1.eval(s1), p2.eval(s1), p1.eval(s2), p2.eval(s2), c1, c2);
        candidates.extend(pent.vertices(best.generator));
    }
    let swept = weighted_sweep(&candidates, weights, exec);
    Ok(RateRegion::from_candidates(Bound::OuterBound, swept))
}

/// One of the five equivalent conditions, with the quantity that decides it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Predicate {
    pub holds: bool,
    /// The predicate holds when this exceeds `strict_margin`.
    pub margin: f64,
}

/// The five conditions: (a) the channels are not more-capable comparable,
/// (b) OB is strictly larger than TD, (c) some `s1` in `I`, `s2` in `J` have
/// `f1(s1) + f2(s2) > C`, (d) RTD is strictly larger than TD and (e) OB is
/// strictly larger than RTD. Strictness is a sum-rate gap above
/// `strict_margin`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EquivalenceReport {
    pub capacity: f64,
    pub incomparable: Predicate,
    pub ob_exceeds_td: Predicate,
    pub crossing_sum: Predicate,
    pub rtd_exceeds_td: Predicate,
    pub ob_exceeds_rtd: Predicate,
    /// `(s1, s2)` maximising `f1(s1) + f2(s2)` over `I x J`.
    pub crossing_witness: Option<(f64, f64)>,
    pub td_sum: f64,
    pub rtd_sum: SumRate,
    pub ob_sum: SumRate,
    /// The predicates disagree, but only because some margin sits near
    /// `strict_margin`.
    pub marginal: bool,
}

impl EquivalenceReport {
    pub fn predicates(&self) -> [(&'static str, Predicate); 5] {
        [
            ("incomparable", self.incomparable),
            ("ob_exceeds_td", self.ob_exceeds_td),
            ("crossing_sum", self.crossing_sum),
            ("rtd_exceeds_td", self.rtd_exceeds_td),
            ("ob_exceeds_rtd", self.ob_exceeds_rtd),
        ]
    }

    pub fn all_agree(&self) -> bool {
        let p = self.predicates();
        p.iter().all(|(_, q)| q.holds == p[0].1.holds)
    }

    pub fn all_true(&self) -> bool {
        self.predicates().iter().all(|(_, q)| q.holds)
    }

    pub fn all_false(&self) -> bool {
        self.predicates().iter().all(|(_, q)| !q.holds)
    }
}

/// Disagreement is a violation when the pair is clearly incomparable
/// (incomparability margin above this many `strict_margin`s) or clearly
/// comparable while some sum-rate gap exceeds that level.
pub const VIOLATION_FACTOR: f64 = 64.0;

pub fn equivalence_report(ch1: &BisoChannel, ch2: &BisoChannel, grid_n: usize, tol: &Tolerance) -> Result<EquivalenceReport> {
    let capacity = ensure_equal_capacity(ch1, ch2, tol)?;
    let m = tol.strict_margin;
    let pred = |margin: f64| Predicate {
        holds: margin > m,
        margin,
    };

    let mc = more_capable_numeric(ch1, ch2, DEFAULT_GRID.max(grid_n), tol)?;
    let (max_gap, min_gap) = (
        mc.max_gap.map_or(0.0, |w| w.gap),
        mc.min_gap.map_or(0.0, |w| w.gap),
    );
    let incomparable = Predicate {
        holds: mc.relation == Relation::Incomparable,
        margin: max_gap.min(-min_gap),
    };

    let p1 = f_profile(ch1, grid_n);
    let p2 = f_profile(ch2, grid_n);
    let td_sum = p1.capacity.max(p2.capacity);
    let rtd_sum = rtd_max_sum_rate(&p1, &p2, tol)?;
    let ob_sum = ob_max_sum_rate(&p1, &p2, tol)?;

    let diff: Vec<f64> = p1.values.iter().zip(&p2.values).map(|(a, b)| a - b).collect();
    let mut crossing = f64::NEG_INFINITY;
    let mut crossing_witness = None;
    for (i, &di) in diff.iter().enumerate() {
        if di <= m {
            continue;
        }
        for (j, &dj) in diff.iter().enumerate() {
            if dj >= -m {
                continue;
            }
            let v = p1.values[i] + p2.values[j] - capacity;
            if v > crossing {
                crossing = v;
                crossing_witness = Some((p1.grid[i], p2.grid[j]));
            }
        }
    }

    let report = EquivalenceReport {
        capacity,
        incomparable,
        ob_exceeds_td: pred(ob_sum.value - td_sum),
        crossing_sum: pred(crossing),
        rtd_exceeds_td: pred(rtd_sum.value - td_sum),
        ob_exceeds_rtd: pred(ob_sum.value - rtd_sum.value),
        crossing_witness,
        td_sum,
        rtd_sum,
        ob_sum,
        marginal: false,
    };
    if report.all_agree() {
        return Ok(report);
    }
    let clear = VIOLATION_FACTOR * m;
    let preds = report.predicates();
    let violated = if report.incomparable.margin > clear {
        true
    } else {
        !report.incomparable.holds && preds.iter().any(|(_, p)| p.holds && p.margin > clear)
    };
    if violated {
        let held: Vec<_> = preds.iter().filter(|(_, p)| p.holds).map(|(n, _)| *n).collect();
        let failed: Vec<_> = preds.iter().filter(|(_, p)| !p.holds).map(|(n, _)| *n).collect();
        return Err(Error::EquivalenceViolation(format!(
            "{held:?} hold but {failed:?} do not: {report:?}"
        )));
    }
    Ok(EquivalenceReport {
        marginal: true,
        ..report
    })
}

/// Sum rates before and after replacing the second receiver by the erasure
/// channel of the same capacity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DemoReport {
    pub capacity: f64,
    pub sum_pair: SumRate,
    pub sum_with_bec: SumRate,
    pub shrinkage: f64,
}

/// For an incomparable equal-capacity pair, compares the maximum sum rate
/// of `(ch1, ch2)` with that of `(ch1, BEC(C))`; the erasure channel is more
/// capable than `ch2` yet the pair becomes comparable and the sum rate
/// drops to `C`.
pub fn better_receiver_demo(ch1: &BisoChannel, ch2: &BisoChannel, grid_n: usize, tol: &Tolerance) -> Result<DemoReport> {
    let capacity = ensure_equal_capacity(ch1, ch2, tol)?;
    let v = more_capable_numeric(ch1, ch2, DEFAULT_GRID, tol)?;
    if v.relation != Relation::Incomparable {
        return Err(Error::Precondition(format!(
            "the pair must be incomparable, got {}",
            v.kind()
        )));
    }
    let bec = BisoChannel::bec_with_capacity(ch1.capacity())?;
    let p1 = f_profile(ch1, grid_n);
    let sum_pair = rtd_max_sum_rate(&p1, &f_profile(ch2, grid_n), tol)?;
    let sum_with_bec = rtd_max_sum_rate(&p1, &f_profile(&bec, grid_n), tol)?;
    Ok(DemoReport {
        capacity,
        sum_pair,
        sum_with_bec,
        shrinkage: sum_pair.value - sum_with_bec.value,
    })
}

/// Writes the frontier as CSV with columns `bound,r1,r2,s,s1,s2,a,alpha`;
/// parameters that do not apply are left empty.
pub fn write_region_csv<W: Write>(region: &RateRegion, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["bound", "r1", "r2", "s", "s1", "s2", "a", "alpha"])?;
    let f = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
    for p in &region.frontier {
        let (s, s1, s2, a, alpha) = match p.generator {
            Generator::TimeShare { alpha } => (None, None, None, None, Some(alpha)),
            Generator::Superposition { s } => (Some(s), None, None, None, None),
            Generator::Rtd { s1, s2, a } => (None, Some(s1), Some(s2), Some(a), None),
            Generator::OuterBound { s1, s2 } => (None, Some(s1), Some(s2), None, None),
        };
        w.write_record([
            region.bound.name().to_string(),
            p.r1.to_string(),
            p.r2.to_string(),
            f(s),
            f(s1),
            f(s2),
            f(a),
            f(alpha),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binmath::h;
    use crate::sample::incomparable_pair;
    use approx::assert_abs_diff_eq;

    const GRID: usize = 129;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn some_f() -> BisoChannel {
        BisoChannel::from_pairs([(0.35, 0.05), (0.2, 0.2), (0.12, 0.08)]).unwrap()
    }

    fn assert_pareto(r: &RateRegion) {
        for w in r.frontier.windows(2) {
            assert!(w[0].r1 < w[1].r1 && w[0].r2 > w[1].r2, "{:?}", r.frontier);
        }
        let best = r.frontier.iter().map(RatePoint::sum).fold(0.0, f64::max);
        assert_abs_diff_eq!(best, r.max_sum_rate, epsilon = 1e-12);
    }

    #[test]
    fn profiles_of_bsc_and_bec() {
        let p = f_profile(&BisoChannel::bsc(0.1).unwrap(), 101);
        for (&s, &v) in p.grid.iter().zip(&p.values) {
            let s_p = s * 0.9 + 0.1 * (1.0 - s);
            assert_abs_diff_eq!(v, 1.0 - h(s_p), epsilon = 1e-14);
        }
        let p = f_profile(&BisoChannel::bec(0.3).unwrap(), 101);
        for (&s, &v) in p.grid.iter().zip(&p.values) {
            assert_abs_diff_eq!(v, 0.7 * (1.0 - h(s)), epsilon = 1e-14);
        }
        assert!(p.is_consistent(1e-9));
        assert!(f_profile(&some_f(), 64).is_consistent(1e-9));
    }

    #[test]
    fn time_division() {
        let r = td_region(0.3, 0.6);
        assert_eq!(r.frontier.len(), 2);
        assert_eq!((r.frontier[0].r1, r.frontier[0].r2), (0.0, 0.6));
        assert_eq!((r.frontier[1].r1, r.frontier[1].r2), (0.3, 0.0));
        assert_eq!(r.max_sum_rate, 0.6);
        assert_eq!(td_region(1.0, 1.0).max_sum_rate, 1.0);
    }

    #[test]
    fn pareto_trims_dominated_points() {
        let g = Generator::TimeShare { alpha: 0.0 };
        let p = |r1, r2| RatePoint { r1, r2, generator: g };
        let f = pareto_frontier(vec![p(0.0, 1.0), p(0.5, 1.0), p(0.2, 0.2), p(1.0, 0.0), p(0.6, 0.9)]);
        let xy: Vec<_> = f.iter().map(|q| (q.r1, q.r2)).collect();
        assert_eq!(xy, vec![(0.5, 1.0), (0.6, 0.9), (1.0, 0.0)]);
    }

    #[test]
    fn superposition_endpoints_and_self() {
        let f = some_f();
        let c = f.capacity();
        let r = superposition_region(&f, &f, Dominant::First, GRID);
        assert_pareto(&r);
        assert_abs_diff_eq!(r.max_sum_rate, c, epsilon = 1e-12);
        let bsc = BisoChannel::bsc_with_capacity(c).unwrap();
        let r = superposition_region(&f, &bsc, Dominant::Second, GRID);
        assert_pareto(&r);
        assert_abs_diff_eq!(r.frontier[0].r1, 0.0);
        assert_abs_diff_eq!(r.frontier.last().unwrap().r2, 0.0);
        assert_abs_diff_eq!(r.max_sum_rate, c, epsilon = 1e-12);
    }

    #[test]
    fn comparable_pairs_collapse_to_time_division() {
        let f = some_f();
        let c = f.capacity();
        for other in [
            BisoChannel::bsc_with_capacity(c).unwrap(),
            BisoChannel::bec_with_capacity(c).unwrap(),
            f.clone(),
        ] {
            let p1 = f_profile(&f, GRID);
            let p2 = f_profile(&other, GRID);
            assert_abs_diff_eq!(rtd_max_sum_rate(&p1, &p2, &tol()).unwrap().value, c, epsilon = 1e-12);
            assert_abs_diff_eq!(ob_max_sum_rate(&p1, &p2, &tol()).unwrap().value, c, epsilon = 1e-12);
            let r = ob_region(&p1, &p2, 64, &tol()).unwrap();
            assert_pareto(&r);
            assert_abs_diff_eq!(r.max_sum_rate, c, epsilon = 1e-12);
        }
    }

    #[test]
    fn crossing_pair_is_strictly_nested() {
        let (a, b) = incomparable_pair();
        let p1 = f_profile(&a, GRID);
        let p2 = f_profile(&b, GRID);
        let c = a.capacity().max(b.capacity());
        let rtd = rtd_max_sum_rate(&p1, &p2, &tol()).unwrap();
        let ob = ob_max_sum_rate(&p1, &p2, &tol()).unwrap();
        assert!(rtd.value > c + 1e-4, "{rtd:?}");
        assert!(ob.value > rtd.value + 1e-4, "{ob:?}");
        let Generator::Rtd { s1, s2, a: mix } = rtd.generator else {
            panic!("{rtd:?}");
        };
        assert_abs_diff_eq!(mix * (1.0 - s2) + (1.0 - mix) * s1, 0.5, epsilon = 1e-14);

        let r = rtd_region(&p1, &p2, 128, &tol()).unwrap();
        assert_pareto(&r);
        assert_abs_diff_eq!(r.max_sum_rate, rtd.value, epsilon = 1e-12);
        let r = ob_region(&p1, &p2, 128, &tol()).unwrap();
        assert_pareto(&r);
        assert_abs_diff_eq!(r.max_sum_rate, ob.value, epsilon = 1e-12);
    }

    #[test]
    fn sum_rates_need_equal_capacity() {
        let p1 = f_profile(&BisoChannel::bsc(0.1).unwrap(), GRID);
        let p2 = f_profile(&BisoChannel::bsc(0.2).unwrap(), GRID);
        assert!(matches!(rtd_max_sum_rate(&p1, &p2, &tol()), Err(Error::CapacityMismatch { .. })));
        assert!(matches!(ob_region(&p1, &p2, 16, &tol()), Err(Error::CapacityMismatch { .. })));
    }

    #[test]
    fn equivalence_on_known_pairs() {
        let (a, b) = incomparable_pair();
        let r = equivalence_report(&a, &b, GRID, &tol()).unwrap();
        assert!(r.all_true(), "{r:?}");
        let (s1, s2) = r.crossing_witness.unwrap();
        assert!(a.f(s1) + b.f(s2) > r.capacity);

        let f = some_f();
        let bec = BisoChannel::bec_with_capacity(f.capacity()).unwrap();
        let r = equivalence_report(&f, &bec, GRID, &tol()).unwrap();
        assert!(r.all_false(), "{r:?}");
        let r = equivalence_report(&f, &f, GRID, &tol()).unwrap();
        assert!(r.all_false() && !r.marginal, "{r:?}");
    }

    #[test]
    fn demo_on_crossing_pair() {
        let (a, b) = incomparable_pair();
        for (x, y) in [(&a, &b), (&b, &a)] {
            let d = better_receiver_demo(x, y, GRID, &tol()).unwrap();
            assert!(d.sum_pair.value > d.capacity + 1e-5);
            assert_abs_diff_eq!(d.sum_with_bec.value, x.capacity(), epsilon = 1e-12);
        }
        let f = some_f();
        let bsc = BisoChannel::bsc_with_capacity(f.capacity()).unwrap();
        assert!(matches!(better_receiver_demo(&f, &bsc, GRID, &tol()), Err(Error::Precondition(_))));
    }

    #[test]
    fn csv_export_round_trips() {
        let (a, b) = incomparable_pair();
        let r = ob_region(&f_profile(&a, 65), &f_profile(&b, 65), 64, &tol()).unwrap();
        let mut buf = Vec::new();
        write_region_csv(&r, &mut buf).unwrap();
        let mut rd = csv::Reader::from_reader(buf.as_slice());
        let rows: Vec<csv::StringRecord> = rd.records().map(|x| x.unwrap()).collect();
        assert_eq!(rows.len(), r.frontier.len());
        for (row, p) in rows.iter().zip(&r.frontier) {
            assert_eq!(&row[0], "ob");
            assert_eq!(row[1].parse::<f64>().unwrap(), p.r1);
            assert_eq!(row[2].parse::<f64>().unwrap(), p.r2);
            assert!(row[3].is_empty() && row[7].is_empty());
        }
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let (a, b) = incomparable_pair();
        let (p1, p2) = (f_profile(&a, 65), f_profile(&b, 65));
        let s = ob_max_sum_rate_with(&p1, &p2, &tol(), Exec::Sequential).unwrap();
        let p = ob_max_sum_rate_with(&p1, &p2, &tol(), Exec::Parallel).unwrap();
        assert_eq!(s, p);
    }
}
