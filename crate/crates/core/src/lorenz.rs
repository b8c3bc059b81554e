//! BISO step curves and their Lorenz curves.
//!
//! Sorting the pair entropies `h(p_k / (p_k + p_{-k}))` in ascending order and
//! laying the pair masses end to end on `[0, 1]` gives a nondecreasing step
//! function `f`. Its integral `F` is convex and piecewise linear with slopes in
//! `[0, 1]`, and `1 - F(1)` is the capacity. Lorenz domination `F <= G` between
//! equal-capacity channels certifies that the first channel is more capable.

use std::io::Write;

use serde::Serialize;

use crate::binmath::{conv, h, hinv};
use crate::channel::{BisoChannel, InputBias};
use crate::error::Result;

/// Breakpoints closer than this are merged.
pub const BREAKPOINT_MERGE_EPS: f64 = 1e-12;

/// Sorted points `0 = t_0 < t_1 < ... < t_N = 1`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Partition(Vec<f64>);

impl Partition {
    /// Sorts the points, merges near-duplicates and pins the ends to 0 and 1.
    pub fn new(mut points: Vec<f64>) -> Self {
        points.retain(|t| t.is_finite());
        points.push(0.0);
        points.push(1.0);
        points.sort_by(f64::total_cmp);
        let mut out: Vec<f64> = Vec::with_capacity(points.len());
        for t in points {
            let t = t.clamp(0.0, 1.0);
            match out.last() {
                Some(&last) if t - last <= BREAKPOINT_MERGE_EPS => {}
                _ => out.push(t),
            }
        }
        // the merge keeps the first of a cluster; make sure the last point is exactly 1
        if let Some(last) = out.last_mut() {
            *last = 1.0;
        }
        Partition(out)
    }

    pub fn points(&self) -> &[f64] {
        &self.0
    }

    /// Number of intervals.
    pub fn len(&self) -> usize {
        self.0.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Sorted union of both partitions' points, duplicates merged.
pub fn common_refinement(a: &Partition, b: &Partition) -> Partition {
    Partition::new(a.0.iter().chain(b.0.iter()).copied().collect())
}

/// The BISO curve: `f(t) = values[k-1]` on `(t_{k-1}, t_k]`, `f(0) = 0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepCurve {
    partition: Partition,
    values: Vec<f64>,
}

impl StepCurve {
    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn eval(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let pts = self.partition.points();
        // first k with t <= t_k
        let k = pts.partition_point(|&p| p < t).clamp(1, self.values.len());
        self.values[k - 1]
    }

    /// Interval lengths `xi_k = t_k - t_{k-1}`.
    pub fn widths(&self) -> Vec<f64> {
        self.partition.0.windows(2).map(|w| w[1] - w[0]).collect()
    }
}

/// `F(t) = int_0^t f`, stored by its values at the breakpoints.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LorenzCurve {
    partition: Partition,
    cumulative: Vec<f64>,
}

impl LorenzCurve {
    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    /// `F(t_k)` for every breakpoint, starting with `F(0) = 0`.
    pub fn cumulative(&self) -> &[f64] {
        &self.cumulative
    }

    pub fn total(&self) -> f64 {
        *self.cumulative.last().unwrap_or(&0.0)
    }

    pub fn slopes(&self) -> Vec<f64> {
        let pts = self.partition.points();
        (1..pts.len())
            .map(|k| (self.cumulative[k] - self.cumulative[k - 1]) / (pts[k] - pts[k - 1]))
            .collect()
    }

    /// Piecewise-linear evaluation.
    pub fn eval(&self, t: f64) -> f64 {
        let pts = self.partition.points();
        let t = t.clamp(0.0, 1.0);
        let k = pts.partition_point(|&p| p < t);
        if k == 0 {
            return self.cumulative[0];
        }
        if k >= pts.len() {
            return self.total();
        }
        let (t0, t1) = (pts[k - 1], pts[k]);
        let (f0, f1) = (self.cumulative[k - 1], self.cumulative[k]);
        f0 + (f1 - f0) * (t - t0) / (t1 - t0)
    }
}

/// Builds the BISO curve. Entropies are stably sorted and equal neighbours
/// merged. Masses are normalised so that the last breakpoint is exactly 1;
/// intervals shorter than twice [`BREAKPOINT_MERGE_EPS`] are folded into a
/// neighbour with a mass-weighted value, which keeps the integral exact.
pub fn biso_curve(ch: &BisoChannel) -> StepCurve {
    let mut parts: Vec<(f64, f64)> = ch.pairs().iter().map(|p| (p.entropy(), p.mass())).collect();
    parts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let total: f64 = parts.iter().map(|p| p.1).sum();

    let tiny = 2.0 * BREAKPOINT_MERGE_EPS;
    let mut merged: Vec<(f64, f64)> = Vec::with_capacity(parts.len());
    for (v, m) in parts {
        let m = m / total;
        match merged.last_mut() {
            Some(last) if (last.0 - v).abs() <= BREAKPOINT_MERGE_EPS || m <= tiny || last.1 <= tiny => {
                let joint = last.1 + m;
                last.0 = (last.0 * last.1 + v * m) / joint;
                last.1 = joint;
            }
            _ => merged.push((v, m)),
        }
    }

    let mut t = 0.0;
    let mut points = vec![0.0];
    let mut values = Vec::with_capacity(merged.len());
    for (v, m) in merged {
        t += m;
        points.push(t);
        values.push(v);
    }
    let partition = Partition::new(points);
    debug_assert_eq!(partition.len(), values.len());
    StepCurve { partition, values }
}

/// Lorenz curve of the channel; `1 - F(1)` is the capacity.
pub fn lorenz(ch: &BisoChannel) -> LorenzCurve {
    lorenz_of_curve(&biso_curve(ch))
}

pub fn lorenz_of_curve(curve: &StepCurve) -> LorenzCurve {
    let mut cumulative = Vec::with_capacity(curve.values.len() + 1);
    cumulative.push(0.0);
    let mut acc = 0.0;
    for (v, w) in curve.values.iter().zip(curve.widths()) {
        acc += v * w;
        cumulative.push(acc);
    }
    LorenzCurve {
        partition: curve.partition.clone(),
        cumulative,
    }
}

/// `I(X;Y) = int_0^1 h(x * h^{-1}(f(t))) dt - F(1)`: the mutual information
/// computed from the curve alone, through the inverse entropy.
pub fn mutual_info_from_curve(curve: &StepCurve, bias: InputBias) -> f64 {
    let x = bias.value();
    curve
        .values
        .iter()
        .zip(curve.widths())
        .map(|(&v, w)| w * (h(conv(x, hinv(v))) - v))
        .sum::<f64>()
        .max(0.0)
}

/// Both step curves evaluated on their common refinement.
#[derive(Clone, Debug, PartialEq)]
pub struct Aligned {
    pub partition: Partition,
    /// `xi_k = t_k - t_{k-1}`.
    pub widths: Vec<f64>,
    pub first: Vec<f64>,
    pub second: Vec<f64>,
}

pub fn align(a: &StepCurve, b: &StepCurve) -> Aligned {
    let partition = common_refinement(&a.partition, &b.partition);
    let pts = partition.points();
    let mut widths = Vec::with_capacity(pts.len() - 1);
    let mut first = Vec::with_capacity(pts.len() - 1);
    let mut second = Vec::with_capacity(pts.len() - 1);
    for w in pts.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        widths.push(w[1] - w[0]);
        first.push(a.eval(mid));
        second.push(b.eval(mid));
    }
    Aligned {
        partition,
        widths,
        first,
        second,
    }
}

/// Largest `F(t) - G(t)` over the common refinement, with its location.
/// By linearity between breakpoints this is the maximum over all of `[0, 1]`.
pub fn max_excess(f: &LorenzCurve, g: &LorenzCurve) -> (f64, f64) {
    let refined = common_refinement(&f.partition, &g.partition);
    refined
        .points()
        .iter()
        .map(|&t| (t, f.eval(t) - g.eval(t)))
        .fold((0.0, f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best })
}

/// `F <= G + abs_eps` at every common-refinement breakpoint, which is
/// equivalent to `F <= G` on all of `[0, 1]`.
pub fn dominates(f: &LorenzCurve, g: &LorenzCurve, abs_eps: f64) -> bool {
    max_excess(f, g).1 <= abs_eps
}

/// Writes `t,f,F` rows at the breakpoints of the channel's curves.
pub fn write_curve_csv<W: Write>(ch: &BisoChannel, out: W) -> Result<()> {
    let curve = biso_curve(ch);
    let lz = lorenz_of_curve(&curve);
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record(["t", "f", "F"])?;
    for (k, &t) in curve.partition.points().iter().enumerate() {
        let f = if k == 0 { 0.0 } else { curve.values[k - 1] };
        wtr.write_record([t.to_string(), f.to_string(), lz.cumulative[k].to_string()])?;
    }
    wtr.flush()?;
    Ok(())
}
