//! More-capable and essentially-less-noisy comparisons.
//!
//! `ch1` is more capable than `ch2` when `I(X;Y1) >= I(X;Y2)` for every input
//! distribution. For BISO channels it suffices to look at `P(X=0)` in
//! `[0, 1/2]`. Two routes are offered:
//!
//! * [`more_capable_sufficient`]: Lorenz-curve domination between
//!   equal-capacity channels. Sound but inconclusive when the curves cross.
//! * [`more_capable_numeric`]: a grid scan of the gap
//!   `delta(x) = I(X;Y1) - I(X;Y2)` with trisection refinement at every local
//!   extremum. This is a numeric decision procedure, not a proof.
//!
//! Between equal-capacity BISO channels the essentially-less-noisy order is
//! the more-capable order reversed.

use serde::Serialize;

use crate::binmath::Tolerance;
use crate::channel::{ensure_equal_capacity, BisoChannel};
use crate::error::{Error, Result};
use crate::lorenz::{dominates, lorenz};
use crate::par::{linspace, Exec};

pub const DEFAULT_GRID: usize = 1025;
pub const MIN_GRID: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Order {
    MoreCapable,
    EssentiallyLessNoisy,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Relation {
    FirstDominates,
    SecondDominates,
    Equivalent,
    Incomparable,
    /// One side of the gap is violated by more than `abs_eps` but by less than
    /// `strict_margin`: too small to call a crossing, too large to ignore.
    Indeterminate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Method {
    LorenzSufficient,
    NumericGrid,
}

/// An input bias together with the gap measured there.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub bias: f64,
    pub gap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparabilityVerdict {
    pub order: Order,
    pub relation: Relation,
    /// Where the first channel is strictly better (gap > strict_margin).
    pub witness_pro: Option<Witness>,
    /// Where the second channel is strictly better (gap < -strict_margin).
    pub witness_con: Option<Witness>,
    /// Extremes of the gap, present for numeric verdicts.
    pub max_gap: Option<Witness>,
    pub min_gap: Option<Witness>,
    pub method: Method,
}

impl ComparabilityVerdict {
    /// Name of the verdict, e.g. `FirstMoreCapable` or `SecondEssentiallyLessNoisy`.
    pub fn kind(&self) -> &'static str {
        use Order::*;
        use Relation::*;
        match (self.order, self.relation) {
            (MoreCapable, FirstDominates) => "FirstMoreCapable",
            (MoreCapable, SecondDominates) => "SecondMoreCapable",
            (EssentiallyLessNoisy, FirstDominates) => "FirstEssentiallyLessNoisy",
            (EssentiallyLessNoisy, SecondDominates) => "SecondEssentiallyLessNoisy",
            (_, Equivalent) => "Equivalent",
            (_, Incomparable) => "Incomparable",
            (_, Indeterminate) => "Indeterminate",
        }
    }

    pub fn is_comparable(&self) -> bool {
        matches!(
            self.relation,
            Relation::FirstDominates | Relation::SecondDominates | Relation::Equivalent
        )
    }

    /// One-line `key=value` record.
    pub fn record(&self) -> String {
        let w = |o: Option<Witness>| match o {
            Some(w) => format!("{}@{}", w.gap, w.bias),
            None => "-".to_string(),
        };
        format!(
            "kind={} method={:?} witness_pro={} witness_con={} max_gap={} min_gap={}",
            self.kind(),
            self.method,
            w(self.witness_pro),
            w(self.witness_con),
            w(self.max_gap),
            w(self.min_gap)
        )
    }
}

/// Lorenz-curve test: `Some(true)` if `ch1`'s curve lies below `ch2`'s
/// (so `ch1` is more capable), `Some(false)` for the reverse, `None` when the
/// curves cross. Equal curves give `Some(true)`.
pub fn more_capable_sufficient(
    ch1: &BisoChannel,
    ch2: &BisoChannel,
    tol: &Tolerance,
) -> Result<Option<bool>> {
    ensure_equal_capacity(ch1, ch2, tol)?;
    let (l1, l2) = (lorenz(ch1), lorenz(ch2));
    Ok(if dominates(&l1, &l2, tol.abs_eps) {
        Some(true)
    } else if dominates(&l2, &l1, tol.abs_eps) {
        Some(false)
    } else {
        None
    })
}

/// Extremes of `delta(x) = mi1(x) - mi2(x)` over `[0, 1/2]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GapScan {
    pub max: Witness,
    pub min: Witness,
}

/// Scans `delta` on a uniform grid, then refines each local grid extremum by
/// trisection inside its two neighbouring cells.
pub fn gap_scan(ch1: &BisoChannel, ch2: &BisoChannel, grid_n: usize, exec: Exec) -> GapScan {
    let delta = |x: f64| ch1.mi(x) - ch2.mi(x);
    let grid = linspace(0.0, 0.5, grid_n.max(3));
    let vals = exec.map(grid.len(), |i| delta(grid[i]));

    let n = grid.len();
    let mut candidates = Vec::new();
    for i in 0..n {
        let left = if i > 0 { vals[i - 1] } else { f64::NEG_INFINITY };
        let right = if i + 1 < n { vals[i + 1] } else { f64::NEG_INFINITY };
        if vals[i] >= left && vals[i] >= right {
            candidates.push((i, true));
        }
        let left = if i > 0 { vals[i - 1] } else { f64::INFINITY };
        let right = if i + 1 < n { vals[i + 1] } else { f64::INFINITY };
        if vals[i] <= left && vals[i] <= right {
            candidates.push((i, false));
        }
    }

    let refined = exec.map(candidates.len(), |c| {
        let (i, maximise) = candidates[c];
        let lo = grid[i.saturating_sub(1)];
        let hi = grid[(i + 1).min(n - 1)];
        let sign = if maximise { 1.0 } else { -1.0 };
        let (x, v) = trisect(|x| sign * delta(x), lo, hi);
        let best = if sign * vals[i] >= v {
            Witness { bias: grid[i], gap: vals[i] }
        } else {
            Witness { bias: x, gap: sign * v }
        };
        (maximise, best)
    });

    let mut max = Witness { bias: grid[0], gap: vals[0] };
    let mut min = max;
    for (maximise, w) in refined {
        if maximise && w.gap > max.gap {
            max = w;
        }
        if !maximise && w.gap < min.gap {
            min = w;
        }
    }
    GapScan { max, min }
}

/// Ternary search for the maximum of `f` on `[lo, hi]`.
pub(crate) fn trisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> (f64, f64) {
    for _ in 0..80 {
        if hi - lo <= 1e-14 {
            break;
        }
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if f(m1) < f(m2) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

fn classify(order: Order, scan: GapScan, tol: &Tolerance) -> ComparabilityVerdict {
    let pro = (scan.max.gap > tol.strict_margin).then_some(scan.max);
    let con = (scan.min.gap < -tol.strict_margin).then_some(scan.min);
    let lower_ok = scan.min.gap >= -tol.abs_eps;
    let upper_ok = scan.max.gap <= tol.abs_eps;
    let relation = if pro.is_some() && con.is_some() {
        Relation::Incomparable
    } else if lower_ok && upper_ok {
        Relation::Equivalent
    } else if lower_ok {
        Relation::FirstDominates
    } else if upper_ok {
        Relation::SecondDominates
    } else {
        Relation::Indeterminate
    };
    ComparabilityVerdict {
        order,
        relation,
        witness_pro: pro,
        witness_con: con,
        max_gap: Some(scan.max),
        min_gap: Some(scan.min),
        method: Method::NumericGrid,
    }
}

/// Numeric more-capable verdict from a gap scan with `grid_n` points.
pub fn more_capable_numeric(
    ch1: &BisoChannel,
    ch2: &BisoChannel,
    grid_n: usize,
    tol: &Tolerance,
) -> Result<ComparabilityVerdict> {
    more_capable_numeric_with(ch1, ch2, grid_n, tol, Exec::default())
}

pub fn more_capable_numeric_with(
    ch1: &BisoChannel,
    ch2: &BisoChannel,
    grid_n: usize,
    tol: &Tolerance,
    exec: Exec,
) -> Result<ComparabilityVerdict> {
    if grid_n < MIN_GRID {
        return Err(Error::Precondition(format!(
            "grid of {grid_n} points is below the minimum of {MIN_GRID}"
        )));
    }
    Ok(classify(Order::MoreCapable, gap_scan(ch1, ch2, grid_n, exec), tol))
}

/// Verdict from the Lorenz test alone, when it is conclusive.
pub fn more_capable_lorenz_verdict(
    ch1: &BisoChannel,
    ch2: &BisoChannel,
    tol: &Tolerance,
) -> Result<Option<ComparabilityVerdict>> {
    let (l1, l2) = (lorenz(ch1), lorenz(ch2));
    ensure_equal_capacity(ch1, ch2, tol)?;
    let below = dominates(&l1, &l2, tol.abs_eps);
    let above = dominates(&l2, &l1, tol.abs_eps);
    let relation = match (below, above) {
        (true, true) => Relation::Equivalent,
        (true, false) => Relation::FirstDominates,
        (false, true) => Relation::SecondDominates,
        (false, false) => return Ok(None),
    };
    Ok(Some(ComparabilityVerdict {
        order: Order::MoreCapable,
        relation,
        witness_pro: None,
        witness_con: None,
        max_gap: None,
        min_gap: None,
        method: Method::LorenzSufficient,
    }))
}

/// Essentially-less-noisy verdict for equal-capacity channels: `ch1`
/// dominates exactly when `ch2` is more capable than `ch1`. Witnesses are
/// reported as `I(U;Y1) - I(U;Y2)` for `U -> X ~ BSC(s)`, which is the
/// negated mutual-information gap.
pub fn essentially_less_noisy_equal_cap(
    ch1: &BisoChannel,
    ch2: &BisoChannel,
    grid_n: usize,
    tol: &Tolerance,
) -> Result<ComparabilityVerdict> {
    ensure_equal_capacity(ch1, ch2, tol)?;
    let mc = more_capable_numeric(ch1, ch2, grid_n, tol)?;
    let negate = |w: Option<Witness>| w.map(|w| Witness { bias: w.bias, gap: -w.gap });
    let relation = match mc.relation {
        Relation::FirstDominates => Relation::SecondDominates,
        Relation::SecondDominates => Relation::FirstDominates,
        other => other,
    };
    Ok(ComparabilityVerdict {
        order: Order::EssentiallyLessNoisy,
        relation,
        witness_pro: negate(mc.witness_con),
        witness_con: negate(mc.witness_pro),
        max_gap: negate(mc.min_gap),
        min_gap: negate(mc.max_gap),
        method: mc.method,
    })
}

/// Closed grid interval `[lo, hi]` inside `[0, 1/2]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

/// `I = {s : f1(s) - f2(s) > strict_margin}` and `J = {s : f1(s) - f2(s) < -strict_margin}`,
/// each as maximal runs of grid points.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrossingSets {
    pub i_set: Vec<Interval>,
    pub j_set: Vec<Interval>,
}

impl CrossingSets {
    pub fn both_nonempty(&self) -> bool {
        !self.i_set.is_empty() && !self.j_set.is_empty()
    }
}

pub fn crossing_sets(
    ch1: &BisoChannel,
    ch2: &BisoChannel,
    grid_n: usize,
    tol: &Tolerance,
) -> CrossingSets {
    let grid = linspace(0.0, 0.5, grid_n.max(2));
    let diff = Exec::default().map(grid.len(), |i| ch1.f(grid[i]) - ch2.f(grid[i]));
    let runs = |pred: &dyn Fn(f64) -> bool| {
        let mut out = Vec::new();
        let mut start: Option<usize> = None;
        for (i, &d) in diff.iter().enumerate() {
            match (pred(d), start) {
                (true, None) => start = Some(i),
                (false, Some(s)) => {
                    out.push(Interval { lo: grid[s], hi: grid[i - 1] });
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(s) = start {
            out.push(Interval { lo: grid[s], hi: grid[grid.len() - 1] });
        }
        out
    };
    let m = tol.strict_margin;
    CrossingSets {
        i_set: runs(&|d| d > m),
        j_set: runs(&|d| d < -m),
    }
}

/// One verified link of a dominance chain.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainCheck {
    pub name: String,
    pub passed: bool,
    /// Worst observed slack; negative values are violations.
    pub margin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainReport {
    pub capacities: [f64; 3],
    pub checks: Vec<ChainCheck>,
}

impl ChainReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Verifies `BEC(C3) >> F(C2) >> BSC(C1)` and `BSC(C3) >= F(C2) >= BEC(C1)`
/// (essentially less noisy) for `C1 <= C2 <= C3`, where `C2` is the capacity
/// of `f`.
///
/// More-capable links are gap scans (`min delta >= -abs_eps`). The
/// essentially-less-noisy links at equal capacity use the reversal of the
/// more-capable order; across capacities they use explicit degradation: the
/// weaker BSC is the stronger one followed by another BSC, the weaker BEC is
/// the stronger one followed by another BEC. As a direct check, `I(U;Y)` for
/// BSC auxiliaries must be ordered along the second chain too.
pub fn check_chain(
    c1: f64,
    c3: f64,
    f: &BisoChannel,
    grid_n: usize,
    tol: &Tolerance,
) -> Result<ChainReport> {
    let c2 = f.capacity();
    if !(0.0..=1.0).contains(&c1) || !(0.0..=1.0).contains(&c3) || c1 > c2 + tol.capacity_eps || c2 > c3 + tol.capacity_eps {
        return Err(Error::Precondition(format!(
            "capacities must satisfy 0 <= C1 <= C2 <= C3 <= 1, got {c1}, {c2}, {c3}"
        )));
    }
    let c1 = c1.min(c2);
    let c3 = c3.max(c2);
    let bec3 = BisoChannel::bec_with_capacity(c3)?;
    let bec2 = BisoChannel::bec_with_capacity(c2)?;
    let bec1 = BisoChannel::bec_with_capacity(c1)?;
    let bsc3 = BisoChannel::bsc_with_capacity(c3)?;
    let bsc2 = BisoChannel::bsc_with_capacity(c2)?;
    let bsc1 = BisoChannel::bsc_with_capacity(c1)?;

    let mut checks = Vec::new();
    let mut mc = |name: &str, a: &BisoChannel, b: &BisoChannel| {
        let scan = gap_scan(a, b, grid_n, Exec::default());
        checks.push(ChainCheck {
            name: name.to_string(),
            passed: scan.min.gap >= -tol.abs_eps,
            margin: scan.min.gap,
        });
    };
    mc("BEC(C3) >> F(C2)", &bec3, f);
    mc("F(C2) >> BSC(C1)", f, &bsc1);
    mc("BEC(C3) >> BEC(C2)", &bec3, &bec2);
    mc("BEC(C2) >> F(C2)", &bec2, f);
    mc("F(C2) >> BSC(C2)", f, &bsc2);
    mc("BSC(C2) >> BSC(C1)", &bsc2, &bsc1);

    // BSC(p_weak) = BSC(p_strong) followed by BSC(q)
    let (p3, p2) = (bsc3.pairs()[0].neg, bsc2.pairs()[0].neg);
    let q = if p3 >= 0.5 { 0.0 } else { (p2 - p3) / (1.0 - 2.0 * p3) };
    let recomposed = crate::binmath::conv(p3, q);
    checks.push(ChainCheck {
        name: "BSC(C3) degrades to BSC(C2)".into(),
        passed: (-tol.abs_eps..=0.5 + tol.abs_eps).contains(&q) && (recomposed - p2).abs() <= tol.abs_eps,
        margin: q.min(0.5 - q).min(tol.abs_eps - (recomposed - p2).abs()),
    });

    for (name, eln) in [
        ("BSC(C2) >= F(C2)", essentially_less_noisy_equal_cap(&bsc2, f, grid_n, tol)?),
        ("F(C2) >= BEC(C2)", essentially_less_noisy_equal_cap(f, &bec2, grid_n, tol)?),
    ] {
        checks.push(ChainCheck {
            name: name.into(),
            passed: matches!(eln.relation, Relation::FirstDominates | Relation::Equivalent),
            margin: eln.min_gap.map_or(0.0, |w| w.gap),
        });
    }

    // BEC(e1) = BEC(e2) followed by BEC(d) with (1 - e2)(1 - d) = 1 - e1
    let d = if c2 <= 0.0 { 0.0 } else { 1.0 - c1 / c2 };
    checks.push(ChainCheck {
        name: "BEC(C2) degrades to BEC(C1)".into(),
        passed: (-tol.abs_eps..=1.0 + tol.abs_eps).contains(&d),
        margin: d.min(1.0 - d),
    });

    let grid = linspace(0.0, 0.5, grid_n);
    let mut aux = |name: &str, strong: &BisoChannel, weak: &BisoChannel| {
        let slack = Exec::default()
            .map(grid.len(), |i| strong.f(grid[i]) - weak.f(grid[i]))
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        checks.push(ChainCheck {
            name: name.to_string(),
            passed: slack >= -tol.abs_eps,
            margin: slack,
        });
    };
    aux("I(U;BSC(C3)) >= I(U;F(C2))", &bsc3, f);
    aux("I(U;F(C2)) >= I(U;BEC(C1))", f, &bec1);

    Ok(ChainReport {
        capacities: [c1, c2, c3],
        checks,
    })
}

/// Receiver that decodes both messages in superposition coding, chosen by
/// the dominance relations that make superposition optimal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Dominant {
    First,
    Second,
}

/// Picks the superposition orientation: the more capable receiver if the pair
/// is more-capable comparable, otherwise the receiver with larger capacity.
/// The second element says which rule decided.
pub fn suggest_dominant(
    ch1: &BisoChannel,
    ch2: &BisoChannel,
    grid_n: usize,
    tol: &Tolerance,
) -> Result<(Dominant, &'static str)> {
    let v = more_capable_numeric(ch1, ch2, grid_n, tol)?;
    Ok(match v.relation {
        Relation::FirstDominates | Relation::Equivalent => (Dominant::First, "more capable"),
        Relation::SecondDominates => (Dominant::Second, "more capable"),
        _ if ch2.capacity() > ch1.capacity() => (Dominant::Second, "larger capacity"),
        _ => (Dominant::First, "larger capacity"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::incomparable_pair;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn some_f() -> BisoChannel {
        BisoChannel::from_pairs([(0.35, 0.05), (0.2, 0.2), (0.12, 0.08)]).unwrap()
    }

    #[test]
    fn sufficient_matches_corollaries() {
        let f = some_f();
        let c = f.capacity();
        let bsc = BisoChannel::bsc_with_capacity(c).unwrap();
        let bec = BisoChannel::bec_with_capacity(c).unwrap();
        assert_eq!(more_capable_sufficient(&f, &bsc, &tol()).unwrap(), Some(true));
        assert_eq!(more_capable_sufficient(&bec, &f, &tol()).unwrap(), Some(true));
        assert_eq!(more_capable_sufficient(&bsc, &f, &tol()).unwrap(), Some(false));
    }

    #[test]
    fn sufficient_inconclusive_on_crossing_pair() {
        let (a, b) = incomparable_pair();
        assert_eq!(more_capable_sufficient(&a, &b, &tol()).unwrap(), None);
    }

    #[test]
    fn sufficient_requires_equal_capacity() {
        let a = BisoChannel::bsc(0.1).unwrap();
        let b = BisoChannel::bsc(0.2).unwrap();
        assert!(matches!(
            more_capable_sufficient(&a, &b, &tol()),
            Err(Error::CapacityMismatch { .. })
        ));
    }

    #[test]
    fn numeric_degraded_bscs() {
        let a = BisoChannel::bsc(0.1).unwrap();
        let b = BisoChannel::bsc(0.2).unwrap();
        let v = more_capable_numeric(&a, &b, DEFAULT_GRID, &tol()).unwrap();
        assert_eq!(v.kind(), "FirstMoreCapable");
        let v = more_capable_numeric(&b, &a, DEFAULT_GRID, &tol()).unwrap();
        assert_eq!(v.kind(), "SecondMoreCapable");
    }

    #[test]
    fn numeric_self_equivalent() {
        let f = some_f();
        let v = more_capable_numeric(&f, &f, DEFAULT_GRID, &tol()).unwrap();
        assert_eq!(v.relation, Relation::Equivalent);
        assert!(v.witness_pro.is_none() && v.witness_con.is_none());
    }

    #[test]
    fn numeric_grid_floor() {
        let f = some_f();
        assert!(more_capable_numeric(&f, &f, 10, &tol()).is_err());
    }

    #[test]
    fn numeric_crossing_pair() {
        let (a, b) = incomparable_pair();
        let v = more_capable_numeric(&a, &b, DEFAULT_GRID, &tol()).unwrap();
        assert_eq!(v.relation, Relation::Incomparable);
        let pro = v.witness_pro.unwrap();
        let con = v.witness_con.unwrap();
        assert!(pro.gap > 1e-4 && con.gap < -1e-4);
        // direct re-evaluation at the witnesses
        assert!((a.mi(pro.bias) - b.mi(pro.bias) - pro.gap).abs() < 1e-15);
        assert!((a.mi(con.bias) - b.mi(con.bias) - con.gap).abs() < 1e-15);
    }

    #[test]
    fn refinement_never_worse_than_grid() {
        let (a, b) = incomparable_pair();
        let coarse = gap_scan(&a, &b, 64, Exec::Sequential);
        let grid = linspace(0.0, 0.5, 64);
        let best = grid.iter().map(|&x| a.mi(x) - b.mi(x)).fold(f64::NEG_INFINITY, f64::max);
        assert!(coarse.max.gap >= best);
    }

    #[test]
    fn eln_reverses_mc() {
        let f = some_f();
        let c = f.capacity();
        let bsc = BisoChannel::bsc_with_capacity(c).unwrap();
        let bec = BisoChannel::bec_with_capacity(c).unwrap();
        let v = essentially_less_noisy_equal_cap(&bsc, &f, DEFAULT_GRID, &tol()).unwrap();
        assert_eq!(v.kind(), "FirstEssentiallyLessNoisy");
        let v = essentially_less_noisy_equal_cap(&f, &bec, DEFAULT_GRID, &tol()).unwrap();
        assert_eq!(v.kind(), "FirstEssentiallyLessNoisy");
        let (a, b) = incomparable_pair();
        let v = essentially_less_noisy_equal_cap(&a, &b, DEFAULT_GRID, &tol()).unwrap();
        assert_eq!(v.relation, Relation::Incomparable);
        assert!(essentially_less_noisy_equal_cap(&f, &BisoChannel::bsc(0.0).unwrap(), DEFAULT_GRID, &tol()).is_err());
    }

    #[test]
    fn crossing_sets_cases() {
        let f = some_f();
        let s = crossing_sets(&f, &f, 257, &tol());
        assert!(s.i_set.is_empty() && s.j_set.is_empty());

        let bsc = BisoChannel::bsc_with_capacity(f.capacity()).unwrap();
        let s = crossing_sets(&f, &bsc, 257, &tol());
        assert!(s.i_set.is_empty() || s.j_set.is_empty());

        let (a, b) = incomparable_pair();
        let s = crossing_sets(&a, &b, 257, &tol());
        assert!(s.both_nonempty());
        for set in [&s.i_set, &s.j_set] {
            for w in set.windows(2) {
                assert!(w[0].hi < w[1].lo);
            }
        }
        let overlap = s
            .i_set
            .iter()
            .any(|i| s.j_set.iter().any(|j| i.lo <= j.hi && j.lo <= i.hi));
        assert!(!overlap);
    }

    #[test]
    fn chain_on_bsc_family() {
        let f = BisoChannel::bsc_with_capacity(0.5).unwrap();
        let r = check_chain(0.3, 0.8, &f, 257, &tol()).unwrap();
        assert!(r.all_passed(), "{r:?}");
    }

    #[test]
    fn chain_equal_capacities() {
        let f = some_f();
        let c = f.capacity();
        let r = check_chain(c, c, &f, 257, &tol()).unwrap();
        assert!(r.all_passed(), "{r:?}");
    }

    #[test]
    fn chain_rejects_unordered() {
        let f = some_f();
        assert!(check_chain(0.9, 0.95, &f, 257, &tol()).is_err());
    }

    #[test]
    fn record_mentions_kind() {
        let f = some_f();
        let v = more_capable_numeric(&f, &f, 128, &tol()).unwrap();
        assert!(v.record().starts_with("kind=Equivalent"));
    }
}
