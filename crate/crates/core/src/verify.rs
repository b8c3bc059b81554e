//! The acceptance checks, one function per check, bundled into suites for
//! `biso verify` and the `acceptance` test target.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::binmath::{gerber, h, Tolerance};
use crate::channel::{BisoChannel, InputBias};
use crate::lorenz::lorenz;
use crate::oracle::{best_bsc_objective, best_general_aux, mi_from_joint, symmetrization_check};
use crate::ordering::{check_chain, gap_scan, more_capable_numeric, more_capable_sufficient, Relation, DEFAULT_GRID};
use crate::par::{linspace, Exec};
use crate::regions::{better_receiver_demo, equivalence_report, EquivalenceReport, PROFILE_GRID};
use crate::sample::{equal_capacity_pair, incomparable_pair, random_aux, random_channel, random_ternary};

pub const DEFAULT_SEED: u64 = 20_240_917;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Suite {
    /// Every check with the built-in seed.
    Paper,
    /// Every check with a caller-chosen seed for the random instances.
    Random,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{status}] {:>2} {}: {}", self.id, self.name, self.detail)
    }
}

fn outcome(id: u8, name: &'static str, passed: bool, detail: String) -> CheckOutcome {
    CheckOutcome { id, name, passed, detail }
}

fn rng_for(seed: u64, id: u8) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (u64::from(id) << 56))
}

fn tol() -> Tolerance {
    Tolerance::default()
}

/// Capacities of BSC and BEC against their closed forms and against
/// `1 - F(1)` of the Lorenz curve.
pub fn closed_form_capacities() -> CheckOutcome {
    let mut worst: f64 = 0.0;
    for p in linspace(0.0, 1.0, 100) {
        let bsc = BisoChannel::bsc(p).expect("grid in [0, 1]");
        let bec = BisoChannel::bec(p).expect("grid in [0, 1]");
        worst = worst
            .max((bsc.capacity() - (1.0 - h(p))).abs())
            .max((bec.capacity() - (1.0 - p)).abs())
            .max((bsc.capacity() - (1.0 - lorenz(&bsc).total())).abs())
            .max((bec.capacity() - (1.0 - lorenz(&bec).total())).abs());
    }
    outcome(1, "closed-form capacities", worst <= 1e-10, format!("max error {worst:.3e} over 100 grid values"))
}

/// Pair-form mutual information against direct summation over the joint.
pub fn oracle_equivalence(seed: u64) -> CheckOutcome {
    let mut rng = rng_for(seed, 2);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let ch = random_channel(&mut rng, 6);
        let x: f64 = rng.gen();
        let closed = ch.mutual_info(InputBias::new(x).expect("x in [0, 1]"));
        worst = worst.max((closed - mi_from_joint(&ch, x)).abs());
    }
    outcome(2, "mutual information oracle", worst <= 1e-10, format!("max error {worst:.3e} on 1000 instances"))
}

/// Every channel sits between the BSC and the BEC of its capacity.
pub fn bsc_bec_sandwich(seed: u64) -> CheckOutcome {
    let mut rng = rng_for(seed, 3);
    let (mut lorenz_fail, mut worst) = (0, f64::INFINITY);
    for _ in 0..100 {
        let f = random_channel(&mut rng, 5);
        let c = f.capacity();
        let bsc = BisoChannel::bsc_with_capacity(c).expect("capacity in [0, 1]");
        let bec = BisoChannel::bec_with_capacity(c).expect("capacity in [0, 1]");
        let above = more_capable_sufficient(&f, &bsc, &tol());
        let below = more_capable_sufficient(&bec, &f, &tol());
        if !matches!(above, Ok(Some(true))) || !matches!(below, Ok(Some(true))) {
            lorenz_fail += 1;
        }
        worst = worst
            .min(gap_scan(&f, &bsc, DEFAULT_GRID, Exec::default()).min.gap)
            .min(gap_scan(&bec, &f, DEFAULT_GRID, Exec::default()).min.gap);
    }
    outcome(
        3,
        "BEC(C) >> F >> BSC(C)",
        lorenz_fail == 0 && worst >= -1e-9,
        format!("{lorenz_fail} Lorenz failures, min gap {worst:.3e} over 100 channels"),
    )
}

/// Equal-capacity channels with at most three outputs are always comparable.
pub fn ternary_comparable(seed: u64) -> CheckOutcome {
    let mut rng = rng_for(seed, 4);
    let (mut incomparable, mut indeterminate, mut too_big) = (0, 0, 0);
    for _ in 0..100 {
        let (a, b) = equal_capacity_pair(&mut rng, 0.01, random_ternary);
        if a.raw_output_count() > 3 || b.raw_output_count() > 3 {
            too_big += 1;
        }
        match more_capable_numeric(&a, &b, DEFAULT_GRID, &tol()).map(|v| v.relation) {
            Ok(Relation::Incomparable) => incomparable += 1,
            Ok(Relation::Indeterminate) => indeterminate += 1,
            Ok(_) => {}
            Err(_) => incomparable += 1,
        }
    }
    outcome(
        4,
        "ternary pairs are comparable",
        incomparable == 0 && too_big == 0,
        format!("{incomparable} incomparable, {indeterminate} indeterminate, {too_big} with more than 3 outputs"),
    )
}

/// The bundled crossing pair is incomparable with clear witnesses.
pub fn crossing_pair() -> CheckOutcome {
    let (a, b) = incomparable_pair();
    let gap = (a.capacity() - b.capacity()).abs();
    match more_capable_numeric(&a, &b, DEFAULT_GRID, &tol()) {
        Ok(v) => {
            let (pro, con) = (v.max_gap.expect("numeric"), v.min_gap.expect("numeric"));
            let passed = gap < 1e-4 && pro.gap > 1e-4 && con.gap < -1e-4 && v.relation == Relation::Incomparable;
            outcome(
                5,
                "crossing pair is incomparable",
                passed,
                format!(
                    "|C_A - C_B| = {gap:.3e}, delta = {:+.4e} at x = {:.5}, {:+.4e} at x = {:.5}, verdict {}",
                    pro.gap,
                    pro.bias,
                    con.gap,
                    con.bias,
                    v.kind()
                ),
            )
        }
        Err(e) => outcome(5, "crossing pair is incomparable", false, e.to_string()),
    }
}

fn comparable_partners(f: &BisoChannel) -> [BisoChannel; 2] {
    let c = f.capacity();
    [
        BisoChannel::bec_with_capacity(c).expect("capacity in [0, 1]"),
        BisoChannel::bsc_with_capacity(c).expect("capacity in [0, 1]"),
    ]
}

fn sums_equal(r: &EquivalenceReport, eps: f64) -> bool {
    [r.td_sum, r.rtd_sum.value, r.ob_sum.value]
        .iter()
        .all(|s| (s - r.capacity).abs() <= eps)
}

/// The five conditions agree: all true on the crossing pair, all false on
/// pairs containing a BSC or BEC, and never split on random pairs.
pub fn five_way_equivalence(seed: u64) -> CheckOutcome {
    let name = "five-way equivalence";
    let (a, b) = incomparable_pair();
    let ab = match equivalence_report(&a, &b, PROFILE_GRID, &tol()) {
        Ok(r) => r,
        Err(e) => return outcome(6, name, false, e.to_string()),
    };
    let crossing_ok = ab.all_true()
        && ab.td_sum < ab.rtd_sum.value - 1e-5
        && ab.rtd_sum.value < ab.ob_sum.value - 1e-6;

    let mut rng = rng_for(seed, 6);
    let mut comparable_fail = 0;
    for k in 0..10 {
        let f = if k == 0 {
            BisoChannel::from_pairs([(0.35, 0.05), (0.2, 0.2), (0.12, 0.08)]).expect("valid")
        } else {
            random_channel(&mut rng, 5)
        };
        for g in comparable_partners(&f) {
            match equivalence_report(&f, &g, PROFILE_GRID, &tol()) {
                Ok(r) if r.all_false() && sums_equal(&r, 1e-8) => {}
                _ => comparable_fail += 1,
            }
        }
    }

    let (mut disagree, mut true_count) = (0, 0);
    for _ in 0..100 {
        let (x, y) = equal_capacity_pair(&mut rng, 0.01, |r| random_channel(r, 4));
        match equivalence_report(&x, &y, PROFILE_GRID, &tol()) {
            Ok(r) if r.all_agree() => true_count += usize::from(r.all_true()),
            _ => disagree += 1,
        }
    }
    outcome(
        6,
        name,
        crossing_ok && comparable_fail == 0 && disagree == 0,
        format!(
            "crossing pair: TD {:.10} RTD {:.10} OB {:.10}, all true {}; {comparable_fail} failures on 20 BSC/BEC pairs; {disagree}/100 random pairs disagree ({true_count} all true)",
            ab.td_sum,
            ab.rtd_sum.value,
            ab.ob_sum.value,
            ab.all_true()
        ),
    )
}

/// `TD <= RTD <= OB` for the crossing pair and random equal-capacity pairs.
pub fn nesting(seed: u64) -> CheckOutcome {
    let mut rng = rng_for(seed, 7);
    let (a, b) = incomparable_pair();
    let mut pairs = vec![(a, b)];
    for _ in 0..50 {
        pairs.push(equal_capacity_pair(&mut rng, 0.01, |r| random_channel(r, 4)));
    }
    let eps = tol().abs_eps;
    let mut violations = 0;
    let mut worst = f64::INFINITY;
    let mut errors = Vec::new();
    for (x, y) in &pairs {
        match equivalence_report(x, y, PROFILE_GRID, &tol()) {
            Ok(r) => {
                let slack = (r.rtd_sum.value - r.td_sum).min(r.ob_sum.value - r.rtd_sum.value);
                worst = worst.min(slack);
                if slack < -eps {
                    violations += 1;
                }
            }
            Err(e) => {
                violations += 1;
                errors.push(e.to_string());
            }
        }
    }
    outcome(
        7,
        "TD <= RTD <= OB",
        violations == 0,
        format!("{violations} violations over {} pairs, min slack {worst:.3e}{}", pairs.len(), errors.iter().map(|e| format!("; {e}")).collect::<String>()),
    )
}

/// General auxiliaries with four states never beat the best BSC auxiliary.
pub fn binary_aux_suffices(seed: u64) -> CheckOutcome {
    let mut rng = rng_for(seed, 8);
    let mut worst = f64::NEG_INFINITY;
    for k in 0..20 {
        let (c1, c2) = (random_channel(&mut rng, 4), random_channel(&mut rng, 4));
        for (j, lambda) in [0.0, 1.0, 4.0].into_iter().enumerate() {
            let (general, _) = best_general_aux(&c1, &c2, lambda, 4, 200, seed.wrapping_add(3 * k + j as u64));
            let (bsc, _) = best_bsc_objective(&c1, &c2, lambda);
            worst = worst.max(general - bsc);
        }
    }
    outcome(
        8,
        "binary auxiliaries suffice",
        worst <= 1e-6,
        format!("max (general - BSC) = {worst:.3e} over 20 pairs x 3 weights"),
    )
}

/// The doubling construction never hurts.
pub fn symmetrization(seed: u64) -> CheckOutcome {
    let mut rng = rng_for(seed, 9);
    let t = Tolerance::default().with_abs_eps(1e-9).expect("valid");
    let mut failures = 0;
    for _ in 0..500 {
        let (c1, c2) = (random_channel(&mut rng, 4), random_channel(&mut rng, 4));
        let aux = random_aux(&mut rng, 4);
        if !symmetrization_check(&c1, &c2, &aux, &t).passed {
            failures += 1;
        }
    }
    outcome(9, "symmetrization", failures == 0, format!("{failures} failures on 500 auxiliaries"))
}

/// `y -> h(x * h^{-1}(y))` is convex.
pub fn gerber_convexity() -> CheckOutcome {
    let ys = linspace(0.0, 1.0, 1000);
    let mut worst = f64::INFINITY;
    for k in 1..=9 {
        let x = 0.05 * k as f64;
        let v: Vec<f64> = ys.iter().map(|&y| gerber(x, y).expect("in range")).collect();
        for w in v.windows(3) {
            worst = worst.min(w[0] - 2.0 * w[1] + w[2]);
        }
    }
    outcome(10, "Gerber convexity", worst >= -1e-9, format!("min second difference {worst:.3e}"))
}

/// Replacing a receiver by a more capable one can shrink the sum rate.
pub fn better_receiver() -> CheckOutcome {
    let name = "more capable receiver shrinks the region";
    let (a, b) = incomparable_pair();
    match better_receiver_demo(&a, &b, PROFILE_GRID, &tol()) {
        Ok(d) => {
            let c = a.capacity();
            let passed = d.sum_pair.value > c + 1e-5 && (d.sum_with_bec.value - c).abs() <= 1e-8;
            outcome(
                11,
                name,
                passed,
                format!(
                    "C = {c:.10}, sum(A, B) = {:.10}, sum(A, BEC(C)) = {:.10}",
                    d.sum_pair.value, d.sum_with_bec.value
                ),
            )
        }
        Err(e) => outcome(11, name, false, e.to_string()),
    }
}

/// Random instances of the BEC/F/BSC dominance chains.
pub fn dominance_chains(seed: u64) -> CheckOutcome {
    let mut rng = rng_for(seed, 12);
    let (mut failures, mut worst) = (0, f64::INFINITY);
    for _ in 0..50 {
        let f = loop {
            let f = random_channel(&mut rng, 4);
            if f.capacity() > 0.02 && f.capacity() < 0.98 {
                break f;
            }
        };
        let c2 = f.capacity();
        let c1 = c2 * rng.gen_range(0.05..0.95);
        let c3 = c2 + (1.0 - c2) * rng.gen_range(0.05..0.95);
        match check_chain(c1, c3, &f, DEFAULT_GRID, &tol()) {
            Ok(r) => {
                worst = r.checks.iter().take(6).map(|c| c.margin).fold(worst, f64::min);
                if !r.all_passed() {
                    failures += 1;
                }
            }
            Err(_) => failures += 1,
        }
    }
    outcome(
        12,
        "dominance chains",
        failures == 0 && worst >= -1e-9,
        format!("{failures} failing instances of 50, min more-capable gap {worst:.3e}"),
    )
}

/// Runs all checks in order.
pub fn run_suite(suite: Suite, seed: u64) -> Vec<CheckOutcome> {
    let seed = match suite {
        Suite::Paper => DEFAULT_SEED,
        Suite::Random => seed,
    };
    vec![
        closed_form_capacities(),
        oracle_equivalence(seed),
        bsc_bec_sandwich(seed),
        ternary_comparable(seed),
        crossing_pair(),
        five_way_equivalence(seed),
        nesting(seed),
        binary_aux_suffices(seed),
        symmetrization(seed),
        gerber_convexity(),
        better_receiver(),
        dominance_chains(seed),
    ]
}
