//! Brute-force verifiers that share no code path with the closed forms in
//! [`crate::channel`]: mutual information by direct summation over the joint
//! distribution, a general auxiliary search for the superposition objective,
//! the doubling symmetrization of an auxiliary, and a majorization check
//! against a battery of convex functions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::binmath::{conv, h, hinv, Tolerance};
use crate::channel::BisoChannel;
use crate::error::{Error, Result};
use crate::ordering::trisect;
use crate::par::{linspace, Exec};

/// `U -> X` with `P(U=i) = u_probs[i]` and `P(X=0|U=i) = x_given_u[i]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuxChannel {
    pub u_probs: Vec<f64>,
    pub x_given_u: Vec<f64>,
}

impl AuxChannel {
    pub fn new(u_probs: Vec<f64>, x_given_u: Vec<f64>) -> Result<Self> {
        if u_probs.is_empty() || u_probs.len() != x_given_u.len() {
            return Err(Error::Precondition(format!(
                "need matching nonempty vectors, got {} weights and {} conditionals",
                u_probs.len(),
                x_given_u.len()
            )));
        }
        if u_probs.iter().chain(&x_given_u).any(|p| !(0.0..=1.0).contains(p)) {
            return Err(Error::Precondition("probabilities must lie in [0, 1]".into()));
        }
        let total: f64 = u_probs.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::Precondition(format!("weights sum to {total}, not 1")));
        }
        Ok(AuxChannel { u_probs, x_given_u })
    }

    pub fn states(&self) -> usize {
        self.u_probs.len()
    }

    /// `P(X=0)`.
    pub fn x_marginal(&self) -> f64 {
        self.u_probs.iter().zip(&self.x_given_u).map(|(u, s)| u * s).sum()
    }
}

/// Uniform binary `U` with `X = U` flipped with probability `s`.
pub fn bsc_aux(s: f64) -> AuxChannel {
    AuxChannel {
        u_probs: vec![0.5, 0.5],
        x_given_u: vec![1.0 - s, s],
    }
}

fn entropy(dist: &[f64]) -> f64 {
    dist.iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum()
}

fn mix(row0: &[f64], row1: &[f64], x: f64) -> Vec<f64> {
    row0.iter().zip(row1).map(|(a, b)| x * a + (1.0 - x) * b).collect()
}

/// `I(X;Y)` for `P(X=0) = x` by summing `p(x,y) log p(x,y) / (p(x) p(y))`.
pub fn mi_from_rows(row0: &[f64], row1: &[f64], x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    let py = mix(row0, row1, x);
    let mut total = 0.0;
    for (px, row) in [(x, row0), (1.0 - x, row1)] {
        for (&w, &q) in row.iter().zip(&py) {
            let joint = px * w;
            if joint > 0.0 {
                total += joint * (w / q).log2();
            }
        }
    }
    total
}

/// `I(X;Y)` from the explicit joint over the raw output alphabet.
pub fn mi_from_joint(ch: &BisoChannel, x: f64) -> f64 {
    let (row0, row1) = ch.transition_rows();
    mi_from_rows(&row0, &row1, x)
}

/// Information quantities of `U -> X -> (Y1, Y2)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AuxTerms {
    pub i_u_y1: f64,
    pub i_u_y2: f64,
    pub i_x_y1_given_u: f64,
    pub i_x_y1: f64,
}

fn channel_terms(row0: &[f64], row1: &[f64], aux: &AuxChannel) -> (f64, f64, f64) {
    let (h0, h1) = (entropy(row0), entropy(row1));
    let mut py = vec![0.0; row0.len()];
    let mut h_y_given_u = 0.0;
    let mut h_y_given_x = 0.0;
    for (&u, &s) in aux.u_probs.iter().zip(&aux.x_given_u) {
        let cond = mix(row0, row1, s);
        for (acc, c) in py.iter_mut().zip(&cond) {
            *acc += u * c;
        }
        h_y_given_u += u * entropy(&cond);
        h_y_given_x += u * (s * h0 + (1.0 - s) * h1);
    }
    let h_y = entropy(&py);
    // I(U;Y), I(X;Y|U), I(X;Y)
    (h_y - h_y_given_u, h_y_given_u - h_y_given_x, h_y - h_y_given_x)
}

pub fn aux_terms(ch1: &BisoChannel, ch2: &BisoChannel, aux: &AuxChannel) -> AuxTerms {
    let (a0, a1) = ch1.transition_rows();
    let (b0, b1) = ch2.transition_rows();
    let (i_u_y1, i_x_y1_given_u, i_x_y1) = channel_terms(&a0, &a1, aux);
    let (i_u_y2, _, _) = channel_terms(&b0, &b1, aux);
    AuxTerms {
        i_u_y1,
        i_u_y2,
        i_x_y1_given_u,
        i_x_y1,
    }
}

/// `(lambda + 1) I(U;Y2) + I(X;Y1|U)`.
pub fn aux_objective(ch1: &BisoChannel, ch2: &BisoChannel, aux: &AuxChannel, lambda: f64) -> f64 {
    let t = aux_terms(ch1, ch2, aux);
    (lambda + 1.0) * t.i_u_y2 + t.i_x_y1_given_u
}

/// Best objective over BSC auxiliaries: a 2001-point grid in `s` followed by
/// trisection around the best grid point. Returns `(value, s)`.
pub fn best_bsc_objective(ch1: &BisoChannel, ch2: &BisoChannel, lambda: f64) -> (f64, f64) {
    let obj = |s: f64| aux_objective(ch1, ch2, &bsc_aux(s), lambda);
    let grid = linspace(0.0, 0.5, 2001);
    let (mut best_s, mut best_v) = (0.0, f64::NEG_INFINITY);
    for &s in &grid {
        let v = obj(s);
        if v > best_v {
            (best_s, best_v) = (s, v);
        }
    }
    let step = grid[1] - grid[0];
    let (s, v) = trisect(obj, (best_s - step).max(0.0), (best_s + step).min(0.5));
    if v > best_v {
        (v, s)
    } else {
        (best_v, best_s)
    }
}

/// Incremental evaluator of the objective for coordinate ascent: per-state
/// output distributions and entropies are cached so a coordinate move only
/// recomputes what it touches.
struct Search<'a> {
    rows1: (&'a [f64], &'a [f64]),
    rows2: (&'a [f64], &'a [f64]),
    row_entropy1: (f64, f64),
    lambda: f64,
    weights: Vec<f64>,
    s: Vec<f64>,
    cond2: Vec<Vec<f64>>,
    h_cond1: Vec<f64>,
    h_cond2: Vec<f64>,
}

impl<'a> Search<'a> {
    fn new(rows1: (&'a [f64], &'a [f64]), rows2: (&'a [f64], &'a [f64]), lambda: f64, weights: Vec<f64>, s: Vec<f64>) -> Self {
        let row_entropy1 = (entropy(rows1.0), entropy(rows1.1));
        let mut me = Search {
            rows1,
            rows2,
            row_entropy1,
            lambda,
            cond2: vec![Vec::new(); s.len()],
            h_cond1: vec![0.0; s.len()],
            h_cond2: vec![0.0; s.len()],
            weights,
            s,
        };
        for i in 0..me.s.len() {
            me.set_state(i, me.s[i]);
        }
        me
    }

    fn state_terms(&self, s: f64) -> (Vec<f64>, f64, f64) {
        let c1 = mix(self.rows1.0, self.rows1.1, s);
        let c2 = mix(self.rows2.0, self.rows2.1, s);
        let (e1, e2) = (entropy(&c1), entropy(&c2));
        (c2, e1, e2)
    }

    fn set_state(&mut self, i: usize, s: f64) {
        let (c2, e1, e2) = self.state_terms(s);
        self.s[i] = s;
        self.cond2[i] = c2;
        self.h_cond1[i] = e1;
        self.h_cond2[i] = e2;
    }

    fn value_with(&self, weights: &[f64], override_state: Option<(usize, &[f64], f64, f64, f64)>) -> f64 {
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return f64::NEG_INFINITY;
        }
        let (h0, h1) = self.row_entropy1;
        let mut py2 = vec![0.0; self.rows2.0.len()];
        let mut h_y2_u = 0.0;
        let mut i_x_y1_u = 0.0;
        for (i, &w) in weights.iter().enumerate() {
            let u = w / total;
            let (c2, e1, e2, s) = match override_state {
                Some((j, c2, e1, e2, s)) if j == i => (c2, e1, e2, s),
                _ => (&self.cond2[i][..], self.h_cond1[i], self.h_cond2[i], self.s[i]),
            };
            for (acc, c) in py2.iter_mut().zip(c2) {
                *acc += u * c;
            }
            h_y2_u += u * e2;
            i_x_y1_u += u * (e1 - s * h0 - (1.0 - s) * h1);
        }
        (self.lambda + 1.0) * (entropy(&py2) - h_y2_u) + i_x_y1_u
    }

    fn value(&self) -> f64 {
        self.value_with(&self.weights, None)
    }

    /// Golden-section search of `g` on `[0, 1]`, also trying the endpoints.
    fn line_search(g: impl Fn(f64) -> f64) -> (f64, f64) {
        const INV_PHI: f64 = 0.618_033_988_749_894_8;
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
        let mut x1 = hi - INV_PHI * (hi - lo);
        let mut x2 = lo + INV_PHI * (hi - lo);
        let (mut g1, mut g2) = (g(x1), g(x2));
        for _ in 0..28 {
            if g1 < g2 {
                lo = x1;
                (x1, g1) = (x2, g2);
                x2 = lo + INV_PHI * (hi - lo);
                g2 = g(x2);
            } else {
                hi = x2;
                (x2, g2) = (x1, g1);
                x1 = hi - INV_PHI * (hi - lo);
                g1 = g(x1);
            }
        }
        let mut best = if g1 >= g2 { (x1, g1) } else { (x2, g2) };
        for x in [0.0, 1.0] {
            let v = g(x);
            if v > best.1 {
                best = (x, v);
            }
        }
        best
    }

    fn ascend(&mut self, max_sweeps: usize) -> f64 {
        let mut current = self.value();
        for _ in 0..max_sweeps {
            let start = current;
            for i in 0..self.s.len() {
                let (s, v) = Self::line_search(|s| {
                    let (c2, e1, e2) = self.state_terms(s);
                    self.value_with(&self.weights, Some((i, &c2, e1, e2, s)))
                });
                if v > current {
                    self.set_state(i, s);
                    current = v;
                }
                let (w, v) = Self::line_search(|w| {
                    let mut ws = self.weights.clone();
                    ws[i] = w;
                    self.value_with(&ws, None)
                });
                if v > current {
                    self.weights[i] = w;
                    current = v;
                }
            }
            if current - start < 1e-13 {
                break;
            }
        }
        current
    }

    fn aux(&self) -> AuxChannel {
        let total: f64 = self.weights.iter().sum();
        AuxChannel {
            u_probs: self.weights.iter().map(|w| w / total).collect(),
            x_given_u: self.s.clone(),
        }
    }
}

/// Multi-start coordinate ascent of [`aux_objective`] over auxiliaries with
/// `states` states. Starting points come from `seed`; the result does not
/// depend on the execution strategy, and ties go to the lowest restart.
pub fn best_general_aux(
    ch1: &BisoChannel,
    ch2: &BisoChannel,
    lambda: f64,
    states: usize,
    restarts: usize,
    seed: u64,
) -> (f64, AuxChannel) {
    best_general_aux_with(ch1, ch2, lambda, states, restarts, seed, Exec::default())
}

pub fn best_general_aux_with(
    ch1: &BisoChannel,
    ch2: &BisoChannel,
    lambda: f64,
    states: usize,
    restarts: usize,
    seed: u64,
    exec: Exec,
) -> (f64, AuxChannel) {
    let states = states.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let starts: Vec<(Vec<f64>, Vec<f64>)> = (0..restarts.max(1))
        .map(|_| {
            let w = (0..states).map(|_| rng.gen_range(0.05..1.0)).collect();
            let s = (0..states).map(|_| rng.gen::<f64>()).collect();
            (w, s)
        })
        .collect();
    let (a0, a1) = ch1.transition_rows();
    let (b0, b1) = ch2.transition_rows();

    let results = exec.map(starts.len(), |k| {
        let (w, s) = starts[k].clone();
        let mut search = Search::new((&a0, &a1), (&b0, &b1), lambda, w, s);
        let v = search.ascend(60);
        (v, search.aux())
    });
    results
        .into_iter()
        .reduce(|best, cur| if cur.0 > best.0 { cur } else { best })
        .expect("at least one restart")
}

/// Doubles every state `i` into `(i, 1)` with conditional `s_i` and `(i, 2)`
/// with `1 - s_i`, each of weight `u_i / 2`. The induced input is uniform.
pub fn symmetrize_aux(aux: &AuxChannel) -> AuxChannel {
    let mut u_probs = Vec::with_capacity(2 * aux.states());
    let mut x_given_u = Vec::with_capacity(2 * aux.states());
    for (&u, &s) in aux.u_probs.iter().zip(&aux.x_given_u) {
        u_probs.extend([0.5 * u, 0.5 * u]);
        x_given_u.extend([s, 1.0 - s]);
    }
    AuxChannel { u_probs, x_given_u }
}

/// Before/after quantities of the doubling construction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SymmetrizationCheck {
    pub before: AuxTerms,
    pub after: AuxTerms,
    pub passed: bool,
}

/// `I(U;Y2)` does not decrease, `I(X;Y1|U)` is unchanged and `I(X;Y1)`
/// does not decrease, all within `abs_eps`.
pub fn symmetrization_check(ch1: &BisoChannel, ch2: &BisoChannel, aux: &AuxChannel, tol: &Tolerance) -> SymmetrizationCheck {
    let before = aux_terms(ch1, ch2, aux);
    let after = aux_terms(ch1, ch2, &symmetrize_aux(aux));
    let e = tol.abs_eps;
    let passed = after.i_u_y2 >= before.i_u_y2 - e
        && (after.i_x_y1_given_u - before.i_x_y1_given_u).abs() <= e
        && after.i_x_y1 >= before.i_x_y1 - e;
    SymmetrizationCheck { before, after, passed }
}

/// Convex test functions on `[0, 1]`.
fn convex_battery(samples: usize) -> Vec<Box<dyn Fn(f64) -> f64>> {
    let mut out: Vec<Box<dyn Fn(f64) -> f64>> = vec![
        Box::new(|t| t),
        Box::new(|t| -t),
        Box::new(|t| t * t),
        Box::new(|t| t.powi(4)),
        Box::new(|t| (3.0 * t).exp()),
        Box::new(|t| (-2.0 * t).exp()),
        Box::new(|t| -(t + 0.1).ln()),
    ];
    let n = samples.max(1);
    for k in 0..n {
        let c = (k as f64 + 0.5) / n as f64;
        out.push(Box::new(move |t| (t - c).max(0.0)));
        out.push(Box::new(move |t| (c - t).max(0.0)));
        let x = c * 0.5;
        out.push(Box::new(move |y| h(conv(x, hinv(y))) - y));
    }
    out
}

/// Checks `sum xi_j L(x_j) >= sum xi_j L(y_j)` for a battery of convex `L`
/// (powers, exponentials, hinges and `y -> h(x * h^{-1}(y)) - y`), given
/// nondecreasing `x`, `y` in `[0, 1]` whose weighted suffix sums satisfy
/// `sum_{j>=k} xi_j x_j >= sum_{j>=k} xi_j y_j` with equality at `k = 1`.
pub fn hlp_check(x: &[f64], y: &[f64], xi: &[f64], samples: usize) -> Result<bool> {
    const EPS: f64 = 1e-9;
    let n = x.len();
    if n == 0 || y.len() != n || xi.len() != n {
        return Err(Error::Precondition("sequences must be nonempty and of equal length".into()));
    }
    if xi.iter().any(|&w| w.is_nan() || w < 0.0) {
        return Err(Error::Precondition("weights must be nonnegative".into()));
    }
    if x.iter().chain(y).any(|v| !(0.0..=1.0).contains(v)) {
        return Err(Error::Precondition("values must lie in [0, 1]".into()));
    }
    if x.windows(2).any(|w| w[0] > w[1] + EPS) || y.windows(2).any(|w| w[0] > w[1] + EPS) {
        return Err(Error::Precondition("sequences must be nondecreasing".into()));
    }
    let (mut sx, mut sy) = (0.0, 0.0);
    for k in (0..n).rev() {
        sx += xi[k] * x[k];
        sy += xi[k] * y[k];
        if sx < sy - EPS {
            return Err(Error::Precondition(format!("suffix sum condition fails at index {k}")));
        }
    }
    if (sx - sy).abs() > EPS {
        return Err(Error::Precondition(format!("totals differ: {sx} vs {sy}")));
    }
    Ok(convex_battery(samples).iter().all(|l| {
        let lx: f64 = x.iter().zip(xi).map(|(&v, w)| w * l(v)).sum();
        let ly: f64 = y.iter().zip(xi).map(|(&v, w)| w * l(v)).sum();
        lx >= ly - 1e-9
    }))
}
