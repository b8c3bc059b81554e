//! Canonical BISO channels.
//!
//! A BISO channel with outputs `-l..=l` satisfies `P(Y=k|X=0) = P(Y=-k|X=1)`.
//! It is stored as the list of pairs `(p_k, p_{-k})`, `k = 1..l`, where a
//! self-symmetric output (the "zero" symbol) is split into two half-mass
//! symbols. Pairs with zero total mass carry no information and are dropped.

use serde::Serialize;

use crate::binmath::{check_probability, conv, h, hinv, Tolerance};
use crate::error::{Error, Result};

/// One output pair: `pos = P(Y=k|X=0)`, `neg = P(Y=-k|X=0)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SymbolPair {
    pub pos: f64,
    pub neg: f64,
}

impl SymbolPair {
    pub fn mass(&self) -> f64 {
        self.pos + self.neg
    }

    /// `p_k / (p_k + p_{-k})`: the crossover of the BSC seen inside this pair.
    pub fn ratio(&self) -> f64 {
        self.pos / self.mass()
    }

    /// `h(p_k / (p_k + p_{-k}))`.
    pub fn entropy(&self) -> f64 {
        h(self.ratio())
    }
}

/// `P(X = 0)`, folded onto `[0, 1/2]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize)]
pub struct InputBias(f64);

impl InputBias {
    pub const UNIFORM: InputBias = InputBias(0.5);

    /// Folds `x > 1/2` to `1 - x`; mutual information of a BISO channel is
    /// symmetric about the uniform input.
    pub fn new(x: f64) -> Result<Self> {
        let x = check_probability("input bias", x)?;
        Ok(InputBias(x.min(1.0 - x)))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BisoChannel {
    pairs: Vec<SymbolPair>,
    label: String,
    #[serde(skip)]
    parts: Vec<Part>,
}

/// Per-pair quantities reused by every mutual-information evaluation.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Part {
    mass: f64,
    ratio: f64,
    entropy: f64,
}

impl BisoChannel {
    /// Builds a channel from `(p_k, p_{-k})` pairs, validating normalisation.
    pub fn from_pairs<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, f64)>,
    {
        let eps = Tolerance::default().abs_eps;
        let mut out = Vec::new();
        let mut total = 0.0;
        for (i, (pos, neg)) in pairs.into_iter().enumerate() {
            if !(pos.is_finite() && neg.is_finite()) || pos < -eps || neg < -eps {
                return Err(Error::InvalidChannel(format!(
                    "pair {i} = ({pos}, {neg}) has a negative or non-finite entry"
                )));
            }
            let pair = SymbolPair {
                pos: pos.max(0.0),
                neg: neg.max(0.0),
            };
            total += pair.mass();
            if pair.mass() > 0.0 {
                out.push(pair);
            }
        }
        if (total - 1.0).abs() > eps {
            return Err(Error::InvalidChannel(format!(
                "pair masses sum to {total}, expected 1"
            )));
        }
        let parts = out
            .iter()
            .map(|p| Part {
                mass: p.mass(),
                ratio: p.ratio(),
                entropy: p.entropy(),
            })
            .collect();
        Ok(BisoChannel {
            pairs: out,
            label: String::new(),
            parts,
        })
    }

    /// Recovers the canonical paired form from the two transition rows
    /// `row0[y] = P(y|X=0)`, `row1[y] = P(y|X=1)`.
    ///
    /// Outputs are matched greedily: `y` pairs with an unused `y'` such that
    /// `row0[y] = row1[y']` and `row0[y'] = row1[y]`; an output with
    /// `row0[y] = row1[y]` is a fixed point and is split in half.
    pub fn from_rows(row0: &[f64], row1: &[f64]) -> Result<Self> {
        let eps = Tolerance::default().abs_eps;
        if row0.len() != row1.len() {
            return Err(Error::NotStochastic {
                row: 1,
                reason: format!("length {} differs from row 0 length {}", row1.len(), row0.len()),
            });
        }
        for (idx, row) in [row0, row1].into_iter().enumerate() {
            if let Some(bad) = row.iter().find(|v| !v.is_finite() || **v < -eps) {
                return Err(Error::NotStochastic {
                    row: idx,
                    reason: format!("entry {bad} is negative or not finite"),
                });
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > eps {
                return Err(Error::NotStochastic {
                    row: idx,
                    reason: format!("entries sum to {sum}"),
                });
            }
        }

        let close = |a: f64, b: f64| (a - b).abs() <= eps;
        let mut used = vec![false; row0.len()];
        let mut pairs = Vec::new();
        for y in 0..row0.len() {
            if used[y] {
                continue;
            }
            used[y] = true;
            if close(row0[y], row1[y]) {
                let half = 0.5 * row0[y];
                pairs.push((half, half));
                continue;
            }
            let partner = (0..row0.len())
                .find(|&z| !used[z] && close(row0[z], row1[y]) && close(row1[z], row0[y]))
                .ok_or(Error::NotSymmetric { output: y })?;
            used[partner] = true;
            pairs.push((row0[y], row0[partner]));
        }
        BisoChannel::from_pairs(pairs)
    }

    /// Binary symmetric channel with crossover `p`.
    pub fn bsc(p: f64) -> Result<Self> {
        let p = check_probability("crossover p", p)?;
        Ok(BisoChannel::from_pairs([(1.0 - p, p)])?.with_label(format!("BSC({p})")))
    }

    /// Binary erasure channel with erasure probability `e`.
    pub fn bec(e: f64) -> Result<Self> {
        let e = check_probability("erasure e", e)?;
        Ok(BisoChannel::from_pairs([(1.0 - e, 0.0), (0.5 * e, 0.5 * e)])?
            .with_label(format!("BEC({e})")))
    }

    /// BSC whose capacity is `c`, i.e. crossover `h^{-1}(1 - c)`.
    pub fn bsc_with_capacity(c: f64) -> Result<Self> {
        let c = check_probability("capacity", c)?;
        Ok(BisoChannel::bsc(hinv(1.0 - c))?.with_label(format!("BSC(C={c})")))
    }

    /// BEC whose capacity is `c`, i.e. erasure probability `1 - c`.
    pub fn bec_with_capacity(c: f64) -> Result<Self> {
        let c = check_probability("capacity", c)?;
        Ok(BisoChannel::bec(1.0 - c)?.with_label(format!("BEC(C={c})")))
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn pairs(&self) -> &[SymbolPair] {
        &self.pairs
    }

    /// Transition rows over the outputs `+1..+l, -1..-l`.
    pub fn transition_rows(&self) -> (Vec<f64>, Vec<f64>) {
        let pos = self.pairs.iter().map(|p| p.pos);
        let neg = self.pairs.iter().map(|p| p.neg);
        let row0 = pos.clone().chain(neg.clone()).collect();
        let row1 = neg.chain(pos).collect();
        (row0, row1)
    }

    /// `I(X;Y)` in bits for `P(X=0) = bias`:
    /// `sum_k (p_k + p_{-k}) [h(x * r_k) - h(r_k)]` with `r_k = p_k / (p_k + p_{-k})`.
    pub fn mutual_info(&self, bias: InputBias) -> f64 {
        self.mi(bias.value())
    }

    pub(crate) fn mi(&self, x: f64) -> f64 {
        self.parts
            .iter()
            .map(|p| p.mass * (h(conv(x, p.ratio)) - p.entropy))
            .sum::<f64>()
            .max(0.0)
    }

    /// `sum_k (p_k + p_{-k}) (1 - h(r_k))`, attained by the uniform input.
    pub fn capacity(&self) -> f64 {
        self.parts
            .iter()
            .map(|p| p.mass * (1.0 - p.entropy))
            .sum::<f64>()
            .max(0.0)
    }

    /// `f(s) = I(U;Y)` for `U -> X ~ BSC(s)` with uniform `X`; equal to
    /// `C - I(X;Y)` evaluated at `P(X=0) = s`.
    pub fn f_value(&self, s: InputBias) -> f64 {
        self.f(s.value())
    }

    pub(crate) fn f(&self, s: f64) -> f64 {
        (self.capacity() - self.mi(s)).max(0.0)
    }

    /// Mixes in pure noise so that capacity drops to `c`; capacity is linear
    /// in the mixing weight. The noise joins an existing zero symbol if there
    /// is one, so the output alphabet grows by at most one. Only lowers
    /// capacity.
    pub fn erase_to_capacity(&self, c: f64) -> Result<Self> {
        let c = check_probability("capacity", c)?;
        let own = self.capacity();
        if c > own + Tolerance::default().abs_eps {
            return Err(Error::Precondition(format!(
                "cannot raise capacity {own} to {c} by erasure"
            )));
        }
        if own <= 0.0 || c >= own {
            return Ok(self.clone());
        }
        let theta = c / own;
        let noise = 0.5 * (1.0 - theta);
        let mut pairs: Vec<(f64, f64)> = self
            .pairs
            .iter()
            .map(|p| (theta * p.pos, theta * p.neg))
            .collect();
        match self.pairs.iter().position(|p| p.pos == p.neg) {
            Some(k) => {
                pairs[k].0 += noise;
                pairs[k].1 += noise;
            }
            None => pairs.push((noise, noise)),
        }
        Ok(BisoChannel::from_pairs(pairs)?.with_label(self.label.clone()))
    }

    /// Number of raw output symbols: a half-and-half pair is one zero symbol.
    pub fn raw_output_count(&self) -> usize {
        self.pairs
            .iter()
            .map(|p| if p.pos == p.neg { 1 } else { 2 })
            .sum()
    }
}

/// Fails with `CapacityMismatch` unless the capacities agree within `capacity_eps`.
pub fn ensure_equal_capacity(a: &BisoChannel, b: &BisoChannel, tol: &Tolerance) -> Result<f64> {
    let (ca, cb) = (a.capacity(), b.capacity());
    if (ca - cb).abs() > tol.capacity_eps {
        return Err(Error::CapacityMismatch {
            first: ca,
            second: cb,
            allowed: tol.capacity_eps,
        });
    }
    Ok(0.5 * (ca + cb))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn pair_list(ch: &BisoChannel) -> Vec<(f64, f64)> {
        ch.pairs().iter().map(|p| (p.pos, p.neg)).collect()
    }

    #[test]
    fn rows_of_bsc() {
        let p = 0.13;
        let ch = BisoChannel::from_rows(&[1.0 - p, p], &[p, 1.0 - p]).unwrap();
        assert_eq!(pair_list(&ch), vec![(1.0 - p, p)]);
    }

    #[test]
    fn rows_of_bec_split_the_erasure() {
        let e = 0.3;
        let ch = BisoChannel::from_rows(&[1.0 - e, e, 0.0], &[0.0, e, 1.0 - e]).unwrap();
        assert_eq!(pair_list(&ch), vec![(1.0 - e, 0.0), (e / 2.0, e / 2.0)]);
    }

    #[test]
    fn useless_channel_is_pure_noise() {
        let ch = BisoChannel::from_rows(&[1.0, 0.0], &[1.0, 0.0]).unwrap();
        assert_eq!(pair_list(&ch), vec![(0.5, 0.5)]);
        assert_eq!(ch.capacity(), 0.0);
    }

    #[test]
    fn rows_errors() {
        assert!(matches!(
            BisoChannel::from_rows(&[0.5, 0.6], &[0.6, 0.5]),
            Err(Error::NotStochastic { row: 0, .. })
        ));
        assert!(matches!(
            BisoChannel::from_rows(&[0.7, 0.3], &[0.2, 0.8]),
            Err(Error::NotSymmetric { .. })
        ));
        assert!(matches!(
            BisoChannel::from_rows(&[1.2, -0.2], &[-0.2, 1.2]),
            Err(Error::NotStochastic { .. })
        ));
        assert!(BisoChannel::from_rows(&[1.0], &[0.5, 0.5]).is_err());
    }

    #[test]
    fn pairs_errors() {
        assert!(BisoChannel::from_pairs([(0.5, 0.4)]).is_err());
        assert!(BisoChannel::from_pairs([(-0.1, 1.1)]).is_err());
        // zero-mass pairs vanish
        let ch = BisoChannel::from_pairs([(0.0, 0.0), (0.6, 0.4)]).unwrap();
        assert_eq!(ch.pairs().len(), 1);
    }

    #[test]
    fn extreme_bsc_bec() {
        assert_abs_diff_eq!(BisoChannel::bsc(0.0).unwrap().capacity(), 1.0);
        assert_abs_diff_eq!(BisoChannel::bec(1.0).unwrap().capacity(), 0.0);
        assert_abs_diff_eq!(BisoChannel::bec(0.3).unwrap().capacity(), 0.7, epsilon = 1e-15);
        assert!(BisoChannel::bsc(1.5).is_err());
        assert!(BisoChannel::bec(-0.5).is_err());
    }

    #[test]
    fn capacity_indexed_constructors() {
        let bsc1 = BisoChannel::bsc_with_capacity(1.0).unwrap();
        assert_eq!(pair_list(&bsc1), vec![(1.0, 0.0)]);
        let bsc0 = BisoChannel::bsc_with_capacity(0.0).unwrap();
        assert_eq!(pair_list(&bsc0), vec![(0.5, 0.5)]);
        let bec0 = BisoChannel::bec_with_capacity(0.0).unwrap();
        assert_abs_diff_eq!(bec0.capacity(), 0.0);

        let half = BisoChannel::bsc_with_capacity(0.5).unwrap();
        // mpmath bisection of h(p) = 1/2
        assert_abs_diff_eq!(half.pairs()[0].neg, 0.110_027_864_438_359_55, epsilon = 1e-14);
        for c in [0.01, 0.2, 0.5, 0.77, 0.99] {
            assert!((BisoChannel::bsc_with_capacity(c).unwrap().capacity() - c).abs() <= 1e-11);
            assert!((BisoChannel::bec_with_capacity(c).unwrap().capacity() - c).abs() <= 1e-11);
        }
    }

    #[test]
    fn mutual_info_closed_forms() {
        let p = 0.11;
        let bsc = BisoChannel::bsc(p).unwrap();
        assert_abs_diff_eq!(bsc.mutual_info(InputBias::UNIFORM), 1.0 - h(p), epsilon = 1e-15);
        assert_abs_diff_eq!(
            bsc.capacity(),
            0.500_084_041_835_472_004_4,
            epsilon = 1e-15
        );
        let noise = BisoChannel::bsc(0.5).unwrap();
        for x in [0.0, 0.2, 0.5] {
            assert_eq!(noise.mutual_info(InputBias::new(x).unwrap()), 0.0);
        }
        let e = 0.3;
        let bec = BisoChannel::bec(e).unwrap();
        for x in [0.0, 0.05, 0.2, 0.4, 0.5] {
            assert_abs_diff_eq!(
                bec.mutual_info(InputBias::new(x).unwrap()),
                (1.0 - e) * h(x),
                epsilon = 1e-15
            );
        }
        // 0.7 h(0.2), 40 digits
        assert_abs_diff_eq!(
            bec.mutual_info(InputBias::new(0.2).unwrap()),
            0.505_349_666_421_153_643_5,
            epsilon = 1e-15
        );
    }

    #[test]
    fn f_value_endpoints_and_bsc_form() {
        let ch = BisoChannel::from_pairs([(0.3, 0.1), (0.2, 0.2), (0.05, 0.15)]).unwrap();
        assert_abs_diff_eq!(ch.f_value(InputBias::new(0.0).unwrap()), ch.capacity(), epsilon = 1e-15);
        assert_abs_diff_eq!(ch.f_value(InputBias::UNIFORM), 0.0, epsilon = 1e-15);
        let bsc = BisoChannel::bsc(0.1).unwrap();
        // 1 - h(0.2 * 0.1), 40 digits
        assert_abs_diff_eq!(
            bsc.f_value(InputBias::new(0.2).unwrap()),
            0.173_253_627_507_382_104_5,
            epsilon = 1e-15
        );
    }

    #[test]
    fn input_bias_folds() {
        assert_eq!(InputBias::new(0.8).unwrap().value(), 1.0 - 0.8);
        assert!(InputBias::new(1.2).is_err());
    }

    #[test]
    fn erasure_mixing_is_linear_in_capacity() {
        let ch = BisoChannel::from_pairs([(0.5, 0.1), (0.1, 0.3)]).unwrap();
        let target = 0.6 * ch.capacity();
        let mixed = ch.erase_to_capacity(target).unwrap();
        assert_abs_diff_eq!(mixed.capacity(), target, epsilon = 1e-15);
        assert!(ch.erase_to_capacity(ch.capacity() + 0.1).is_err());

        let bec = BisoChannel::bec(0.2).unwrap();
        let lower = bec.erase_to_capacity(0.5).unwrap();
        assert_eq!(lower.raw_output_count(), 3);
        assert_abs_diff_eq!(lower.capacity(), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn raw_outputs() {
        assert_eq!(BisoChannel::bsc(0.1).unwrap().raw_output_count(), 2);
        assert_eq!(BisoChannel::bec(0.1).unwrap().raw_output_count(), 3);
    }

    fn arb_channel() -> impl Strategy<Value = BisoChannel> {
        prop::collection::vec((0.01f64..1.0, 0.0f64..=1.0), 1..5).prop_map(|raw| {
            let total: f64 = raw.iter().map(|(m, _)| m).sum();
            BisoChannel::from_pairs(raw.iter().map(|(m, r)| (m / total * r, m / total * (1.0 - r))))
                .unwrap()
        })
    }

    proptest! {
        #[test]
        fn mutual_info_concave_in_bias(ch in arb_channel()) {
            let n = 512;
            let vals: Vec<f64> = (0..n).map(|i| ch.mi(0.5 * i as f64 / (n - 1) as f64)).collect();
            for i in 1..n - 1 {
                prop_assert!(vals[i - 1] - 2.0 * vals[i] + vals[i + 1] <= 1e-9);
            }
            prop_assert!(vals.iter().all(|v| *v <= ch.capacity() + 1e-12));
        }

        #[test]
        fn splitting_a_pair_keeps_mutual_info(ch in arb_channel(), k in 0usize..4, frac in 0.05f64..0.95) {
            let k = k % ch.pairs().len();
            let split = ch.pairs().iter().enumerate().flat_map(|(i, p)| {
                if i == k {
                    vec![(frac * p.pos, frac * p.neg), ((1.0 - frac) * p.pos, (1.0 - frac) * p.neg)]
                } else {
                    vec![(p.pos, p.neg)]
                }
            });
            let finer = BisoChannel::from_pairs(split).unwrap();
            for i in 0..=50 {
                let x = i as f64 / 100.0;
                prop_assert!((ch.mi(x) - finer.mi(x)).abs() <= 1e-9);
            }
        }

        #[test]
        fn f_value_convex(ch in arb_channel()) {
            let n = 257;
            let vals: Vec<f64> = (0..n).map(|i| ch.f(0.5 * i as f64 / (n - 1) as f64)).collect();
            prop_assert!((vals[0] - ch.capacity()).abs() <= 1e-12);
            prop_assert!(vals[n - 1].abs() <= 1e-12);
            for i in 1..n - 1 {
                prop_assert!(vals[i - 1] - 2.0 * vals[i] + vals[i + 1] >= -1e-9);
            }
        }
    }
}
