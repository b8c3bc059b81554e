//! Reproducible random channels and the bundled crossing pair.

use rand::Rng;

use crate::channel::BisoChannel;
use crate::lorenz::{align, biso_curve};
use crate::oracle::AuxChannel;

/// Two BISO channels with capacities equal to within 1e-8 that are not
/// more-capable comparable. The first has three outputs, the second four.
pub fn incomparable_pair() -> (BisoChannel, BisoChannel) {
    let a_m2 = 0.061;
    let a_m1 = (1.0 - 10.0 * a_m2) / 2.0;
    let a_1 = a_m1;
    let a_2 = 9.0 * a_m2;

    let b_m2 = 0.063_497_7;
    let b_m1 = (1.0 - b_m2) / 5.0;
    let b_1 = 4.0 * (1.0 - b_m2) / 5.0;
    let b_2 = 0.0;

    let a = BisoChannel::from_pairs([(a_1, a_m1), (a_2, a_m2)])
        .expect("constants are a distribution")
        .with_label("A");
    let b = BisoChannel::from_pairs([(b_1, b_m1), (b_2, b_m2)])
        .expect("constants are a distribution")
        .with_label("B");
    (a, b)
}

/// Random channel with `1..=max_pairs` pairs: uniform-simplex masses and
/// uniform ratios.
pub fn random_channel<R: Rng + ?Sized>(rng: &mut R, max_pairs: usize) -> BisoChannel {
    let l = rng.gen_range(1..=max_pairs.max(1));
    let weights: Vec<f64> = (0..l).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let total: f64 = weights.iter().sum();
    let pairs = weights.iter().map(|w| {
        let m = w / total;
        let r: f64 = rng.gen();
        (m * r, m * (1.0 - r))
    });
    BisoChannel::from_pairs(pairs).expect("normalised by construction")
}

/// Random channel whose raw output alphabet has at most three symbols: one
/// informative pair plus an erasure-like zero symbol.
pub fn random_ternary<R: Rng + ?Sized>(rng: &mut R) -> BisoChannel {
    let erasure: f64 = rng.gen_range(0.0..0.9);
    let r: f64 = rng.gen();
    let m = 1.0 - erasure;
    BisoChannel::from_pairs([(m * r, m * (1.0 - r)), (0.5 * erasure, 0.5 * erasure)])
        .expect("normalised by construction")
}

/// Lowers the larger capacity of the two by erasure mixing so both match.
pub fn equalize(a: BisoChannel, b: BisoChannel) -> (BisoChannel, BisoChannel) {
    let (ca, cb) = (a.capacity(), b.capacity());
    if ca > cb {
        (a.erase_to_capacity(cb).expect("lowering only"), b)
    } else {
        let b = b.erase_to_capacity(ca).expect("lowering only");
        (a, b)
    }
}

/// Equal-capacity pair from `gen`, resampling until the common capacity is
/// at least `min_capacity`.
pub fn equal_capacity_pair<R, G>(rng: &mut R, min_capacity: f64, mut gen: G) -> (BisoChannel, BisoChannel)
where
    R: Rng + ?Sized,
    G: FnMut(&mut R) -> BisoChannel,
{
    loop {
        let (a, b) = equalize(gen(rng), gen(rng));
        if a.capacity() >= min_capacity {
            return (a, b);
        }
    }
}

/// Random auxiliary with `1..=max_states` states.
pub fn random_aux<R: Rng + ?Sized>(rng: &mut R, max_states: usize) -> AuxChannel {
    let m = rng.gen_range(1..=max_states.max(1));
    let w: Vec<f64> = (0..m).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let total: f64 = w.iter().sum();
    AuxChannel {
        u_probs: w.iter().map(|x| x / total).collect(),
        x_given_u: (0..m).map(|_| rng.gen()).collect(),
    }
}

/// Instance `(x, y, xi)` for the majorization check, rejection-sampled from
/// the aligned step curves of random equal-capacity channel pairs: `x` is
/// the curve whose Lorenz curve lies below.
pub fn random_hlp_instance<R: Rng + ?Sized>(rng: &mut R) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    loop {
        let (a, b) = equal_capacity_pair(rng, 0.02, |r| random_channel(r, 4));
        let al = align(&biso_curve(&a), &biso_curve(&b));
        for (x, y) in [(&al.first, &al.second), (&al.second, &al.first)] {
            if suffix_dominates(x, y, &al.widths) {
                return (x.clone(), y.clone(), al.widths.clone());
            }
        }
    }
}

fn suffix_dominates(x: &[f64], y: &[f64], xi: &[f64]) -> bool {
    let (mut sx, mut sy) = (0.0, 0.0);
    for k in (0..x.len()).rev() {
        sx += xi[k] * x[k];
        sy += xi[k] * y[k];
        if sx < sy - 1e-12 {
            return false;
        }
    }
    (sx - sy).abs() <= 1e-12
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn crossing_pair_constants() {
        let (a, b) = incomparable_pair();
        // 40-digit evaluation of the capacities
        assert!((a.capacity() - 0.323_912_687_910_538_455).abs() < 1e-15);
        assert!((b.capacity() - 0.323_912_678_703_366_920).abs() < 1e-15);
        assert_eq!(a.raw_output_count(), 3);
        assert_eq!(b.raw_output_count(), 4);
    }

    #[test]
    fn generators_valid_and_deterministic() {
        let mut r1 = ChaCha8Rng::seed_from_u64(7);
        let mut r2 = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            assert_eq!(random_channel(&mut r1, 4), random_channel(&mut r2, 4));
            let t = random_ternary(&mut r1);
            random_ternary(&mut r2);
            assert!(t.raw_output_count() <= 3);
        }
    }

    #[test]
    fn hlp_instances_meet_preconditions() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let (x, y, xi) = random_hlp_instance(&mut rng);
            assert!(crate::oracle::hlp_check(&x, &y, &xi, 8).unwrap());
        }
        let aux = random_aux(&mut rng, 4);
        assert!((aux.u_probs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn equalized_pairs_match() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let (a, b) = equal_capacity_pair(&mut rng, 0.05, |r| random_channel(r, 4));
            assert!((a.capacity() - b.capacity()).abs() < 1e-14);
            assert!(a.capacity() >= 0.05);
        }
    }
}
