//! Scalar primitives on binary distributions: the binary entropy `h`, its
//! inverse on `[0, 1/2]` and binary convolution `a * b = a(1-b) + b(1-a)`.

use serde::Serialize;

use crate::error::{Error, Result};

/// Numerical tolerances shared by the decision procedures.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerance {
    /// Slack for "non-strict" comparisons and domain checks.
    pub abs_eps: f64,
    /// Margin a difference must exceed before it counts as strict.
    pub strict_margin: f64,
    /// Target accuracy of root finding (`h^{-1}`, capacity matching).
    pub root_eps: f64,
    /// Largest capacity gap accepted as "equal capacity".
    pub capacity_eps: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs_eps: 1e-9,
            strict_margin: 1e-6,
            root_eps: 1e-12,
            capacity_eps: 1e-6,
        }
    }
}

impl Tolerance {
    pub fn new(abs_eps: f64, strict_margin: f64, root_eps: f64, capacity_eps: f64) -> Result<Self> {
        let tol = Tolerance {
            abs_eps,
            strict_margin,
            root_eps,
            capacity_eps,
        };
        tol.validate()?;
        Ok(tol)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.abs_eps, self.strict_margin, self.root_eps, self.capacity_eps];
        if all.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::InvalidTolerance(format!(
                "all tolerances must be finite and positive, got {self:?}"
            )));
        }
        if self.strict_margin <= self.abs_eps {
            return Err(Error::InvalidTolerance(format!(
                "strict_margin ({}) must exceed abs_eps ({})",
                self.strict_margin, self.abs_eps
            )));
        }
        Ok(())
    }

    /// Same tolerances with a different `abs_eps`.
    pub fn with_abs_eps(self, abs_eps: f64) -> Result<Self> {
        Tolerance::new(abs_eps, self.strict_margin, self.root_eps, self.capacity_eps)
    }
}

const DEFAULT_ABS_EPS: f64 = 1e-9;

/// Clamps `x` into `[0, 1]`, rejecting values further than `abs_eps` outside.
pub(crate) fn check_probability(what: &'static str, x: f64) -> Result<f64> {
    if x.is_nan() || !(-DEFAULT_ABS_EPS..=1.0 + DEFAULT_ABS_EPS).contains(&x) {
        return Err(Error::Domain {
            what,
            value: x,
            domain: "[0, 1]",
        });
    }
    Ok(x.clamp(0.0, 1.0))
}

/// Unchecked binary entropy for inputs already known to be in `[0, 1]`.
#[inline]
pub(crate) fn h(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        0.0
    } else {
        -x * x.log2() - (1.0 - x) * (1.0 - x).log2()
    }
}

/// Unchecked binary convolution.
#[inline]
pub(crate) fn conv(a: f64, b: f64) -> f64 {
    a * (1.0 - b) + b * (1.0 - a)
}

/// Binary entropy `h(x) = -x log2 x - (1-x) log2 (1-x)` with `h(0) = h(1) = 0`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    Ok(h(check_probability("x", x)?))
}

/// The unique `x` in `[0, 1/2]` with `h(x) = y`, found by bisection.
///
/// Bisection runs until the bracket stops shrinking, which is well inside
/// `root_eps` everywhere except the flat end `y -> 1`, where the floating
/// point resolution of `h` is the limit.
pub fn binary_entropy_inverse(y: f64) -> Result<f64> {
    let y = check_probability("y", y)?;
    Ok(hinv(y))
}

pub(crate) fn hinv(y: f64) -> f64 {
    if y <= 0.0 {
        return 0.0;
    }
    if y >= 1.0 {
        return 0.5;
    }
    let (mut lo, mut hi) = (0.0_f64, 0.5_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if h(mid) < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if (h(hi) - y).abs() < (y - h(lo)).abs() {
        hi
    } else {
        lo
    }
}

/// Binary convolution `a * b = a(1-b) + b(1-a)`.
pub fn convolve(a: f64, b: f64) -> Result<f64> {
    let a = check_probability("a", a)?;
    let b = check_probability("b", b)?;
    Ok(conv(a, b).clamp(0.0, 1.0))
}

/// `y -> h(x * h^{-1}(y))`, the strictly convex function behind Mrs. Gerber's lemma.
pub fn gerber(x: f64, y: f64) -> Result<f64> {
    let x = check_probability("x", x)?;
    let y = check_probability("y", y)?;
    Ok(h(conv(x, hinv(y))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn entropy_anchors() {
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        // 40-digit evaluation of -x log2 x - (1-x) log2 (1-x)
        assert_abs_diff_eq!(
            binary_entropy(0.11).unwrap(),
            0.499_915_958_164_527_995_6,
            epsilon = 1e-15
        );
    }

    #[test]
    fn entropy_domain_errors() {
        assert!(matches!(binary_entropy(-0.01), Err(Error::Domain { .. })));
        assert!(matches!(binary_entropy(1.5), Err(Error::Domain { .. })));
        assert!(binary_entropy(f64::NAN).is_err());
        // within abs_eps of the boundary is clamped, not rejected
        assert_eq!(binary_entropy(-1e-12).unwrap(), 0.0);
    }

    #[test]
    fn inverse_anchors() {
        assert_eq!(binary_entropy_inverse(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy_inverse(1.0).unwrap(), 0.5);
        assert_abs_diff_eq!(
            binary_entropy_inverse(h(0.2)).unwrap(),
            0.2,
            epsilon = 1e-12
        );
        // bisection to 200 bits in mpmath
        assert_abs_diff_eq!(
            binary_entropy_inverse(0.5).unwrap(),
            0.110_027_864_438_359_551_3,
            epsilon = 1e-14
        );
        assert!(binary_entropy_inverse(1.1).is_err());
    }

    #[test]
    fn convolution_anchors() {
        assert_eq!(convolve(0.0, 0.3).unwrap(), 0.3);
        assert_eq!(convolve(0.5, 0.3).unwrap(), 0.5);
        assert_abs_diff_eq!(convolve(0.1, 0.2).unwrap(), 0.26, epsilon = 1e-15);
        assert!(convolve(0.1, -0.2).is_err());
    }

    #[test]
    fn round_trip_on_dense_grid() {
        for i in 0..=10_000 {
            let y = i as f64 / 10_000.0;
            let x = binary_entropy_inverse(y).unwrap();
            assert!((0.0..=0.5).contains(&x));
            assert!((h(x) - y).abs() <= 1e-12, "y = {y}: h(x) = {}", h(x));
        }
    }

    #[test]
    fn gerber_function_is_convex() {
        for k in 1..=9 {
            let x = 0.05 * k as f64;
            let n = 400;
            let ys: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
            let vals: Vec<f64> = ys.iter().map(|&y| gerber(x, y).unwrap()).collect();
            for i in 1..n {
                let d2 = vals[i - 1] - 2.0 * vals[i] + vals[i + 1];
                let step = ys[i + 1] - ys[i - 1];
                assert!(d2 >= -1e-9, "x={x} y={}: {d2}", ys[i]);
                if i > 1 && i < n - 1 {
                    assert!(d2 > 1e-6 * step * step, "not strict at x={x} y={}", ys[i]);
                }
            }
        }
    }

    #[test]
    fn tolerance_invariants() {
        assert!(Tolerance::default().validate().is_ok());
        assert!(Tolerance::new(1e-6, 1e-9, 1e-12, 1e-6).is_err());
        assert!(Tolerance::new(0.0, 1e-6, 1e-12, 1e-6).is_err());
    }

    proptest! {
        #[test]
        fn entropy_symmetric(x in 0.0f64..=1.0) {
            prop_assert!((h(x) - h(1.0 - x)).abs() <= 1e-15);
        }

        #[test]
        fn inverse_monotone(a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(hinv(lo) <= hinv(hi));
        }

        #[test]
        fn convolution_commutes(a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
            let ab = convolve(a, b).unwrap();
            prop_assert_eq!(ab, convolve(b, a).unwrap());
            prop_assert!((0.0..=1.0).contains(&ab));
        }
    }
}
