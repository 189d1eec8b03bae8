//! Shell-ordered summation of the double series over `(n, k)`.
//!
//! Every series in this crate has the shape `Σ_n Σ_k w_a(n) w_b(k) g(n, k)`
//! where `w(n) = e^{-K} K^n / n!` is a Poisson pmf and `g` is bounded by a
//! slowly growing function of `n + k`. Summing by shells `n + k = s` lets the
//! tail be bounded a priori through the Poisson(K_a + K_b) distribution of
//! `n + k`.

use crate::error::{Error, Result};
use crate::specfun::ln_factorial;

/// A truncated series value together with a rigorous bound on what was left
/// out.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    pub tail_bound: f64,
    /// Number of `n + k` shells summed.
    pub shells: usize,
}

pub(crate) fn ln_poisson_pmf(mean: f64, s: usize) -> f64 {
    if mean == 0.0 {
        return if s == 0 { 0.0 } else { f64::NEG_INFINITY };
    }
    -mean + s as f64 * mean.ln() - ln_factorial(s)
}

pub(crate) fn poisson_weights(mean: f64, n_max: usize) -> Vec<f64> {
    (0..=n_max).map(|s| ln_poisson_pmf(mean, s).exp()).collect()
}

/// `Σ_{s >= from} π_mean(s) · growth(s)`, for `growth` at most polynomial.
pub(crate) fn poisson_tail(mean: f64, from: usize, growth: impl Fn(usize) -> f64) -> f64 {
    if mean == 0.0 {
        return if from == 0 { growth(0) } else { 0.0 };
    }
    let mut acc = 0.0;
    let mut s = from;
    loop {
        let term = ln_poisson_pmf(mean, s).exp() * growth(s);
        acc += term;
        if s as f64 > mean && (term <= 1e-18 * acc || term < f64::MIN_POSITIVE) {
            break;
        }
        s += 1;
    }
    acc
}

/// Sums `w_a(n) w_b(k) g(n, k)` over `0 <= n, k <= max_terms` shell by shell.
///
/// `tail(s)` must bound everything not yet summed after shell `s`. Stops once
/// both the tail bound and the last shell are within
/// `rel_tol * max(partial, abs_floor)`.
pub(crate) fn shell_sum(
    wa: &[f64],
    wb: &[f64],
    rel_tol: f64,
    abs_floor: f64,
    mut term: impl FnMut(usize, usize) -> f64,
    tail: impl Fn(usize) -> f64,
) -> Result<SeriesValue> {
    let max_terms = wa.len().min(wb.len()) - 1;
    let mut partial = 0.0;
    let mut last_tail = f64::INFINITY;
    for s in 0..=2 * max_terms {
        let mut shell = 0.0;
        for n in s.saturating_sub(max_terms)..=s.min(max_terms) {
            let k = s - n;
            let w = wa[n] * wb[k];
            if w > 0.0 {
                shell += w * term(n, k);
            }
        }
        partial += shell;
        last_tail = tail(s);
        let tol = rel_tol * partial.max(abs_floor);
        if last_tail <= tol && (shell <= tol || last_tail == 0.0) {
            return Ok(SeriesValue {
                value: partial,
                tail_bound: last_tail,
                shells: s + 1,
            });
        }
    }
    Err(Error::Truncation {
        tail_bound: last_tail,
        tolerance: rel_tol * partial.max(abs_floor),
        max_terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_one() {
        let w = poisson_weights(5.0, 80);
        let s: f64 = w.iter().sum();
        assert!((s - 1.0).abs() < 1e-14);
        assert_eq!(poisson_weights(0.0, 3), vec![1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn tail_matches_complement() {
        let w = poisson_weights(7.0, 200);
        let head: f64 = w[..=10].iter().sum();
        let tail = poisson_tail(7.0, 11, |_| 1.0);
        assert!((head + tail - 1.0).abs() < 1e-14);
    }

    #[test]
    fn sums_product_of_pmfs_to_one() {
        let wa = poisson_weights(3.0, 60);
        let wb = poisson_weights(4.0, 60);
        let v = shell_sum(&wa, &wb, 1e-12, 1.0, |_, _| 1.0, |s| poisson_tail(7.0, s + 1, |_| 1.0))
            .unwrap();
        assert!((v.value - 1.0).abs() < 1e-12);
        assert!(v.tail_bound <= 1e-12);
    }

    #[test]
    fn too_few_terms_is_reported() {
        let wa = poisson_weights(20.0, 5);
        let wb = poisson_weights(20.0, 5);
        let r = shell_sum(&wa, &wb, 1e-12, 1.0, |_, _| 1.0, |s| poisson_tail(40.0, s + 1, |_| 1.0));
        match r {
            Err(Error::Truncation { tail_bound, max_terms, .. }) => {
                assert_eq!(max_terms, 5);
                assert!(tail_bound > 0.5);
            }
            other => panic!("expected truncation failure, got {other:?}"),
        }
    }
}
