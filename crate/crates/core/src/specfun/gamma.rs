//! Incomplete Gamma functions of integer order.
//!
//! The negative-order function is carried around in the scaled form
//!
//! ```text
//! S(m, β) = e^β β^m Γ(-m, β) = e^β E_{m+1}(β)
//! ```
//!
//! which stays of order `1/(m+β)` for every `m` and `β`, so the rate series
//! never has to form `e^β` or `β^{-m}` on their own.

use std::sync::OnceLock;

use crate::error::{domain, Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const MAX_ITER: usize = 10_000;
const EPS: f64 = f64::EPSILON;
const TINY: f64 = 1e-300;
const LN_FACTORIAL_TABLE: usize = 1024;

fn ln_factorial_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(LN_FACTORIAL_TABLE);
        let mut acc = 0.0;
        t.push(0.0);
        for i in 1..LN_FACTORIAL_TABLE {
            acc += (i as f64).ln();
            t.push(acc);
        }
        t
    })
}

/// `ln(n!)`.
pub fn ln_factorial(n: usize) -> f64 {
    if let Some(v) = ln_factorial_table().get(n) {
        return *v;
    }
    // Stirling series, plenty for n >= 1024.
    let x = n as f64 + 1.0;
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + 1.0 / (12.0 * x)
        - 1.0 / (360.0 * x.powi(3))
}

/// Regularized upper incomplete Gamma `Q(n+1, x) = Γ(n+1, x) / n!` for
/// integer order, via the finite expansion `e^{-x} Σ_{i≤n} x^i / i!`.
pub fn regularized_upper_gamma_posint(n: usize, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(domain("x", x, "x >= 0"));
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    let ln_x = x.ln();
    let sum: f64 = (0..=n)
        .map(|i| (-x + i as f64 * ln_x - ln_factorial(i)).exp())
        .sum();
    Ok(sum.min(1.0))
}

/// Upper incomplete Gamma of positive integer order, `Γ(n+1, x)`.
pub fn upper_gamma_posint(n: usize, x: f64) -> Result<f64> {
    let q = regularized_upper_gamma_posint(n, x)?;
    Ok(q * ln_factorial(n).exp())
}

/// `e^x E_n(x)` for `n >= 1`, `x > 0`.
///
/// Continued fraction (modified Lentz) for `x > 1`, power series otherwise.
pub fn exp_scaled_expint(n: usize, x: f64) -> Result<f64> {
    if n == 0 {
        return Err(domain("n", 0.0, "n >= 1"));
    }
    if !(x > 0.0) {
        return Err(domain("x", x, "x > 0"));
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    if x > 1.0 {
        Ok(expint_continued_fraction(n, x))
    } else {
        Ok(x.exp() * expint_series(n, x))
    }
}

fn expint_continued_fraction(n: usize, x: f64) -> f64 {
    let nm1 = (n - 1) as f64;
    let mut b = x + n as f64;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let an = -(i as f64) * (nm1 + i as f64);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

fn expint_series(n: usize, x: f64) -> f64 {
    let nm1 = n - 1;
    let mut ans = if nm1 != 0 {
        1.0 / nm1 as f64
    } else {
        -x.ln() - EULER_GAMMA
    };
    let mut fact = 1.0;
    for i in 1..MAX_ITER {
        fact *= -x / i as f64;
        let del = if i != nm1 {
            -fact / (i as f64 - nm1 as f64)
        } else {
            let psi = -EULER_GAMMA + (1..=nm1).map(|k| 1.0 / k as f64).sum::<f64>();
            fact * (-x.ln() + psi)
        };
        ans += del;
        if del.abs() < ans.abs() * EPS {
            break;
        }
    }
    ans
}

/// `S(m, β) = e^β β^m Γ(-m, β)` for `m = 0..=max_m`.
///
/// For `β <= 1` the table is filled by the recurrence
/// `S(m) = (1 - β S(m-1)) / m` from `S(0) = e^β E_1(β)`; each step damps
/// earlier rounding by `β/m <= 1`. For `β > 1` that recurrence amplifies
/// error, so every order is taken from its own continued fraction.
pub fn scaled_negint_gamma_table(max_m: usize, beta: f64) -> Result<Vec<f64>> {
    if !(beta > 0.0) {
        return Err(domain("beta", beta, "beta > 0"));
    }
    let mut out = Vec::with_capacity(max_m + 1);
    if beta <= 1.0 {
        let mut s = exp_scaled_expint(1, beta)?;
        out.push(s);
        for m in 1..=max_m {
            s = (1.0 - beta * s) / m as f64;
            out.push(s);
        }
    } else {
        for m in 0..=max_m {
            out.push(exp_scaled_expint(m + 1, beta)?);
        }
    }
    Ok(out)
}

/// `S(m, β) = e^β β^m Γ(-m, β)` for a single order.
pub fn scaled_negint_gamma(m: usize, beta: f64) -> Result<f64> {
    if beta > 1.0 {
        exp_scaled_expint(m + 1, beta)
    } else {
        Ok(scaled_negint_gamma_table(m, beta)?[m])
    }
}

/// `ln Γ(-m, β)`.
pub fn ln_upper_gamma_negint(m: usize, beta: f64) -> Result<f64> {
    let s = scaled_negint_gamma(m, beta)?;
    Ok(s.ln() - beta - m as f64 * beta.ln())
}

/// Upper incomplete Gamma of negative integer order,
/// `Γ(-m, β) = ∫_β^∞ e^{-t} t^{-m-1} dt`.
///
/// Underflows to zero for very large `β`.
pub fn upper_gamma_negint(m: usize, beta: f64) -> Result<f64> {
    let v = ln_upper_gamma_negint(m, beta)?.exp();
    if v.is_infinite() {
        return Err(Error::Overflow("upper_gamma_negint"));
    }
    Ok(v)
}

/// `ln(e^β m! Γ(-m, β))`.
pub fn ln_lemma1_integral(m: usize, beta: f64) -> Result<f64> {
    let s = scaled_negint_gamma(m, beta)?;
    Ok(ln_factorial(m) + s.ln() - m as f64 * beta.ln())
}

/// `∫_0^∞ t^m e^{-βt} / (1+t) dt`, evaluated in closed form as
/// `e^β m! Γ(-m, β)`. The product is formed in the log domain, so large `β`
/// (where `e^β` overflows and `Γ(-m, β)` underflows) is fine.
pub fn lemma1_integral(m: usize, beta: f64) -> Result<f64> {
    let v = ln_lemma1_integral(m, beta)?.exp();
    if v.is_infinite() {
        return Err(Error::Overflow("lemma1_integral"));
    }
    Ok(v)
}
