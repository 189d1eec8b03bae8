//! Gauss-Chebyshev rule for `Γ(-m, β)`.
//!
//! The change of variable `t = 2β/x - 1` maps `[β, ∞)` onto `(-1, 1]`:
//!
//! ```text
//! Γ(-m, β) = (2β)^{-m} ∫_{-1}^{1} (t+1)^{m-1} e^{-2β/(t+1)} dt
//!          ≈ (2β)^{-m} (π/n) Σ_{l=1}^{n} (cos θ_l + 1)^{m-1} e^{-2β/(cos θ_l + 1)} |sin θ_l|
//! ```
//!
//! with `θ_l = (2l-1)π/(2n)`. The `|sin θ_l|` factor is what remains of the
//! Chebyshev weight after it cancels against `sqrt(1-t²)`.

use std::f64::consts::PI;

use crate::error::{domain, Error, Result};

/// Number of Chebyshev nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureConfig {
    order: usize,
}

impl QuadratureConfig {
    pub fn new(order: usize) -> Result<Self> {
        if order == 0 {
            return Err(domain("order", 0.0, "order >= 1"));
        }
        Ok(Self { order })
    }

    pub fn order(&self) -> usize {
        self.order
    }
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { order: 100 }
    }
}

/// Precomputed nodes for one quadrature order.
#[derive(Debug, Clone)]
pub struct ChebyshevRule {
    /// `cos θ_l + 1`, in `(0, 2)`.
    shifted_cos: Vec<f64>,
    /// `|sin θ_l|`.
    abs_sin: Vec<f64>,
}

impl ChebyshevRule {
    pub fn new(cfg: QuadratureConfig) -> Self {
        let n = cfg.order;
        let (shifted_cos, abs_sin) = (1..=n)
            .map(|l| {
                let theta = (2 * l - 1) as f64 * PI / (2 * n) as f64;
                (theta.cos() + 1.0, theta.sin().abs())
            })
            .unzip();
        Self {
            shifted_cos,
            abs_sin,
        }
    }

    pub fn order(&self) -> usize {
        self.shifted_cos.len()
    }

    /// Approximates `S(m, β) = e^β β^m Γ(-m, β)` for `m = 0..=max_m`.
    ///
    /// In scaled form each node contributes
    /// `e^{β - 2β/c} |sin θ| (c/2)^m / c` with `c = cos θ + 1 <= 2`, so no
    /// intermediate exceeds one.
    pub fn scaled_table(&self, max_m: usize, beta: f64) -> Result<Vec<f64>> {
        if !(beta > 0.0) {
            return Err(domain("beta", beta, "beta > 0"));
        }
        let weight = PI / self.order() as f64;
        let mut out = vec![0.0; max_m + 1];
        for (&c, &s) in self.shifted_cos.iter().zip(&self.abs_sin) {
            let mut term = (beta - 2.0 * beta / c).exp() * s / c;
            let half_c = 0.5 * c;
            for slot in out.iter_mut() {
                *slot += term;
                term *= half_c;
            }
        }
        out.iter_mut().for_each(|v| *v *= weight);
        Ok(out)
    }
}

/// Gauss-Chebyshev approximation of `Γ(-m, β)` with `q.order()` nodes.
pub fn gauss_chebyshev_gamma(m: usize, beta: f64, q: QuadratureConfig) -> Result<f64> {
    if !(beta > 0.0) {
        return Err(domain("beta", beta, "beta > 0"));
    }
    let rule = ChebyshevRule::new(q);
    let ln_prefactor = -(m as f64) * (2.0 * beta).ln();
    let sum: f64 = rule
        .shifted_cos
        .iter()
        .zip(&rule.abs_sin)
        .map(|(&c, &s)| (ln_prefactor + (m as f64 - 1.0) * c.ln() - 2.0 * beta / c).exp() * s)
        .sum();
    let v = PI / rule.order() as f64 * sum;
    if v.is_infinite() {
        return Err(Error::Overflow("gauss_chebyshev_gamma"));
    }
    Ok(v)
}
