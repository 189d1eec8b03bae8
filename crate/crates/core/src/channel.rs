//! Rician links, squared-envelope sampling, and the CDF of the
//! min-statistics `z1 = min{λ_SR, λ_SD}` and `z2 = min{a2 λ_SR, λ_RD}`.
//!
//! For a link with Rician factor `K` and mean power `Ω` the squared envelope
//! `λ = |h|²` has survival function
//!
//! ```text
//! P(λ > z) = A Σ_n B̃(n) Γ(n+1, a z),   a = (1+K)/Ω,  A = a e^{-K},
//! B̃(n) = B(n)/a^{n+1},  B(n) = K^n (1+K)^n / (Ω^n (n!)²).
//! ```
//!
//! The product `A B̃(n) n!` collapses to the Poisson pmf `e^{-K} K^n / n!`,
//! which is the weight the series code works with.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{domain, Result};
use crate::series::{poisson_tail, poisson_weights, shell_sum, SeriesValue};
use crate::specfun::ln_factorial;

/// One independent Rician fading link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RicianLink {
    k: f64,
    omega: f64,
}

impl RicianLink {
    pub fn new(k: f64, omega: f64) -> Result<Self> {
        if !(k >= 0.0) || !k.is_finite() {
            return Err(domain("K", k, "finite K >= 0"));
        }
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(domain("omega", omega, "finite omega > 0"));
        }
        Ok(Self { k, omega })
    }

    pub fn rayleigh(omega: f64) -> Result<Self> {
        Self::new(0.0, omega)
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// `a = (1+K)/Ω`.
    pub fn rate(&self) -> f64 {
        (1.0 + self.k) / self.omega
    }

    pub fn coefficients(&self) -> LinkCoefficients {
        coefficients(self)
    }

    /// Draws `λ = |μ + c|²` with line-of-sight power `ΩK/(1+K)` and circular
    /// Gaussian scatter of power `Ω/(1+K)`.
    pub fn sample_lambda<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        sample_lambda(self, rng)
    }
}

/// Series coefficients derived from a [`RicianLink`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkCoefficients {
    k: f64,
    /// `a = (1+K)/Ω`
    pub a: f64,
    /// `A = a e^{-K}`
    pub big_a: f64,
    /// `P = K(1+K)/Ω`
    pub p: f64,
}

impl LinkCoefficients {
    /// `B̃(n) = K^n / ((n!)² a)`, computed on demand.
    pub fn btilde(&self, n: usize) -> f64 {
        if n == 0 {
            return 1.0 / self.a;
        }
        if self.k == 0.0 {
            return 0.0;
        }
        (n as f64 * self.k.ln() - 2.0 * ln_factorial(n)).exp() / self.a
    }

    pub fn btilde_table(&self, n_max: usize) -> Vec<f64> {
        (0..=n_max).map(|n| self.btilde(n)).collect()
    }

    /// `A B̃(n) n! = e^{-K} K^n / n!`.
    pub fn series_weight(&self, n: usize) -> f64 {
        crate::series::ln_poisson_pmf(self.k, n).exp()
    }
}

pub fn coefficients(link: &RicianLink) -> LinkCoefficients {
    let a = link.rate();
    LinkCoefficients {
        k: link.k,
        a,
        big_a: a * (-link.k).exp(),
        p: link.k * (1.0 + link.k) / link.omega,
    }
}

pub fn sample_lambda<R: Rng + ?Sized>(link: &RicianLink, rng: &mut R) -> f64 {
    let los = (link.omega * link.k / (1.0 + link.k)).sqrt();
    let sigma = (link.omega / (2.0 * (1.0 + link.k))).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    let x = los + sigma * re;
    let y = sigma * im;
    x * x + y * y
}

/// Truncation settings for the double series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    max_terms: usize,
    rel_tol: f64,
}

impl SeriesControl {
    pub fn new(max_terms: usize, rel_tol: f64) -> Result<Self> {
        if max_terms == 0 {
            return Err(domain("max_terms", 0.0, "max_terms >= 1"));
        }
        if !(rel_tol > 0.0) {
            return Err(domain("rel_tol", rel_tol, "rel_tol > 0"));
        }
        Ok(Self { max_terms, rel_tol })
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self {
            max_terms: 60,
            rel_tol: 1e-12,
        }
    }
}

/// `min{s_a λ_a, s_b λ_b}` for two independent Rician links.
///
/// Scaling a link by `s` leaves `A`, `B̃` and the series weights unchanged and
/// replaces the Gamma argument rate `a` by `α = a / s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinPairSpec {
    pub link_a: RicianLink,
    pub scale_a: f64,
    pub link_b: RicianLink,
    pub scale_b: f64,
}

impl MinPairSpec {
    pub fn new(link_a: RicianLink, scale_a: f64, link_b: RicianLink, scale_b: f64) -> Result<Self> {
        for (name, s) in [("scale_a", scale_a), ("scale_b", scale_b)] {
            if !(s > 0.0) || !s.is_finite() {
                return Err(domain(name, s, "finite scale > 0"));
            }
        }
        Ok(Self {
            link_a,
            scale_a,
            link_b,
            scale_b,
        })
    }

    pub fn unscaled(link_a: RicianLink, link_b: RicianLink) -> Self {
        Self {
            link_a,
            scale_a: 1.0,
            link_b,
            scale_b: 1.0,
        }
    }

    /// Effective Gamma-argument rates `(α_a, α_b)`.
    pub fn alphas(&self) -> (f64, f64) {
        (
            self.link_a.rate() / self.scale_a,
            self.link_b.rate() / self.scale_b,
        )
    }

    pub(crate) fn weights(&self, n_max: usize) -> (Vec<f64>, Vec<f64>) {
        (
            poisson_weights(self.link_a.k, n_max),
            poisson_weights(self.link_b.k, n_max),
        )
    }

    /// Bound on the terms a truncated series leaves out after summing shells
    /// `0..=last_shell` with each index capped at `max_terms`, given that the
    /// `(n, k)` term is at most `w_a(n) w_b(k) growth(n + k)` and at most
    /// `w_a(n) w_b(k) growth_a(n)` (and likewise for `b`).
    pub(crate) fn tail_bound(
        &self,
        last_shell: usize,
        max_terms: usize,
        growth: impl Fn(usize) -> f64,
        growth_a: impl Fn(usize) -> f64,
        growth_b: impl Fn(usize) -> f64,
    ) -> f64 {
        let (ka, kb) = (self.link_a.k, self.link_b.k);
        let caps = poisson_tail(ka, max_terms + 1, growth_a) + poisson_tail(kb, max_terms + 1, growth_b);
        if last_shell >= 2 * max_terms {
            // the whole square has been summed; only the index caps remain
            return caps;
        }
        poisson_tail(ka + kb, last_shell + 1, growth) + caps
    }
}

/// Survival `P(min > z)` as a truncated series with its tail bound.
pub fn survival_min(z: f64, spec: &MinPairSpec, ctrl: &SeriesControl) -> Result<SeriesValue> {
    if !(z >= 0.0) {
        return Err(domain("z", z, "z >= 0"));
    }
    let n_max = ctrl.max_terms;
    let (alpha_a, alpha_b) = spec.alphas();
    let qa = regularized_upper_table(n_max, alpha_a * z);
    let qb = regularized_upper_table(n_max, alpha_b * z);
    let (wa, wb) = spec.weights(n_max);
    shell_sum(
        &wa,
        &wb,
        ctrl.rel_tol,
        1.0,
        |n, k| qa[n] * qb[k],
        |s| spec.tail_bound(s, n_max, |_| 1.0, |_| 1.0, |_| 1.0),
    )
}

/// `Q(n+1, x)` for `n = 0..=n_max`, accumulated in the log domain.
fn regularized_upper_table(n_max: usize, x: f64) -> Vec<f64> {
    if x == 0.0 {
        return vec![1.0; n_max + 1];
    }
    let ln_x = x.ln();
    let mut acc = 0.0;
    (0..=n_max)
        .map(|i| {
            acc += (-x + i as f64 * ln_x - ln_factorial(i)).exp();
            acc.min(1.0)
        })
        .collect()
}

/// CDF of `min{s_a λ_a, s_b λ_b}` at `z`, clamped to `[0, 1]`.
pub fn cdf_min(z: f64, spec: &MinPairSpec, ctrl: &SeriesControl) -> Result<f64> {
    if z == 0.0 {
        return Ok(0.0);
    }
    let s = survival_min(z, spec, ctrl)?;
    Ok((1.0 - s.value).clamp(0.0, 1.0))
}

/// The dominating constant `A_a A_b e^{P_a + P_b}` of the rewritten series
/// `A_a A_b Σ P_a^n/n! P_b^k/k! (Γ(n+1,·)/n!) (Γ(k+1,·)/k!)`.
///
/// `A` and `P` are the unscaled link values; the scale only enters the Gamma
/// arguments. This constant does not bound the CDF series itself (the
/// rewrite drops a factor `a^{-(n+1)}` from `B̃(n)`), so truncation control
/// uses [`truncation_tail`] instead.
pub fn convergence_bound(spec: &MinPairSpec) -> f64 {
    let ca = spec.link_a.coefficients();
    let cb = spec.link_b.coefficients();
    ca.big_a * cb.big_a * (ca.p + cb.p).exp()
}

/// `A_a A_b Σ_{(n,k) ∉ [0,N]²} P_a^n/n! P_b^k/k!`: the part of the dominating
/// series of [`convergence_bound`] left out by an `N × N` truncation.
pub fn convergence_tail(spec: &MinPairSpec, n: usize) -> f64 {
    let ca = spec.link_a.coefficients();
    let cb = spec.link_b.coefficients();
    let head = |p: f64| -> f64 { (0..=n).map(|i| pow_over_factorial(p, i)).sum() };
    let tail = |p: f64| -> f64 {
        let mut acc = 0.0;
        let mut i = n + 1;
        loop {
            let t = pow_over_factorial(p, i);
            acc += t;
            if t <= 1e-20 * acc || t == 0.0 {
                break acc;
            }
            i += 1;
        }
    };
    ca.big_a * cb.big_a * (tail(ca.p) * cb.p.exp() + head(ca.p) * tail(cb.p))
}

fn pow_over_factorial(p: f64, i: usize) -> f64 {
    if p == 0.0 {
        return if i == 0 { 1.0 } else { 0.0 };
    }
    (i as f64 * p.ln() - ln_factorial(i)).exp()
}

/// Bound on the CDF error left by summing shells `0..=last_shell` with each
/// index capped at `max_terms`. Uses `Γ(n+1, x)/n! <= 1` and the fact that
/// `n + k` is Poisson(K_a + K_b) under the series weights.
pub fn truncation_tail(spec: &MinPairSpec, last_shell: usize, max_terms: usize) -> f64 {
    spec.tail_bound(last_shell, max_terms, |_| 1.0, |_| 1.0, |_| 1.0)
}
