//! Achievable rates of the two superposed symbols.
//!
//! With `z1 = min{λ_SD, λ_SR}` and `z2 = min{a2 λ_SR, λ_RD}`:
//!
//! ```text
//! c1 = ½ [log2(1 + z1 ρ) - log2(1 + z1 ρ a2)]
//! c2 = ½ log2(1 + z2 ρ)
//! ```
//!
//! Averaging over fading turns each log into `D(ρ) = ρ ∫ (1 - F(z)) / (1 + zρ) dz`
//! for the relevant min-statistic. Expanding `F` as a double series and
//! integrating term by term gives
//!
//! ```text
//! D(ρ) = Σ_n Σ_k w_a(n) w_b(k) Σ_{i≤n} Σ_{j≤k} C(i+j, i) p^i q^j S(i+j, β)
//! ```
//!
//! with `β = (α_a + α_b)/ρ`, `p = α_a/(α_a + α_b)`, `q = 1 - p` and
//! `S(m, β) = e^β β^m Γ(-m, β)`. The Gauss-Chebyshev variant only swaps the
//! kernel that produces `S`.

use std::f64::consts::LN_2;
use std::fmt;

use crate::channel::{MinPairSpec, RicianLink, SeriesControl};
use crate::error::{domain, Error, Result};
use crate::series::{shell_sum, SeriesValue};
use crate::specfun::{ln_factorial, scaled_negint_gamma_table, ChebyshevRule, QuadratureConfig};

/// Scenario: three links, power split and transmit SNR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemConfig {
    sd: RicianLink,
    sr: RicianLink,
    rd: RicianLink,
    a2: f64,
    rho: f64,
}

impl SystemConfig {
    /// `a2` must lie in `(0, 0.5]`; `a1 = 1 - a2` is derived. `rho` is the
    /// linear transmit SNR.
    pub fn new(sd: RicianLink, sr: RicianLink, rd: RicianLink, a2: f64, rho: f64) -> Result<Self> {
        check_a2(a2)?;
        if !(rho > 0.0) || !rho.is_finite() {
            return Err(domain("rho", rho, "finite rho > 0"));
        }
        Ok(Self {
            sd,
            sr,
            rd,
            a2,
            rho,
        })
    }

    pub fn from_snr_db(
        sd: RicianLink,
        sr: RicianLink,
        rd: RicianLink,
        a2: f64,
        snr_db: f64,
    ) -> Result<Self> {
        Self::new(sd, sr, rd, a2, crate::db_to_linear(snr_db))
    }

    pub fn with_a2(&self, a2: f64) -> Result<Self> {
        Self::new(self.sd, self.sr, self.rd, a2, self.rho)
    }

    pub fn with_rho(&self, rho: f64) -> Result<Self> {
        Self::new(self.sd, self.sr, self.rd, self.a2, rho)
    }

    pub fn sd(&self) -> RicianLink {
        self.sd
    }

    pub fn sr(&self) -> RicianLink {
        self.sr
    }

    pub fn rd(&self) -> RicianLink {
        self.rd
    }

    pub fn a1(&self) -> f64 {
        1.0 - self.a2
    }

    pub fn a2(&self) -> f64 {
        self.a2
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// `z1 = min{λ_SD, λ_SR}`.
    pub fn z1_pair(&self) -> MinPairSpec {
        MinPairSpec::unscaled(self.sd, self.sr)
    }

    /// `z2 = min{λ_RD, a2 λ_SR}`.
    pub fn z2_pair(&self) -> MinPairSpec {
        MinPairSpec {
            link_a: self.rd,
            scale_a: 1.0,
            link_b: self.sr,
            scale_b: self.a2,
        }
    }
}

fn check_a2(a2: f64) -> Result<()> {
    if !(a2 > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "power.a2 = {a2}: a2 must be > 0"
        )));
    }
    if a2 > 0.5 {
        return Err(Error::InvalidConfig(format!(
            "power.a2 = {a2}: a1 > a2 violated (a1 = {})",
            1.0 - a2
        )));
    }
    if a2 == 0.5 {
        log::warn!("power.a2 = 0.5 gives a1 = a2; the strict ordering a1 > a2 does not hold");
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    ExactSeries,
    GaussChebyshev,
    MonteCarlo,
}

impl Method {
    /// Short tag used on the command line and in CSV output.
    pub fn tag(&self) -> &'static str {
        match self {
            Method::ExactSeries => "exact",
            Method::GaussChebyshev => "approx",
            Method::MonteCarlo => "mc",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::ExactSeries => "exact-series",
            Method::GaussChebyshev => "gauss-chebyshev",
            Method::MonteCarlo => "monte-carlo",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RateMeta {
    /// Bound on the series truncation error of the sum rate, bits/s/Hz.
    Series { tail_bound: f64 },
    Quadrature { order: usize, tail_bound: f64 },
    MonteCarlo {
        stderr_c1: f64,
        stderr_c2: f64,
        samples: usize,
    },
}

/// Average rates in bits/s/Hz, including the ½ pre-log of the two-slot
/// protocol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateReport {
    pub c_s1: f64,
    pub c_s2: f64,
    pub sum: f64,
    pub method: Method,
    pub meta: RateMeta,
}

impl RateReport {
    pub fn new(c_s1: f64, c_s2: f64, method: Method, meta: RateMeta) -> Self {
        Self {
            c_s1,
            c_s2,
            sum: c_s1 + c_s2,
            method,
            meta,
        }
    }
}

/// Received SINRs of one channel realization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sinrs {
    /// `s1` at the relay, `s2` treated as noise.
    pub sr1: f64,
    /// `s2` at the relay after SIC.
    pub sr2: f64,
    /// `s1` at the destination in the first slot.
    pub sd: f64,
    /// `s2` at the destination in the second slot.
    pub rd: f64,
}

pub fn sinr_all(cfg: &SystemConfig, lam_sd: f64, lam_sr: f64, lam_rd: f64) -> Sinrs {
    let (a1, a2, rho) = (cfg.a1(), cfg.a2, cfg.rho);
    Sinrs {
        sr1: lam_sr * a1 * rho / (lam_sr * a2 * rho + 1.0),
        sr2: lam_sr * a2 * rho,
        sd: lam_sd * a1 * rho / (lam_sd * a2 * rho + 1.0),
        rd: lam_rd * rho,
    }
}

fn half_log2_1p(x: f64) -> f64 {
    0.5 * x.ln_1p() / LN_2
}

/// Instantaneous rates `(c1, c2)` for one realization.
pub fn instant_rates(cfg: &SystemConfig, lam_sd: f64, lam_sr: f64, lam_rd: f64) -> (f64, f64) {
    let z1 = lam_sd.min(lam_sr);
    let z2 = (cfg.a2 * lam_sr).min(lam_rd);
    let c1 = (half_log2_1p(z1 * cfg.rho) - half_log2_1p(z1 * cfg.rho * cfg.a2)).max(0.0);
    (c1, half_log2_1p(z2 * cfg.rho))
}

/// How `S(m, β) = e^β β^m Γ(-m, β)` is produced inside the series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GammaKernel {
    Exact,
    GaussChebyshev(QuadratureConfig),
}

impl GammaKernel {
    fn scaled_table(&self, max_m: usize, beta: f64) -> Result<Vec<f64>> {
        match self {
            GammaKernel::Exact => scaled_negint_gamma_table(max_m, beta),
            GammaKernel::GaussChebyshev(q) => ChebyshevRule::new(*q).scaled_table(max_m, beta),
        }
    }
}

/// `D(ρ) = ρ ∫_0^∞ (1 - F(z)) / (1 + zρ) dz` for the min-statistic `pair`.
///
/// The `(n, k)` term is `w_a(n) w_b(k) E[ln(1 + ρ X)]` for a variable `X`
/// with mean at most `(n + k + 2)/(α_a + α_b)`, which gives the tail bound by
/// Jensen's inequality. The bound is for the exact series; with the
/// Gauss-Chebyshev kernel it does not cover the quadrature error.
pub fn d_term(
    rho_eff: f64,
    pair: &MinPairSpec,
    ctrl: &SeriesControl,
    kernel: &GammaKernel,
) -> Result<SeriesValue> {
    if !(rho_eff > 0.0) || !rho_eff.is_finite() {
        return Err(domain("rho_eff", rho_eff, "finite rho_eff > 0"));
    }
    let n_max = ctrl.max_terms();
    let (alpha_a, alpha_b) = pair.alphas();
    let alpha = alpha_a + alpha_b;
    let beta = alpha / rho_eff;
    let (ln_p, ln_q) = ((alpha_a / alpha).ln(), (alpha_b / alpha).ln());

    // e^β (i+j)! Γ(-i-j, β) only depends on i + j
    let scaled = kernel.scaled_table(2 * n_max, beta)?;

    // cumulative[n][k] = Σ_{i≤n, j≤k} C(i+j, i) p^i q^j S(i+j)
    let width = n_max + 1;
    let mut cumulative = vec![0.0; width * width];
    for i in 0..width {
        let mut row = 0.0;
        for j in 0..width {
            let m = i + j;
            let ln_binom = ln_factorial(m) - ln_factorial(i) - ln_factorial(j);
            row += (ln_binom + i as f64 * ln_p + j as f64 * ln_q).exp() * scaled[m];
            let above = if i > 0 { cumulative[(i - 1) * width + j] } else { 0.0 };
            cumulative[i * width + j] = row + above;
        }
    }

    let (wa, wb) = pair.weights(n_max);
    shell_sum(
        &wa,
        &wb,
        ctrl.rel_tol(),
        0.0,
        |n, k| cumulative[n * width + k],
        |s| {
            pair.tail_bound(
                s,
                n_max,
                |t| ((t + 2) as f64 / beta).ln_1p(),
                |n| (rho_eff * (n + 1) as f64 / alpha_a).ln_1p(),
                |k| (rho_eff * (k + 1) as f64 / alpha_b).ln_1p(),
            )
        },
    )
}

const BITS: f64 = 1.0 / (2.0 * LN_2);

fn c1_with(cfg: &SystemConfig, ctrl: &SeriesControl, kernel: &GammaKernel) -> Result<SeriesValue> {
    let pair = cfg.z1_pair();
    let full = d_term(cfg.rho, &pair, ctrl, kernel)?;
    let reduced = d_term(cfg.rho * cfg.a2, &pair, ctrl, kernel)?;
    Ok(SeriesValue {
        value: (BITS * (full.value - reduced.value)).max(0.0),
        tail_bound: BITS * (full.tail_bound + reduced.tail_bound),
        shells: full.shells.max(reduced.shells),
    })
}

fn c2_with(cfg: &SystemConfig, ctrl: &SeriesControl, kernel: &GammaKernel) -> Result<SeriesValue> {
    let d = d_term(cfg.rho, &cfg.z2_pair(), ctrl, kernel)?;
    Ok(SeriesValue {
        value: BITS * d.value,
        tail_bound: BITS * d.tail_bound,
        shells: d.shells,
    })
}

/// `c1 = (D(ρ) - D(ρ a2)) / (2 ln 2)` over `z1`.
pub fn c1_exact(cfg: &SystemConfig, ctrl: &SeriesControl) -> Result<SeriesValue> {
    c1_with(cfg, ctrl, &GammaKernel::Exact)
}

/// `c2 = D(ρ) / (2 ln 2)` over `z2`.
pub fn c2_exact(cfg: &SystemConfig, ctrl: &SeriesControl) -> Result<SeriesValue> {
    c2_with(cfg, ctrl, &GammaKernel::Exact)
}

pub fn c1_approx(cfg: &SystemConfig, ctrl: &SeriesControl, q: QuadratureConfig) -> Result<SeriesValue> {
    c1_with(cfg, ctrl, &GammaKernel::GaussChebyshev(q))
}

pub fn c2_approx(cfg: &SystemConfig, ctrl: &SeriesControl, q: QuadratureConfig) -> Result<SeriesValue> {
    c2_with(cfg, ctrl, &GammaKernel::GaussChebyshev(q))
}

pub fn exact_rates(cfg: &SystemConfig, ctrl: &SeriesControl) -> Result<RateReport> {
    let c1 = c1_exact(cfg, ctrl)?;
    let c2 = c2_exact(cfg, ctrl)?;
    Ok(RateReport::new(
        c1.value,
        c2.value,
        Method::ExactSeries,
        RateMeta::Series {
            tail_bound: c1.tail_bound + c2.tail_bound,
        },
    ))
}

pub fn approx_rates(cfg: &SystemConfig, ctrl: &SeriesControl, q: QuadratureConfig) -> Result<RateReport> {
    let c1 = c1_approx(cfg, ctrl, q)?;
    let c2 = c2_approx(cfg, ctrl, q)?;
    Ok(RateReport::new(
        c1.value,
        c2.value,
        Method::GaussChebyshev,
        RateMeta::Quadrature {
            order: q.order(),
            tail_bound: c1.tail_bound + c2.tail_bound,
        },
    ))
}

#[cfg(test)]
mod tests;
