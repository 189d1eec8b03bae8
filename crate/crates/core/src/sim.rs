//! Monte Carlo estimates of the average rates.
//!
//! Samples are processed in fixed-size blocks. Block `b` draws from its own
//! ChaCha stream keyed by `(seed, tag, b)` and block results are merged in
//! block order, so an estimate depends only on `(seed, samples)`. The worker
//! count changes wall time, not the bits of the result.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channel::RicianLink;
use crate::error::{domain, Error, Result};
use crate::rates::{instant_rates, Method, RateMeta, RateReport, SystemConfig};

const BLOCK: usize = 4096;
const NOMA_STREAM: u64 = 0;
const TRADITIONAL_STREAM: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    pub samples: usize,
    pub seed: u64,
    pub workers: usize,
    /// Reuse the NOMA draws for the traditional baseline.
    pub common_random_numbers: bool,
}

impl McConfig {
    pub fn new(samples: usize, seed: u64, workers: usize) -> Result<Self> {
        if samples == 0 {
            return Err(domain("samples", 0.0, "samples >= 1"));
        }
        if workers == 0 {
            return Err(domain("workers", 0.0, "workers >= 1"));
        }
        Ok(Self {
            samples,
            seed,
            workers,
            common_random_numbers: false,
        })
    }
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            samples: 100_000,
            seed: 0x5eed,
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            common_random_numbers: false,
        }
    }
}

/// Sample mean with its standard error `sd / sqrt(samples)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: usize,
}

/// Running mean and sum of squared deviations; merged with Chan's update.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: usize,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if self.n == 0 {
            return other;
        }
        if other.n == 0 {
            return self;
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        Moments {
            n,
            mean: self.mean + delta * other.n as f64 / n as f64,
            m2: self.m2 + other.m2 + delta * delta * (self.n * other.n) as f64 / n as f64,
        }
    }

    fn estimate(&self) -> McEstimate {
        let stderr = if self.n > 1 {
            (self.m2 / (self.n - 1) as f64 / self.n as f64).sqrt()
        } else {
            0.0
        };
        McEstimate {
            mean: self.mean,
            stderr,
            samples: self.n,
        }
    }
}

/// One `(λ_SD, λ_SR, λ_RD)` realization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gains {
    pub sd: f64,
    pub sr: f64,
    pub rd: f64,
}

fn block_rng(seed: u64, tag: u64, block: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((tag << 48) | block as u64);
    rng
}

fn draw(rng: &mut ChaCha8Rng, sd: &RicianLink, sr: &RicianLink, rd: &RicianLink) -> Gains {
    Gains {
        sd: sd.sample_lambda(rng),
        sr: sr.sample_lambda(rng),
        rd: rd.sample_lambda(rng),
    }
}

/// Runs `per_block` over every block on a pool of `mc.workers` threads and
/// returns the block results in block order.
fn run_blocks<T, F>(mc: &McConfig, per_block: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize, usize) -> T + Sync,
{
    let blocks = mc.samples.div_ceil(BLOCK);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(mc.workers)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("cannot start {} workers: {e}", mc.workers)))?;
    Ok(pool.install(|| {
        (0..blocks)
            .into_par_iter()
            .map(|b| {
                let len = BLOCK.min(mc.samples - b * BLOCK);
                per_block(b, len)
            })
            .collect()
    }))
}

/// Visits `mc.samples` channel realizations drawn from stream `tag`,
/// accumulating one [`Moments`] per output of `f`.
fn estimate_with<const N: usize>(
    cfg: &SystemConfig,
    mc: &McConfig,
    tag: u64,
    f: impl Fn(Gains) -> [f64; N] + Sync,
) -> Result<[McEstimate; N]> {
    let (sd, sr, rd) = (cfg.sd(), cfg.sr(), cfg.rd());
    let blocks = run_blocks(mc, |b, len| {
        let mut rng = block_rng(mc.seed, tag, b);
        let mut acc = [Moments::default(); N];
        for _ in 0..len {
            let values = f(draw(&mut rng, &sd, &sr, &rd));
            for (m, v) in acc.iter_mut().zip(values) {
                m.push(v);
            }
        }
        acc
    })?;
    let total = blocks.into_iter().fold([Moments::default(); N], |mut tot, block| {
        for (t, b) in tot.iter_mut().zip(block) {
            *t = t.merge(b);
        }
        tot
    });
    Ok(total.map(|m| m.estimate()))
}

/// Empirical mean of the instantaneous rates `(c1, c2)`.
pub fn mc_noma_rates(cfg: &SystemConfig, mc: &McConfig) -> Result<(McEstimate, McEstimate)> {
    let [c1, c2] = estimate_with(cfg, mc, NOMA_STREAM, |g| {
        let (c1, c2) = instant_rates(cfg, g.sd, g.sr, g.rd);
        [c1, c2]
    })?;
    Ok((c1, c2))
}

pub fn mc_rates(cfg: &SystemConfig, mc: &McConfig) -> Result<RateReport> {
    let (c1, c2) = mc_noma_rates(cfg, mc)?;
    Ok(RateReport::new(
        c1.mean,
        c2.mean,
        Method::MonteCarlo,
        RateMeta::MonteCarlo {
            stderr_c1: c1.stderr,
            stderr_c2: c2.stderr,
            samples: c1.samples,
        },
    ))
}

/// How the destination combines the direct and relayed copies in the
/// traditional (one symbol per two slots) relaying baseline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Combine {
    /// Maximal-ratio combining: `λ_SD + λ_RD`.
    #[default]
    Mrc,
    /// Selection combining: `max{λ_SD, λ_RD}`.
    Selection,
}

impl Combine {
    pub fn apply(&self, lam_sd: f64, lam_rd: f64) -> f64 {
        match self {
            Combine::Mrc => lam_sd + lam_rd,
            Combine::Selection => lam_sd.max(lam_rd),
        }
    }
}

/// `½ log2(1 + min{λ_SR, combine(λ_SD, λ_RD)} ρ)` for one realization.
pub fn traditional_instant_rate(cfg: &SystemConfig, combine: Combine, g: Gains) -> f64 {
    let snr = g.sr.min(combine.apply(g.sd, g.rd)) * cfg.rho();
    0.5 * snr.ln_1p() / std::f64::consts::LN_2
}

/// Empirical rate of decode-and-forward relaying without NOMA.
pub fn mc_traditional_rate(cfg: &SystemConfig, mc: &McConfig, combine: Combine) -> Result<McEstimate> {
    let tag = if mc.common_random_numbers {
        NOMA_STREAM
    } else {
        TRADITIONAL_STREAM
    };
    let [rate] = estimate_with(cfg, mc, tag, |g| [traditional_instant_rate(cfg, combine, g)])?;
    Ok(rate)
}

/// Draws of `(z1, z2)` from the NOMA stream, in sample order.
pub fn sample_min_pairs(cfg: &SystemConfig, mc: &McConfig) -> Result<(Vec<f64>, Vec<f64>)> {
    let (sd, sr, rd, a2) = (cfg.sd(), cfg.sr(), cfg.rd(), cfg.a2());
    let blocks = run_blocks(mc, |b, len| {
        let mut rng = block_rng(mc.seed, NOMA_STREAM, b);
        (0..len)
            .map(|_| {
                let g = draw(&mut rng, &sd, &sr, &rd);
                (g.sd.min(g.sr), (a2 * g.sr).min(g.rd))
            })
            .collect::<Vec<_>>()
    })?;
    Ok(blocks.into_iter().flatten().unzip())
}

/// Kolmogorov-Smirnov distance `sup |F_n - F|` between the empirical CDF of
/// `samples` and `cdf`.
pub fn ks_distance(samples: &[f64], mut cdf: impl FnMut(f64) -> Result<f64>) -> Result<f64> {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut worst: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x)?;
        worst = worst.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    Ok(worst)
}
