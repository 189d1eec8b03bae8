//! Grid evaluation and the CSV output contract.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use noma_crs::rates::{approx_rates, exact_rates};
use noma_crs::sim::{mc_rates, mc_traditional_rate};
use noma_crs::{Combine, McEstimate, Method, RateMeta, RateReport};
use rayon::prelude::*;
use thiserror::Error;

use crate::config::ScenarioConfig;

pub const CSV_HEADER: &str = "axis_name,axis_value,method,c_s1,c_s2,c_sum,c_traditional,\
meta_tail_bound,meta_order,meta_stderr_c1,meta_stderr_c2,seed";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    A2,
    SnrDb,
}

impl Axis {
    pub fn name(&self) -> &'static str {
        match self {
            Axis::A2 => "a2",
            Axis::SnrDb => "snr_db",
        }
    }

    /// Value of this axis in `scenario`.
    pub fn current(&self, scenario: &ScenarioConfig) -> f64 {
        match self {
            Axis::A2 => scenario.system.a2(),
            Axis::SnrDb => scenario.snr_db,
        }
    }

    pub fn apply(&self, scenario: &ScenarioConfig, value: f64) -> noma_crs::Result<ScenarioConfig> {
        match self {
            Axis::A2 => scenario.with_a2(value),
            Axis::SnrDb => scenario.with_snr_db(value),
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "a2" => Ok(Axis::A2),
            "snr_db" => Ok(Axis::SnrDb),
            _ => Err(format!("unknown axis `{s}` (expected a2 or snr_db)")),
        }
    }
}

pub fn parse_method(s: &str) -> Result<Method, String> {
    match s.trim() {
        "exact" => Ok(Method::ExactSeries),
        "approx" => Ok(Method::GaussChebyshev),
        "mc" => Ok(Method::MonteCarlo),
        other => Err(format!("unknown method `{other}` (expected exact, approx or mc)")),
    }
}

/// Comma-separated method list; order is kept, duplicates are dropped.
pub fn parse_methods(s: &str) -> Result<Vec<Method>, String> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let m = parse_method(part)?;
        if !out.contains(&m) {
            out.push(m);
        }
    }
    Ok(out)
}

pub fn parse_combine(s: &str) -> Result<Combine, String> {
    match s {
        "mrc" => Ok(Combine::Mrc),
        "selection" => Ok(Combine::Selection),
        _ => Err(format!("unknown combining `{s}` (expected mrc or selection)")),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axis: Axis,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
    pub methods: Vec<Method>,
    pub include_traditional: bool,
    pub combine: Combine,
}

#[derive(Debug, Error, PartialEq)]
#[error("invalid sweep: {0}")]
pub struct SpecError(String);

impl SweepSpec {
    pub fn validate(&self) -> Result<(), SpecError> {
        let fail = |m: String| Err(SpecError(m));
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return fail(format!("bounds must be finite, got {} .. {}", self.start, self.stop));
        }
        if self.start >= self.stop {
            return fail(format!("start {} must be below stop {}", self.start, self.stop));
        }
        if self.steps < 2 {
            return fail(format!("steps = {} must be at least 2", self.steps));
        }
        if self.axis == Axis::A2 && !(self.start > 0.0 && self.stop <= 0.5) {
            return fail(format!(
                "a2 axis must stay in (0, 0.5], got {} .. {}",
                self.start, self.stop
            ));
        }
        if self.methods.is_empty() && !self.include_traditional {
            return fail("nothing to evaluate: no methods and no traditional baseline".into());
        }
        Ok(())
    }

    /// Evenly spaced grid including both endpoints exactly.
    pub fn grid(&self) -> Vec<f64> {
        let last = self.steps - 1;
        (0..self.steps)
            .map(|i| {
                if i == last {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * i as f64 / last as f64
                }
            })
            .collect()
    }
}

/// One CSV row.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub axis: Axis,
    pub axis_value: f64,
    /// `None` for a traditional-only row.
    pub report: Option<RateReport>,
    pub traditional: Option<McEstimate>,
    pub seed: u64,
}

#[derive(Debug, Error)]
#[error("{axis} = {value}: {method} failed: {source}")]
pub struct PointError {
    pub axis: Axis,
    pub value: f64,
    pub method: String,
    pub source: noma_crs::Error,
}

/// Rates for every requested method at one scenario.
pub fn evaluate(
    scenario: &ScenarioConfig,
    axis: Axis,
    methods: &[Method],
    traditional: Option<Combine>,
) -> Result<Vec<SweepRow>, PointError> {
    let value = axis.current(scenario);
    let fail = |method: &str| {
        let method = method.to_string();
        move |source| PointError {
            axis,
            value,
            method,
            source,
        }
    };
    let sys = &scenario.system;
    let traditional = traditional
        .map(|c| mc_traditional_rate(sys, &scenario.mc, c))
        .transpose()
        .map_err(fail("traditional"))?;
    let mut rows = Vec::with_capacity(methods.len().max(1));
    for &m in methods {
        let report = match m {
            Method::ExactSeries => exact_rates(sys, &scenario.series),
            Method::GaussChebyshev => approx_rates(sys, &scenario.series, scenario.quadrature),
            Method::MonteCarlo => mc_rates(sys, &scenario.mc),
        }
        .map_err(fail(m.tag()))?;
        rows.push(SweepRow {
            axis,
            axis_value: value,
            report: Some(report),
            traditional,
            seed: scenario.mc.seed,
        });
    }
    if rows.is_empty() && traditional.is_some() {
        rows.push(SweepRow {
            axis,
            axis_value: value,
            report: None,
            traditional,
            seed: scenario.mc.seed,
        });
    }
    Ok(rows)
}

/// Grid points run concurrently; rows come back in grid order.
pub fn run_sweep(scenario: &ScenarioConfig, spec: &SweepSpec) -> Result<Vec<SweepRow>, PointError> {
    let traditional = spec.include_traditional.then_some(spec.combine);
    let per_point: Vec<Vec<SweepRow>> = spec
        .grid()
        .into_par_iter()
        .map(|v| {
            let point = spec.axis.apply(scenario, v).map_err(|source| PointError {
                axis: spec.axis,
                value: v,
                method: "configure".into(),
                source,
            })?;
            evaluate(&point, spec.axis, &spec.methods, traditional)
        })
        .collect::<Result<_, _>>()?;
    Ok(per_point.into_iter().flatten().collect())
}

fn num(x: f64) -> String {
    format!("{x:.12e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

impl SweepRow {
    pub fn csv_line(&self) -> String {
        let (method, c1, c2, sum) = match &self.report {
            Some(r) => (r.method.tag(), Some(r.c_s1), Some(r.c_s2), Some(r.sum)),
            None => ("none", None, None, None),
        };
        let (tail, order, se1, se2) = match self.report.map(|r| r.meta) {
            Some(RateMeta::Series { tail_bound }) => (Some(tail_bound), None, None, None),
            Some(RateMeta::Quadrature { order, tail_bound }) => (Some(tail_bound), Some(order), None, None),
            Some(RateMeta::MonteCarlo {
                stderr_c1, stderr_c2, ..
            }) => (None, None, Some(stderr_c1), Some(stderr_c2)),
            None => (None, None, None, None),
        };
        [
            self.axis.name().to_string(),
            num(self.axis_value),
            method.to_string(),
            opt(c1),
            opt(c2),
            opt(sum),
            opt(self.traditional.map(|t| t.mean)),
            opt(tail),
            order.map(|o| o.to_string()).unwrap_or_default(),
            opt(se1),
            opt(se2),
            self.seed.to_string(),
        ]
        .join(",")
    }
}

pub fn write_csv<W: Write>(mut out: W, rows: &[SweepRow]) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for row in rows {
        writeln!(out, "{}", row.csv_line())?;
    }
    out.flush()
}
