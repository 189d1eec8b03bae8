//! Scenario files: flat `key = value` lines with dotted keys.
//!
//! ```text
//! # power-split scenario
//! links.sd.K = 2
//! links.sd.omega = 9
//! links.sr.K = 5
//! links.sr.omega = 36
//! links.rd.K = 5
//! links.rd.omega = 36
//! power.a2 = 0.3
//! snr_db = 20
//! ```
//!
//! The `series.*`, `quadrature.*` and `mc.*` keys are optional.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use noma_crs::{McConfig, QuadratureConfig, RicianLink, SeriesControl, SystemConfig};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}, key `{key}`: {message}")]
    Value {
        line: usize,
        key: String,
        message: String,
    },
    #[error("missing required key `{0}`")]
    Missing(&'static str),
    #[error("key `{key}`: {source}")]
    Invalid {
        key: String,
        source: noma_crs::Error,
    },
}

const REQUIRED: [&str; 8] = [
    "links.sd.K",
    "links.sd.omega",
    "links.sr.K",
    "links.sr.omega",
    "links.rd.K",
    "links.rd.omega",
    "power.a2",
    "snr_db",
];

const OPTIONAL: [&str; 7] = [
    "series.max_terms",
    "series.rel_tol",
    "quadrature.order",
    "mc.samples",
    "mc.seed",
    "mc.workers",
    "mc.common_random_numbers",
];

/// A fully validated scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioConfig {
    pub system: SystemConfig,
    pub snr_db: f64,
    pub series: SeriesControl,
    pub quadrature: QuadratureConfig,
    pub mc: McConfig,
}

struct Entry {
    line: usize,
    value: String,
}

impl ScenarioConfig {
    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.display().to_string(),
            source,
        })?;
        text.parse()
    }

    /// Canonical `key = value` form; parses back to an equal config.
    pub fn to_config_string(&self) -> String {
        let s = &self.system;
        let mut out = String::new();
        for (name, link) in [("sd", s.sd()), ("sr", s.sr()), ("rd", s.rd())] {
            let _ = writeln!(out, "links.{name}.K = {}", link.k());
            let _ = writeln!(out, "links.{name}.omega = {}", link.omega());
        }
        let _ = writeln!(out, "power.a2 = {}", s.a2());
        let _ = writeln!(out, "snr_db = {}", self.snr_db);
        let _ = writeln!(out, "series.max_terms = {}", self.series.max_terms());
        let _ = writeln!(out, "series.rel_tol = {:e}", self.series.rel_tol());
        let _ = writeln!(out, "quadrature.order = {}", self.quadrature.order());
        let _ = writeln!(out, "mc.samples = {}", self.mc.samples);
        let _ = writeln!(out, "mc.seed = {}", self.mc.seed);
        let _ = writeln!(out, "mc.workers = {}", self.mc.workers);
        let _ = writeln!(out, "mc.common_random_numbers = {}", self.mc.common_random_numbers);
        out
    }

    pub fn with_snr_db(&self, snr_db: f64) -> Result<Self, noma_crs::Error> {
        Ok(Self {
            system: self.system.with_rho(noma_crs::db_to_linear(snr_db))?,
            snr_db,
            ..*self
        })
    }

    pub fn with_a2(&self, a2: f64) -> Result<Self, noma_crs::Error> {
        Ok(Self {
            system: self.system.with_a2(a2)?,
            ..*self
        })
    }
}

fn lookup<T: FromStr>(entries: &BTreeMap<String, Entry>, key: &'static str) -> Result<Option<T>, ConfigError>
where
    T::Err: std::fmt::Display,
{
    let Some(entry) = entries.get(key) else {
        return Ok(None);
    };
    entry
        .value
        .parse::<T>()
        .map(Some)
        .map_err(|e| ConfigError::Value {
            line: entry.line,
            key: key.to_string(),
            message: format!("cannot parse `{}`: {e}", entry.value),
        })
}

fn required<T: FromStr>(entries: &BTreeMap<String, Entry>, key: &'static str) -> Result<T, ConfigError>
where
    T::Err: std::fmt::Display,
{
    lookup(entries, key)?.ok_or(ConfigError::Missing(key))
}

fn invalid(key: &str) -> impl FnOnce(noma_crs::Error) -> ConfigError + '_ {
    move |source| ConfigError::Invalid {
        key: key.to_string(),
        source,
    }
}

impl FromStr for ScenarioConfig {
    type Err = ConfigError;

    fn from_str(text: &str) -> Result<Self, ConfigError> {
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return Err(ConfigError::Syntax {
                    line,
                    message: format!("expected `key = value`, found `{content}`"),
                });
            };
            let (key, value) = (key.trim(), value.trim());
            if !REQUIRED.contains(&key) && !OPTIONAL.contains(&key) {
                return Err(ConfigError::Value {
                    line,
                    key: key.to_string(),
                    message: "unknown key".into(),
                });
            }
            let entry = Entry {
                line,
                value: value.to_string(),
            };
            if let Some(prev) = entries.insert(key.to_string(), entry) {
                return Err(ConfigError::Value {
                    line,
                    key: key.to_string(),
                    message: format!("duplicate key (first set on line {})", prev.line),
                });
            }
        }

        let link = |name: &'static str, k_key: &'static str, omega_key: &'static str| {
            let k: f64 = required(&entries, k_key)?;
            let omega: f64 = required(&entries, omega_key)?;
            RicianLink::new(k, omega).map_err(invalid(name))
        };
        let sd = link("links.sd", "links.sd.K", "links.sd.omega")?;
        let sr = link("links.sr", "links.sr.K", "links.sr.omega")?;
        let rd = link("links.rd", "links.rd.K", "links.rd.omega")?;
        let a2: f64 = required(&entries, "power.a2")?;
        let snr_db: f64 = required(&entries, "snr_db")?;
        if !snr_db.is_finite() {
            return Err(ConfigError::Value {
                line: entries["snr_db"].line,
                key: "snr_db".into(),
                message: "must be finite".into(),
            });
        }
        let system = SystemConfig::from_snr_db(sd, sr, rd, a2, snr_db).map_err(invalid("power.a2"))?;

        let series_default = SeriesControl::default();
        let series = SeriesControl::new(
            lookup(&entries, "series.max_terms")?.unwrap_or(series_default.max_terms()),
            lookup(&entries, "series.rel_tol")?.unwrap_or(series_default.rel_tol()),
        )
        .map_err(invalid("series"))?;

        let quadrature = QuadratureConfig::new(
            lookup(&entries, "quadrature.order")?.unwrap_or(QuadratureConfig::default().order()),
        )
        .map_err(invalid("quadrature.order"))?;

        let mc_default = McConfig::default();
        let mut mc = McConfig::new(
            lookup(&entries, "mc.samples")?.unwrap_or(mc_default.samples),
            lookup(&entries, "mc.seed")?.unwrap_or(mc_default.seed),
            lookup(&entries, "mc.workers")?.unwrap_or(mc_default.workers),
        )
        .map_err(invalid("mc"))?;
        mc.common_random_numbers = lookup(&entries, "mc.common_random_numbers")?.unwrap_or(false);

        Ok(Self {
            system,
            snr_db,
            series,
            quadrature,
            mc,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG2: &str = include_str!("../presets/fig2.cfg");
    const FIG3: &str = include_str!("../presets/fig3.cfg");

    #[test]
    fn presets_parse() {
        let c: ScenarioConfig = FIG2.parse().unwrap();
        assert_eq!(c.system.sd().omega(), 9.0);
        assert_eq!(c.system.sr().k(), 5.0);
        assert_eq!(c.snr_db, 20.0);
        assert!((c.system.rho() - 100.0).abs() < 1e-12);
        let c: ScenarioConfig = FIG3.parse().unwrap();
        assert_eq!(c.system.a2(), 0.4);
        assert_eq!(c.system.sr().omega(), 144.0);
    }

    #[test]
    fn canonical_form_round_trips() {
        let c: ScenarioConfig = FIG2.parse().unwrap();
        let again: ScenarioConfig = c.to_config_string().parse().unwrap();
        assert_eq!(c, again);
    }

    #[test]
    fn a2_above_half_is_rejected() {
        let text = FIG2.replace("power.a2 = 0.3", "power.a2 = 0.6");
        let err = text.parse::<ScenarioConfig>().unwrap_err();
        assert!(err.to_string().contains("a1 > a2 violated"), "{err}");
    }

    #[test]
    fn negative_omega_is_rejected() {
        let text = FIG2.replace("links.sd.omega = 9", "links.sd.omega = -1");
        let err = text.parse::<ScenarioConfig>().unwrap_err();
        assert!(matches!(err, ConfigError::Invalid { ref key, .. } if key == "links.sd"), "{err}");
    }

    #[test]
    fn diagnostics_carry_line_and_key() {
        let err = "links.sd.K = 2\nlinks.sd.omega = nine\n".parse::<ScenarioConfig>().unwrap_err();
        assert_eq!(
            err.to_string(),
            "line 2, key `links.sd.omega`: cannot parse `nine`: invalid float literal"
        );
        let err = "snr_db 20\n".parse::<ScenarioConfig>().unwrap_err();
        assert!(matches!(err, ConfigError::Syntax { line: 1, .. }));
        let err = "snr_db = 20\nsnr_db = 10\n".parse::<ScenarioConfig>().unwrap_err();
        assert!(err.to_string().contains("duplicate"));
        let err = "links.xx.K = 1\n".parse::<ScenarioConfig>().unwrap_err();
        assert!(err.to_string().contains("unknown key"));
        let err = "snr_db = 20\n".parse::<ScenarioConfig>().unwrap_err();
        assert!(matches!(err, ConfigError::Missing("links.sd.K")));
    }

    #[test]
    fn optional_keys_default() {
        let minimal: String = FIG2
            .lines()
            .filter(|l| !l.starts_with("series") && !l.starts_with("quadrature") && !l.starts_with("mc"))
            .map(|l| format!("{l}\n"))
            .collect();
        let c: ScenarioConfig = minimal.parse().unwrap();
        assert_eq!(c.series, SeriesControl::default());
        assert_eq!(c.quadrature.order(), 100);
        assert_eq!(c.mc.samples, 100_000);
    }
}
