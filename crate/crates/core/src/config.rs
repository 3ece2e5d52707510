//! Run configuration shared by the CLI and JSON config files.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::diagnostics::{Thresholds, DEFAULT_WINDOW};
use crate::error::{require_positive, Error, Result};
use crate::spectrum::{build_sphere_spectrum, build_torus_spectrum, SpatialSpectrum};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GeometrySpec {
    Sphere {
        radius: f64,
    },
    Torus {
        period: f64,
    },
    /// A spectrum document on disk (see `SpatialSpectrum::from_json`).
    Custom {
        path: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LimitOptions {
    pub omega: f64,
    /// Half-width of the centred bump.
    pub bump_width: f64,
    pub taus: Vec<f64>,
    pub bound_power: i32,
    pub bound_margin: f64,
}

impl Default for LimitOptions {
    fn default() -> Self {
        LimitOptions {
            omega: 1.0,
            bump_width: 1.0,
            taus: vec![2.0, 5.0, 10.0, 20.0, 50.0, 100.0],
            bound_power: 2,
            bound_margin: 1.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OracleOptions {
    pub nodes: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions { nodes: 2001 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScanOptions {
    pub tau_min: f64,
    pub tau_max: f64,
    pub tau_step: f64,
    /// Tail sups below this are listed as near-vanishing.
    pub report_below: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            tau_min: 0.05,
            tau_max: 3.2,
            tau_step: 0.05,
            report_below: 0.05,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub geometry: GeometrySpec,
    pub mass: f64,
    pub tau: f64,
    pub tau_prime: Option<f64>,
    /// Highest level index for the sphere, highest |n|² for the torus,
    /// and a cap on the level index for custom spectra.
    pub levels: usize,
    pub window: usize,
    /// Largest r of the torus subsequences.
    pub r_max: usize,
    pub thresholds: Thresholds,
    pub out: PathBuf,
    pub formats: Vec<OutputFormat>,
    pub limit: LimitOptions,
    pub oracle: OracleOptions,
    pub scan: ScanOptions,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            geometry: GeometrySpec::Sphere { radius: 1.0 },
            mass: 1.0,
            tau: 1.0,
            tau_prime: None,
            levels: 500,
            window: DEFAULT_WINDOW,
            r_max: 500,
            thresholds: Thresholds::default(),
            out: PathBuf::from("sjslab-out"),
            formats: vec![OutputFormat::Csv, OutputFormat::Json],
            limit: LimitOptions::default(),
            oracle: OracleOptions::default(),
            scan: ScanOptions::default(),
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<RunConfig> {
        serde_json::from_str(text).map_err(|e| Error::Validation(format!("config: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn load(path: &Path) -> std::io::Result<String> {
        std::fs::read_to_string(path)
    }

    pub fn wants(&self, format: OutputFormat) -> bool {
        self.formats.contains(&format)
    }

    pub fn validate(&self) -> Result<()> {
        match &self.geometry {
            GeometrySpec::Sphere { radius } => require_positive("radius", *radius)?,
            GeometrySpec::Torus { period } => require_positive("period", *period)?,
            GeometrySpec::Custom { .. } => {}
        }
        require_positive("mass", self.mass)?;
        require_positive("tau", self.tau)?;
        if let Some(tp) = self.tau_prime {
            require_positive("tau_prime", tp)?;
            if tp >= self.tau {
                return Err(Error::invalid(
                    "tau_prime",
                    format!("must be < tau = {}", self.tau),
                ));
            }
        }
        if self.window == 0 {
            return Err(Error::invalid("window", "must be >= 1"));
        }
        if self.formats.is_empty() {
            return Err(Error::invalid("format", "at least one output format"));
        }
        let t = &self.thresholds;
        if !(t.tail > 0.0 && t.growth_low > 1.0 && t.growth_high >= t.growth_low) {
            return Err(Error::invalid(
                "thresholds",
                "need tail > 0 and 1 < growth_low <= growth_high",
            ));
        }
        Ok(())
    }

    /// Builds the spatial spectrum the configuration describes.
    pub fn spectrum(&self) -> Result<SpatialSpectrum> {
        match &self.geometry {
            GeometrySpec::Sphere { radius } => {
                build_sphere_spectrum(*radius, self.mass, self.levels)
            }
            GeometrySpec::Torus { period } => {
                build_torus_spectrum(*period, self.mass, self.levels as u64)
            }
            GeometrySpec::Custom { path } => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Validation(format!("{}: {e}", path.display())))?;
                let s = SpatialSpectrum::from_json(&text)?;
                let keep = (self.levels + 1).min(s.len());
                Ok(s.truncated(keep))
            }
        }
    }
}

/// Parses a plain number or a simple multiple of π:
/// `1.5`, `pi`, `pi/2`, `3pi/4`, `3*pi/4`, `0.5*pi`.
pub fn parse_scalar(text: &str) -> std::result::Result<f64, String> {
    let s: String = text
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect::<String>()
        .to_lowercase();
    if s.is_empty() {
        return Err("empty value".into());
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s.as_str(), None),
    };
    let numerator = match num.strip_suffix("pi") {
        Some(coef) => {
            let coef = coef.strip_suffix('*').unwrap_or(coef);
            match coef {
                "" => PI,
                "-" => -PI,
                c => {
                    c.parse::<f64>()
                        .map_err(|_| format!("bad coefficient in {text:?}"))?
                        * PI
                }
            }
        }
        None => num
            .parse::<f64>()
            .map_err(|_| format!("not a number: {text:?}"))?,
    };
    let value = match den {
        Some(d) => {
            let d: f64 = d
                .parse()
                .map_err(|_| format!("bad denominator in {text:?}"))?;
            if d == 0.0 {
                return Err(format!("division by zero in {text:?}"));
            }
            numerator / d
        }
        None => numerator,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("not finite: {text:?}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn pi_expressions() {
        assert_eq!(parse_scalar("pi/2").unwrap(), PI / 2.0);
        assert_eq!(parse_scalar("3pi/4").unwrap(), 3.0 * PI / 4.0);
        assert_eq!(parse_scalar("3*pi/4").unwrap(), 3.0 * PI / 4.0);
        assert_eq!(parse_scalar("PI").unwrap(), PI);
        assert_eq!(parse_scalar("0.25").unwrap(), 0.25);
        assert_eq!(parse_scalar("-pi").unwrap(), -PI);
        assert!(parse_scalar("pi/0").is_err());
        assert!(parse_scalar("tau").is_err());
        assert!(parse_scalar("").is_err());
    }

    #[test]
    fn default_validates() {
        RunConfig::default().validate().unwrap();
        let mut c = RunConfig {
            tau_prime: Some(2.0),
            ..RunConfig::default()
        };
        assert!(c.validate().is_err());
        c.tau_prime = Some(0.5);
        c.validate().unwrap();
        c.formats.clear();
        assert!(c.validate().is_err());
    }

    #[test]
    fn partial_config_fills_defaults() {
        let c = RunConfig::from_json(r#"{"geometry":{"kind":"torus","period":2.0},"tau":0.5}"#)
            .unwrap();
        assert_eq!(c.geometry, GeometrySpec::Torus { period: 2.0 });
        assert_eq!(c.window, DEFAULT_WINDOW);
        assert!(RunConfig::from_json("{\"tau\": \"x\"}").is_err());
    }

    fn geometry() -> impl Strategy<Value = GeometrySpec> {
        prop_oneof![
            (1e-3f64..1e3).prop_map(|radius| GeometrySpec::Sphere { radius }),
            (1e-3f64..1e3).prop_map(|period| GeometrySpec::Torus { period }),
            "[a-z]{1,8}\\.json".prop_map(|p| GeometrySpec::Custom { path: p.into() }),
        ]
    }

    proptest! {
        #[test]
        fn config_round_trips(
            geometry in geometry(),
            mass in 1e-6f64..1e6,
            tau in 1e-6f64..1e6,
            tau_prime in proptest::option::of(1e-6f64..1e6),
            levels in 0usize..100_000,
            window in 1usize..10_000,
            tail in 1e-9f64..1.0,
            csv in any::<bool>(),
            taus in proptest::collection::vec(1e-3f64..1e3, 0..8),
        ) {
            let mut c = RunConfig { geometry, mass, tau, tau_prime, levels, window, ..RunConfig::default() };
            c.thresholds.tail = tail;
            if !csv { c.formats = vec![OutputFormat::Json]; }
            c.limit.taus = taus;
            let back = RunConfig::from_json(&c.to_json()).unwrap();
            prop_assert_eq!(back, c);
        }

        #[test]
        fn plain_numbers_parse_exactly(x in -1e12f64..1e12) {
            prop_assert_eq!(parse_scalar(&format!("{x}")).unwrap(), x);
        }
    }
}
