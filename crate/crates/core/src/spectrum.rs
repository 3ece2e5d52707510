//! Spectra of K = -Δ + m² on compact spatial sections.
//!
//! Levels carry explicit multiplicities; every downstream sum depends on a
//! level only through its frequency, so degenerate modes are never repeated.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{require_positive, Error, Result};

/// One eigenspace of K: frequency ω with K ψ = ω² ψ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumLevel {
    #[serde(rename = "index")]
    pub level_index: usize,
    pub omega: f64,
    pub multiplicity: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Geometry {
    /// Round 3-sphere of radius `radius`.
    Sphere {
        radius: f64,
    },
    /// Flat 3-torus with common period `period`.
    Torus {
        period: f64,
    },
    Custom,
}

impl Geometry {
    pub fn label(&self) -> String {
        match self {
            Geometry::Sphere { radius } => format!("sphere(R={radius})"),
            Geometry::Torus { period } => format!("torus(L={period})"),
            Geometry::Custom => "custom".to_string(),
        }
    }
}

/// Ordered frequencies of K with multiplicities. Immutable once built.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpatialSpectrum {
    pub geometry: Geometry,
    pub mass: f64,
    pub levels: Vec<SpectrumLevel>,
}

impl SpatialSpectrum {
    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn total_multiplicity(&self) -> u64 {
        self.levels.iter().map(|l| l.multiplicity).sum()
    }

    /// The first `count` levels (all of them if `count` exceeds the length).
    pub fn truncated(&self, count: usize) -> SpatialSpectrum {
        SpatialSpectrum {
            geometry: self.geometry,
            mass: self.mass,
            levels: self.levels.iter().take(count).copied().collect(),
        }
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(&SpectrumDocument::from(self))
    }

    pub fn from_json(text: &str) -> Result<SpatialSpectrum> {
        let doc: SpectrumDocument =
            serde_json::from_str(text).map_err(|e| Error::Validation(e.to_string()))?;
        doc.into_spectrum()
    }

    pub(crate) fn validate(&self) -> Result<()> {
        require_positive("mass", self.mass)?;
        if self.levels.is_empty() {
            return Err(Error::Validation("spectrum has no levels".into()));
        }
        for (i, level) in self.levels.iter().enumerate() {
            if level.multiplicity == 0 {
                return Err(Error::Validation(format!(
                    "level {i} has zero multiplicity"
                )));
            }
            if !(level.omega.is_finite() && level.omega > 0.0) || level.omega < self.mass {
                return Err(Error::Validation(format!(
                    "level {i}: omega {} must be >= mass {}",
                    level.omega, self.mass
                )));
            }
        }
        if self.levels.windows(2).any(|w| w[0].omega >= w[1].omega) {
            return Err(Error::Validation(
                "levels are not strictly increasing".into(),
            ));
        }
        Ok(())
    }
}

/// On-disk form: `{"geometry": "...", "mass": m, "levels": [{"index", "omega", "multiplicity"}]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumDocument {
    pub geometry: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub period: Option<f64>,
    pub mass: f64,
    pub levels: Vec<SpectrumLevel>,
}

impl From<&SpatialSpectrum> for SpectrumDocument {
    fn from(s: &SpatialSpectrum) -> Self {
        let (geometry, radius, period) = match s.geometry {
            Geometry::Sphere { radius } => ("sphere", Some(radius), None),
            Geometry::Torus { period } => ("torus", None, Some(period)),
            Geometry::Custom => ("custom", None, None),
        };
        SpectrumDocument {
            geometry: geometry.to_string(),
            radius,
            period,
            mass: s.mass,
            levels: s.levels.clone(),
        }
    }
}

impl SpectrumDocument {
    pub fn into_spectrum(self) -> Result<SpatialSpectrum> {
        let geometry = match (self.geometry.as_str(), self.radius, self.period) {
            ("sphere", Some(radius), _) => Geometry::Sphere { radius },
            ("torus", _, Some(period)) => Geometry::Torus { period },
            ("custom", _, _) => Geometry::Custom,
            (other, _, _) => {
                return Err(Error::Validation(format!(
                    "unknown or incomplete geometry `{other}`"
                )))
            }
        };
        let spectrum = SpatialSpectrum {
            geometry,
            mass: self.mass,
            levels: self.levels,
        };
        spectrum.validate()?;
        Ok(spectrum)
    }
}

/// Levels j = 0..=level_max of the round 3-sphere:
/// ω_j = sqrt(j(j+2)/R² + m²) with multiplicity (j+1)².
pub fn build_sphere_spectrum(radius: f64, mass: f64, level_max: usize) -> Result<SpatialSpectrum> {
    require_positive("radius", radius)?;
    require_positive("mass", mass)?;
    let r2 = radius * radius;
    let levels = (0..=level_max)
        .map(|j| {
            let jf = j as f64;
            SpectrumLevel {
                level_index: j,
                omega: (jf * (jf + 2.0) / r2 + mass * mass).sqrt(),
                multiplicity: ((j + 1) * (j + 1)) as u64,
            }
        })
        .collect();
    Ok(SpatialSpectrum {
        geometry: Geometry::Sphere { radius },
        mass,
        levels,
    })
}

/// Counts k ∈ ℤ³ by ‖k‖² for ‖k‖² ≤ norm2_max, by brute force over the lattice cube.
pub fn lattice_shell_counts(norm2_max: u64) -> BTreeMap<u64, u64> {
    let mut edge = (norm2_max as f64).sqrt() as i64;
    while ((edge + 1) * (edge + 1)) as u64 <= norm2_max {
        edge += 1;
    }
    while (edge * edge) as u64 > norm2_max {
        edge -= 1;
    }
    let mut counts = BTreeMap::new();
    for a in -edge..=edge {
        let a2 = (a * a) as u64;
        for b in -edge..=edge {
            let ab2 = a2 + (b * b) as u64;
            if ab2 > norm2_max {
                continue;
            }
            for c in -edge..=edge {
                let n = ab2 + (c * c) as u64;
                if n <= norm2_max {
                    *counts.entry(n).or_insert(0) += 1;
                }
            }
        }
    }
    counts
}

/// One level per achievable n = ‖k‖² ≤ norm2_max on the flat 3-torus of
/// period L: ω = sqrt((2π/L)² n + m²), multiplicity #{k : ‖k‖² = n}.
pub fn build_torus_spectrum(period: f64, mass: f64, norm2_max: u64) -> Result<SpatialSpectrum> {
    require_positive("period", period)?;
    require_positive("mass", mass)?;
    let k0 = 2.0 * PI / period;
    let levels = lattice_shell_counts(norm2_max)
        .into_iter()
        .enumerate()
        .map(|(i, (n, count))| SpectrumLevel {
            level_index: i,
            omega: (k0 * k0 * n as f64 + mass * mass).sqrt(),
            multiplicity: count,
        })
        .collect();
    Ok(SpatialSpectrum {
        geometry: Geometry::Torus { period },
        mass,
        levels,
    })
}

/// Sorted, validated spectrum from (ω, multiplicity) pairs; equal
/// frequencies are merged by adding multiplicities.
pub fn build_custom_spectrum(entries: &[(f64, u64)], mass: f64) -> Result<SpatialSpectrum> {
    require_positive("mass", mass)?;
    if entries.is_empty() {
        return Err(Error::Validation("no spectral entries".into()));
    }
    for &(omega, mult) in entries {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::Validation(format!("omega {omega} must be positive")));
        }
        if omega < mass {
            return Err(Error::Validation(format!(
                "omega {omega} below mass {mass}"
            )));
        }
        if mult == 0 {
            return Err(Error::Validation(format!(
                "omega {omega} has zero multiplicity"
            )));
        }
    }
    let mut sorted = entries.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut levels: Vec<SpectrumLevel> = Vec::with_capacity(sorted.len());
    for (omega, mult) in sorted {
        match levels.last_mut() {
            Some(last) if last.omega == omega => last.multiplicity += mult,
            _ => levels.push(SpectrumLevel {
                level_index: levels.len(),
                omega,
                multiplicity: mult,
            }),
        }
    }
    Ok(SpatialSpectrum {
        geometry: Geometry::Custom,
        mass,
        levels,
    })
}
