//! JSON file formats: particle sets, weight specs, and single scenarios.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{DomainSpec, Point2, VoronoiDecomposition};
use crate::weights::{
    custom_radial_weight, indicator_weight, linear_taper_weight, RadialProfile, WeightFunction,
};

/// `{omega: {min, max}, H, sites}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParticleFile {
    #[serde(flatten)]
    pub domain: DomainSpec,
    pub sites: Vec<Point2>,
}

impl ParticleFile {
    pub fn build(&self) -> Result<VoronoiDecomposition> {
        let domain = DomainSpec::new(self.domain.omega, self.domain.padding)?;
        VoronoiDecomposition::build(domain, self.sites.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
#[derive(Default)]
pub enum WeightSpec {
    #[default]
    Indicator,
    LinearTaper,
    /// `r` runs over `[0, 1]` and is mapped affinely onto `[δ, h]`; `L_w` is
    /// given in the same normalised units.
    RadialTable {
        r: Vec<f64>,
        w: Vec<f64>,
        #[serde(rename = "L_w", default, skip_serializing_if = "Option::is_none")]
        lipschitz: Option<f64>,
    },
}

impl WeightSpec {
    pub fn name(&self) -> &'static str {
        match self {
            WeightSpec::Indicator => "indicator",
            WeightSpec::LinearTaper => "linear_taper",
            WeightSpec::RadialTable { .. } => "radial_table",
        }
    }

    pub fn build(&self, delta: f64, h: f64) -> Result<WeightFunction> {
        match self {
            WeightSpec::Indicator => indicator_weight(delta, h),
            WeightSpec::LinearTaper => linear_taper_weight(delta, h),
            WeightSpec::RadialTable { r, w, lipschitz } => {
                if r.first() != Some(&0.0) || r.last() != Some(&1.0) {
                    return Err(Error::Config(
                        "radial_table r must start at 0 and end at 1".into(),
                    ));
                }
                let span = h - delta;
                let r_abs = r.iter().map(|t| delta + t * span).collect();
                custom_radial_weight(
                    "radial_table",
                    RadialProfile::Table {
                        r: r_abs,
                        w: w.clone(),
                    },
                    delta,
                    h,
                    lipschitz.map(|l| l / span),
                )
            }
        }
    }
}

/// A particle file plus what is needed to evaluate at one focal site.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioFile {
    #[serde(flatten)]
    pub particles: ParticleFile,
    /// Either `h` or `C_star` (then `h = C_* r_σ`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,
    #[serde(rename = "C_star", default, skip_serializing_if = "Option::is_none")]
    pub c_star: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub focal: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default)]
    pub weight: WeightSpec,
}

impl ScenarioFile {
    pub fn interaction_radius(&self, r_sigma: f64) -> Result<f64> {
        match (self.h, self.c_star) {
            (Some(h), _) => Ok(h),
            (None, Some(c)) => Ok(c * r_sigma),
            (None, None) => Err(Error::Config("scenario needs h or C_star".into())),
        }
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn particle_file_shape() {
        let text = r#"{"omega": {"min": [0, 0], "max": [1, 1]}, "H": 0.5, "sites": [[0.25, 0.5], [0.75, 0.5]]}"#;
        let p: ParticleFile = serde_json::from_str(text).unwrap();
        assert_eq!(p.domain.padding, 0.5);
        assert_eq!(p.sites[1], Point2::new(0.75, 0.5));
        let d = p.build().unwrap();
        assert_eq!(d.len(), 2);
        let back = serde_json::to_value(&p).unwrap();
        assert_eq!(back["H"], 0.5);
        assert_eq!(back["omega"]["max"][0], 1.0);
    }

    #[test]
    fn weight_specs() {
        let w: WeightSpec = serde_json::from_str(r#"{"type": "indicator"}"#).unwrap();
        assert_eq!(w, WeightSpec::Indicator);
        let t: WeightSpec =
            serde_json::from_str(r#"{"type": "radial_table", "r": [0, 0.5, 1], "w": [1, 1, 0]}"#)
                .unwrap();
        let wf = t.build(0.1, 0.5).unwrap();
        assert!((wf.radial(0.3) - 1.0).abs() < 1e-12);
        assert!((wf.radial(0.4) - 0.5).abs() < 1e-12);
        assert!((wf.lipschitz() - 1.0 / 0.2).abs() < 1e-12);
        let bad: WeightSpec =
            serde_json::from_str(r#"{"type": "radial_table", "r": [0.1, 1], "w": [1, 0]}"#)
                .unwrap();
        assert!(bad.build(0.1, 0.5).is_err());
    }

    #[test]
    fn missing_sites_is_an_error() {
        let text = r#"{"omega": {"min": [0, 0], "max": [1, 1]}, "H": 0.5}"#;
        assert!(serde_json::from_str::<ParticleFile>(text).is_err());
    }
}
