//! A scenario file resolved into a decomposition, focal site, `h` and `δ`.

use std::path::Path;

use anyhow::{Context, Result};

use mps_core::config::{read_json, ScenarioFile};
use mps_core::context::NeighborContext;
use mps_core::geometry::{validate_standing_assumptions, ValidationReport, VoronoiDecomposition};
use mps_core::study::default_delta;
use mps_core::weights::WeightFunction;

pub struct Loaded {
    pub scenario: ScenarioFile,
    pub decomp: VoronoiDecomposition,
    pub focal: usize,
    pub h: f64,
    pub delta: f64,
}

impl Loaded {
    /// The focal site is, in order: `focal_override`, the file's `focal`, the
    /// site nearest the centre of Ω.
    pub fn read(path: &Path, focal_override: Option<usize>) -> Result<Self> {
        let scenario: ScenarioFile =
            read_json(path).with_context(|| format!("reading {}", path.display()))?;
        let decomp = scenario.particles.build()?;
        let h = scenario.interaction_radius(decomp.r_sigma())?;
        let focal = match focal_override.or(scenario.focal) {
            Some(k) => k,
            None => {
                let c = decomp.omega().center();
                (0..decomp.len())
                    .min_by(|&a, &b| decomp.site(a).dist(c).total_cmp(&decomp.site(b).dist(c)))
                    .expect("a decomposition has sites")
            }
        };
        if focal >= decomp.len() {
            return Err(mps_core::Error::InvalidParameter(format!(
                "focal index {focal} out of range (n = {})",
                decomp.len()
            ))
            .into());
        }
        let delta = scenario
            .delta
            .unwrap_or_else(|| default_delta(&decomp, focal));
        Ok(Self {
            scenario,
            decomp,
            focal,
            h,
            delta,
        })
    }

    pub fn validation(&self) -> Result<ValidationReport> {
        let x = self.decomp.site(self.focal);
        Ok(validate_standing_assumptions(
            &self.decomp,
            self.focal,
            self.h,
            self.delta,
            x,
        )?)
    }

    /// Errors with the first violated blocking clause.
    pub fn require_valid(&self) -> Result<()> {
        let report = self.validation()?;
        if let Some(f) = report.first_blocking_failure() {
            return Err(mps_core::Error::AssumptionViolation {
                clause: f.label.to_string(),
                detail: f.detail.clone(),
                witness: f.witness,
            }
            .into());
        }
        Ok(())
    }

    pub fn weight(&self) -> Result<WeightFunction> {
        Ok(self.scenario.weight.build(self.delta, self.h)?)
    }

    pub fn context<'a>(
        &'a self,
        w: &'a WeightFunction,
        lambda: Option<f64>,
    ) -> Result<NeighborContext<'a>> {
        Ok(NeighborContext::new(&self.decomp, w, self.focal, lambda)?)
    }
}
