//! Term-by-term gaps between consecutive operators in each chain
//! `exact → continuous → hat → breve → tilde`, next to the matching bound.

use std::fmt;

use serde::Serialize;

use crate::bounds::TheoremConstants;
use crate::context::NeighborContext;
use crate::error::{Error, Result};
use crate::functions::{Seminorms, TestFunction};
use crate::operators::{evaluate_all, Family, OperatorKind, OperatorTable, OperatorValue, Stage};

/// Multiplicative slack on every bound.
pub const REL_SLACK: f64 = 1e-9;
/// Absolute slack, relative to the summand magnitudes of the two compared values.
pub const ABS_SLACK: f64 = 1e-9;

/// `lhs ≤ rhs (1 + 1e-9) + 1e-9 scale`
pub fn within_bound(lhs: f64, rhs: f64, scale: f64) -> bool {
    lhs <= rhs * (1.0 + REL_SLACK) + ABS_SLACK * scale
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LemmaId {
    pub family: Family,
    /// 0 compares with the exact value; 1, 2, 3 are the later steps.
    pub step: u8,
}

impl LemmaId {
    pub fn all() -> impl Iterator<Item = LemmaId> {
        Family::ALL
            .into_iter()
            .flat_map(|family| (0..4).map(move |step| LemmaId { family, step }))
    }

    fn group(self) -> u8 {
        match self.family {
            Family::Interpolation => 3,
            Family::Gradient => 4,
            Family::Laplacian => 5,
            Family::AltLaplacian => 6,
        }
    }

    /// `3.1a … 3.1d`, `4.1`, `4.2a … 4.2c` and so on.
    pub fn label(self) -> String {
        let s = self.group();
        let letter = |i: u8| (b'a' + i) as char;
        match (self.family, self.step) {
            (Family::Interpolation, i) => format!("3.1{}", letter(i)),
            (_, 0) => format!("{s}.1"),
            (_, i) => format!("{s}.2{}", letter(i - 1)),
        }
    }

    pub fn parse(label: &str) -> Option<Self> {
        Self::all().find(|id| id.label() == label)
    }

    /// The two stages compared; `None` stands for the exact value.
    pub fn stages(self) -> (Option<Stage>, Stage) {
        match self.step {
            0 => (None, Stage::Continuous),
            1 => (Some(Stage::Continuous), Stage::Hat),
            2 => (Some(Stage::Hat), Stage::Breve),
            _ => (Some(Stage::Breve), Stage::Tilde),
        }
    }

    pub fn needs_lambda(self) -> bool {
        self.step == 2 && self.family != Family::Interpolation
            || self.step == 3 && self.family == Family::AltLaplacian
    }

    /// Bound coefficients of `|f|_{C⁰} … |f|_{C³}`.
    pub fn coefficients(self, tc: &TheoremConstants) -> Result<[f64; 4]> {
        let h = tc.inputs.h;
        let r = tc.inputs.r_sigma;
        let c = |i: usize| tc.get(i).map(|k| k.value);
        let lam = || {
            tc.inputs
                .lambda
                .ok_or_else(|| Error::InvalidParameter(format!("{} needs lambda", self.label())))
        };
        Ok(match (self.family, self.step) {
            (Family::Interpolation, 0) => [0.0, h, 0.0, 0.0],
            (Family::Interpolation, 1) => [2.0 * c(1)?, 0.0, 0.0, 0.0],
            (Family::Interpolation, 2) => [c(2)?, r, 0.0, 0.0],
            (Family::Interpolation, _) => [c(2)?, 0.0, 0.0, 0.0],
            (Family::Gradient, 0) => [0.0, 0.0, 4.0 * h, 0.0],
            (Family::Gradient, 1) => [0.0, 4.0 * c(1)?, 0.0, 0.0],
            (Family::Gradient, 2) => [0.0, 8.0 * (r / (lam()? * h) + c(3)?), 0.0, 0.0],
            (Family::Gradient, _) => [0.0, 4.0 * c(2)?, 0.0, 0.0],
            (Family::Laplacian, 0) | (Family::AltLaplacian, 0) => [0.0, 0.0, 0.0, 24.0 * h],
            (Family::Laplacian, 1) => [0.0, 4.0 * c(4)?, 0.0, 0.0],
            (Family::Laplacian, 2) => [0.0, 4.0 * (c(5)? + c(6)?), 0.0, 0.0],
            (Family::Laplacian, _) => [0.0, 4.0 * (c(7)? + c(8)?), 0.0, 0.0],
            (Family::AltLaplacian, 1) => [0.0, 4.0 * c(9)?, 0.0, 0.0],
            (Family::AltLaplacian, 2) => [0.0, 12.0 * (c(10)? + c(11)?), 0.0, 0.0],
            (Family::AltLaplacian, _) => [0.0, 4.0 * c(12)?, 0.0, 0.0],
        })
    }
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapReport {
    pub id: LemmaId,
    pub label: String,
    pub function: String,
    pub lhs: f64,
    pub rhs: f64,
    /// Summed roundoff scales of the two compared values.
    pub scale: f64,
    pub pass: bool,
}

/// The value and its roundoff scale.
fn value_of(table: &OperatorTable, family: Family, stage: Option<Stage>) -> (OperatorValue, f64) {
    match stage {
        None => {
            let v = table.exact(family);
            (v, v.magnitude())
        }
        Some(s) => {
            let r = table.get(OperatorKind::new(family, s));
            (r.value, r.scale)
        }
    }
}

/// Gap report from precomputed operator values and constants.
pub fn gap_from_table(
    id: LemmaId,
    table: &OperatorTable,
    tc: &TheoremConstants,
    seminorms: &Seminorms,
) -> Result<GapReport> {
    let (a, b) = id.stages();
    let (va, sa) = value_of(table, id.family, a);
    let (vb, sb) = value_of(table, id.family, Some(b));
    let lhs = va.distance(&vb);
    let k = id.coefficients(tc)?;
    let rhs: f64 = (0..4).map(|j| k[j] * seminorms.get(j)).sum();
    let scale = sa + sb;
    Ok(GapReport {
        id,
        label: id.label(),
        function: table.function.clone(),
        lhs,
        rhs,
        scale,
        pass: within_bound(lhs, rhs, scale),
    })
}

/// Evaluates one inequality from scratch.
pub fn lemma_gap(id: LemmaId, ctx: &NeighborContext<'_>, f: &TestFunction) -> Result<GapReport> {
    if id.needs_lambda() {
        ctx.require_lambda()?;
    }
    let table = evaluate_all(ctx, f, true)?;
    let tc = TheoremConstants::compute(ctx)?;
    let s = f.seminorms(&ctx.decomposition().omega_h());
    gap_from_table(id, &table, &tc, &s)
}

/// All sixteen inequalities for one function.
pub fn all_gaps(
    ctx: &NeighborContext<'_>,
    f: &TestFunction,
    checked: bool,
) -> Result<Vec<GapReport>> {
    let table = evaluate_all(ctx, f, checked)?;
    let tc = TheoremConstants::compute(ctx)?;
    let s = f.seminorms(&ctx.decomposition().omega_h());
    LemmaId::all()
        .filter(|id| !id.needs_lambda() || ctx.lambda().is_some())
        .map(|id| gap_from_table(id, &table, &tc, &s))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_round_trip() {
        let labels: Vec<String> = LemmaId::all().map(|i| i.label()).collect();
        assert_eq!(
            labels,
            [
                "3.1a", "3.1b", "3.1c", "3.1d", "4.1", "4.2a", "4.2b", "4.2c", "5.1", "5.2a",
                "5.2b", "5.2c", "6.1", "6.2a", "6.2b", "6.2c"
            ]
        );
        for l in &labels {
            assert_eq!(LemmaId::parse(l).unwrap().label(), *l);
        }
        assert!(LemmaId::parse("7.1").is_none());
    }

    #[test]
    fn slack_rule() {
        assert!(within_bound(1.0, 1.0, 0.0));
        assert!(within_bound(1e-12, 0.0, 1.0));
        assert!(!within_bound(1e-6, 0.0, 1.0));
        assert!(!within_bound(1.001, 1.0, 0.0));
    }
}
