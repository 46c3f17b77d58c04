use std::fmt;

use serde::Serialize;

use super::{polygon_disk_area, Point2, VoronoiDecomposition};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Clause {
    /// `r_σ < h < H`
    Radii,
    /// `x ∈ B_δ(a_k)` (or `x = a_k`)
    EvaluationPoint,
    /// `a_k ∈ σ_k ∩ Ω`
    FocalSite,
    /// `B_δ(a_k) ⊂ σ_k ∩ Ω`
    InnerBall,
    /// `B_{h+r_σ}(x) ⊂ Ω_H`
    Padding,
    /// `B_h(x) ⊂ ⋃_{i ∈ R̄(x,h)} σ̄_i`
    Cover,
}

impl Clause {
    pub fn label(self) -> &'static str {
        match self {
            Clause::Radii => "r_σ < h < H",
            Clause::EvaluationPoint => "x ∈ B_δ(a_k)",
            Clause::FocalSite => "a_k ∈ σ_k ∩ Ω",
            Clause::InnerBall => "B_δ(a_k) ⊂ σ_k ∩ Ω",
            Clause::Padding => "B_{h+r_σ}(x) ⊂ Ω_H",
            Clause::Cover => "B_h(x) ⊂ ∪ σ̄_i over R̄(x,h)",
        }
    }

    /// Clauses whose failure invalidates a configuration. The cover clause is
    /// reported but does not block: quasi-uniform site sets with `h >= 2 r_σ`
    /// essentially never satisfy it.
    pub fn is_blocking(self) -> bool {
        !matches!(self, Clause::Cover)
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClauseResult {
    pub clause: Clause,
    pub label: &'static str,
    pub passed: bool,
    pub blocking: bool,
    pub detail: String,
    pub witness: Option<Point2>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub focal: usize,
    pub h: f64,
    pub delta: f64,
    pub x: Point2,
    pub r_sigma: f64,
    pub clauses: Vec<ClauseResult>,
    /// Area of `B_h(x)` not covered by the closures of cells indexed by `R̄(x,h)`.
    pub uncovered_area: f64,
}

impl ValidationReport {
    /// True when every blocking clause holds.
    pub fn passed(&self) -> bool {
        self.clauses.iter().all(|c| c.passed || !c.blocking)
    }

    /// True when every clause, blocking or not, holds.
    pub fn passed_strict(&self) -> bool {
        self.clauses.iter().all(|c| c.passed)
    }

    pub fn clause(&self, clause: Clause) -> &ClauseResult {
        self.clauses
            .iter()
            .find(|c| c.clause == clause)
            .expect("every clause is evaluated")
    }

    pub fn failures(&self) -> impl Iterator<Item = &ClauseResult> {
        self.clauses.iter().filter(|c| !c.passed)
    }

    pub fn first_blocking_failure(&self) -> Option<&ClauseResult> {
        self.clauses.iter().find(|c| !c.passed && c.blocking)
    }

    pub fn summary(&self) -> String {
        let failed: Vec<&str> = self.failures().map(|c| c.label).collect();
        if failed.is_empty() {
            "all clauses hold".to_string()
        } else {
            format!("failed: {}", failed.join("; "))
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "focal {} at x = {}, h = {}, delta = {}, r_sigma = {}",
            self.focal, self.x, self.h, self.delta, self.r_sigma
        )?;
        for c in &self.clauses {
            let tag = match (c.passed, c.blocking) {
                (true, _) => "ok  ",
                (false, true) => "FAIL",
                (false, false) => "warn",
            };
            write!(f, "  [{tag}] {}: {}", c.label, c.detail)?;
            if let Some(w) = c.witness {
                write!(f, " (witness {w})")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn result(clause: Clause, passed: bool, detail: String, witness: Option<Point2>) -> ClauseResult {
    ClauseResult {
        clause,
        label: clause.label(),
        passed,
        blocking: clause.is_blocking(),
        detail,
        witness,
    }
}

/// Checks the standing geometric hypotheses at the evaluation point `x`.
pub fn validate_standing_assumptions(
    decomp: &VoronoiDecomposition,
    k: usize,
    h: f64,
    delta: f64,
    x: Point2,
) -> Result<ValidationReport> {
    if k >= decomp.len() {
        return Err(Error::InvalidParameter(format!(
            "focal index {k} out of range (n = {})",
            decomp.len()
        )));
    }
    let r_sigma = decomp.r_sigma();
    let big_h = decomp.domain().padding;
    let a_k = decomp.site(k);
    let cell = decomp.cell(k);
    let omega = decomp.omega();
    let omega_h = decomp.omega_h();
    let mut clauses = Vec::with_capacity(6);

    clauses.push(result(
        Clause::Radii,
        r_sigma < h && h < big_h,
        format!("r_σ = {r_sigma}, h = {h}, H = {big_h}"),
        None,
    ));

    let dx = x.dist(a_k);
    clauses.push(result(
        Clause::EvaluationPoint,
        dx == 0.0 || dx < delta,
        format!("|x - a_k| = {dx}"),
        (dx != 0.0 && dx >= delta).then_some(x),
    ));

    let in_omega = omega.contains_open(a_k);
    clauses.push(result(
        Clause::FocalSite,
        in_omega && cell.contains_strict(a_k),
        format!("a_k = {a_k}"),
        (!in_omega).then_some(a_k),
    ));

    let cell_room = cell.inner_distance(a_k);
    let omega_room = omega.inner_distance(a_k);
    let room = cell_room.min(omega_room);
    let ok = delta > 0.0 && delta <= room;
    let witness = if ok {
        None
    } else if cell_room <= omega_room {
        let q = cell
            .edges()
            .map(|(a, b)| nearest_on_line(a_k, a, b))
            .min_by(|p, q| p.dist(a_k).total_cmp(&q.dist(a_k)));
        q
    } else {
        Some(nearest_on_rect(a_k, omega.min, omega.max))
    };
    clauses.push(result(
        Clause::InnerBall,
        ok,
        format!("δ = {delta}, room in σ_k = {cell_room}, room in Ω = {omega_room}"),
        witness,
    ));

    let pad_room = omega_h.inner_distance(x);
    let need = h + r_sigma;
    let ok = pad_room >= need;
    clauses.push(result(
        Clause::Padding,
        ok,
        format!("need {need}, distance to ∂Ω_H is {pad_room}"),
        (!ok).then(|| nearest_on_rect(x, omega_h.min, omega_h.max)),
    ));

    // Cells tile Ω̄_H, so the uncovered part of B_h(x) is exactly the union of
    // cells indexed outside R̄(x,h) that reach into the disk, plus whatever
    // of the disk falls outside Ω_H.
    let mut uncovered = 0.0;
    let mut worst: Option<(usize, f64, Point2)> = None;
    for j in decomp.sites_within(x, h + r_sigma * (1.0 + 1e-12)) {
        if decomp.site(j).dist(x) < h {
            continue;
        }
        let cj = decomp.cell(j);
        let d = cj.distance_from(x);
        if d < h * (1.0 - 1e-12) {
            uncovered += polygon_disk_area(cj, x, h);
            if worst.is_none_or(|(_, wd, _)| d < wd) {
                worst = Some((j, d, cj.closest_point(x)));
            }
        }
    }
    let mut outside = std::f64::consts::PI * h * h - polygon_disk_area(&omega_h.to_polygon(), x, h);
    if outside <= 1e-12 * h * h {
        outside = 0.0;
    }
    uncovered += outside;
    let detail = match worst {
        None if outside == 0.0 => "every cell meeting B_h(x) belongs to R̄(x,h)".to_string(),
        None => format!("B_h(x) leaves Ω_H (area {outside:e})"),
        Some((j, d, _)) => format!(
            "cell of site {j} (|x - a_j| = {}) reaches distance {d} < h; uncovered area {uncovered:e} ({:.3}% of B_h)",
            decomp.site(j).dist(x),
            100.0 * uncovered / (std::f64::consts::PI * h * h)
        ),
    };
    let passed = worst.is_none() && outside == 0.0;
    clauses.push(result(Clause::Cover, passed, detail, worst.map(|w| w.2)));

    Ok(ValidationReport {
        focal: k,
        h,
        delta,
        x,
        r_sigma,
        clauses,
        uncovered_area: uncovered,
    })
}

fn nearest_on_line(p: Point2, a: Point2, b: Point2) -> Point2 {
    let e = b - a;
    a + e * ((p - a).dot(e) / e.norm_sq())
}

fn nearest_on_rect(p: Point2, min: Point2, max: Point2) -> Point2 {
    let cands = [
        Point2::new(min.x1, p.x2),
        Point2::new(max.x1, p.x2),
        Point2::new(p.x1, min.x2),
        Point2::new(p.x1, max.x2),
    ];
    cands
        .into_iter()
        .min_by(|a, b| a.dist(p).total_cmp(&b.dist(p)))
        .unwrap()
}
