//! Site generators, focal-site selection, and convergence sweeps comparing
//! measured operator errors with the theorem bounds.

use std::f64::consts::SQRT_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{
    corollary71_preset, BoundReport, CorollaryPreset, CorollaryReport, TheoremConstants, TheoremId,
};
use crate::config::WeightSpec;
use crate::context::NeighborContext;
use crate::error::{Error, Result};
use crate::functions::TestFunction;
use crate::geometry::{
    validate_standing_assumptions, DomainSpec, Point2, Rect, ValidationReport, VoronoiDecomposition,
};
use crate::lemmas::{gap_from_table, within_bound, LemmaId};
use crate::operators::{evaluate_all, Family, OperatorKind};
use crate::weights::WeightFunction;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Generator {
    Lattice,
    /// Lattice sites moved uniformly by up to `jitter` spacings per axis.
    Jittered {
        jitter: f64,
    },
    PoissonDisk,
    Hex,
}

impl Generator {
    pub fn name(&self) -> String {
        match self {
            Generator::Lattice => "lattice".into(),
            Generator::Jittered { jitter } => format!("jittered({jitter})"),
            Generator::PoissonDisk => "poisson_disk".into(),
            Generator::Hex => "hex".into(),
        }
    }

    pub fn jitter(&self) -> f64 {
        match self {
            Generator::Jittered { jitter } => *jitter,
            _ => 0.0,
        }
    }

    pub fn check(&self) -> Result<()> {
        let j = self.jitter();
        if !(0.0..0.49).contains(&j) {
            return Err(Error::Config(format!(
                "jitter must lie in [0, 0.49), got {j}"
            )));
        }
        Ok(())
    }

    /// Spacing whose unperturbed arrangement has `r_σ = r_target`.
    pub fn spacing_for(&self, r_target: f64) -> f64 {
        match self {
            Generator::Lattice | Generator::Jittered { .. } => SQRT_2 * r_target,
            Generator::Hex => 3f64.sqrt() * r_target,
            Generator::PoissonDisk => r_target,
        }
    }

    /// Sites filling `region`, deterministic in `seed`.
    pub fn generate(&self, region: Rect, spacing: f64, seed: u64) -> Result<Vec<Point2>> {
        self.check()?;
        if !(spacing > 0.0) {
            return Err(Error::Config(format!(
                "spacing must be positive, got {spacing}"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sites = match *self {
            Generator::Lattice => lattice(region, spacing, 0.0, &mut rng),
            Generator::Jittered { jitter } => lattice(region, spacing, jitter, &mut rng),
            Generator::Hex => hex(region, spacing),
            Generator::PoissonDisk => poisson_disk(region, spacing, &mut rng),
        };
        if sites.len() < 2 {
            return Err(Error::Config(format!(
                "spacing {spacing} leaves only {} site(s) in a {} x {} region",
                sites.len(),
                region.width(),
                region.height()
            )));
        }
        Ok(sites)
    }
}

fn lattice(region: Rect, spacing: f64, jitter: f64, rng: &mut ChaCha8Rng) -> Vec<Point2> {
    let nx = (region.width() / spacing).round().max(1.0) as usize;
    let ny = (region.height() / spacing).round().max(1.0) as usize;
    let (sx, sy) = (region.width() / nx as f64, region.height() / ny as f64);
    let mut out = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let mut p = Point2::new(
                region.min.x1 + (i as f64 + 0.5) * sx,
                region.min.x2 + (j as f64 + 0.5) * sy,
            );
            if jitter > 0.0 {
                p.x1 += rng.random_range(-jitter..jitter) * sx;
                p.x2 += rng.random_range(-jitter..jitter) * sy;
            }
            out.push(p);
        }
    }
    out
}

fn hex(region: Rect, spacing: f64) -> Vec<Point2> {
    let dy = spacing * 3f64.sqrt() / 2.0;
    let rows = (region.height() / dy).floor() as usize;
    let y0 = region.min.x2 + 0.5 * (region.height() - (rows.max(1) - 1) as f64 * dy);
    let mut out = Vec::new();
    for j in 0..rows.max(1) {
        let shift = if j % 2 == 0 { 0.25 } else { 0.75 };
        let y = y0 + j as f64 * dy;
        let mut i = 0;
        loop {
            let x = region.min.x1 + (i as f64 + shift) * spacing;
            if x >= region.max.x1 {
                break;
            }
            out.push(Point2::new(x, y));
            i += 1;
        }
    }
    out
}

/// Bridson's algorithm with 30 candidates per active point.
fn poisson_disk(region: Rect, radius: f64, rng: &mut ChaCha8Rng) -> Vec<Point2> {
    let cell = radius / SQRT_2;
    let gw = (region.width() / cell).ceil() as usize + 1;
    let gh = (region.height() / cell).ceil() as usize + 1;
    let mut grid: Vec<Option<usize>> = vec![None; gw * gh];
    let key = |p: Point2| {
        let i = ((p.x1 - region.min.x1) / cell) as usize;
        let j = ((p.x2 - region.min.x2) / cell) as usize;
        (i.min(gw - 1), j.min(gh - 1))
    };
    let mut pts: Vec<Point2> = Vec::new();
    let mut active = Vec::new();
    let first = Point2::new(
        rng.random_range(region.min.x1..region.max.x1),
        rng.random_range(region.min.x2..region.max.x2),
    );
    let (i, j) = key(first);
    grid[j * gw + i] = Some(0);
    pts.push(first);
    active.push(0);
    while !active.is_empty() {
        let slot = rng.random_range(0..active.len());
        let base = pts[active[slot]];
        let mut placed = false;
        for _ in 0..30 {
            let rr = radius * (1.0 + rng.random::<f64>());
            let th = rng.random_range(0.0..std::f64::consts::TAU);
            let c = base + Point2::from_polar(rr, th);
            if !region.contains_open(c) {
                continue;
            }
            let (ci, cj) = key(c);
            let mut ok = true;
            'scan: for jj in cj.saturating_sub(2)..(cj + 3).min(gh) {
                for ii in ci.saturating_sub(2)..(ci + 3).min(gw) {
                    if let Some(q) = grid[jj * gw + ii] {
                        if pts[q].dist(c) < radius {
                            ok = false;
                            break 'scan;
                        }
                    }
                }
            }
            if ok {
                grid[cj * gw + ci] = Some(pts.len());
                active.push(pts.len());
                pts.push(c);
                placed = true;
                break;
            }
        }
        if !placed {
            active.swap_remove(slot);
        }
    }
    pts
}

/// Sites for `omega` with a padding large enough that `C_* r_σ < H` for
/// the measured `r_σ`; the padding is grown until it is.
pub fn build_padded(
    generator: Generator,
    omega: Rect,
    padding: Option<f64>,
    r_target: f64,
    c_star_max: f64,
    seed: u64,
) -> Result<VoronoiDecomposition> {
    let spacing = generator.spacing_for(r_target);
    let mut pad = padding.unwrap_or(1.1 * c_star_max * r_target * (1.0 + 2.0 * generator.jitter()));
    for _ in 0..8 {
        let domain = DomainSpec::new(omega, pad)?;
        let sites = generator.generate(domain.omega_h(), spacing, seed)?;
        let decomp = VoronoiDecomposition::build(domain, sites)?;
        let need = c_star_max * decomp.r_sigma();
        if padding.is_some() || need < pad {
            return Ok(decomp);
        }
        pad = 1.1 * need;
    }
    Err(Error::Config(format!(
        "could not find a padding exceeding C_* r_σ for r_σ target {r_target}"
    )))
}

/// Largest `δ ≤ r_σ/2` with `B_δ(a_k) ⊂ σ_k ∩ Ω`.
pub fn default_delta(decomp: &VoronoiDecomposition, k: usize) -> f64 {
    let a = decomp.site(k);
    let room = decomp
        .cell(k)
        .inner_distance(a)
        .min(decomp.omega().inner_distance(a));
    (0.5 * decomp.r_sigma()).min(room) * (1.0 - 1e-9)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FocalChoice {
    pub focal: usize,
    pub delta: f64,
    pub delta_requested: f64,
    pub validation: ValidationReport,
}

/// Site nearest the centroid of Ω whose blocking assumptions hold, unless
/// `focal` overrides the choice.
pub fn select_focal(
    decomp: &VoronoiDecomposition,
    h: f64,
    focal: Option<usize>,
) -> Result<FocalChoice> {
    let requested = 0.5 * decomp.r_sigma();
    let attempt = |k: usize| -> Result<FocalChoice> {
        let delta = default_delta(decomp, k);
        let validation = validate_standing_assumptions(decomp, k, h, delta, decomp.site(k))?;
        Ok(FocalChoice {
            focal: k,
            delta,
            delta_requested: requested,
            validation,
        })
    };
    if let Some(k) = focal {
        if k >= decomp.len() {
            return Err(Error::InvalidParameter(format!(
                "focal index {k} out of range"
            )));
        }
        return attempt(k);
    }
    let c = decomp.omega().center();
    let mut order: Vec<usize> = (0..decomp.len()).collect();
    order.sort_by(|&a, &b| {
        decomp
            .site(a)
            .dist(c)
            .total_cmp(&decomp.site(b).dist(c))
            .then(a.cmp(&b))
    });
    let mut last = None;
    for &k in order.iter().take(64) {
        let choice = attempt(k)?;
        if choice.validation.passed() && choice.delta > 0.0 {
            return Ok(choice);
        }
        last = Some(choice);
    }
    let detail = last.map_or_else(|| "no sites".to_string(), |c| c.validation.summary());
    Err(Error::AssumptionViolation {
        clause: "focal site selection".into(),
        detail: format!("no site near the centre of Ω passes ({detail})"),
        witness: Some(c),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyConfig {
    pub omega: Rect,
    /// Fixed padding `H`; grown automatically past `C_* r_σ` when absent.
    #[serde(rename = "H", default, skip_serializing_if = "Option::is_none")]
    pub padding: Option<f64>,
    pub generator: Generator,
    #[serde(default)]
    pub seed: u64,
    pub r_sigma_targets: Vec<f64>,
    #[serde(rename = "C_star")]
    pub c_star: Vec<f64>,
    pub lambda: f64,
    #[serde(default = "default_weights")]
    pub weights: Vec<WeightSpec>,
    #[serde(default = "default_functions")]
    pub functions: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub focal_index: Option<usize>,
    /// Also evaluate the sixteen lemma inequalities.
    #[serde(default = "yes")]
    pub lemmas: bool,
    /// Confirm every integral with a refined rule.
    #[serde(default = "yes")]
    pub checked: bool,
}

fn default_weights() -> Vec<WeightSpec> {
    vec![WeightSpec::Indicator]
}

fn default_functions() -> Vec<String> {
    TestFunction::default_suite()
        .iter()
        .map(|f| f.name())
        .collect()
}

fn yes() -> bool {
    true
}

impl StudyConfig {
    pub fn validate(&self) -> Result<()> {
        self.generator.check()?;
        if self.r_sigma_targets.is_empty()
            || self.c_star.is_empty()
            || self.weights.is_empty()
            || self.functions.is_empty()
        {
            return Err(Error::Config("every sweep list must be nonempty".into()));
        }
        if let Some(c) = self.c_star.iter().find(|&&c| !(c > 1.0)) {
            return Err(Error::Config(format!("C_star must exceed 1, got {c}")));
        }
        if let Some(r) = self.r_sigma_targets.iter().find(|&&r| !(r > 0.0)) {
            return Err(Error::Config(format!(
                "r_sigma targets must be positive, got {r}"
            )));
        }
        if !(self.lambda > 0.0 && self.lambda < 1.0) {
            return Err(Error::Config(format!(
                "lambda must lie in (0, 1), got {}",
                self.lambda
            )));
        }
        self.test_functions()?;
        Ok(())
    }

    pub fn test_functions(&self) -> Result<Vec<TestFunction>> {
        self.functions
            .iter()
            .map(|n| TestFunction::by_name(n))
            .collect()
    }

    /// Scenario (ii): indicator weight, `C_* = 4`, `λ = 1/2`, measured `r_σ ≈ 10⁻²`.
    pub fn corollary_ii() -> Self {
        Self {
            omega: Rect::new(Point2::new(0.0, 0.0), Point2::new(0.2, 0.2)).expect("valid"),
            padding: None,
            generator: Generator::Jittered { jitter: 0.15 },
            seed: 71,
            r_sigma_targets: vec![0.008],
            c_star: vec![4.0],
            lambda: 0.5,
            weights: vec![WeightSpec::Indicator],
            functions: default_functions(),
            focal_index: None,
            lemmas: true,
            checked: true,
        }
    }
}

/// One measured operator error against its theorem bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudyRow {
    pub config: usize,
    pub generator: String,
    pub seed: u64,
    pub n_sites: usize,
    pub weight: String,
    pub focal: usize,
    pub r_sigma: f64,
    pub h: f64,
    #[serde(rename = "C_star")]
    pub c_star: f64,
    pub lambda: f64,
    pub delta: f64,
    pub function: String,
    pub operator: String,
    pub error: f64,
    pub rhs: f64,
    pub pass: bool,
    /// `|f|_{C⁰}`, `4δ⁻¹|f|_{C⁰}` or `8δ⁻²|f|_{C⁰}`.
    pub apriori_bound: f64,
    pub apriori_pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corollary_rhs: Option<f64>,
    pub validation: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaRow {
    pub config: usize,
    pub function: String,
    pub lemma: String,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkipRecord {
    pub config: Option<usize>,
    pub r_sigma_target: Option<f64>,
    #[serde(rename = "C_star")]
    pub c_star: Option<f64>,
    pub weight: Option<String>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigSummary {
    pub config: usize,
    pub generator: String,
    pub r_sigma_target: f64,
    pub n_sites: usize,
    pub padding: f64,
    pub r_sigma: f64,
    pub h: f64,
    #[serde(rename = "C_star")]
    pub c_star: f64,
    pub weight: String,
    pub focal: usize,
    pub delta: f64,
    pub delta_requested: f64,
    pub uncovered_area: f64,
    pub validation: String,
    pub bounds: Vec<BoundReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct StudyOutcome {
    pub configs: Vec<ConfigSummary>,
    pub rows: Vec<StudyRow>,
    pub lemmas: Vec<LemmaRow>,
    pub skips: Vec<SkipRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corollary: Option<CorollaryReport>,
}

impl StudyOutcome {
    pub fn passed(&self) -> usize {
        self.rows.iter().filter(|r| r.pass).count()
    }

    pub fn lemma_passed(&self) -> usize {
        self.lemmas.iter().filter(|r| r.pass).count()
    }

    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass && r.apriori_pass) && self.lemmas.iter().all(|r| r.pass)
    }

    pub fn summary(&self) -> String {
        format!(
            "{} configurations, {} skipped; theorem rows {}/{} pass; lemma rows {}/{} pass",
            self.configs.len(),
            self.skips.len(),
            self.passed(),
            self.rows.len(),
            self.lemma_passed(),
            self.lemmas.len()
        )
    }
}

struct Job {
    config: usize,
    decomp: usize,
    r_target: f64,
    c_star: f64,
    weight: WeightSpec,
}

struct JobResult {
    summary: ConfigSummary,
    rows: Vec<StudyRow>,
    lemmas: Vec<LemmaRow>,
}

fn apriori(family: Family, delta: f64, c0: f64) -> f64 {
    match family {
        Family::Interpolation => c0,
        Family::Gradient => 4.0 * c0 / delta,
        Family::Laplacian | Family::AltLaplacian => 8.0 * c0 / (delta * delta),
    }
}

fn run_job(
    cfg: &StudyConfig,
    job: &Job,
    decomp: &VoronoiDecomposition,
    functions: &[TestFunction],
    corollary: Option<&CorollaryReport>,
) -> Result<JobResult> {
    let r = decomp.r_sigma();
    let h = job.c_star * r;
    let choice = select_focal(decomp, h, cfg.focal_index)?;
    if let Some(fail) = choice.validation.first_blocking_failure() {
        return Err(Error::AssumptionViolation {
            clause: fail.label.to_string(),
            detail: fail.detail.clone(),
            witness: fail.witness,
        });
    }
    let weight: WeightFunction = job.weight.build(choice.delta, h)?;
    let ctx = NeighborContext::new(decomp, &weight, choice.focal, Some(cfg.lambda))?;
    let tc = TheoremConstants::compute(&ctx)?;
    let reports: Vec<BoundReport> = TheoremId::ALL
        .into_iter()
        .map(|t| BoundReport::from_constants(t, &tc))
        .collect::<Result<_>>()?;
    let omega_h = decomp.omega_h();
    let validation = choice.validation.summary();
    let mut rows = Vec::new();
    let mut lemmas = Vec::new();
    for f in functions {
        let table = evaluate_all(&ctx, f, cfg.checked)?;
        let s = f.seminorms(&omega_h);
        for (fam, rep) in Family::ALL.into_iter().zip(&reports) {
            let kind = OperatorKind::tilde(fam);
            let error = table.error(fam);
            let rhs = rep.rhs(&s);
            let scale = table.exact(fam).magnitude() + table.get(kind).scale;
            let bound = apriori(fam, choice.delta, s.get(0));
            let corollary_rhs = corollary.and_then(|c| c.printed).map(|p| {
                let pair = p[fam as usize];
                pair.first * s.get(pair.orders.0) + pair.second * s.get(pair.orders.1)
            });
            rows.push(StudyRow {
                config: job.config,
                generator: cfg.generator.name(),
                seed: cfg.seed,
                n_sites: decomp.len(),
                weight: job.weight.name().into(),
                focal: choice.focal,
                r_sigma: r,
                h,
                c_star: job.c_star,
                lambda: cfg.lambda,
                delta: choice.delta,
                function: f.name(),
                operator: kind.slug(),
                error,
                rhs,
                pass: within_bound(error, rhs, scale),
                apriori_bound: bound,
                apriori_pass: within_bound(table.value(kind).magnitude(), bound, 0.0),
                corollary_rhs,
                validation: validation.clone(),
            });
        }
        if cfg.lemmas {
            for id in LemmaId::all() {
                let g = gap_from_table(id, &table, &tc, &s)?;
                lemmas.push(LemmaRow {
                    config: job.config,
                    function: g.function,
                    lemma: g.label,
                    lhs: g.lhs,
                    rhs: g.rhs,
                    pass: g.pass,
                });
            }
        }
    }
    Ok(JobResult {
        summary: ConfigSummary {
            config: job.config,
            generator: cfg.generator.name(),
            r_sigma_target: job.r_target,
            n_sites: decomp.len(),
            padding: decomp.domain().padding,
            r_sigma: r,
            h,
            c_star: job.c_star,
            weight: job.weight.name().into(),
            focal: choice.focal,
            delta: choice.delta,
            delta_requested: choice.delta_requested,
            uncovered_area: choice.validation.uncovered_area,
            validation,
            bounds: reports,
        },
        rows,
        lemmas,
    })
}

/// Runs every `(r_σ target, C_*, weight)` combination. Results are ordered by
/// configuration index regardless of scheduling.
pub fn run_study(cfg: &StudyConfig) -> Result<StudyOutcome> {
    run_study_with(cfg, None)
}

pub fn run_study_with(
    cfg: &StudyConfig,
    corollary: Option<CorollaryReport>,
) -> Result<StudyOutcome> {
    cfg.validate()?;
    let functions = cfg.test_functions()?;
    let c_max = cfg.c_star.iter().copied().fold(0.0, f64::max);
    let mut out = StudyOutcome {
        corollary: corollary.clone(),
        ..Default::default()
    };

    let built: Vec<Result<VoronoiDecomposition>> = cfg
        .r_sigma_targets
        .par_iter()
        .map(|&r| build_padded(cfg.generator, cfg.omega, cfg.padding, r, c_max, cfg.seed))
        .collect();
    let mut decomps = Vec::new();
    let mut jobs = Vec::new();
    let mut next = 0;
    for (&r, b) in cfg.r_sigma_targets.iter().zip(built) {
        match b {
            Ok(d) => {
                decomps.push(d);
                for &c in &cfg.c_star {
                    for w in &cfg.weights {
                        jobs.push(Job {
                            config: next,
                            decomp: decomps.len() - 1,
                            r_target: r,
                            c_star: c,
                            weight: w.clone(),
                        });
                        next += 1;
                    }
                }
            }
            Err(e) => {
                for &c in &cfg.c_star {
                    for w in &cfg.weights {
                        out.skips.push(SkipRecord {
                            config: Some(next),
                            r_sigma_target: Some(r),
                            c_star: Some(c),
                            weight: Some(w.name().into()),
                            reason: e.to_string(),
                        });
                        next += 1;
                    }
                }
            }
        }
    }

    let results: Vec<Result<JobResult>> = jobs
        .par_iter()
        .map(|j| run_job(cfg, j, &decomps[j.decomp], &functions, corollary.as_ref()))
        .collect();
    for (job, res) in jobs.iter().zip(results) {
        match res {
            Ok(r) => {
                out.configs.push(r.summary);
                out.rows.extend(r.rows);
                out.lemmas.extend(r.lemmas);
            }
            Err(e) => out.skips.push(SkipRecord {
                config: Some(job.config),
                r_sigma_target: Some(job.r_target),
                c_star: Some(job.c_star),
                weight: Some(job.weight.name().into()),
                reason: e.to_string(),
            }),
        }
    }
    out.skips.sort_by_key(|s| s.config);
    Ok(out)
}

/// Runs a corollary preset. Scenario (i) needs about `10^{8m}` sites inside
/// `B_h(a_k)`, so only the closed forms are reported and the geometric run is
/// recorded as skipped.
pub fn run_preset(
    preset: CorollaryPreset,
    functions: Option<Vec<String>>,
    seed: Option<u64>,
) -> Result<StudyOutcome> {
    let report = corollary71_preset(preset)?;
    match preset {
        CorollaryPreset::II => {
            let mut cfg = StudyConfig::corollary_ii();
            if let Some(f) = functions {
                cfg.functions = f;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            run_study_with(&cfg, Some(report))
        }
        CorollaryPreset::I { .. } => {
            let s = report.scenario;
            let per_disk = (s.c_star * s.c_star).round();
            Ok(StudyOutcome {
                skips: vec![SkipRecord {
                    config: None,
                    r_sigma_target: Some(s.r_sigma),
                    c_star: Some(s.c_star),
                    weight: Some("indicator".into()),
                    reason: format!(
                        "h/r_σ = {:e} puts on the order of {per_disk:e} sites inside B_h(a_k); \
                         only the closed forms are evaluated",
                        s.c_star
                    ),
                }],
                corollary: Some(report),
                ..Default::default()
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> Rect {
        Rect::new(Point2::new(0.0, 0.0), Point2::new(1.0, 1.0)).unwrap()
    }

    #[test]
    fn lattice_count_and_determinism() {
        let s = Generator::Lattice.generate(unit(), 1.0 / 32.0, 1).unwrap();
        assert_eq!(s.len(), 1024);
        let j = Generator::Jittered { jitter: 0.3 };
        assert_eq!(
            j.generate(unit(), 0.05, 9).unwrap(),
            j.generate(unit(), 0.05, 9).unwrap()
        );
        assert_ne!(
            j.generate(unit(), 0.05, 9).unwrap(),
            j.generate(unit(), 0.05, 10).unwrap()
        );
        assert!(Generator::Jittered { jitter: 0.5 }
            .generate(unit(), 0.05, 1)
            .is_err());
    }

    #[test]
    fn poisson_disk_spacing() {
        let s = Generator::PoissonDisk.generate(unit(), 0.05, 3).unwrap();
        assert!(s.len() > 200);
        for (i, a) in s.iter().enumerate() {
            for b in &s[i + 1..] {
                assert!(a.dist(*b) >= 0.05 - 1e-12);
            }
        }
    }

    #[test]
    fn hex_spacing() {
        let s = Generator::Hex.generate(unit(), 0.1, 0).unwrap();
        let min = s
            .iter()
            .enumerate()
            .flat_map(|(i, a)| s[i + 1..].iter().map(move |b| a.dist(*b)))
            .fold(f64::INFINITY, f64::min);
        assert!((min - 0.1).abs() < 1e-12);
    }

    #[test]
    fn padding_grows_past_h() {
        let d = build_padded(
            Generator::Jittered { jitter: 0.3 },
            unit(),
            None,
            0.05,
            6.0,
            4,
        )
        .unwrap();
        assert!(6.0 * d.r_sigma() < d.domain().padding);
    }

    #[test]
    fn jittered_r_sigma_range() {
        let s = 1.0 / 32.0;
        let d = build_padded(
            Generator::Jittered { jitter: 0.3 },
            unit(),
            Some(0.1),
            s / SQRT_2,
            2.0,
            5,
        )
        .unwrap();
        let half_diag = s / SQRT_2;
        assert!(
            d.r_sigma() >= 0.5 * half_diag && d.r_sigma() <= 1.5 * half_diag,
            "{}",
            d.r_sigma()
        );
    }

    #[test]
    fn focal_near_centre() {
        let d = build_padded(Generator::Lattice, unit(), None, 0.04, 4.0, 0).unwrap();
        let c = select_focal(&d, 4.0 * d.r_sigma(), None).unwrap();
        assert!(c.validation.passed());
        assert!(d.site(c.focal).dist(Point2::new(0.5, 0.5)) < 0.06);
        assert!(c.delta <= 0.5 * d.r_sigma());
    }
}
