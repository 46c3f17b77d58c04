//! The discrete operators Π̃, ∇̃, Δ̃, □̃ and the continuous (`Π_h`), cell-integral
//! (`Π̂`) and frozen-value (`Π̆`) intermediates for each family.

use std::fmt;

use serde::Serialize;

use crate::context::{Neighbor, NeighborContext};
use crate::error::{Error, Result};
use crate::functions::TestFunction;
use crate::geometry::Point2;
use crate::quadrature::{PolarQuadrature, PolarRegion, PolarSample};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    /// Π
    Interpolation,
    /// ∇
    Gradient,
    /// Δ
    Laplacian,
    /// □
    AltLaplacian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Stage {
    Continuous,
    Hat,
    Breve,
    Tilde,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::Interpolation,
        Family::Gradient,
        Family::Laplacian,
        Family::AltLaplacian,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            Family::Interpolation => "Π",
            Family::Gradient => "∇",
            Family::Laplacian => "Δ",
            Family::AltLaplacian => "□",
        }
    }

    pub fn slug(self) -> &'static str {
        match self {
            Family::Interpolation => "pi",
            Family::Gradient => "grad",
            Family::Laplacian => "laplace",
            Family::AltLaplacian => "box",
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl Stage {
    pub const ALL: [Stage; 4] = [Stage::Continuous, Stage::Hat, Stage::Breve, Stage::Tilde];

    pub fn slug(self) -> &'static str {
        match self {
            Stage::Continuous => "h",
            Stage::Hat => "hat",
            Stage::Breve => "breve",
            Stage::Tilde => "tilde",
        }
    }

    fn mark(self) -> &'static str {
        match self {
            Stage::Continuous => "_h",
            Stage::Hat => "\u{0302}",
            Stage::Breve => "\u{0306}",
            Stage::Tilde => "\u{0303}",
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct OperatorKind {
    pub family: Family,
    pub stage: Stage,
}

impl OperatorKind {
    pub const fn new(family: Family, stage: Stage) -> Self {
        Self { family, stage }
    }

    pub fn tilde(family: Family) -> Self {
        Self::new(family, Stage::Tilde)
    }

    /// e.g. `Π̃`, `∇̂`, `Δ_h`.
    pub fn symbol(self) -> String {
        format!("{}{}", self.family.symbol(), self.stage.mark())
    }

    /// e.g. `pi_tilde`, `grad_hat`, `laplace_h`.
    pub fn slug(self) -> String {
        format!("{}_{}", self.family.slug(), self.stage.slug())
    }

    pub fn all() -> impl Iterator<Item = OperatorKind> {
        Family::ALL
            .into_iter()
            .flat_map(|f| Stage::ALL.into_iter().map(move |s| OperatorKind::new(f, s)))
    }

    pub fn parse(slug: &str) -> Option<Self> {
        Self::all().find(|k| k.slug() == slug)
    }
}

impl fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.symbol())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum OperatorValue {
    Scalar(f64),
    Vector(Point2),
}

impl OperatorValue {
    /// Euclidean distance between two values of the same shape.
    pub fn distance(&self, other: &Self) -> f64 {
        match (self, other) {
            (Self::Scalar(a), Self::Scalar(b)) => (a - b).abs(),
            (Self::Vector(a), Self::Vector(b)) => a.dist(*b),
            _ => panic!("comparing a scalar with a vector"),
        }
    }

    pub fn magnitude(&self) -> f64 {
        match self {
            Self::Scalar(a) => a.abs(),
            Self::Vector(v) => v.norm(),
        }
    }

    pub fn scalar(&self) -> Option<f64> {
        match self {
            Self::Scalar(a) => Some(*a),
            Self::Vector(_) => None,
        }
    }

    pub fn vector(&self) -> Option<Point2> {
        match self {
            Self::Vector(v) => Some(*v),
            Self::Scalar(_) => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            Self::Scalar(a) => a.is_finite(),
            Self::Vector(v) => v.is_finite(),
        }
    }
}

impl fmt::Display for OperatorValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Scalar(a) => write!(f, "{a}"),
            Self::Vector(v) => write!(f, "{v}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OperatorResult {
    pub kind: OperatorKind,
    pub value: OperatorValue,
    pub denominator: f64,
    /// Sum of the magnitudes of the summands over the denominator; the size
    /// against which roundoff in `value` is measured.
    pub scale: f64,
}

/// The quantity each family approximates: `f`, `∇f`, `Δf`, `Δf`.
pub fn exact_value(family: Family, f: &TestFunction, x: Point2) -> OperatorValue {
    match family {
        Family::Interpolation => OperatorValue::Scalar(f.value(x)),
        Family::Gradient => OperatorValue::Vector(f.gradient(x)),
        Family::Laplacian | Family::AltLaplacian => OperatorValue::Scalar(f.laplacian(x)),
    }
}

fn checked_denominator(ctx: &NeighborContext<'_>, kind: OperatorKind, den: f64) -> Result<f64> {
    let floor = match kind.family {
        Family::Laplacian => ctx.second_moment_floor(),
        _ => ctx.denominator_floor(),
    };
    if !(den >= floor) {
        return Err(Error::AssumptionViolation {
            clause: "positivity of the weighted neighbour sums".into(),
            detail: format!("{kind} denominator {den:e} below floor {floor:e}"),
            witness: Some(ctx.x()),
        });
    }
    Ok(den)
}

fn finish(
    ctx: &NeighborContext<'_>,
    kind: OperatorKind,
    num: OperatorValue,
    abs_num: f64,
    den: f64,
) -> Result<OperatorResult> {
    let den = checked_denominator(ctx, kind, den)?;
    let value = match num {
        OperatorValue::Scalar(a) => OperatorValue::Scalar(a / den),
        OperatorValue::Vector(v) => OperatorValue::Vector(v * (1.0 / den)),
    };
    Ok(OperatorResult {
        kind,
        value,
        denominator: den,
        scale: (abs_num / den).max(value.magnitude()),
    })
}

/// `Σ m_i t_i` over `R(a_k, h)` with the family's summand `t_i`, and `Σ |m_i t_i|`.
fn site_sum(
    family: Family,
    ctx: &NeighborContext<'_>,
    f: &TestFunction,
    mass: impl Fn(&Neighbor) -> f64,
) -> (OperatorValue, f64) {
    let fk = f.value(ctx.x());
    let mut abs = 0.0;
    match family {
        Family::Gradient => {
            let mut v = Point2::ORIGIN;
            for n in ctx.neighbors() {
                let t = 2.0 * mass(n) * (fk - f.value(n.site)) / n.dist;
                abs += t.abs();
                v = v + n.dir * t;
            }
            (OperatorValue::Vector(v), abs)
        }
        _ => {
            let mut sum = 0.0;
            for n in ctx.neighbors() {
                let fi = f.value(n.site);
                let t = mass(n)
                    * match family {
                        Family::Interpolation => fi,
                        Family::Laplacian => -4.0 * (fk - fi),
                        _ => -4.0 * (fk - fi) / (n.dist * n.dist),
                    };
                abs += t.abs();
                sum += t;
            }
            (OperatorValue::Scalar(sum), abs)
        }
    }
}

/// `Π̃, ∇̃, Δ̃, □̃` at `a_k`.
pub fn tilde(
    family: Family,
    ctx: &NeighborContext<'_>,
    f: &TestFunction,
) -> Result<OperatorResult> {
    let (num, abs) = site_sum(family, ctx, f, |n| n.area * n.w_site);
    let den = match family {
        Family::Laplacian => ctx.sum_vd2w(),
        _ => ctx.sum_vw(),
    };
    finish(ctx, OperatorKind::tilde(family), num, abs, den)
}

pub fn pi_tilde(ctx: &NeighborContext<'_>, f: &TestFunction) -> Result<OperatorResult> {
    tilde(Family::Interpolation, ctx, f)
}

pub fn grad_tilde(ctx: &NeighborContext<'_>, f: &TestFunction) -> Result<OperatorResult> {
    tilde(Family::Gradient, ctx, f)
}

pub fn laplace_tilde(ctx: &NeighborContext<'_>, f: &TestFunction) -> Result<OperatorResult> {
    tilde(Family::Laplacian, ctx, f)
}

pub fn box_tilde(ctx: &NeighborContext<'_>, f: &TestFunction) -> Result<OperatorResult> {
    tilde(Family::AltLaplacian, ctx, f)
}

/// `Π̆, ∇̆, Δ̆, □̆`: values frozen at sites, weights integrated over cells.
/// `Π̆` keeps `V_i w(a_k - a_i)` in its numerator.
pub fn breve(
    family: Family,
    ctx: &NeighborContext<'_>,
    f: &TestFunction,
) -> Result<OperatorResult> {
    let (num, abs) = match family {
        Family::Interpolation => site_sum(family, ctx, f, |n| n.area * n.w_site),
        _ => site_sum(family, ctx, f, |n| n.cell_w),
    };
    let den = match family {
        Family::Laplacian => ctx.sum_cell_r2w(),
        _ => ctx.sum_cell_w(),
    };
    finish(ctx, OperatorKind::new(family, Stage::Breve), num, abs, den)
}

const N_INTEGRALS: usize = 5;

/// `[f w, (f_k - f)/r e w (two components), (f_k - f) w, (f_k - f)/r² w]`
/// followed by their absolute values, where `e = (a_k - y)/r`.
fn integrand(f: &TestFunction, fk: f64, w: f64, s: &PolarSample) -> [f64; 2 * N_INTEGRALS] {
    if w == 0.0 {
        return [0.0; 2 * N_INTEGRALS];
    }
    let fy = f.value(s.point);
    let d = fk - fy;
    let g = d / s.r * w;
    let v = [
        fy * w,
        -g * s.dir.x1,
        -g * s.dir.x2,
        d * w,
        d / (s.r * s.r) * w,
    ];
    let mut out = [0.0; 2 * N_INTEGRALS];
    for m in 0..N_INTEGRALS {
        out[m] = v[m];
        out[N_INTEGRALS + m] = v[m].abs();
    }
    out
}

fn add(acc: &mut [f64; 2 * N_INTEGRALS], v: [f64; 2 * N_INTEGRALS]) {
    for m in 0..2 * N_INTEGRALS {
        acc[m] += v[m];
    }
}

fn numerators(
    ctx: &NeighborContext<'_>,
    f: &TestFunction,
    stage: Stage,
    quad: &PolarQuadrature,
) -> [f64; 2 * N_INTEGRALS] {
    let x = ctx.x();
    let fk = f.value(x);
    let w = ctx.weight();
    let (delta, h) = (w.delta(), w.h());
    let kinks = w.kinks();
    let eval = |s: &PolarSample| integrand(f, fk, w.radial(s.r), s);
    match stage {
        Stage::Continuous => quad.integrate(x, PolarRegion::Annulus, delta, h, &kinks, eval),
        Stage::Hat => {
            let mut acc = [0.0; 2 * N_INTEGRALS];
            for n in ctx.neighbors() {
                let cell = ctx.decomposition().cell(n.index);
                add(
                    &mut acc,
                    quad.integrate(x, PolarRegion::Polygon(cell), delta, h, &kinks, eval),
                );
            }
            acc
        }
        _ => unreachable!("only integral stages use quadrature"),
    }
}

/// Continuous and cell-integral numerators, optionally confirmed by a refined rule.
fn integral_numerators(
    ctx: &NeighborContext<'_>,
    f: &TestFunction,
    stage: Stage,
    checked: bool,
) -> Result<[f64; 2 * N_INTEGRALS]> {
    let quad = ctx.quadrature();
    let coarse = numerators(ctx, f, stage, quad);
    if !checked {
        return Ok(coarse);
    }
    let fine = numerators(ctx, f, stage, &quad.refined());
    for m in 0..N_INTEGRALS {
        let scale = fine[N_INTEGRALS + m];
        if (coarse[m] - fine[m]).abs() > 1e-8 * scale + 1e-300 {
            return Err(Error::Quadrature {
                what: format!(
                    "{} numerator {m}",
                    if stage == Stage::Hat {
                        "cell"
                    } else {
                        "annulus"
                    }
                ),
                coarse: coarse[m],
                fine: fine[m],
            });
        }
    }
    Ok(fine)
}

fn from_integrals(
    ctx: &NeighborContext<'_>,
    family: Family,
    stage: Stage,
    num: &[f64; 2 * N_INTEGRALS],
) -> Result<OperatorResult> {
    let kind = OperatorKind::new(family, stage);
    let (w0, w2) = match stage {
        Stage::Continuous => {
            let w = ctx.weight();
            (w.radial_moment(0).value, w.radial_moment(2).value)
        }
        _ => (ctx.sum_cell_w(), ctx.sum_cell_r2w()),
    };
    let abs = &num[N_INTEGRALS..];
    let (v, a, den) = match family {
        Family::Interpolation => (OperatorValue::Scalar(num[0]), abs[0], w0),
        Family::Gradient => (
            OperatorValue::Vector(Point2::new(2.0 * num[1], 2.0 * num[2])),
            2.0 * (abs[1] + abs[2]),
            w0,
        ),
        Family::Laplacian => (OperatorValue::Scalar(-4.0 * num[3]), 4.0 * abs[3], w2),
        Family::AltLaplacian => (OperatorValue::Scalar(-4.0 * num[4]), 4.0 * abs[4], w0),
    };
    finish(ctx, kind, v, a, den)
}

/// `Π_h, ∇_h, Δ_h, □_h` with the refinement check.
pub fn continuous_variant(
    family: Family,
    ctx: &NeighborContext<'_>,
    f: &TestFunction,
) -> Result<OperatorResult> {
    let num = integral_numerators(ctx, f, Stage::Continuous, true)?;
    from_integrals(ctx, family, Stage::Continuous, &num)
}

/// Hat or breve variants; hat variants are refinement-checked.
pub fn semidiscrete_variant(
    family: Family,
    stage: Stage,
    ctx: &NeighborContext<'_>,
    f: &TestFunction,
) -> Result<OperatorResult> {
    match stage {
        Stage::Hat => {
            let num = integral_numerators(ctx, f, Stage::Hat, true)?;
            from_integrals(ctx, family, Stage::Hat, &num)
        }
        Stage::Breve => breve(family, ctx, f),
        other => Err(Error::InvalidParameter(format!(
            "{other:?} is not a semi-discrete stage"
        ))),
    }
}

pub fn apply(
    kind: OperatorKind,
    ctx: &NeighborContext<'_>,
    f: &TestFunction,
) -> Result<OperatorResult> {
    match kind.stage {
        Stage::Continuous => continuous_variant(kind.family, ctx, f),
        Stage::Hat | Stage::Breve => semidiscrete_variant(kind.family, kind.stage, ctx, f),
        Stage::Tilde => tilde(kind.family, ctx, f),
    }
}

/// All sixteen operator values for one function.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OperatorTable {
    pub function: String,
    pub x: Point2,
    results: Vec<OperatorResult>,
    exact: Vec<OperatorValue>,
}

impl OperatorTable {
    pub fn get(&self, kind: OperatorKind) -> &OperatorResult {
        &self.results[kind.family.index() * 4 + kind.stage.index()]
    }

    pub fn value(&self, kind: OperatorKind) -> OperatorValue {
        self.get(kind).value
    }

    pub fn exact(&self, family: Family) -> OperatorValue {
        self.exact[family.index()]
    }

    pub fn results(&self) -> &[OperatorResult] {
        &self.results
    }

    /// `|exact - tilde|` for a family.
    pub fn error(&self, family: Family) -> f64 {
        self.exact(family)
            .distance(&self.value(OperatorKind::tilde(family)))
    }
}

/// Evaluates every operator; integral stages share one pass over the cells.
/// `checked` repeats the integrals with the refined rule.
pub fn evaluate_all(
    ctx: &NeighborContext<'_>,
    f: &TestFunction,
    checked: bool,
) -> Result<OperatorTable> {
    let cont = integral_numerators(ctx, f, Stage::Continuous, checked)?;
    let hat = integral_numerators(ctx, f, Stage::Hat, checked)?;
    let mut results = Vec::with_capacity(16);
    for family in Family::ALL {
        results.push(from_integrals(ctx, family, Stage::Continuous, &cont)?);
        results.push(from_integrals(ctx, family, Stage::Hat, &hat)?);
        results.push(breve(family, ctx, f)?);
        results.push(tilde(family, ctx, f)?);
    }
    Ok(OperatorTable {
        function: f.name(),
        x: ctx.x(),
        results,
        exact: Family::ALL
            .iter()
            .map(|&fam| exact_value(fam, f, ctx.x()))
            .collect(),
    })
}
