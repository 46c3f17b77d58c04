//! Bound constants `c₁ … c₁₂`, theorem right-hand sides, and the closed forms
//! for the indicator weight with `h = C_* r_σ`.

use std::f64::consts::PI;
use std::fmt;

use serde::Serialize;

use crate::context::NeighborContext;
use crate::error::{Error, Result};
use crate::functions::Seminorms;
use crate::operators::Family;
use crate::quadrature::PolarRegion;

/// Index into a `[f64; 4]` of moments `n = -1, 0, 1, 2`.
const fn m(n: i32) -> usize {
    (n + 1) as usize
}

/// `‖|a_k - ·|ⁿ w(a_k - ·)‖_{L¹}` over the four regions the constants use,
/// each stored for `n = -1, 0, 1, 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormSet {
    /// `σ_k \ B_δ(a_k)`
    pub sigma: [f64; 4],
    /// `B_h(a_k) \ B_δ(a_k)`
    pub ring: [f64; 4],
    /// `B_h(a_k) \ σ_k`
    pub out: [f64; 4],
    /// `B_P(a_k) \ σ_k` with `P = inner_radius`
    pub inner: [f64; 4],
    pub inner_radius: f64,
    /// `λh + r_σ` before clamping to `h`.
    pub inner_radius_raw: f64,
}

/// The discrete neighbour sums entering `c₇`, `c₈` and `c₁₂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiscreteSums {
    /// `Σ_{R(a_k,h)} V_i |a_k - a_i| w(a_k - a_i)`
    pub s1: f64,
    /// `Σ_{R(a_k,h)} V_i |a_k - a_i|² w(a_k - a_i)`
    pub s2: f64,
    /// `Σ_{R(a_k,λh)} V_i w/|a_k - a_i|` over `Σ_{R(a_k,h)} V_j w`
    pub inner_ratio: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundInputs {
    pub h: f64,
    pub r_sigma: f64,
    pub delta: f64,
    pub lambda: Option<f64>,
    pub lipschitz: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Constant {
    pub name: String,
    pub numerator: f64,
    pub denominator: f64,
    pub value: f64,
}

impl Constant {
    fn ratio(name: &str, numerator: f64, denominator: f64) -> Result<Self> {
        if !(denominator > 0.0) || !numerator.is_finite() {
            return Err(Error::AssumptionViolation {
                clause: format!("{name} well defined"),
                detail: format!("numerator {numerator:e}, denominator {denominator:e}"),
                witness: None,
            });
        }
        Ok(Self {
            name: name.to_string(),
            numerator,
            denominator,
            value: numerator / denominator,
        })
    }
}

/// `c₁ … c₁₂`; the λ-dependent ones are absent when no λ was given.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremConstants {
    pub inputs: BoundInputs,
    pub norms: NormSet,
    pub sums: DiscreteSums,
    constants: Vec<Option<Constant>>,
}

impl TheoremConstants {
    /// Evaluates every constant from the geometry of `ctx`.
    pub fn compute(ctx: &NeighborContext<'_>) -> Result<Self> {
        let w = ctx.weight();
        let (h, delta, r) = (ctx.h(), ctx.delta(), ctx.r_sigma());
        let x = ctx.x();
        let quad = ctx.quadrature();
        let cell = ctx.decomposition().cell(ctx.focal());

        let sigma = w.polygon_moments(quad, x, cell, h);
        let mut ring = [0.0; 4];
        for n in -1..=2 {
            ring[m(n)] = w.radial_moment(n).value;
        }
        let out = std::array::from_fn(|i| (ring[i] - sigma[i]).max(0.0));

        let lambda = ctx.lambda();
        let raw = lambda.map_or(h, |l| l * h + r);
        let p = raw.min(h);
        let sigma_p = w.polygon_moments(quad, x, cell, p);
        let inner = std::array::from_fn(|i| {
            (w.radial_integral(i as i32 - 1, delta, p) - sigma_p[i]).max(0.0)
        });

        let nb = ctx.neighbors();
        let s1 = nb.iter().map(|n| n.area * n.dist * n.w_site).sum();
        let s2 = ctx.sum_vd2w();
        let inner_ratio = match lambda {
            Some(l) => {
                nb.iter()
                    .filter(|n| n.dist < l * h)
                    .map(|n| n.area * n.w_site / n.dist)
                    .sum::<f64>()
                    / ctx.sum_vw()
            }
            None => 0.0,
        };
        let inputs = BoundInputs {
            h,
            r_sigma: r,
            delta,
            lambda,
            lipschitz: w.lipschitz(),
        };
        Self::from_parts(
            inputs,
            NormSet {
                sigma,
                ring,
                out,
                inner,
                inner_radius: p,
                inner_radius_raw: raw,
            },
            DiscreteSums {
                s1,
                s2,
                inner_ratio,
            },
        )
    }

    /// Evaluates the defining formulas on supplied norms and sums.
    pub fn from_parts(inputs: BoundInputs, norms: NormSet, sums: DiscreteSums) -> Result<Self> {
        let BoundInputs {
            h,
            r_sigma: r,
            lambda,
            lipschitz: lw,
            ..
        } = inputs;
        let NormSet {
            sigma,
            ring,
            out,
            inner,
            ..
        } = norms;
        let mut c: Vec<Option<Constant>> = vec![None; 12];
        c[0] = Some(Constant::ratio("c1", sigma[m(0)], ring[m(0)])?);
        c[1] = Some(Constant::ratio("c2", PI * lw * r * h * h, out[m(0)])?);
        let ratio12 = sums.s1 / sums.s2;
        if !(sums.s2 > 0.0) {
            return Err(Error::AssumptionViolation {
                clause: "Σ V_j |a_k - a_j|² w(a_k - a_j) > 0".into(),
                detail: format!("sum is {:e}", sums.s2),
                witness: None,
            });
        }
        c[3] = Some(Constant::ratio(
            "c4",
            sigma[m(1)] * (1.0 + r * ring[m(1)] / out[m(2)]),
            ring[m(2)],
        )?);
        c[6] = Some(Constant::ratio(
            "c7",
            2.0 * r * h * out[m(0)] * ratio12,
            out[m(2)],
        )?);
        c[7] = Some(Constant::ratio(
            "c8",
            PI * lw * r * h.powi(3) * (1.0 + h * ratio12),
            out[m(2)],
        )?);
        c[8] = Some(Constant::ratio(
            "c9",
            sigma[m(-1)] * out[m(0)] + sigma[m(0)] * out[m(-1)],
            ring[m(0)] * out[m(0)],
        )?);
        if let Some(l) = lambda {
            let q = r / (l * h);
            c[2] = Some(Constant::ratio("c3", inner[m(0)], out[m(0)])?);
            c[4] = Some(Constant::ratio("c5", q * out[m(1)], out[m(2)])?);
            c[5] = Some(Constant::ratio("c6", r * inner[m(0)], out[m(2)])?);
            c[9] = Some(Constant::ratio("c10", q * out[m(-1)], out[m(0)])?);
            c[10] = Some(Constant::ratio("c11", inner[m(-1)], out[m(0)])?);
            let pr = l * h + r;
            c[11] = Some(Constant::ratio(
                "c12",
                PI * lw * (2.0 * r * h / l + pr * pr + r * h * h * sums.inner_ratio),
                out[m(0)],
            )?);
        }
        Ok(Self {
            inputs,
            norms,
            sums,
            constants: c,
        })
    }

    /// `c_i` for `i` in `1..=12`.
    pub fn get(&self, i: usize) -> Result<&Constant> {
        assert!((1..=12).contains(&i), "constants are numbered 1 to 12");
        self.constants[i - 1]
            .as_ref()
            .ok_or_else(|| Error::InvalidParameter(format!("c{i} needs lambda")))
    }

    /// Value of `c_i`; panics if it was not computed.
    pub fn c(&self, i: usize) -> f64 {
        self.get(i).expect("constant available").value
    }

    pub fn available(&self) -> impl Iterator<Item = &Constant> {
        self.constants.iter().flatten()
    }

    fn pick(&self, ids: &[usize]) -> Result<Vec<Constant>> {
        ids.iter().map(|&i| self.get(i).cloned()).collect()
    }

    /// `r_σ/(λh)`
    fn ring_ratio(&self) -> Result<f64> {
        let l = self
            .inputs
            .lambda
            .ok_or_else(|| Error::InvalidParameter("lambda required".into()))?;
        Ok(self.inputs.r_sigma / (l * self.inputs.h))
    }

    /// Coefficients of `|f|_{C⁰} … |f|_{C³}` in the theorem for `family`.
    pub fn coefficients(&self, theorem: TheoremId) -> Result<[f64; 4]> {
        let BoundInputs { h, r_sigma: r, .. } = self.inputs;
        Ok(match theorem {
            TheoremId::Interpolation => [2.0 * self.c(1) + 2.0 * self.c(2), h + r, 0.0, 0.0],
            TheoremId::Gradient => {
                let q = self.ring_ratio()?;
                self.get(3)?;
                [
                    0.0,
                    8.0 * q + 4.0 * self.c(1) + 4.0 * self.c(2) + 8.0 * self.c(3),
                    4.0 * h,
                    0.0,
                ]
            }
            TheoremId::Laplacian => {
                self.get(5)?;
                let s: f64 = (4..=8).map(|i| self.c(i)).sum();
                [0.0, 4.0 * s, 0.0, 24.0 * h]
            }
            TheoremId::AltLaplacian => {
                self.get(10)?;
                [
                    0.0,
                    4.0 * self.c(9) + 12.0 * self.c(10) + 12.0 * self.c(11) + 4.0 * self.c(12),
                    0.0,
                    24.0 * h,
                ]
            }
        })
    }
}

pub fn constants_thm13(ctx: &NeighborContext<'_>) -> Result<Vec<Constant>> {
    TheoremConstants::compute(ctx)?.pick(&[1, 2])
}

pub fn constants_thm14(ctx: &NeighborContext<'_>) -> Result<Vec<Constant>> {
    ctx.require_lambda()?;
    TheoremConstants::compute(ctx)?.pick(&[1, 2, 3])
}

pub fn constants_thm15(ctx: &NeighborContext<'_>) -> Result<Vec<Constant>> {
    ctx.require_lambda()?;
    TheoremConstants::compute(ctx)?.pick(&[4, 5, 6, 7, 8])
}

pub fn constants_thm16(ctx: &NeighborContext<'_>) -> Result<Vec<Constant>> {
    ctx.require_lambda()?;
    TheoremConstants::compute(ctx)?.pick(&[9, 10, 11, 12])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum TheoremId {
    /// 1.3, `|f - Π̃f|`
    Interpolation,
    /// 1.4, `|∇f - ∇̃f|`
    Gradient,
    /// 1.5, `|Δf - Δ̃f|`
    Laplacian,
    /// 1.6, `|Δf - □̃f|`
    AltLaplacian,
}

impl TheoremId {
    pub const ALL: [TheoremId; 4] = [
        TheoremId::Interpolation,
        TheoremId::Gradient,
        TheoremId::Laplacian,
        TheoremId::AltLaplacian,
    ];

    pub fn number(self) -> &'static str {
        match self {
            TheoremId::Interpolation => "1.3",
            TheoremId::Gradient => "1.4",
            TheoremId::Laplacian => "1.5",
            TheoremId::AltLaplacian => "1.6",
        }
    }

    pub fn family(self) -> Family {
        match self {
            TheoremId::Interpolation => Family::Interpolation,
            TheoremId::Gradient => Family::Gradient,
            TheoremId::Laplacian => Family::Laplacian,
            TheoremId::AltLaplacian => Family::AltLaplacian,
        }
    }

    pub fn for_family(family: Family) -> Self {
        match family {
            Family::Interpolation => TheoremId::Interpolation,
            Family::Gradient => TheoremId::Gradient,
            Family::Laplacian => TheoremId::Laplacian,
            Family::AltLaplacian => TheoremId::AltLaplacian,
        }
    }

    fn constant_ids(self) -> &'static [usize] {
        match self {
            TheoremId::Interpolation => &[1, 2],
            TheoremId::Gradient => &[1, 2, 3],
            TheoremId::Laplacian => &[4, 5, 6, 7, 8],
            TheoremId::AltLaplacian => &[9, 10, 11, 12],
        }
    }

    pub fn needs_lambda(self) -> bool {
        self != TheoremId::Interpolation
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Theorem {}", self.number())
    }
}

const C8_NOTE: &str = "the displayed sum stops at c7 while c8 is defined and used in the last \
                       step of the Δ chain; c8 is included here";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub theorem: TheoremId,
    pub constants: Vec<Constant>,
    /// Factors of `|f|_{C⁰}, |f|_{C¹}, |f|_{C²}, |f|_{C³}`.
    pub coefficients: [f64; 4],
    pub inputs: BoundInputs,
    /// `λh + r_σ` as written, next to the clamped radius actually integrated.
    pub inner_radius_raw: f64,
    pub inner_radius: f64,
    pub notes: Vec<String>,
}

impl BoundReport {
    pub fn from_constants(theorem: TheoremId, tc: &TheoremConstants) -> Result<Self> {
        let coefficients = tc.coefficients(theorem)?;
        let mut notes = Vec::new();
        if theorem == TheoremId::Laplacian {
            notes.push(C8_NOTE.to_string());
        }
        if tc.norms.inner_radius < tc.norms.inner_radius_raw {
            notes.push(format!(
                "λh + r_σ = {:.6e} exceeds h; norms over B_{{λh+r_σ}} use radius h",
                tc.norms.inner_radius_raw
            ));
        }
        Ok(Self {
            theorem,
            constants: tc.pick(theorem.constant_ids())?,
            coefficients,
            inputs: tc.inputs,
            inner_radius_raw: tc.norms.inner_radius_raw,
            inner_radius: tc.norms.inner_radius,
            notes,
        })
    }

    pub fn rhs(&self, s: &Seminorms) -> f64 {
        (0..4).map(|j| self.coefficients[j] * s.get(j)).sum()
    }
}

pub fn bound_report(theorem: TheoremId, ctx: &NeighborContext<'_>) -> Result<BoundReport> {
    if theorem.needs_lambda() {
        ctx.require_lambda()?;
    }
    BoundReport::from_constants(theorem, &TheoremConstants::compute(ctx)?)
}

/// Every theorem whose hypotheses `ctx` meets.
pub fn all_reports(ctx: &NeighborContext<'_>) -> Result<Vec<BoundReport>> {
    let tc = TheoremConstants::compute(ctx)?;
    TheoremId::ALL
        .into_iter()
        .filter(|t| !t.needs_lambda() || ctx.lambda().is_some())
        .map(|t| BoundReport::from_constants(t, &tc))
        .collect()
}

/// One side-by-side comparison `lhs ≤ rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Inequality {
    pub lhs: f64,
    pub rhs: f64,
}

impl Inequality {
    /// `lhs ≤ rhs (1 + slack)`
    pub fn holds(&self, slack: f64) -> bool {
        self.lhs <= self.rhs * (1.0 + slack)
    }
}

/// The neighbour-ring estimates behind `c₃`, `c₅`, `c₁₀` and the Riemann-sum
/// error behind `c₂`, measured at `a_k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RingSplitting {
    /// `Σ ∫_{σ_i ∩ B_h} |y - a_i|/|x - a_i| dy ≤ π r_σ h/λ + π(λh + r_σ)²`
    pub area_ratio: Inequality,
    /// `|Σ ∫_{σ_i} w - Σ V_i w(x - a_i)| ≤ π L_w r_σ h²`
    pub riemann: Inequality,
    /// `Σ ∫_{σ_i} |y - a_i|/|x - a_i| w / Σ ∫_{σ_j} w ≤ r_σ/(λh) + N₀(inner)/N₀(out)`
    pub weighted_ratio: Inequality,
    /// `Σ ∫_{σ_i} |y - a_i|/|x - a_i| w/|x - y| ≤ N₋₁(inner) + r_σ/(λh) N₋₁(out)`
    pub inverse_ratio: Inequality,
    /// True when no neighbour cell straddles `∂B_h(x)` or `∂B_δ(x)`.
    pub no_straddling: bool,
}

impl RingSplitting {
    pub fn compute(ctx: &NeighborContext<'_>) -> Result<Self> {
        let lambda = ctx.require_lambda()?;
        let tc = TheoremConstants::compute(ctx)?;
        let w = ctx.weight();
        let (h, delta, r) = (ctx.h(), ctx.delta(), ctx.r_sigma());
        let x = ctx.x();
        let quad = ctx.quadrature().refined();
        let kinks = w.kinks();
        let (mut plain, mut weighted, mut inverse) = (0.0, 0.0, 0.0);
        let mut no_straddling = true;
        for nb in ctx.neighbors() {
            let cell = ctx.decomposition().cell(nb.index);
            let [a, b, c] = quad.integrate(x, PolarRegion::Polygon(cell), delta, h, &kinks, |s| {
                let t = s.point.dist(nb.site) / nb.dist;
                let wy = w.radial(s.r);
                [t, t * wy, t * wy / s.r]
            });
            plain += a;
            weighted += b;
            inverse += c;
            let (near, far) = (cell.distance_from(x), cell.max_distance_from(x));
            if near < h && far > h || near < delta && far > delta {
                no_straddling = false;
            }
        }
        let n = &tc.norms;
        let split = r / (lambda * h);
        Ok(Self {
            area_ratio: Inequality {
                lhs: plain,
                rhs: PI * r * h / lambda + PI * (lambda * h + r).powi(2),
            },
            riemann: Inequality {
                lhs: (ctx.sum_cell_w() - ctx.sum_vw()).abs(),
                rhs: PI * w.lipschitz() * r * h * h,
            },
            weighted_ratio: Inequality {
                lhs: weighted / ctx.sum_cell_w(),
                rhs: split + n.inner[m(0)] / n.out[m(0)],
            },
            inverse_ratio: Inequality {
                lhs: inverse,
                rhs: n.inner[m(-1)] + split * n.out[m(-1)],
            },
            no_straddling,
        })
    }
}

/// `2(m+1) dist^{m+1} |f|_{C^{m+1}}`
pub fn taylor_remainder_bound(m: u32, dist: f64, seminorm: f64) -> f64 {
    2.0 * (m + 1) as f64 * dist.powi(m as i32 + 1) * seminorm
}

/// `Σ_{α₁+α₂=m} 1/(α₁! α₂!)`
pub fn multinomial_sum(m: u32) -> f64 {
    let fact = |n: u32| (1..=n).map(f64::from).product::<f64>();
    (0..=m).map(|a| 1.0 / (fact(a) * fact(m - a))).sum()
}

/// `‖|·|ⁿ‖_{L¹(B_p \ B_q)} = 2π (p^{n+2} - q^{n+2}) / (n+2)` for the indicator weight.
pub fn indicator_norm(n: i32, p: f64, q: f64) -> f64 {
    2.0 * PI * (p.powi(n + 2) - q.powi(n + 2)) / (n + 2) as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorollaryScenario {
    pub r_sigma: f64,
    pub c_star: f64,
    pub lambda: f64,
    pub delta: f64,
    /// Replace σ_k-excluded norms by `B_δ`-excluded ones and the discrete moment
    /// ratio by its continuous counterpart.
    pub simplified: bool,
}

impl CorollaryScenario {
    pub fn new(r_sigma: f64, c_star: f64, lambda: f64) -> Result<Self> {
        if !(r_sigma > 0.0) || !(c_star > 1.0) || !(lambda > 0.0 && lambda < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "need r_σ > 0, C_* > 1, 0 < λ < 1 (got {r_sigma}, {c_star}, {lambda})"
            )));
        }
        Ok(Self {
            r_sigma,
            c_star,
            lambda,
            delta: r_sigma / 2.0,
            simplified: true,
        })
    }

    pub fn h(&self) -> f64 {
        self.c_star * self.r_sigma
    }

    /// The indicator-weight bounds written directly in `r_σ`, `C_*`, `λ`.
    pub fn general_forms(&self) -> [CoefficientPair; 4] {
        let (r, c, l) = (self.r_sigma, self.c_star, self.lambda);
        let c2 = c * c - 0.25;
        let c4 = c.powi(4) - 1.0 / 16.0;
        let lc1 = l * c + 1.0;
        let pi = (c + 1.0) * r;
        let pi0 = 1.5 / c2;
        let grad1 = 8.0 / (l * c) + (8.0 * lc1 * lc1 + 1.0) / c2;
        let lap1 = (8.0
            + 24.0 * lc1 * lc1
            + (56.0 * c.powi(3) - 7.0) / (3.0 * c4)
            + c * (64.0 * c.powi(3) - 8.0) / (c * c + 0.25)
            + (16.0 * c.powi(3) - 2.0) / (l * c))
            / (3.0 * r * c4);
        let box1 =
            (12.0 / (2.0 * c + 1.0) + 16.0 + 24.0 * l * c + (24.0 * c - 12.0) / (l * c)) / (r * c2);
        [
            CoefficientPair::new(Family::Interpolation, pi, pi0),
            CoefficientPair::new(Family::Gradient, 4.0 * c * r, grad1),
            CoefficientPair::new(Family::Laplacian, 24.0 * c * r, lap1),
            CoefficientPair::new(Family::AltLaplacian, 24.0 * c * r, box1),
        ]
    }

    /// Closed-form norms of the indicator weight. With `simplified`
    /// the σ_k pieces are bounded through `σ_k ⊂ B_{r_σ}(a_k)`, σ_k exclusions
    /// become `B_δ` exclusions, and discrete ratios their continuous limits.
    pub fn indicator_parts(&self) -> Result<(BoundInputs, NormSet, DiscreteSums)> {
        if !self.simplified {
            return Err(Error::InvalidParameter(
                "closed forms need the simplified norms; evaluate a geometric context instead"
                    .into(),
            ));
        }
        let (r, d, h, l) = (self.r_sigma, self.delta, self.h(), self.lambda);
        let p = l * h + r;
        let norm = |n: i32, a: f64, b: f64| indicator_norm(n, a, b);
        let sigma = std::array::from_fn(|i| norm(i as i32 - 1, r, d));
        let ring: [f64; 4] = std::array::from_fn(|i| norm(i as i32 - 1, h, d));
        let inner = std::array::from_fn(|i| norm(i as i32 - 1, p, d));
        let sums = DiscreteSums {
            s1: ring[m(1)],
            s2: ring[m(2)],
            inner_ratio: norm(-1, l * h, d) / ring[m(0)],
        };
        Ok((
            BoundInputs {
                h,
                r_sigma: r,
                delta: d,
                lambda: Some(l),
                lipschitz: 0.0,
            },
            NormSet {
                sigma,
                ring,
                out: ring,
                inner,
                inner_radius: p,
                inner_radius_raw: p,
            },
            sums,
        ))
    }

    /// The same bounds obtained by feeding the closed-form norms through `c₁ … c₁₂`.
    pub fn constants_route(&self) -> Result<[CoefficientPair; 4]> {
        let (inputs, norms, sums) = self.indicator_parts()?;
        let tc = TheoremConstants::from_parts(inputs, norms, sums)?;
        let mut out = self.general_forms();
        for (pair, t) in out.iter_mut().zip(TheoremId::ALL) {
            let k = tc.coefficients(t)?;
            let (hi, lo) = pair.orders;
            *pair = CoefficientPair::new(pair.family, k[hi], k[lo]);
        }
        Ok(out)
    }
}

/// `(first, second)` multiply `|f|_{C^{orders.0}}` and `|f|_{C^{orders.1}}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoefficientPair {
    pub family: Family,
    pub orders: (usize, usize),
    pub first: f64,
    pub second: f64,
}

impl CoefficientPair {
    pub fn new(family: Family, first: f64, second: f64) -> Self {
        let orders = match family {
            Family::Interpolation => (1, 0),
            Family::Gradient => (2, 1),
            Family::Laplacian | Family::AltLaplacian => (3, 1),
        };
        Self {
            family,
            orders,
            first,
            second,
        }
    }

    pub fn dominated_by(&self, other: &CoefficientPair, rel: f64) -> bool {
        self.first <= other.first * (1.0 + rel) && self.second <= other.second * (1.0 + rel)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CorollaryPreset {
    /// `r_σ = 10^{-5m}`, `C_* = 10^{4m}`, `λ = 10^{-2m}`
    I { m: u32 },
    /// `r_σ = 10^{-2}`, `C_* = 4`, `λ = 1/2`
    II,
}

impl CorollaryPreset {
    pub fn parse(name: &str, m: Option<u32>) -> Result<Self> {
        match name {
            "corollary71-i" | "i" => {
                let m = m.unwrap_or(1);
                if m == 0 {
                    return Err(Error::InvalidParameter("m must be at least 1".into()));
                }
                Ok(CorollaryPreset::I { m })
            }
            "corollary71-ii" | "ii" => Ok(CorollaryPreset::II),
            other => Err(Error::InvalidParameter(format!("unknown preset {other:?}"))),
        }
    }

    pub fn name(&self) -> String {
        match self {
            CorollaryPreset::I { m } => format!("corollary71-i (m = {m})"),
            CorollaryPreset::II => "corollary71-ii".into(),
        }
    }

    pub fn scenario(&self) -> CorollaryScenario {
        let (r, c, l) = match *self {
            CorollaryPreset::I { m } => {
                let m = m as i32;
                (10f64.powi(-5 * m), 10f64.powi(4 * m), 10f64.powi(-2 * m))
            }
            CorollaryPreset::II => (1e-2, 4.0, 0.5),
        };
        CorollaryScenario::new(r, c, l).expect("preset parameters are valid")
    }

    /// The coefficients as printed.
    pub fn printed(&self) -> [CoefficientPair; 4] {
        match *self {
            CorollaryPreset::I { m } => {
                let t = |e: i32| 10f64.powi(e);
                let m = m as i32;
                [
                    CoefficientPair::new(Family::Interpolation, t(-m) + t(-5 * m), t(-(8 * m - 1))),
                    CoefficientPair::new(Family::Gradient, 4.0 * t(-m), t(-(2 * m - 1))),
                    CoefficientPair::new(Family::Laplacian, 24.0 * t(-m), t(-(m - 1))),
                    CoefficientPair::new(Family::AltLaplacian, 24.0 * t(-m), 5.0 * t(-(m - 1))),
                ]
            }
            CorollaryPreset::II => [
                CoefficientPair::new(Family::Interpolation, 1.0 / 20.0, 1.0 / 10.0),
                CoefficientPair::new(Family::Gradient, 4.0 / 25.0, 10.0),
                CoefficientPair::new(Family::Laplacian, 24.0 / 25.0, 300.0),
                CoefficientPair::new(Family::AltLaplacian, 24.0 / 25.0, 700.0),
            ],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorollaryReport {
    pub preset: Option<String>,
    pub scenario: CorollaryScenario,
    pub general: [CoefficientPair; 4],
    pub via_constants: [CoefficientPair; 4],
    pub printed: Option<[CoefficientPair; 4]>,
    pub assumptions: Vec<String>,
}

impl CorollaryReport {
    /// General forms never exceed the printed numbers.
    pub fn printed_dominates(&self) -> Option<bool> {
        self.printed.map(|p| {
            self.general
                .iter()
                .zip(&p)
                .all(|(g, q)| g.dominated_by(q, 1e-12))
        })
    }
}

pub fn corollary71(scenario: CorollaryScenario) -> Result<CorollaryReport> {
    let via_constants = scenario.constants_route()?;
    Ok(CorollaryReport {
        preset: None,
        scenario,
        general: scenario.general_forms(),
        via_constants,
        printed: None,
        assumptions: vec![
            "w is the indicator of the closed annulus, so L_w = 0".into(),
            "δ = r_σ/2 and h = C_* r_σ".into(),
            "norms over B_h(a_k) \\ σ_k taken equal to those over B_h(a_k) \\ B_δ(a_k)".into(),
            "Σ V|a_k - a_i|w / Σ V|a_k - a_i|²w taken equal to the continuous moment ratio".into(),
            "norms over σ_k \\ B_δ(a_k) bounded by those over B_{r_σ}(a_k) \\ B_δ(a_k)".into(),
        ],
    })
}

pub fn corollary71_preset(preset: CorollaryPreset) -> Result<CorollaryReport> {
    let mut rep = corollary71(preset.scenario())?;
    rep.preset = Some(preset.name());
    rep.printed = Some(preset.printed());
    Ok(rep)
}
