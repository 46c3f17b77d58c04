//! Radial weight functions supported on the closed annulus `δ <= |z| <= h`,
//! their moments, annular norms, and the positivity constant.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{polygon_disk_area, ConvexPolygon, Point2, VoronoiDecomposition};
use crate::quadrature::{integrate_adaptive, PolarQuadrature, PolarRegion};

/// Shape of `ŵ` on `[δ, h]`.
#[derive(Clone)]
pub enum RadialProfile {
    Constant(f64),
    /// `(h - r) / (h - δ)`
    LinearTaper,
    /// Piecewise linear through `(r[i], w[i])`, absolute radii, constant beyond the ends.
    Table {
        r: Vec<f64>,
        w: Vec<f64>,
    },
    Function(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for RadialProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant(c) => write!(f, "Constant({c})"),
            Self::LinearTaper => f.write_str("LinearTaper"),
            Self::Table { r, w } => f.debug_struct("Table").field("r", r).field("w", w).finish(),
            Self::Function(_) => f.write_str("Function(..)"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct WeightFunction {
    name: String,
    profile: RadialProfile,
    delta: f64,
    h: f64,
    lipschitz: f64,
    lipschitz_estimated: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialMoment {
    pub n: i32,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnnularNorm {
    pub value: f64,
    /// Set when the requested outer radius exceeded `h` and was clamped.
    pub clamped: bool,
}

/// Region removed from `B_p(center)` in [`WeightFunction::annular_l1_norm`].
#[derive(Debug, Clone, Copy)]
pub enum Exclusion<'a> {
    Ball(f64),
    Polygon(&'a ConvexPolygon),
}

fn check_radii(delta: f64, h: f64) -> Result<()> {
    if !(delta > 0.0 && h > delta && h.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "weight support needs 0 < delta < h, got delta = {delta}, h = {h}"
        )));
    }
    Ok(())
}

fn interp(r: &[f64], w: &[f64], x: f64) -> f64 {
    if x <= r[0] {
        return w[0];
    }
    let n = r.len();
    if x >= r[n - 1] {
        return w[n - 1];
    }
    let j = r.partition_point(|&q| q <= x);
    let (r0, r1) = (r[j - 1], r[j]);
    w[j - 1] + (w[j] - w[j - 1]) * (x - r0) / (r1 - r0)
}

/// `ŵ ≡ 1` on the closed annulus, `L_w = 0`.
pub fn indicator_weight(delta: f64, h: f64) -> Result<WeightFunction> {
    check_radii(delta, h)?;
    Ok(WeightFunction {
        name: "indicator".into(),
        profile: RadialProfile::Constant(1.0),
        delta,
        h,
        lipschitz: 0.0,
        lipschitz_estimated: false,
    })
}

/// `ŵ(r) = (h - r) / (h - δ)`, `L_w = 1 / (h - δ)`.
pub fn linear_taper_weight(delta: f64, h: f64) -> Result<WeightFunction> {
    check_radii(delta, h)?;
    Ok(WeightFunction {
        name: "linear_taper".into(),
        profile: RadialProfile::LinearTaper,
        delta,
        h,
        lipschitz: 1.0 / (h - delta),
        lipschitz_estimated: false,
    })
}

const SCAN_POINTS: usize = 10_000;

/// Builds a weight from an arbitrary profile. `lipschitz` overrides the
/// estimate (largest grid slope inflated by 5%).
pub fn custom_radial_weight(
    name: &str,
    profile: RadialProfile,
    delta: f64,
    h: f64,
    lipschitz: Option<f64>,
) -> Result<WeightFunction> {
    check_radii(delta, h)?;
    if let RadialProfile::Table { r, w } = &profile {
        if r.len() < 2 || r.len() != w.len() {
            return Err(Error::InvalidParameter(format!(
                "radial table needs matching r and w with at least 2 entries (got {} and {})",
                r.len(),
                w.len()
            )));
        }
        if r.windows(2).any(|p| p[1] <= p[0]) {
            return Err(Error::InvalidParameter(
                "radial table r must be strictly increasing".into(),
            ));
        }
    }
    let mut wf = WeightFunction {
        name: name.to_string(),
        profile,
        delta,
        h,
        lipschitz: 0.0,
        lipschitz_estimated: lipschitz.is_none(),
    };
    let mut grid: Vec<f64> = (0..=SCAN_POINTS)
        .map(|i| delta + (h - delta) * i as f64 / SCAN_POINTS as f64)
        .collect();
    if let RadialProfile::Table { r, .. } = &wf.profile {
        grid.extend(r.iter().copied().filter(|&q| q > delta && q < h));
        grid.sort_by(f64::total_cmp);
    }
    let values: Vec<f64> = grid.iter().map(|&r| wf.profile_value(r)).collect();
    for (&r, &v) in grid.iter().zip(&values) {
        if !v.is_finite() {
            return Err(Error::InvalidWeight {
                radius: r,
                reason: format!("non-finite value {v}"),
            });
        }
        if v < 0.0 {
            return Err(Error::InvalidWeight {
                radius: r,
                reason: format!("negative value {v}"),
            });
        }
    }
    wf.lipschitz = match lipschitz {
        Some(l) if l >= 0.0 && l.is_finite() => l,
        Some(l) => {
            return Err(Error::InvalidParameter(format!(
                "Lipschitz constant must be finite and nonnegative, got {l}"
            )))
        }
        None => {
            if let RadialProfile::Table { r, w } = &wf.profile {
                // piecewise linear: the steepest segment touching [δ, h] is exact
                r.windows(2)
                    .zip(w.windows(2))
                    .filter(|(rr, _)| rr[1] > delta && rr[0] < h)
                    .map(|(rr, ww)| ((ww[1] - ww[0]) / (rr[1] - rr[0])).abs())
                    .fold(0.0, f64::max)
            } else {
                let scan = grid
                    .windows(2)
                    .zip(values.windows(2))
                    .filter(|(r, _)| r[1] > r[0])
                    .map(|(r, v)| ((v[1] - v[0]) / (r[1] - r[0])).abs())
                    .fold(0.0, f64::max);
                1.05 * scan
            }
        }
    };
    Ok(wf)
}

impl WeightFunction {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn profile(&self) -> &RadialProfile {
        &self.profile
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    pub fn lipschitz_is_estimate(&self) -> bool {
        self.lipschitz_estimated
    }

    pub fn is_constant(&self) -> bool {
        matches!(self.profile, RadialProfile::Constant(_))
    }

    fn profile_value(&self, r: f64) -> f64 {
        match &self.profile {
            RadialProfile::Constant(c) => *c,
            RadialProfile::LinearTaper => (self.h - r) / (self.h - self.delta),
            RadialProfile::Table { r: rs, w } => interp(rs, w, r),
            RadialProfile::Function(f) => f(r),
        }
    }

    /// `ŵ(r)` on the closed annulus, zero elsewhere.
    pub fn radial(&self, r: f64) -> f64 {
        if r < self.delta || r > self.h {
            0.0
        } else {
            self.profile_value(r)
        }
    }

    /// `w(z) = ŵ(|z|)`.
    pub fn eval(&self, z: Point2) -> f64 {
        self.radial(z.norm())
    }

    /// Radii in `(δ, h)` where the profile may have a kink.
    pub fn kinks(&self) -> Vec<f64> {
        match &self.profile {
            RadialProfile::Table { r, .. } => r
                .iter()
                .copied()
                .filter(|&q| q > self.delta && q < self.h)
                .collect(),
            _ => Vec::new(),
        }
    }

    /// `2π ∫_a^b r^{n+1} ŵ(r) dr` with `[a, b]` clipped to `[δ, h]`.
    pub fn radial_integral(&self, n: i32, a: f64, b: f64) -> f64 {
        let a = a.max(self.delta);
        let b = b.min(self.h);
        if b <= a {
            return 0.0;
        }
        let prim_pow = |k: i32, r: f64| {
            // antiderivative of r^k
            if k == -1 {
                r.ln()
            } else {
                r.powi(k + 1) / (k + 1) as f64
            }
        };
        let between = |k: i32| {
            if k == -1 {
                (b / a).ln()
            } else {
                prim_pow(k, b) - prim_pow(k, a)
            }
        };
        match &self.profile {
            RadialProfile::Constant(c) => 2.0 * PI * c * between(n + 1),
            RadialProfile::LinearTaper => {
                2.0 * PI * (self.h * between(n + 1) - between(n + 2)) / (self.h - self.delta)
            }
            _ => {
                let mut pts = vec![a];
                pts.extend(self.kinks().into_iter().filter(|&q| q > a && q < b));
                pts.push(b);
                let f = |r: f64| r.powi(n + 1) * self.profile_value(r);
                let scale = pts
                    .windows(2)
                    .map(|p| (p[1] - p[0]) * f(0.5 * (p[0] + p[1])).abs())
                    .sum::<f64>()
                    .max(f64::MIN_POSITIVE);
                let mut s = 0.0;
                for p in pts.windows(2) {
                    s += integrate_adaptive(f, p[0], p[1], 1e-13 * scale)
                        .expect("bounded integrand on a finite interval");
                }
                2.0 * PI * s
            }
        }
    }

    /// `‖|·|ⁿ w‖_{L¹(B_{h,δ})} = 2π ∫_δ^h r^{n+1} ŵ(r) dr`.
    pub fn radial_moment(&self, n: i32) -> RadialMoment {
        RadialMoment {
            n,
            value: self.radial_integral(n, self.delta, self.h),
        }
    }

    /// `‖w‖_{L¹}`.
    pub fn l1_norm(&self) -> f64 {
        self.radial_moment(0).value
    }

    /// `∫_{poly ∩ B_{outer,δ}(center)} |center - y|ⁿ w(center - y) dy` for `n = -1, 0, 1, 2`.
    pub fn polygon_moments(
        &self,
        quad: &PolarQuadrature,
        center: Point2,
        poly: &ConvexPolygon,
        outer: f64,
    ) -> [f64; 4] {
        let outer = outer.min(self.h);
        if outer <= self.delta {
            return [0.0; 4];
        }
        let kinks = self.kinks();
        quad.integrate(
            center,
            PolarRegion::Polygon(poly),
            self.delta,
            outer,
            &kinks,
            |s| {
                let w = self.profile_value(s.r);
                [w / s.r, w, w * s.r, w * s.r * s.r]
            },
        )
    }

    /// `‖|center - ·|ⁿ w(center - ·)‖_{L¹(B_p(center) \ excluded)}`.
    pub fn annular_l1_norm(
        &self,
        quad: &PolarQuadrature,
        center: Point2,
        exclusion: Exclusion<'_>,
        p: f64,
        n: i32,
    ) -> AnnularNorm {
        let clamped = p > self.h;
        let p = p.min(self.h);
        let value = match exclusion {
            Exclusion::Ball(q) => self.radial_integral(n, q, p),
            Exclusion::Polygon(poly) => {
                assert!(
                    (-1..=2).contains(&n),
                    "polygon exclusions support n in -1..=2"
                );
                let m = self.polygon_moments(quad, center, poly, p);
                (self.radial_integral(n, self.delta, p) - m[(n + 1) as usize]).max(0.0)
            }
        };
        AnnularNorm { value, clamped }
    }

    /// `∫_{cell} w(x - y) dy`, exact for constant profiles.
    pub fn cell_integral(&self, quad: &PolarQuadrature, x: Point2, cell: &ConvexPolygon) -> f64 {
        match self.profile {
            RadialProfile::Constant(c) => c * cell_annulus_area(cell, x, self.delta, self.h),
            _ => {
                let kinks = self.kinks();
                let [v] = quad.integrate(
                    x,
                    PolarRegion::Polygon(cell),
                    self.delta,
                    self.h,
                    &kinks,
                    |s| [self.profile_value(s.r)],
                );
                v
            }
        }
    }
}

/// `area(cell ∩ B_{outer,inner}(x))`.
pub fn cell_annulus_area(cell: &ConvexPolygon, x: Point2, inner: f64, outer: f64) -> f64 {
    (polygon_disk_area(cell, x, outer) - polygon_disk_area(cell, x, inner)).max(0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PositivityConstant {
    pub c0: f64,
    /// Smallest `Σ_{i∈R(x,h)} ∫_{σ_i} w(x - y) dy` over the samples.
    pub min_integral_sum: f64,
    /// Smallest `Σ_{j∈R(x,h)} V_j(x) w(x - a_j)` over the samples.
    pub min_discrete_sum: f64,
    pub witness: Point2,
    pub samples: usize,
}

/// `n` deterministic points filling `B_δ(a)`, starting with `a` itself.
pub fn sunflower_samples(a: Point2, delta: f64, n: usize) -> Vec<Point2> {
    let golden = PI * (3.0 - 5f64.sqrt());
    let mut out = vec![a];
    for i in 1..n {
        let r = 0.999 * delta * ((i as f64) / n as f64).sqrt();
        out.push(a + Point2::from_polar(r, i as f64 * golden));
    }
    out
}

/// Evaluates both positivity sums at each sample and returns their minimum.
pub fn check_positivity_c0(
    w: &WeightFunction,
    decomp: &VoronoiDecomposition,
    k: usize,
    samples: &[Point2],
    quad: &PolarQuadrature,
) -> Result<PositivityConstant> {
    let (delta, h) = (w.delta(), w.h());
    let mut best = PositivityConstant {
        c0: f64::INFINITY,
        min_integral_sum: f64::INFINITY,
        min_discrete_sum: f64::INFINITY,
        witness: decomp.site(k),
        samples: samples.len(),
    };
    for &x in samples {
        let sets = decomp.neighbor_sets(k, x, h);
        let mut integral = 0.0;
        let mut discrete = 0.0;
        for &j in &sets.open {
            let cell = decomp.cell(j);
            integral += w.cell_integral(quad, x, cell);
            discrete += cell_annulus_area(cell, x, delta, h) * w.eval(x - decomp.site(j));
        }
        best.min_integral_sum = best.min_integral_sum.min(integral);
        best.min_discrete_sum = best.min_discrete_sum.min(discrete);
        let m = integral.min(discrete);
        if m < best.c0 {
            best.c0 = m;
            best.witness = x;
        }
    }
    if !(best.c0 > 0.0) {
        return Err(Error::AssumptionViolation {
            clause: "positivity of the weighted neighbour sums".into(),
            detail: format!(
                "minimum sum {} at x = {} (integral form {}, discrete form {})",
                best.c0, best.witness, best.min_integral_sum, best.min_discrete_sum
            ),
            witness: Some(best.witness),
        });
    }
    Ok(best)
}
