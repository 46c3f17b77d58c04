//! Gauss–Legendre rules, adaptive Gauss–Kronrod in one dimension, and a
//! polar rule over `region ∩ {r0 <= |y - c| <= r1}` that treats convex
//! polygons exactly ray by ray.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{ConvexPolygon, Point2};

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

const GK_X: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK_WK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728,
];
const GK_WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let hl = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * GK_WK[7];
    let mut g = fc * GK_WG[3];
    for j in 0..7 {
        let d = hl * GK_X[j];
        let s = f(c - d) + f(c + d);
        k += GK_WK[j] * s;
        if j % 2 == 1 {
            g += GK_WG[j / 2] * s;
        }
    }
    (k * hl, ((k - g) * hl).abs())
}

/// Adaptive G7–K15 with bisection until the summed error estimate is below `abs_tol`.
pub fn integrate_adaptive<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let mut stack = vec![(a, b, 0u32)];
    let mut total = 0.0;
    let width = (b - a).abs();
    while let Some((lo, hi, depth)) = stack.pop() {
        let (v, e) = gk15(&mut f, lo, hi);
        let share = abs_tol * (hi - lo).abs() / width;
        if e <= share.max(1e-15 * v.abs()) {
            total += v;
        } else if depth >= 40 {
            return Err(Error::Quadrature {
                what: format!("1-D integral on [{lo}, {hi}]"),
                coarse: v,
                fine: v + e,
            });
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((mid, hi, depth + 1));
            stack.push((lo, mid, depth + 1));
        }
    }
    Ok(total)
}

/// Integration region for the polar rule; always intersected with an annulus about the centre.
#[derive(Debug, Clone, Copy)]
pub enum PolarRegion<'a> {
    Annulus,
    Polygon(&'a ConvexPolygon),
}

/// Data passed to integrands: the point, its distance from the centre,
/// and the unit vector `(y - c) / r`.
#[derive(Debug, Clone, Copy)]
pub struct PolarSample {
    pub point: Point2,
    pub r: f64,
    pub dir: Point2,
}

/// Composite tensor Gauss–Legendre rule in `(r, θ)`.
#[derive(Debug, Clone)]
pub struct PolarQuadrature {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    max_panel: f64,
    radial_ratio: f64,
}

impl Default for PolarQuadrature {
    fn default() -> Self {
        Self::new(12, PI / 16.0, 2.0)
    }
}

impl PolarQuadrature {
    pub fn new(order: usize, max_panel: f64, radial_ratio: f64) -> Self {
        assert!(max_panel > 0.0 && radial_ratio > 1.0);
        let (nodes, weights) = gauss_legendre(order);
        Self {
            nodes,
            weights,
            max_panel,
            radial_ratio,
        }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Same order with angular panels halved and radial panels split in two.
    pub fn refined(&self) -> Self {
        Self::new(self.order(), self.max_panel / 2.0, self.radial_ratio.sqrt())
    }

    /// `∫ f(y) dy` over `region ∩ {r0 <= |y - c| <= r1}`.
    pub fn integrate<const M: usize, F>(
        &self,
        center: Point2,
        region: PolarRegion<'_>,
        r0: f64,
        r1: f64,
        radial_breaks: &[f64],
        mut f: F,
    ) -> [f64; M]
    where
        F: FnMut(&PolarSample) -> [f64; M],
    {
        let mut acc = [0.0; M];
        if r1 <= r0 {
            return acc;
        }
        let breaks = match region {
            PolarRegion::Annulus => vec![0.0, 2.0 * PI],
            PolarRegion::Polygon(poly) => match polygon_angles(poly, center, r0, r1) {
                Some(b) => b,
                None => return acc,
            },
        };
        let mut rs = Vec::with_capacity(8);
        for win in breaks.windows(2) {
            let (a, b) = (win[0], win[1]);
            if b - a <= 1e-15 {
                continue;
            }
            let panels = ((b - a) / self.max_panel).ceil().max(1.0) as usize;
            let dp = (b - a) / panels as f64;
            for p in 0..panels {
                let lo_t = a + p as f64 * dp;
                for (xt, wt) in self.nodes.iter().zip(&self.weights) {
                    let theta = lo_t + 0.5 * dp * (xt + 1.0);
                    let wth = 0.5 * dp * wt;
                    let dir = Point2::new(theta.cos(), theta.sin());
                    let (lo, hi) = match region {
                        PolarRegion::Annulus => (r0, r1),
                        PolarRegion::Polygon(poly) => match ray_interval(poly, center, dir) {
                            Some((t0, t1)) => (t0.max(r0), t1.min(r1)),
                            None => continue,
                        },
                    };
                    if hi <= lo {
                        continue;
                    }
                    rs.clear();
                    rs.push(lo);
                    rs.extend(radial_breaks.iter().copied().filter(|&q| q > lo && q < hi));
                    rs.push(hi);
                    for seg in rs.windows(2) {
                        let (mut ra, rb) = (seg[0], seg[1]);
                        while ra < rb {
                            let next = if ra > 0.0 {
                                (ra * self.radial_ratio).min(rb)
                            } else {
                                rb
                            };
                            let next = if rb - next < 1e-14 * rb { rb } else { next };
                            let half = 0.5 * (next - ra);
                            for (xr, wr) in self.nodes.iter().zip(&self.weights) {
                                let r = ra + half * (xr + 1.0);
                                let s = PolarSample {
                                    point: center + dir * r,
                                    r,
                                    dir,
                                };
                                let v = f(&s);
                                let jac = wth * half * wr * r;
                                for m in 0..M {
                                    acc[m] += jac * v[m];
                                }
                            }
                            ra = next;
                        }
                    }
                }
            }
        }
        acc
    }

    /// Integrates with this rule and its refinement; errors unless they agree.
    #[allow(clippy::too_many_arguments)]
    pub fn integrate_checked<const M: usize, F>(
        &self,
        what: &str,
        center: Point2,
        region: PolarRegion<'_>,
        r0: f64,
        r1: f64,
        radial_breaks: &[f64],
        rel_tol: f64,
        abs_floor: f64,
        mut f: F,
    ) -> Result<[f64; M]>
    where
        F: FnMut(&PolarSample) -> [f64; M],
    {
        let coarse = self.integrate(center, region, r0, r1, radial_breaks, &mut f);
        let fine = self
            .refined()
            .integrate(center, region, r0, r1, radial_breaks, &mut f);
        for m in 0..M {
            if (coarse[m] - fine[m]).abs() > rel_tol * fine[m].abs() + abs_floor {
                return Err(Error::Quadrature {
                    what: format!("{what} (component {m})"),
                    coarse: coarse[m],
                    fine: fine[m],
                });
            }
        }
        Ok(fine)
    }
}

/// Parameter interval `[t_in, t_out]` with `t >= 0` where `c + t e` lies in the polygon.
fn ray_interval(poly: &ConvexPolygon, c: Point2, e: Point2) -> Option<(f64, f64)> {
    let mut t0 = 0.0f64;
    let mut t1 = f64::INFINITY;
    for (a, b) in poly.edges() {
        let ed = b - a;
        let p = ed.cross(c - a);
        let q = ed.cross(e);
        if q > 0.0 {
            t0 = t0.max(-p / q);
        } else if q < 0.0 {
            t1 = t1.min(-p / q);
        } else if p < 0.0 {
            return None;
        }
    }
    (t1 > t0).then_some((t0, t1))
}

/// Sorted angular breakpoints covering the polygon as seen from `c`, or
/// `None` when the polygon misses the annulus entirely.
fn polygon_angles(poly: &ConvexPolygon, c: Point2, r0: f64, r1: f64) -> Option<Vec<f64>> {
    if poly.distance_from(c) >= r1 || (r0 > 0.0 && poly.max_distance_from(c) <= r0) {
        return None;
    }
    let inside = poly.contains_strict(c);
    let reference = if inside {
        0.0
    } else {
        (poly.centroid() - c).angle()
    };
    let wrap = |t: f64| {
        let mut d = t - reference;
        while d < -PI {
            d += 2.0 * PI;
        }
        while d >= PI {
            d -= 2.0 * PI;
        }
        reference + d
    };
    let mut angles: Vec<f64> = poly
        .vertices()
        .iter()
        .map(|&v| wrap((v - c).angle()))
        .collect();
    let (lo, hi) = if inside {
        (reference - PI, reference + PI)
    } else {
        let lo = angles.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = angles.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    };
    for rho in [r0, r1] {
        if rho <= 0.0 {
            continue;
        }
        for (a, b) in poly.edges() {
            let (a, d) = (a - c, b - a);
            let qa = d.norm_sq();
            let qb = a.dot(d);
            let disc = qb * qb - qa * (a.norm_sq() - rho * rho);
            if disc <= 0.0 {
                continue;
            }
            let s = disc.sqrt();
            for t in [(-qb - s) / qa, (-qb + s) / qa] {
                if t > 0.0 && t < 1.0 {
                    angles.push(wrap((a + d * t).angle()));
                }
            }
        }
    }
    angles.push(lo);
    angles.push(hi);
    angles.retain(|&t| t >= lo && t <= hi);
    angles.sort_by(f64::total_cmp);
    angles.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    Some(angles)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::polygon_disk_area;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        for n in [1, 2, 5, 12, 24] {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13);
            let deg = 2 * n - 1;
            let exact = if deg % 2 == 0 {
                2.0 / (deg + 1) as f64
            } else {
                0.0
            };
            let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
            assert!((q - exact).abs() < 1e-13, "n = {n}");
            let even = 2 * (n - 1);
            let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(even as i32)).sum();
            assert!((q - 2.0 / (even + 1) as f64).abs() < 1e-13, "n = {n}");
        }
    }

    #[test]
    fn adaptive_handles_peaks() {
        let v = integrate_adaptive(|x: f64| 1.0 / (1e-4 + x * x), -1.0, 1.0, 1e-12).unwrap();
        let exact = 2.0 * (1.0 / 1e-2) * (1.0f64 / 1e-2).atan();
        assert!((v - exact).abs() < 1e-9);
        assert_eq!(integrate_adaptive(|x| x, 1.0, 1.0, 1e-12).unwrap(), 0.0);
        let v = integrate_adaptive(|x: f64| x.ln(), 1.0, 2.0, 1e-12).unwrap();
        assert!((v - (2.0 * 2f64.ln() - 1.0)).abs() < 1e-13);
    }

    #[test]
    fn annulus_area_and_moment() {
        let q = PolarQuadrature::default();
        let c = Point2::new(0.3, -0.2);
        let [a, m] = q.integrate(c, PolarRegion::Annulus, 0.25, 2.0, &[], |s| {
            [1.0, s.r * s.r]
        });
        assert!((a - PI * (4.0 - 0.0625)).abs() < 1e-12);
        assert!((m - 0.5 * PI * (16.0 - 0.25f64.powi(4))).abs() < 1e-11);
    }

    fn square(c: Point2, s: f64) -> ConvexPolygon {
        ConvexPolygon::new(vec![
            c + Point2::new(-s, -s),
            c + Point2::new(s, -s),
            c + Point2::new(s, s),
            c + Point2::new(-s, s),
        ])
        .unwrap()
    }

    #[test]
    fn polygon_annulus_area_matches_exact_clipping() {
        let q = PolarQuadrature::default();
        let cases = [
            (Point2::ORIGIN, 0.5, 0.2, 0.6),
            (Point2::new(0.4, 0.1), 0.3, 0.1, 0.5),
            (Point2::new(1.5, 0.2), 0.5, 0.5, 1.7),
            (Point2::new(3.0, 3.0), 0.5, 0.1, 0.9),
        ];
        for (pc, s, r0, r1) in cases {
            let poly = square(pc, s);
            let [a] = q.integrate(
                Point2::ORIGIN,
                PolarRegion::Polygon(&poly),
                r0,
                r1,
                &[],
                |_| [1.0],
            );
            let exact = polygon_disk_area(&poly, Point2::ORIGIN, r1)
                - polygon_disk_area(&poly, Point2::ORIGIN, r0);
            assert!((a - exact).abs() < 1e-12, "{pc} {a} {exact}");
        }
    }

    #[test]
    fn refinement_agrees_on_singular_kernel() {
        let q = PolarQuadrature::default();
        let poly = square(Point2::new(0.35, 0.1), 0.2);
        let v = q
            .integrate_checked(
                "test",
                Point2::ORIGIN,
                PolarRegion::Polygon(&poly),
                0.05,
                0.6,
                &[0.3],
                1e-10,
                0.0,
                |s| [1.0 / (s.r * s.r), s.point.x1.sin()],
            )
            .unwrap();
        assert!(v[0] > 0.0 && v[1] > 0.0);
    }
}
