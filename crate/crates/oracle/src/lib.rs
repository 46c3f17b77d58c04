//! Brute-force integrators for checking the production quadrature.
//!
//! Nothing here shares code with `mps-core`. Regions are plain membership
//! predicates over a bounding box, so the estimates depend only on sampling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Pt = [f64; 2];

/// Axis-aligned box `[min, max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundingBox {
    pub min: Pt,
    pub max: Pt,
}

impl BoundingBox {
    pub fn new(min: Pt, max: Pt) -> Self {
        assert!(min[0] < max[0] && min[1] < max[1], "empty bounding box");
        Self { min, max }
    }

    pub fn around_disk(center: Pt, radius: f64) -> Self {
        Self::new(
            [center[0] - radius, center[1] - radius],
            [center[0] + radius, center[1] + radius],
        )
    }

    pub fn around_points(points: &[Pt]) -> Self {
        let mut min = [f64::INFINITY; 2];
        let mut max = [f64::NEG_INFINITY; 2];
        for p in points {
            for a in 0..2 {
                min[a] = min[a].min(p[a]);
                max[a] = max[a].max(p[a]);
            }
        }
        Self::new(min, max)
    }

    pub fn intersect(&self, other: &Self) -> Option<Self> {
        let min = [self.min[0].max(other.min[0]), self.min[1].max(other.min[1])];
        let max = [self.max[0].min(other.max[0]), self.max[1].min(other.max[1])];
        (min[0] < max[0] && min[1] < max[1]).then_some(Self { min, max })
    }

    pub fn area(&self) -> f64 {
        (self.max[0] - self.min[0]) * (self.max[1] - self.min[1])
    }
}

/// Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleEstimate {
    pub value: f64,
    pub std_error: f64,
    pub samples: usize,
    pub seed: u64,
}

impl OracleEstimate {
    /// True when `x` lies within `k` standard errors (plus `floor`) of the estimate.
    pub fn agrees_with(&self, x: f64, k: f64, floor: f64) -> bool {
        (x - self.value).abs() <= k * self.std_error + floor
    }
}

/// Midpoint-rule estimate; `error_bound` is `|I_n - I_{n/2}|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridEstimate {
    pub value: f64,
    pub error_bound: f64,
    pub cells_per_axis: usize,
}

/// Uniform Monte Carlo over `bbox`, integrating `integrand` times the indicator of `region`.
pub fn mc_region_integral<R, F>(
    region: R,
    bbox: BoundingBox,
    integrand: F,
    samples: usize,
    seed: u64,
) -> OracleEstimate
where
    R: Fn(Pt) -> bool,
    F: Fn(Pt) -> f64,
{
    assert!(samples >= 2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (w, hgt) = (bbox.max[0] - bbox.min[0], bbox.max[1] - bbox.min[1]);
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for n in 1..=samples {
        let u: f64 = rng.random();
        let v: f64 = rng.random();
        let p = [bbox.min[0] + u * w, bbox.min[1] + v * hgt];
        let s = if region(p) { integrand(p) } else { 0.0 };
        let d = s - mean;
        mean += d / n as f64;
        m2 += d * (s - mean);
    }
    let var = m2 / (samples as f64 - 1.0);
    let area = bbox.area();
    OracleEstimate {
        value: mean * area,
        std_error: (var / samples as f64).sqrt() * area,
        samples,
        seed,
    }
}

fn midpoint_sum<R, F>(region: &R, bbox: BoundingBox, integrand: &F, n: usize) -> f64
where
    R: Fn(Pt) -> bool,
    F: Fn(Pt) -> f64,
{
    let dx = (bbox.max[0] - bbox.min[0]) / n as f64;
    let dy = (bbox.max[1] - bbox.min[1]) / n as f64;
    let mut total = 0.0;
    for i in 0..n {
        let x = bbox.min[0] + (i as f64 + 0.5) * dx;
        let mut row = 0.0;
        for j in 0..n {
            let p = [x, bbox.min[1] + (j as f64 + 0.5) * dy];
            if region(p) {
                row += integrand(p);
            }
        }
        total += row;
    }
    total * dx * dy
}

/// Tensor midpoint rule on an `n x n` grid over `bbox`.
pub fn grid_integral<R, F>(region: R, bbox: BoundingBox, integrand: F, n: usize) -> GridEstimate
where
    R: Fn(Pt) -> bool,
    F: Fn(Pt) -> f64,
{
    assert!(
        n >= 4 && n.is_multiple_of(2),
        "grid size must be even and at least 4"
    );
    let fine = midpoint_sum(&region, bbox, &integrand, n);
    let coarse = midpoint_sum(&region, bbox, &integrand, n / 2);
    GridEstimate {
        value: fine,
        error_bound: (fine - coarse).abs(),
        cells_per_axis: n,
    }
}

/// Closed convex polygon membership; vertices in either orientation.
pub fn in_convex_polygon(vertices: &[Pt], p: Pt) -> bool {
    let n = vertices.len();
    let mut sign = 0.0f64;
    for i in 0..n {
        let a = vertices[i];
        let b = vertices[(i + 1) % n];
        let c = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
        if c != 0.0 {
            if sign == 0.0 {
                sign = c.signum();
            } else if c.signum() != sign {
                return false;
            }
        }
    }
    true
}

/// Closed annulus `inner <= |p - center| <= outer`.
pub fn in_annulus(center: Pt, inner: f64, outer: f64, p: Pt) -> bool {
    let r = ((p[0] - center[0]).powi(2) + (p[1] - center[1]).powi(2)).sqrt();
    r >= inner && r <= outer
}

/// Shoelace area, absolute value.
pub fn shoelace_area(vertices: &[Pt]) -> f64 {
    let n = vertices.len();
    let mut s = 0.0;
    for i in 0..n {
        let a = vertices[i];
        let b = vertices[(i + 1) % n];
        s += a[0] * b[1] - a[1] * b[0];
    }
    0.5 * s.abs()
}

/// Index of the nearest point (ties go to the lower index).
pub fn nearest_index(points: &[Pt], p: Pt) -> usize {
    let mut best = 0;
    let mut bd = f64::INFINITY;
    for (i, q) in points.iter().enumerate() {
        let d = (q[0] - p[0]).powi(2) + (q[1] - p[1]).powi(2);
        if d < bd {
            bd = d;
            best = i;
        }
    }
    best
}
