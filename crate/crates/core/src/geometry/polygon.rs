use std::f64::consts::PI;

use super::Point2;
use crate::error::{Error, Result};

/// Convex polygon with counter-clockwise vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexPolygon {
    vertices: Vec<Point2>,
}

impl ConvexPolygon {
    /// Validates convexity and normalises orientation to counter-clockwise.
    pub fn new(vertices: Vec<Point2>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::InvalidPolygon(format!(
                "need at least 3 vertices, got {}",
                vertices.len()
            )));
        }
        if let Some(p) = vertices.iter().find(|p| !p.is_finite()) {
            return Err(Error::InvalidPolygon(format!("non-finite vertex {p}")));
        }
        let n = vertices.len();
        for i in 0..n {
            for j in i + 1..n {
                if vertices[i] == vertices[j] {
                    return Err(Error::InvalidPolygon(format!(
                        "repeated vertex {} at positions {i} and {j}",
                        vertices[i]
                    )));
                }
            }
        }
        let mut poly = Self { vertices };
        let a = poly.signed_area();
        if a == 0.0 {
            return Err(Error::InvalidPolygon("zero area".into()));
        }
        if a < 0.0 {
            poly.vertices.reverse();
        }
        let scale = poly.diameter_bound();
        let tol = 1e-12 * scale * scale;
        for i in 0..n {
            let a = poly.vertices[i];
            let b = poly.vertices[(i + 1) % n];
            let c = poly.vertices[(i + 2) % n];
            if (b - a).cross(c - b) < -tol {
                return Err(Error::InvalidPolygon(format!("reflex vertex at {b}")));
            }
        }
        Ok(poly)
    }

    pub(crate) fn from_vertices_unchecked(vertices: Vec<Point2>) -> Self {
        Self { vertices }
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point2, Point2)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    fn signed_area(&self) -> f64 {
        0.5 * self.edges().map(|(a, b)| a.cross(b)).sum::<f64>()
    }

    pub fn area(&self) -> f64 {
        self.signed_area().abs()
    }

    pub fn centroid(&self) -> Point2 {
        let o = self.vertices[0];
        let mut c = Point2::ORIGIN;
        let mut a2 = 0.0;
        for (p, q) in self.edges() {
            let (p, q) = (p - o, q - o);
            let w = p.cross(q);
            c = c + (p + q) * w;
            a2 += w;
        }
        o + c * (1.0 / (3.0 * a2))
    }

    fn diameter_bound(&self) -> f64 {
        let v0 = self.vertices[0];
        2.0 * self
            .vertices
            .iter()
            .map(|v| v.dist(v0))
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE)
    }

    /// Closed membership with a relative tolerance.
    pub fn contains(&self, p: Point2) -> bool {
        let tol = 1e-12 * self.diameter_bound();
        self.edges().all(|(a, b)| {
            let e = b - a;
            e.cross(p - a) >= -tol * e.norm()
        })
    }

    /// Open membership (strictly inside every edge).
    pub fn contains_strict(&self, p: Point2) -> bool {
        self.edges().all(|(a, b)| (b - a).cross(p - a) > 0.0)
    }

    /// Minimum signed distance from `p` to the edge lines; positive inside.
    pub fn inner_distance(&self, p: Point2) -> f64 {
        self.edges()
            .map(|(a, b)| {
                let e = b - a;
                e.cross(p - a) / e.norm()
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Euclidean distance from `p` to the closed polygon (zero inside).
    pub fn distance_from(&self, p: Point2) -> f64 {
        if self.contains(p) {
            return 0.0;
        }
        self.edges()
            .map(|(a, b)| segment_distance(p, a, b))
            .fold(f64::INFINITY, f64::min)
    }

    /// Closest point of the closed polygon to `p`.
    pub fn closest_point(&self, p: Point2) -> Point2 {
        if self.contains(p) {
            return p;
        }
        let mut best = self.vertices[0];
        let mut bd = f64::INFINITY;
        for (a, b) in self.edges() {
            let q = segment_closest(p, a, b);
            let d = q.dist(p);
            if d < bd {
                bd = d;
                best = q;
            }
        }
        best
    }

    pub fn max_distance_from(&self, p: Point2) -> f64 {
        self.vertices.iter().map(|v| v.dist(p)).fold(0.0, f64::max)
    }

    /// Keeps `{y : normal . y <= offset}`; `None` if nothing of positive area remains.
    pub fn clip_half_plane(&self, normal: Point2, offset: f64) -> Option<ConvexPolygon> {
        let n = self.vertices.len();
        let mut out = Vec::with_capacity(n + 1);
        let side: Vec<f64> = self
            .vertices
            .iter()
            .map(|v| normal.dot(*v) - offset)
            .collect();
        for i in 0..n {
            let j = (i + 1) % n;
            let (p, q) = (self.vertices[i], self.vertices[j]);
            let (sp, sq) = (side[i], side[j]);
            if sp <= 0.0 {
                out.push(p);
            }
            if (sp < 0.0 && sq > 0.0) || (sp > 0.0 && sq < 0.0) {
                let t = sp / (sp - sq);
                out.push(p + (q - p) * t);
            }
        }
        let scale = self.diameter_bound();
        dedupe_ring(&mut out, 1e-12 * scale);
        if out.len() < 3 {
            return None;
        }
        let poly = ConvexPolygon { vertices: out };
        (poly.signed_area() > 1e-14 * scale * scale).then_some(poly)
    }
}

fn dedupe_ring(pts: &mut Vec<Point2>, tol: f64) {
    let mut out: Vec<Point2> = Vec::with_capacity(pts.len());
    for &p in pts.iter() {
        if out.last().is_none_or(|q| q.dist(p) > tol) {
            out.push(p);
        }
    }
    while out.len() > 1 && out[0].dist(*out.last().unwrap()) <= tol {
        out.pop();
    }
    *pts = out;
}

fn segment_closest(p: Point2, a: Point2, b: Point2) -> Point2 {
    let e = b - a;
    let l2 = e.norm_sq();
    if l2 == 0.0 {
        return a;
    }
    let t = ((p - a).dot(e) / l2).clamp(0.0, 1.0);
    a + e * t
}

fn segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    segment_closest(p, a, b).dist(p)
}

/// Signed area of `triangle(0, a, b) ∩ disk(0, r)`.
fn edge_disk_area(a: Point2, b: Point2, r: f64) -> f64 {
    let sector = |u: Point2, v: Point2| 0.5 * r * r * u.cross(v).atan2(u.dot(v));
    let d = b - a;
    let qa = d.norm_sq();
    if qa == 0.0 {
        return 0.0;
    }
    let qb = a.dot(d);
    let qc = a.norm_sq() - r * r;
    let disc = qb * qb - qa * qc;
    if disc <= 0.0 {
        return sector(a, b);
    }
    let s = disc.sqrt();
    let t0 = ((-qb - s) / qa).clamp(0.0, 1.0);
    let t1 = ((-qb + s) / qa).clamp(0.0, 1.0);
    if t0 >= t1 {
        return sector(a, b);
    }
    let p = a + d * t0;
    let q = a + d * t1;
    sector(a, p) + 0.5 * p.cross(q) + sector(q, b)
}

/// Exact area of `polygon ∩ closed disk(center, radius)`.
pub fn polygon_disk_area(cell: &ConvexPolygon, center: Point2, radius: f64) -> f64 {
    if radius <= 0.0 {
        return 0.0;
    }
    let s: f64 = cell
        .edges()
        .map(|(a, b)| edge_disk_area(a - center, b - center, radius))
        .sum();
    s.abs().min(cell.area()).min(PI * radius * radius)
}
