//! Planar primitives, Voronoi tessellation of the padded domain, and the
//! standing-assumption validator.

mod polygon;
mod validate;
mod voronoi;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use polygon::{polygon_disk_area, ConvexPolygon};
pub use validate::{validate_standing_assumptions, Clause, ClauseResult, ValidationReport};
pub use voronoi::{NeighborSets, VoronoiDecomposition};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point2 {
    pub x1: f64,
    pub x2: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x1: 0.0, x2: 0.0 };

    pub const fn new(x1: f64, x2: f64) -> Self {
        Self { x1, x2 }
    }

    pub fn from_polar(r: f64, theta: f64) -> Self {
        Self::new(r * theta.cos(), r * theta.sin())
    }

    pub fn dot(self, o: Self) -> f64 {
        self.x1 * o.x1 + self.x2 * o.x2
    }

    /// z-component of the 3-D cross product.
    pub fn cross(self, o: Self) -> f64 {
        self.x1 * o.x2 - self.x2 * o.x1
    }

    pub fn norm(self) -> f64 {
        self.x1.hypot(self.x2)
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn dist(self, o: Self) -> f64 {
        (self - o).norm()
    }

    pub fn angle(self) -> f64 {
        self.x2.atan2(self.x1)
    }

    pub fn is_finite(self) -> bool {
        self.x1.is_finite() && self.x2.is_finite()
    }

    pub fn as_array(self) -> [f64; 2] {
        [self.x1, self.x2]
    }
}

impl From<[f64; 2]> for Point2 {
    fn from(a: [f64; 2]) -> Self {
        Self::new(a[0], a[1])
    }
}

impl From<Point2> for [f64; 2] {
    fn from(p: Point2) -> Self {
        [p.x1, p.x2]
    }
}

impl fmt::Display for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x1, self.x2)
    }
}

impl Add for Point2 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x1 + o.x1, self.x2 + o.x2)
    }
}

impl Sub for Point2 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x1 - o.x1, self.x2 - o.x2)
    }
}

impl Mul<f64> for Point2 {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.x1 * s, self.x2 * s)
    }
}

impl Neg for Point2 {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x1, -self.x2)
    }
}

/// Closed annulus `{y : inner <= |y - center| <= outer}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Annulus {
    pub center: Point2,
    pub inner: f64,
    pub outer: f64,
}

impl Annulus {
    pub fn new(center: Point2, inner: f64, outer: f64) -> Result<Self> {
        if !(inner >= 0.0 && outer > inner && outer.is_finite()) {
            return Err(Error::InvalidAnnulus { inner, outer });
        }
        Ok(Self {
            center,
            inner,
            outer,
        })
    }

    pub fn contains(&self, p: Point2) -> bool {
        let r = p.dist(self.center);
        r >= self.inner && r <= self.outer
    }

    pub fn area(&self) -> f64 {
        std::f64::consts::PI * (self.outer * self.outer - self.inner * self.inner)
    }
}

/// Axis-aligned rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub min: Point2,
    pub max: Point2,
}

impl Rect {
    pub fn new(min: Point2, max: Point2) -> Result<Self> {
        if !(min.is_finite() && max.is_finite() && min.x1 < max.x1 && min.x2 < max.x2) {
            return Err(Error::InvalidDomain(format!(
                "rectangle min {min} must lie strictly below max {max}"
            )));
        }
        Ok(Self { min, max })
    }

    pub fn width(&self) -> f64 {
        self.max.x1 - self.min.x1
    }

    pub fn height(&self) -> f64 {
        self.max.x2 - self.min.x2
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn center(&self) -> Point2 {
        (self.min + self.max) * 0.5
    }

    pub fn contains_closed(&self, p: Point2) -> bool {
        p.x1 >= self.min.x1 && p.x1 <= self.max.x1 && p.x2 >= self.min.x2 && p.x2 <= self.max.x2
    }

    pub fn contains_open(&self, p: Point2) -> bool {
        p.x1 > self.min.x1 && p.x1 < self.max.x1 && p.x2 > self.min.x2 && p.x2 < self.max.x2
    }

    /// Signed distance to the boundary; positive inside.
    pub fn inner_distance(&self, p: Point2) -> f64 {
        (p.x1 - self.min.x1)
            .min(self.max.x1 - p.x1)
            .min(p.x2 - self.min.x2)
            .min(self.max.x2 - p.x2)
    }

    /// True when the closed disk of radius `r` about `c` lies in the closed rectangle.
    pub fn contains_disk(&self, c: Point2, r: f64) -> bool {
        self.inner_distance(c) >= r
    }

    pub fn outset(&self, pad: f64) -> Self {
        Self {
            min: self.min - Point2::new(pad, pad),
            max: self.max + Point2::new(pad, pad),
        }
    }

    pub fn to_polygon(&self) -> ConvexPolygon {
        ConvexPolygon::from_vertices_unchecked(vec![
            self.min,
            Point2::new(self.max.x1, self.min.x2),
            self.max,
            Point2::new(self.min.x1, self.max.x2),
        ])
    }
}

/// The physical domain together with its padding width `H`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DomainSpec {
    pub omega: Rect,
    #[serde(rename = "H")]
    pub padding: f64,
}

impl DomainSpec {
    pub fn new(omega: Rect, padding: f64) -> Result<Self> {
        if !(padding > 0.0 && padding.is_finite()) {
            return Err(Error::InvalidDomain(format!(
                "padding H must be positive, got {padding}"
            )));
        }
        Rect::new(omega.min, omega.max)?;
        Ok(Self { omega, padding })
    }

    pub fn omega_h(&self) -> Rect {
        self.omega.outset(self.padding)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_algebra() {
        let a = Point2::new(3.0, 4.0);
        assert_eq!(a.norm(), 5.0);
        assert_eq!(a.dot(Point2::new(1.0, 0.0)), 3.0);
        assert_eq!(Point2::new(1.0, 0.0).cross(Point2::new(0.0, 1.0)), 1.0);
        assert_eq!(a - a, Point2::ORIGIN);
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(json, "[3.0,4.0]");
        assert_eq!(serde_json::from_str::<Point2>(&json).unwrap(), a);
    }

    #[test]
    fn annulus_rejects_bad_radii() {
        assert!(Annulus::new(Point2::ORIGIN, 0.5, 0.5).is_err());
        assert!(Annulus::new(Point2::ORIGIN, -0.1, 0.5).is_err());
        let a = Annulus::new(Point2::ORIGIN, 0.5, 1.0).unwrap();
        assert!(a.contains(Point2::new(0.5, 0.0)));
        assert!(a.contains(Point2::new(0.0, 1.0)));
        assert!(!a.contains(Point2::new(0.1, 0.1)));
    }

    #[test]
    fn rect_queries() {
        let r = Rect::new(Point2::new(0.0, 0.0), Point2::new(2.0, 1.0)).unwrap();
        assert_eq!(r.inner_distance(Point2::new(0.5, 0.5)), 0.5);
        assert!(r.contains_disk(Point2::new(1.0, 0.5), 0.5));
        assert!(!r.contains_disk(Point2::new(1.0, 0.5), 0.6));
        let d = DomainSpec::new(r, 0.25).unwrap();
        assert_eq!(d.omega_h().min, Point2::new(-0.25, -0.25));
        assert!(DomainSpec::new(r, 0.0).is_err());
        assert!(Rect::new(Point2::new(1.0, 0.0), Point2::new(0.0, 1.0)).is_err());
    }
}
