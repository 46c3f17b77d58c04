//! Smooth test functions with analytic derivatives and exact `C^j` seminorms
//! over a rectangle.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::{Point2, Rect};

/// `|f|_{C^j}` for `j = 0..=3`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Seminorms(pub [f64; 4]);

impl Seminorms {
    pub fn get(&self, j: usize) -> f64 {
        self.0[j]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TestFunction {
    Constant(f64),
    /// `x1` (axis 0) or `x2` (axis 1)
    Coordinate(usize),
    /// `x1² + x2²`
    Quadratic,
    /// `x1³`
    Cubic,
    /// `sin(x1) cos(x2)`
    SinCos,
    /// `exp(-|x - c|² / (2 s²))`
    Gaussian {
        center: Point2,
        width: f64,
    },
    /// `Σ c_i f_i`
    Combination(Vec<(f64, TestFunction)>),
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// `d^k/dx^k sin(x)`.
fn sin_derivative(k: u32, x: f64) -> f64 {
    match k % 4 {
        0 => x.sin(),
        1 => x.cos(),
        2 => -x.sin(),
        _ => -x.cos(),
    }
}

fn cos_derivative(k: u32, x: f64) -> f64 {
    sin_derivative(k + 1, x)
}

/// `max |sin| on [a, b]`.
fn max_abs_sin(a: f64, b: f64) -> f64 {
    let k = ((a - FRAC_PI_2) / PI).ceil();
    if FRAC_PI_2 + k * PI <= b {
        1.0
    } else {
        a.sin().abs().max(b.sin().abs())
    }
}

/// `max |d^k/dx^k sin| on [a, b]`.
fn max_abs_sin_derivative(k: u32, a: f64, b: f64) -> f64 {
    if k.is_multiple_of(2) {
        max_abs_sin(a, b)
    } else {
        max_abs_sin(a + FRAC_PI_2, b + FRAC_PI_2)
    }
}

/// Probabilists' Hermite polynomial `He_n`.
fn hermite(n: u32, u: f64) -> f64 {
    match n {
        0 => 1.0,
        1 => u,
        2 => u * u - 1.0,
        3 => u * u * u - 3.0 * u,
        _ => {
            let (mut a, mut b) = (u * u - 1.0, u * u * u - 3.0 * u);
            for k in 3..n {
                let c = u * b - k as f64 * a;
                a = b;
                b = c;
            }
            b
        }
    }
}

/// Roots of `He_{n+1}`: the critical points of `He_n(u) e^{-u²/2}`.
fn hermite_critical_points(n: u32) -> Vec<f64> {
    match n {
        0 => vec![0.0],
        1 => vec![-1.0, 1.0],
        2 => vec![-(3f64.sqrt()), 0.0, 3f64.sqrt()],
        3 => {
            let a = (3.0 - 6f64.sqrt()).sqrt();
            let b = (3.0 + 6f64.sqrt()).sqrt();
            vec![-b, -a, a, b]
        }
        _ => unimplemented!("derivatives above third order"),
    }
}

/// `max |He_n(u) e^{-u²/2}|` over `u ∈ [a, b]`.
fn max_hermite_function(n: u32, a: f64, b: f64) -> f64 {
    let g = |u: f64| (hermite(n, u) * (-0.5 * u * u).exp()).abs();
    let mut m = g(a).max(g(b));
    for u in hermite_critical_points(n) {
        if u > a && u < b {
            m = m.max(g(u));
        }
    }
    m
}

fn max_abs_on(a: f64, b: f64) -> f64 {
    a.abs().max(b.abs())
}

impl TestFunction {
    /// Looks up a function by its CLI name.
    pub fn by_name(name: &str) -> Result<Self> {
        Ok(match name.trim() {
            "constant" => Self::Constant(1.0),
            "x1" => Self::Coordinate(0),
            "x2" => Self::Coordinate(1),
            "quadratic" => Self::Quadratic,
            "cubic" => Self::Cubic,
            "sincos" => Self::SinCos,
            "gaussian" => Self::Gaussian {
                center: Point2::new(0.5, 0.5),
                width: 0.25,
            },
            other => {
                return Err(Error::Config(format!(
                    "unknown test function {other:?} (expected one of {})",
                    Self::NAMES.join(", ")
                )))
            }
        })
    }

    pub const NAMES: [&'static str; 7] = [
        "constant",
        "x1",
        "x2",
        "quadratic",
        "cubic",
        "sincos",
        "gaussian",
    ];

    /// Parses a comma-separated list of names.
    pub fn parse_list(list: &str) -> Result<Vec<Self>> {
        list.split(',')
            .filter(|s| !s.trim().is_empty())
            .map(Self::by_name)
            .collect()
    }

    pub fn name(&self) -> String {
        match self {
            Self::Constant(c) if *c == 1.0 => "constant".into(),
            Self::Constant(c) => format!("constant({c})"),
            Self::Coordinate(0) => "x1".into(),
            Self::Coordinate(_) => "x2".into(),
            Self::Quadratic => "quadratic".into(),
            Self::Cubic => "cubic".into(),
            Self::SinCos => "sincos".into(),
            Self::Gaussian { center, width }
                if *center == Point2::new(0.5, 0.5) && *width == 0.25 =>
            {
                "gaussian".into()
            }
            Self::Gaussian { center, width } => format!("gaussian({center}, {width})"),
            Self::Combination(parts) => parts
                .iter()
                .map(|(c, f)| format!("{c}*{}", f.name()))
                .collect::<Vec<_>>()
                .join("+"),
        }
    }

    pub fn value(&self, p: Point2) -> f64 {
        self.derivative(0, 0, p)
    }

    /// `∂^{a1}_{x1} ∂^{a2}_{x2} f(p)`.
    pub fn derivative(&self, a1: u32, a2: u32, p: Point2) -> f64 {
        let ord = a1 + a2;
        match self {
            Self::Constant(c) => {
                if ord == 0 {
                    *c
                } else {
                    0.0
                }
            }
            Self::Coordinate(axis) => {
                let (own, other) = if *axis == 0 { (a1, a2) } else { (a2, a1) };
                let x = if *axis == 0 { p.x1 } else { p.x2 };
                match (own, other) {
                    (0, 0) => x,
                    (1, 0) => 1.0,
                    _ => 0.0,
                }
            }
            Self::Quadratic => match (a1, a2) {
                (0, 0) => p.x1 * p.x1 + p.x2 * p.x2,
                (1, 0) => 2.0 * p.x1,
                (0, 1) => 2.0 * p.x2,
                (2, 0) | (0, 2) => 2.0,
                _ => 0.0,
            },
            Self::Cubic => match (a1, a2) {
                (0, 0) => p.x1.powi(3),
                (1, 0) => 3.0 * p.x1 * p.x1,
                (2, 0) => 6.0 * p.x1,
                (3, 0) => 6.0,
                _ => 0.0,
            },
            Self::SinCos => sin_derivative(a1, p.x1) * cos_derivative(a2, p.x2),
            Self::Gaussian { center, width } => {
                let u = (p - *center) * (1.0 / width);
                let sign = if ord.is_multiple_of(2) { 1.0 } else { -1.0 };
                sign * width.powi(-(ord as i32))
                    * hermite(a1, u.x1)
                    * hermite(a2, u.x2)
                    * (-0.5 * u.norm_sq()).exp()
            }
            Self::Combination(parts) => {
                parts.iter().map(|(c, f)| c * f.derivative(a1, a2, p)).sum()
            }
        }
    }

    pub fn gradient(&self, p: Point2) -> Point2 {
        Point2::new(self.derivative(1, 0, p), self.derivative(0, 1, p))
    }

    pub fn laplacian(&self, p: Point2) -> f64 {
        self.derivative(2, 0, p) + self.derivative(0, 2, p)
    }

    /// `max_{|α| = j} max_{region} |D^α f|`. Exact for the primitives; the
    /// triangle inequality bound for combinations.
    pub fn seminorm(&self, j: u32, region: &Rect) -> f64 {
        let (a1, b1, a2, b2) = (region.min.x1, region.max.x1, region.min.x2, region.max.x2);
        let alphas = (0..=j).map(|i| (i, j - i));
        match self {
            Self::Constant(c) => {
                if j == 0 {
                    c.abs()
                } else {
                    0.0
                }
            }
            Self::Coordinate(axis) => match j {
                0 if *axis == 0 => max_abs_on(a1, b1),
                0 => max_abs_on(a2, b2),
                1 => 1.0,
                _ => 0.0,
            },
            Self::Quadratic => match j {
                0 => max_abs_on(a1, b1).powi(2) + max_abs_on(a2, b2).powi(2),
                1 => 2.0 * max_abs_on(a1, b1).max(max_abs_on(a2, b2)),
                2 => 2.0,
                _ => 0.0,
            },
            Self::Cubic => match j {
                0 => max_abs_on(a1, b1).powi(3),
                1 => 3.0 * max_abs_on(a1, b1).powi(2),
                2 => 6.0 * max_abs_on(a1, b1),
                _ => 6.0,
            },
            Self::SinCos => alphas
                .map(|(i, k)| {
                    max_abs_sin_derivative(i, a1, b1) * max_abs_sin_derivative(k + 1, a2, b2)
                })
                .fold(0.0, f64::max),
            Self::Gaussian { center, width } => {
                let (u1a, u1b) = ((a1 - center.x1) / width, (b1 - center.x1) / width);
                let (u2a, u2b) = ((a2 - center.x2) / width, (b2 - center.x2) / width);
                alphas
                    .map(|(i, k)| {
                        width.powi(-(j as i32))
                            * max_hermite_function(i, u1a, u1b)
                            * max_hermite_function(k, u2a, u2b)
                    })
                    .fold(0.0, f64::max)
            }
            Self::Combination(parts) => parts
                .iter()
                .map(|(c, f)| c.abs() * f.seminorm(j, region))
                .sum(),
        }
    }

    pub fn seminorms(&self, region: &Rect) -> Seminorms {
        Seminorms([0, 1, 2, 3].map(|j| self.seminorm(j, region)))
    }

    /// Default suite used by studies.
    pub fn default_suite() -> Vec<Self> {
        ["constant", "x1", "quadratic", "sincos", "gaussian"]
            .iter()
            .map(|n| Self::by_name(n).unwrap())
            .collect()
    }
}
