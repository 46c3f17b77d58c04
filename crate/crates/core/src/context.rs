//! Per-focal-site data shared by every operator: neighbour sets, cell–annulus
//! areas, weighted cell integrals, and the positivity constant.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{Point2, VoronoiDecomposition};
use crate::quadrature::{PolarQuadrature, PolarRegion};
use crate::weights::{
    cell_annulus_area, check_positivity_c0, sunflower_samples, PositivityConstant, WeightFunction,
};

/// One index `i ∈ R(a_k, h)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Neighbor {
    pub index: usize,
    pub site: Point2,
    /// `|a_k - a_i|`
    pub dist: f64,
    /// `(a_k - a_i) / |a_k - a_i|`
    pub dir: Point2,
    /// `w(a_k - a_i)`
    pub w_site: f64,
    /// `V_i(a_k)`
    pub area: f64,
    /// `∫_{σ_i} w(a_k - y) dy`
    pub cell_w: f64,
    /// `∫_{σ_i} |a_k - y|² w(a_k - y) dy`
    pub cell_r2w: f64,
}

#[derive(Debug, Clone)]
pub struct ContextOptions {
    pub quadrature: PolarQuadrature,
    /// Points of `B_δ(a_k)` at which positivity is checked.
    pub positivity_samples: usize,
    /// Relative agreement required between a rule and its refinement.
    pub refinement_tol: f64,
}

impl Default for ContextOptions {
    fn default() -> Self {
        Self {
            quadrature: PolarQuadrature::default(),
            positivity_samples: 64,
            refinement_tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone)]
pub struct NeighborContext<'a> {
    decomp: &'a VoronoiDecomposition,
    weight: &'a WeightFunction,
    quad: PolarQuadrature,
    focal: usize,
    lambda: Option<f64>,
    closed: Vec<usize>,
    neighbors: Vec<Neighbor>,
    positivity: PositivityConstant,
    sum_vw: f64,
    sum_vd2w: f64,
    sum_cell_w: f64,
    sum_cell_r2w: f64,
}

impl<'a> NeighborContext<'a> {
    pub fn new(
        decomp: &'a VoronoiDecomposition,
        weight: &'a WeightFunction,
        focal: usize,
        lambda: Option<f64>,
    ) -> Result<Self> {
        Self::with_options(decomp, weight, focal, lambda, ContextOptions::default())
    }

    pub fn with_options(
        decomp: &'a VoronoiDecomposition,
        weight: &'a WeightFunction,
        focal: usize,
        lambda: Option<f64>,
        opts: ContextOptions,
    ) -> Result<Self> {
        if focal >= decomp.len() {
            return Err(Error::InvalidParameter(format!(
                "focal index {focal} out of range (n = {})",
                decomp.len()
            )));
        }
        let (delta, h) = (weight.delta(), weight.h());
        let x = decomp.site(focal);
        if let Some(l) = lambda {
            if !(l > 0.0 && l < 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "lambda must lie in (0, 1), got {l}"
                )));
            }
            if decomp.neighbor_sets(focal, x, l * h).open.is_empty() {
                return Err(Error::EmptyNeighborhood {
                    focal,
                    radius: l * h,
                });
            }
        }
        let sets = decomp.neighbor_sets(focal, x, h);
        if sets.open.is_empty() {
            return Err(Error::EmptyNeighborhood { focal, radius: h });
        }
        let quad = opts.quadrature;
        let kinks = weight.kinks();
        let cell_moments = |q: &PolarQuadrature, cell| {
            q.integrate(x, PolarRegion::Polygon(cell), delta, h, &kinks, |s| {
                let w = weight.radial(s.r);
                [w, s.r * s.r * w]
            })
        };
        let mut neighbors = Vec::with_capacity(sets.open.len());
        for &i in &sets.open {
            let site = decomp.site(i);
            let cell = decomp.cell(i);
            let d = x.dist(site);
            let area = cell_annulus_area(cell, x, delta, h);
            let [cw, cr2w] = cell_moments(&quad, cell);
            neighbors.push(Neighbor {
                index: i,
                site,
                dist: d,
                dir: (x - site) * (1.0 / d),
                w_site: weight.eval(x - site),
                area,
                cell_w: if weight.is_constant() {
                    weight.radial(delta) * area
                } else {
                    cw
                },
                cell_r2w: cr2w,
            });
        }
        let sum_cell_w: f64 = neighbors.iter().map(|n| n.cell_w).sum();
        let sum_cell_r2w: f64 = neighbors.iter().map(|n| n.cell_r2w).sum();

        let fine = quad.refined();
        let (mut fw, mut fr) = (0.0, 0.0);
        for &i in &sets.open {
            let [a, b] = cell_moments(&fine, decomp.cell(i));
            fw += a;
            fr += b;
        }
        if !weight.is_constant() && (fw - sum_cell_w).abs() > opts.refinement_tol * fw.abs() {
            return Err(Error::Quadrature {
                what: "weighted cell integrals".into(),
                coarse: sum_cell_w,
                fine: fw,
            });
        }
        if (fr - sum_cell_r2w).abs() > opts.refinement_tol * fr.abs() {
            return Err(Error::Quadrature {
                what: "second-moment cell integrals".into(),
                coarse: sum_cell_r2w,
                fine: fr,
            });
        }

        let samples = sunflower_samples(x, delta, opts.positivity_samples.max(1));
        let positivity = check_positivity_c0(weight, decomp, focal, &samples, &quad)?;
        let sum_vw = neighbors.iter().map(|n| n.area * n.w_site).sum();
        let sum_vd2w = neighbors
            .iter()
            .map(|n| n.area * n.dist * n.dist * n.w_site)
            .sum();
        Ok(Self {
            decomp,
            weight,
            quad,
            focal,
            lambda,
            closed: sets.closed,
            neighbors,
            positivity,
            sum_vw,
            sum_vd2w,
            sum_cell_w,
            sum_cell_r2w,
        })
    }

    pub fn decomposition(&self) -> &'a VoronoiDecomposition {
        self.decomp
    }

    pub fn weight(&self) -> &'a WeightFunction {
        self.weight
    }

    pub fn quadrature(&self) -> &PolarQuadrature {
        &self.quad
    }

    pub fn focal(&self) -> usize {
        self.focal
    }

    /// The evaluation point `a_k`.
    pub fn x(&self) -> Point2 {
        self.decomp.site(self.focal)
    }

    pub fn h(&self) -> f64 {
        self.weight.h()
    }

    pub fn delta(&self) -> f64 {
        self.weight.delta()
    }

    pub fn r_sigma(&self) -> f64 {
        self.decomp.r_sigma()
    }

    pub fn lambda(&self) -> Option<f64> {
        self.lambda
    }

    pub fn require_lambda(&self) -> Result<f64> {
        self.lambda
            .ok_or_else(|| Error::InvalidParameter("this quantity needs lambda".into()))
    }

    /// `R̄(a_k, h)`
    pub fn closed_set(&self) -> &[usize] {
        &self.closed
    }

    /// `R(a_k, h)` with per-neighbour data.
    pub fn neighbors(&self) -> &[Neighbor] {
        &self.neighbors
    }

    pub fn positivity(&self) -> &PositivityConstant {
        &self.positivity
    }

    pub fn c0(&self) -> f64 {
        self.positivity.c0
    }

    /// `Σ V_j w(a_k - a_j)`
    pub fn sum_vw(&self) -> f64 {
        self.sum_vw
    }

    /// `Σ V_j |a_k - a_j|² w(a_k - a_j)`
    pub fn sum_vd2w(&self) -> f64 {
        self.sum_vd2w
    }

    /// `Σ ∫_{σ_j} w(a_k - y) dy`
    pub fn sum_cell_w(&self) -> f64 {
        self.sum_cell_w
    }

    /// `Σ ∫_{σ_j} |a_k - y|² w(a_k - y) dy`
    pub fn sum_cell_r2w(&self) -> f64 {
        self.sum_cell_r2w
    }

    /// Floor below which an unweighted denominator counts as degenerate.
    pub fn denominator_floor(&self) -> f64 {
        1e-3 * self.c0()
    }

    /// Floor for the `|a_k - ·|²`-weighted denominators.
    pub fn second_moment_floor(&self) -> f64 {
        1e-3 * self.c0() * self.delta() * self.delta()
    }
}
