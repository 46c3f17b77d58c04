use thiserror::Error;

use crate::geometry::Point2;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("at least two sites are required, got {0}")]
    TooFewSites(usize),

    #[error("sites {first} and {second} coincide (distance {distance:e})")]
    DuplicateSites {
        first: usize,
        second: usize,
        distance: f64,
    },

    #[error("site {index} at {point} lies outside the padded domain")]
    SiteOutsideDomain { index: usize, point: Point2 },

    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),

    #[error("invalid annulus: inner radius {inner} and outer radius {outer}")]
    InvalidAnnulus { inner: f64, outer: f64 },

    #[error("invalid weight at r = {radius}: {reason}")]
    InvalidWeight { radius: f64, reason: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("assumption violated ({clause}): {detail}")]
    AssumptionViolation {
        clause: String,
        detail: String,
        witness: Option<Point2>,
    },

    #[error("no neighbours of site {focal} within radius {radius}")]
    EmptyNeighborhood { focal: usize, radius: f64 },

    #[error("quadrature for {what} did not converge: {coarse} vs {fine}")]
    Quadrature {
        what: String,
        coarse: f64,
        fine: f64,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
