use rstar::primitives::GeomWithData;
use rstar::RTree;

use super::{ConvexPolygon, DomainSpec, Point2, Rect};
use crate::error::{Error, Result};

type Indexed = GeomWithData<[f64; 2], usize>;

/// Index sets around a point `x`: `closed` holds every site with
/// `|x - a_i| < h`; `open` is the same set without the focal index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborSets {
    pub closed: Vec<usize>,
    pub open: Vec<usize>,
}

/// Voronoi cells of a site set, clipped to the padded rectangle.
#[derive(Debug, Clone)]
pub struct VoronoiDecomposition {
    domain: DomainSpec,
    sites: Vec<Point2>,
    cells: Vec<ConvexPolygon>,
    radii: Vec<f64>,
    r_sigma: f64,
    tree: RTree<Indexed>,
}

impl VoronoiDecomposition {
    pub fn build(domain: DomainSpec, sites: Vec<Point2>) -> Result<Self> {
        let domain = DomainSpec::new(domain.omega, domain.padding)?;
        if sites.len() < 2 {
            return Err(Error::TooFewSites(sites.len()));
        }
        let bbox = domain.omega_h();
        for (index, &p) in sites.iter().enumerate() {
            if !p.is_finite() || !bbox.contains_closed(p) {
                return Err(Error::SiteOutsideDomain { index, point: p });
            }
        }
        let tree = RTree::bulk_load(
            sites
                .iter()
                .enumerate()
                .map(|(i, p)| Indexed::new(p.as_array(), i))
                .collect(),
        );
        let tol = 1e-9 * bbox.width().hypot(bbox.height());
        for (i, p) in sites.iter().enumerate() {
            for other in tree.locate_within_distance(p.as_array(), tol * tol) {
                if other.data != i {
                    let (first, second) = (i.min(other.data), i.max(other.data));
                    return Err(Error::DuplicateSites {
                        first,
                        second,
                        distance: p.dist(Point2::from(*other.geom())),
                    });
                }
            }
        }

        let frame = bbox.to_polygon();
        let mut cells = Vec::with_capacity(sites.len());
        let mut radii = Vec::with_capacity(sites.len());
        for (i, &a) in sites.iter().enumerate() {
            let cell = clip_cell(&frame, &tree, &sites, i).ok_or_else(|| {
                Error::InvalidPolygon(format!("cell of site {i} at {a} is empty"))
            })?;
            radii.push(cell.max_distance_from(a));
            cells.push(cell);
        }
        let r_sigma = radii.iter().copied().fold(0.0, f64::max);
        Ok(Self {
            domain,
            sites,
            cells,
            radii,
            r_sigma,
            tree,
        })
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    pub fn omega(&self) -> Rect {
        self.domain.omega
    }

    pub fn omega_h(&self) -> Rect {
        self.domain.omega_h()
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn sites(&self) -> &[Point2] {
        &self.sites
    }

    pub fn site(&self, i: usize) -> Point2 {
        self.sites[i]
    }

    pub fn cells(&self) -> &[ConvexPolygon] {
        &self.cells
    }

    pub fn cell(&self, i: usize) -> &ConvexPolygon {
        &self.cells[i]
    }

    /// Largest vertex distance of cell `i` from its own site.
    pub fn cell_radius(&self, i: usize) -> f64 {
        self.radii[i]
    }

    /// `max_i max_{y in cell i} |y - a_i|`.
    pub fn r_sigma(&self) -> f64 {
        self.r_sigma
    }

    pub fn nearest_site(&self, y: Point2) -> usize {
        self.tree
            .nearest_neighbor(y.as_array())
            .map(|g| g.data)
            .expect("non-empty tree")
    }

    /// Sites with `|x - a_i| < radius`, sorted by index.
    pub fn sites_within(&self, x: Point2, radius: f64) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .tree
            .locate_within_distance(x.as_array(), radius * radius)
            .filter(|g| Point2::from(*g.geom()).dist(x) < radius)
            .map(|g| g.data)
            .collect();
        out.sort_unstable();
        out
    }

    pub fn neighbor_sets(&self, focal: usize, x: Point2, h: f64) -> NeighborSets {
        let closed = self.sites_within(x, h);
        let open = closed.iter().copied().filter(|&i| i != focal).collect();
        NeighborSets { closed, open }
    }
}

fn clip_cell(
    frame: &ConvexPolygon,
    tree: &RTree<Indexed>,
    sites: &[Point2],
    i: usize,
) -> Option<ConvexPolygon> {
    let a = sites[i];
    let mut cell = frame.clone();
    let mut reach = cell.max_distance_from(a);
    for g in tree.nearest_neighbor_iter(a.as_array()) {
        let j = g.data;
        if j == i {
            continue;
        }
        let b = sites[j];
        let n = b - a;
        if n.norm() > 2.0 * reach {
            break;
        }
        cell = cell.clip_half_plane(n, n.dot(a) + 0.5 * n.norm_sq())?;
        reach = cell.max_distance_from(a);
    }
    Some(cell)
}
