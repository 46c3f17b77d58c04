use mps_core::geometry::{ConvexPolygon, DomainSpec, Point2, Rect, VoronoiDecomposition};
use mps_core::study::Generator;
use mps_core::weights::cell_annulus_area;
use mps_oracle::{
    in_annulus, in_convex_polygon, mc_region_integral, shoelace_area, BoundingBox, Pt,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn pt(p: Point2) -> Pt {
    [p.x1, p.x2]
}

/// Vertices on a rotated ellipse at sorted random angles.
fn random_convex(rng: &mut ChaCha8Rng) -> ConvexPolygon {
    let n = rng.random_range(3..10);
    let c = Point2::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    let (a, b) = (rng.random_range(0.2..1.0), rng.random_range(0.2..1.0));
    let rot = rng.random_range(0.0..std::f64::consts::PI);
    let mut th: Vec<f64> = (0..n)
        .map(|_| rng.random_range(0.0..std::f64::consts::TAU))
        .collect();
    th.sort_by(f64::total_cmp);
    th.dedup_by(|x, y| (*x - *y).abs() < 1e-3);
    let v = th
        .iter()
        .map(|t| {
            let (x, y) = (a * t.cos(), b * t.sin());
            c + Point2::new(x * rot.cos() - y * rot.sin(), x * rot.sin() + y * rot.cos())
        })
        .collect();
    ConvexPolygon::new(v).unwrap_or_else(|_| random_convex(rng))
}

fn voronoi_cells(seed: u64) -> (VoronoiDecomposition, Vec<usize>) {
    let omega = Rect::new(Point2::new(0.0, 0.0), Point2::new(1.0, 1.0)).unwrap();
    let domain = DomainSpec::new(omega, 0.2).unwrap();
    let sites = Generator::Jittered { jitter: 0.3 }
        .generate(domain.omega_h(), 0.1, seed)
        .unwrap();
    let d = VoronoiDecomposition::build(domain, sites).unwrap();
    let picks = (0..d.len()).step_by(d.len() / 25).take(25).collect();
    (d, picks)
}

fn check_pair(
    cell: &ConvexPolygon,
    x: Point2,
    inner: f64,
    outer: f64,
    seed: u64,
) -> (f64, f64, f64) {
    let verts: Vec<Pt> = cell.vertices().iter().copied().map(pt).collect();
    let bbox = BoundingBox::around_points(&verts);
    let est = mc_region_integral(
        |p| in_convex_polygon(&verts, p) && in_annulus(pt(x), inner, outer, p),
        bbox,
        |_| 1.0,
        1_000_000,
        seed,
    );
    (
        cell_annulus_area(cell, x, inner, outer),
        est.value,
        est.std_error,
    )
}

#[test]
fn cell_annulus_area_matches_monte_carlo_on_50_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut cases = Vec::new();
    for _ in 0..25 {
        let cell = random_convex(&mut rng);
        let c =
            cell.centroid() + Point2::new(rng.random_range(-0.6..0.6), rng.random_range(-0.6..0.6));
        let inner = rng.random_range(0.0..0.4);
        let outer = inner + rng.random_range(0.1..0.8);
        cases.push((cell, c, inner, outer));
    }
    let (d, picks) = voronoi_cells(5);
    for k in picks {
        let cell = d.cell(k).clone();
        let j = (k + 3) % d.len();
        let x = d.site(j);
        let inner = rng.random_range(0.0..0.05);
        let outer = x.dist(d.site(k)) + rng.random_range(-0.05..0.1);
        cases.push((cell, x, inner, outer.max(inner + 0.02)));
    }
    assert_eq!(cases.len(), 50);
    let mut bad = Vec::new();
    for (i, (cell, x, inner, outer)) in cases.iter().enumerate() {
        let (exact, mc, se) = check_pair(cell, *x, *inner, *outer, 100 + i as u64);
        if (exact - mc).abs() > 3.0 * se + 1e-15 {
            bad.push(format!("case {i}: exact {exact} vs MC {mc} ± {se}"));
        }
    }
    assert!(bad.is_empty(), "{bad:#?}");
}

#[test]
fn shoelace_and_polygon_area_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..100 {
        let p = random_convex(&mut rng);
        let v: Vec<Pt> = p.vertices().iter().copied().map(pt).collect();
        assert!((shoelace_area(&v) - p.area()).abs() <= 1e-12 * p.area());
    }
}

#[test]
fn partition_area_equals_padded_domain() {
    for (g, seed) in [
        (Generator::Lattice, 0),
        (Generator::Jittered { jitter: 0.3 }, 1),
        (Generator::Hex, 2),
        (Generator::PoissonDisk, 3),
    ] {
        let omega = Rect::new(Point2::new(0.0, 0.0), Point2::new(0.2, 0.2)).unwrap();
        let domain = DomainSpec::new(omega, 0.1).unwrap();
        let sites = g.generate(domain.omega_h(), 0.02, seed).unwrap();
        let d = VoronoiDecomposition::build(domain, sites).unwrap();
        let total: f64 = d.cells().iter().map(|c| c.area()).sum();
        let want = domain.omega_h().area();
        assert!(
            (total - want).abs() <= 1e-9 * want,
            "{}: {total} vs {want}",
            g.name()
        );
    }
}

#[test]
fn cells_are_nearest_site_regions() {
    let (d, _) = voronoi_cells(8);
    let sites: Vec<Pt> = d.sites().iter().copied().map(pt).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let r = d.omega_h();
    for _ in 0..2000 {
        let p = Point2::new(
            rng.random_range(r.min.x1..r.max.x1),
            rng.random_range(r.min.x2..r.max.x2),
        );
        let k = mps_oracle::nearest_index(&sites, pt(p));
        assert!(
            d.cell(k).contains(p),
            "{p} not in the cell of its nearest site {k}"
        );
    }
}

#[test]
fn r_sigma_is_the_largest_vertex_distance() {
    let (d, _) = voronoi_cells(4);
    let brute = (0..d.len())
        .map(|i| d.cell(i).max_distance_from(d.site(i)))
        .fold(0.0, f64::max);
    assert_eq!(d.r_sigma(), brute);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn annulus_areas_are_additive(seed in 0u64..10_000, split in 0.1f64..0.9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cell = random_convex(&mut rng);
        let x = cell.centroid() + Point2::new(rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5));
        let (a, b) = (0.05, 1.2);
        let m = a + split * (b - a);
        let whole = cell_annulus_area(&cell, x, a, b);
        let parts = cell_annulus_area(&cell, x, a, m) + cell_annulus_area(&cell, x, m, b);
        prop_assert!((whole - parts).abs() <= 1e-12);
        prop_assert!(whole <= cell.area() + 1e-12);
        prop_assert!(whole <= std::f64::consts::PI * (b * b - a * a) + 1e-12);
    }

    #[test]
    fn jittered_tilings_cover_exactly(seed in 0u64..1000, jitter in 0.0f64..0.45) {
        let omega = Rect::new(Point2::new(0.0, 0.0), Point2::new(0.3, 0.2)).unwrap();
        let domain = DomainSpec::new(omega, 0.05).unwrap();
        let sites = Generator::Jittered { jitter }.generate(domain.omega_h(), 0.03, seed).unwrap();
        let n = sites.len();
        let d = VoronoiDecomposition::build(domain, sites).unwrap();
        prop_assert_eq!(d.len(), n);
        let total: f64 = d.cells().iter().map(|c| c.area()).sum();
        prop_assert!((total - domain.omega_h().area()).abs() <= 1e-9 * domain.omega_h().area());
        for i in 0..n {
            prop_assert!(d.cell(i).contains(d.site(i)));
        }
    }
}
