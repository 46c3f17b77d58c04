use mps_core::bounds::{
    bound_report, corollary71_preset, multinomial_sum, taylor_remainder_bound, CorollaryPreset,
    CorollaryScenario, TheoremId,
};
use mps_core::context::NeighborContext;
use mps_core::functions::TestFunction;
use mps_core::geometry::{Point2, Rect};
use mps_core::study::{build_padded, select_focal, Generator};
use mps_core::weights::{indicator_weight, linear_taper_weight};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs())
}

/// `f(y) - Σ_{|α| ≤ m} ∂^α f(x) (y - x)^α / α!`
fn taylor_remainder(f: &TestFunction, m: u32, x: Point2, y: Point2) -> f64 {
    let fact = |n: u32| (1..=n).map(f64::from).product::<f64>();
    let d = y - x;
    let mut poly = 0.0;
    for k in 0..=m {
        for a1 in 0..=k {
            let a2 = k - a1;
            poly += f.derivative(a1, a2, x) * d.x1.powi(a1 as i32) * d.x2.powi(a2 as i32)
                / (fact(a1) * fact(a2));
        }
    }
    f.value(y) - poly
}

#[test]
fn taylor_remainder_respects_its_bound() {
    let region = Rect::new(Point2::new(-2.0, -2.0), Point2::new(2.0, 2.0)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let cases = [
        (TestFunction::Cubic, 2),
        (TestFunction::Cubic, 1),
        (TestFunction::Quadratic, 1),
        (TestFunction::SinCos, 1),
        (TestFunction::SinCos, 2),
    ];
    for (f, m) in cases {
        let semi = f.seminorm(m + 1, &region);
        for _ in 0..2000 {
            let p = |rng: &mut ChaCha8Rng| {
                Point2::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            };
            let (x, y) = (p(&mut rng), p(&mut rng));
            let r = taylor_remainder(&f, m, x, y);
            let bound = taylor_remainder_bound(m, x.dist(y), semi);
            assert!(
                r.abs() <= bound * (1.0 + 1e-12) + 1e-14,
                "{} m={m}: {r} > {bound}",
                f.name()
            );
        }
    }
    // x₁³ with m = 2 leaves exactly (y₁ - x₁)³.
    let (x, y) = (Point2::new(0.3, -0.1), Point2::new(-0.45, 0.7));
    let r = taylor_remainder(&TestFunction::Cubic, 2, x, y);
    assert!((r - (y.x1 - x.x1).powi(3)).abs() <= 1e-15);
}

#[test]
fn multinomial_sum_is_at_most_two() {
    assert_eq!(multinomial_sum(1), 2.0);
    assert_eq!(multinomial_sum(2), 2.0);
    for m in 1..=20 {
        let s = multinomial_sum(m);
        assert!(s <= 2.0, "m={m}: {s}");
        // Σ 1/(a!(m-a)!) = 2^m / m!
        let want = 2f64.powi(m as i32) / (1..=m).map(f64::from).product::<f64>();
        assert!(rel(s, want) <= 1e-13, "m={m}");
    }
}

fn lattice_context_rhs(
    r_target: f64,
    c_star: f64,
    theorem: TheoremId,
    f: &TestFunction,
) -> ([f64; 4], f64, f64) {
    let omega = Rect::new(Point2::new(0.0, 0.0), Point2::new(0.2, 0.2)).unwrap();
    let d = build_padded(Generator::Lattice, omega, None, r_target, c_star, 0).unwrap();
    let h = c_star * d.r_sigma();
    let choice = select_focal(&d, h, None).unwrap();
    let w = indicator_weight(choice.delta, h).unwrap();
    let ctx = NeighborContext::new(&d, &w, choice.focal, Some(0.5)).unwrap();
    let rep = bound_report(theorem, &ctx).unwrap();
    let rhs = rep.rhs(&f.seminorms(&d.omega_h()));
    (rep.coefficients, rhs, d.r_sigma())
}

/// On nested lattices at fixed `C_*` the gradient bound shrinks with `r_σ`.
/// The Laplacian bounds do not: their `|f|_{C¹}` coefficient grows like `1/r_σ`
/// while the `|f|_{C³}` coefficient shrinks like `r_σ`.
#[test]
fn refinement_at_fixed_c_star() {
    let f = TestFunction::SinCos;
    let (g_coarse, g_rhs_coarse, r0) = lattice_context_rhs(0.02, 10.0, TheoremId::Gradient, &f);
    let (g_fine, g_rhs_fine, r1) = lattice_context_rhs(0.01, 10.0, TheoremId::Gradient, &f);
    assert!(rel(r0, 2.0 * r1) <= 0.05, "{r0} {r1}");
    assert!(g_rhs_fine < g_rhs_coarse, "{g_rhs_fine} !< {g_rhs_coarse}");
    assert!(g_fine[2] < g_coarse[2]);
    for t in [TheoremId::Laplacian, TheoremId::AltLaplacian] {
        let (coarse, _, _) = lattice_context_rhs(0.02, 10.0, t, &f);
        let (fine, _, _) = lattice_context_rhs(0.01, 10.0, t, &f);
        assert!(
            rel(fine[1] * r1, coarse[1] * r0) <= 0.05,
            "{t}: {} vs {}",
            fine[1] * r1,
            coarse[1] * r0
        );
        assert!(
            rel(fine[3] / r1, coarse[3] / r0) <= 0.05,
            "{t}: {} vs {}",
            fine[3] / r1,
            coarse[3] / r0
        );
    }
}

/// Coefficients depend on `r_σ` only through `h`, `δ` and the sums, so a
/// uniform rescaling of the closed forms moves each by a fixed power.
#[test]
fn closed_forms_scale_with_r_sigma() {
    for (c, l) in [(4.0, 0.5), (10.0, 0.3), (16.0, 0.9)] {
        let a = CorollaryScenario::new(0.01, c, l).unwrap().general_forms();
        let b = CorollaryScenario::new(0.03, c, l).unwrap().general_forms();
        assert!(rel(3.0 * a[0].first, b[0].first) <= 1e-14);
        assert!(rel(a[0].second, b[0].second) <= 1e-14);
        assert!(rel(3.0 * a[1].first, b[1].first) <= 1e-14);
        assert!(rel(a[1].second, b[1].second) <= 1e-14);
        for k in 2..4 {
            assert!(rel(3.0 * a[k].first, b[k].first) <= 1e-14);
            assert!(rel(a[k].second, 3.0 * b[k].second) <= 1e-14);
        }
    }
}

#[test]
fn corollary_scenario_two() {
    let rep = corollary71_preset(CorollaryPreset::II).unwrap();
    let printed = rep.printed.unwrap();
    let want = [(0.05, 0.1), (0.16, 10.0), (0.96, 300.0), (0.96, 700.0)];
    for (p, (a, b)) in printed.iter().zip(want) {
        assert!(
            rel(p.first, a) <= 1e-12 && rel(p.second, b) <= 1e-12,
            "{p:?}"
        );
    }
    for (g, p) in rep.general.iter().zip(&printed) {
        assert!(g.dominated_by(p, 1e-12), "{g:?} exceeds {p:?}");
    }
    assert!(rel(rep.general[1].second, 4.0 + 73.0 / 15.75) <= 1e-12);
    for (g, a) in rep.general.iter().zip(&rep.via_constants) {
        assert!(rel(g.first, a.first) <= 1e-12 && rel(g.second, a.second) <= 1e-12);
    }
}

#[test]
fn corollary_scenario_one() {
    for m in [1u32, 2] {
        let rep = corollary71_preset(CorollaryPreset::I { m }).unwrap();
        let t = |e: i32| 10f64.powi(e);
        let mi = m as i32;
        let want = [
            (t(-mi) + t(-5 * mi), t(-(8 * mi - 1))),
            (4.0 * t(-mi), t(-(2 * mi - 1))),
            (24.0 * t(-mi), t(-(mi - 1))),
            (24.0 * t(-mi), 5.0 * t(-(mi - 1))),
        ];
        for (p, (a, b)) in rep.printed.unwrap().iter().zip(want) {
            assert!(
                rel(p.first, a) <= 1e-12 && rel(p.second, b) <= 1e-12,
                "m={m} {p:?}"
            );
        }
        assert_eq!(rep.printed_dominates(), Some(true), "m={m}");
    }
}

/// A geometric context with the taper weight yields positive, finite
/// coefficients for every theorem.
#[test]
fn geometric_reports_are_finite() {
    let omega = Rect::new(Point2::new(0.0, 0.0), Point2::new(0.2, 0.2)).unwrap();
    let d = build_padded(
        Generator::Jittered { jitter: 0.3 },
        omega,
        None,
        0.02,
        8.0,
        4,
    )
    .unwrap();
    let h = 8.0 * d.r_sigma();
    let choice = select_focal(&d, h, None).unwrap();
    let w = linear_taper_weight(choice.delta, h).unwrap();
    let ctx = NeighborContext::new(&d, &w, choice.focal, Some(0.5)).unwrap();
    for t in TheoremId::ALL {
        let rep = bound_report(t, &ctx).unwrap();
        assert!(
            rep.coefficients.iter().all(|c| c.is_finite() && *c >= 0.0),
            "{t}: {:?}",
            rep.coefficients
        );
        assert!(rep.coefficients.iter().any(|c| *c > 0.0));
    }
}
