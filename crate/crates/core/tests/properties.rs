use std::f64::consts::PI;

use proptest::prelude::*;

use hypack::density::{density_curve, Evaluation};
use hypack::hgeom::{ball_area, distance, BallSpec, EuclidCircle, HDisk, HPoint, Isometry};
use hypack::index::PointIndex;
use hypack::packings::{
    disjointness_gap, BoroczkyPacking, Packing, StripeModel, TightPacking, Transformed,
};
use hypack::regions::{mc_area_fraction, quad_black_fraction, quad_stripe_area, SamplePlan};
use hypack::pspace::hausdorff_distance;

fn point() -> impl Strategy<Value = HPoint> {
    (-5.0..5.0f64, -3.0..3.0f64).prop_map(|(x, ly)| HPoint::from_log(x, ly).unwrap())
}

fn isometry() -> impl Strategy<Value = Isometry> {
    (-3.0..3.0f64, -2.0..2.0f64, 0.0..(2.0 * PI)).prop_map(|(t, l, th)| {
        Isometry::translation(t)
            .compose(&Isometry::dilation(l.exp()).unwrap())
            .compose(&Isometry::rotation_at_origin(th))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn isometries_preserve_distance(g in isometry(), p in point(), q in point()) {
        let d = distance(&p, &q);
        let gd = distance(&g.apply(&p).unwrap(), &g.apply(&q).unwrap());
        prop_assert!((gd - d).abs() <= 1e-9 * d.max(1.0), "{d} {gd}");
    }

    #[test]
    fn compose_with_inverse_is_identity(g in isometry()) {
        prop_assert!(g.compose(&g.inverse()).normalized().approx_eq(&Isometry::IDENTITY, 1e-12));
        prop_assert!(g.inverse().compose(&g).normalized().approx_eq(&Isometry::IDENTITY, 1e-12));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn disk_euclidean_form_round_trip(c in point(), lr in (1e-3f64).ln()..(12.0f64).ln()) {
        let r = lr.exp();
        let d = HDisk::new(c, r).unwrap();
        let e = d.euclidean_form();
        // rounding in k - r grows like e^{2r}
        let tol = 1e-12 * r + 4.0 * f64::EPSILON * (2.0 * r).exp();
        // the circle's top and bottom heights multiply to the centre height squared
        prop_assert!((((e.k - e.r) * (e.k + e.r)).sqrt() / c.y() - 1.0).abs() <= tol.max(1e-10));
        prop_assert!((e.h - c.x()).abs() == 0.0);
        let back = HDisk::from_euclidean(&EuclidCircle { h: e.h, k: e.k, r: e.r }).unwrap();
        prop_assert!((back.radius - r).abs() <= tol.max(1e-10 * r));
        prop_assert!(distance(&back.center, &c) <= tol.max(1e-10));
    }

    #[test]
    fn boundary_points_lie_on_the_circle(c in point(), r in 0.01..8.0f64, th in 0.0..(2.0 * PI)) {
        let d = HDisk::new(c, r).unwrap();
        let e = d.euclidean_form();
        let q = Isometry::from_origin(&c)
            .compose(&Isometry::rotation_at_origin(th))
            .apply(&HPoint::from_log(0.0, r).unwrap())
            .unwrap();
        prop_assert!((distance(&q, &c) - r).abs() <= 1e-9 * r.max(1.0));
        let off = (q.x() - e.h).hypot(q.y() - e.k) - e.r;
        prop_assert!(off.abs() <= 1e-9 * e.r.max(1.0), "{off}");
    }
}

#[test]
fn area_ratio_tends_to_exponential() {
    for r in [0.5, 1.0, 2.0] {
        let err = ball_area(30.0 - r) / ball_area(30.0) - (-r).exp();
        assert!(err.abs() <= 1e-6, "{r}: {err}");
    }
}

#[test]
fn stripe_areas_partition_the_ball() {
    for w in [1.0, 3.0, 5.0] {
        for n in 2..=8 {
            let radius = (n as f64 + 0.5) * w;
            let lo = (-radius / w - 1.5).floor() as i64;
            let hi = (radius / w + 0.5).ceil() as i64;
            let sum: f64 = (lo..=hi).map(|j| quad_stripe_area(j, radius, w).unwrap()).sum();
            // below lo the bands are empty; the real area sits in the sum
            assert!((sum / ball_area(radius) - 1.0).abs() <= 1e-6, "W={w} N={n}: {sum}");
        }
    }
}

#[test]
fn stripe_area_asymptotics() {
    let (w, radius) = (6.0, 51.0);
    for j in -4..=4 {
        let a = quad_stripe_area(j, radius, w).unwrap();
        let approx = 4.0 * (radius / 2.0 - (j as f64 + 0.5) * w / 2.0).exp();
        assert!((a / approx - 1.0).abs() <= 0.1, "j={j}: {}", a / approx);
    }
}

#[test]
fn stripe_horocycles_are_w_apart() {
    let s = StripeModel::new(1.7).unwrap();
    for j in -5..=5 {
        let d = distance(&HPoint::new(0.0, s.horocycle(j)), &HPoint::new(0.0, s.horocycle(j + 1)));
        assert!((d - 1.7).abs() <= 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn stripe_mc_agrees_with_quadrature(w in 0.5..6.0f64, radius in 0.5..12.0f64, seed in any::<u64>()) {
        let s = StripeModel::new(w).unwrap();
        let est = mc_area_fraction(&s, &BallSpec::at_origin(radius).unwrap(), &SamplePlan::new(seed, 40_000).unwrap());
        let exact = quad_black_fraction(radius, w).unwrap();
        prop_assert!((est.fraction - exact).abs() <= 4.0 * est.std_error.max(1e-4), "{} {exact}", est.fraction);
    }

    #[test]
    fn stripe_curve_mc_matches_exact(w in 0.5..4.0f64, seed in any::<u64>()) {
        let s = StripeModel::new(w).unwrap();
        let radii = [1.0, 3.0, 5.0];
        let plan = SamplePlan::new(seed, 20_000).unwrap();
        let mc = density_curve(&s, &HPoint::ORIGIN, &radii, &plan, Evaluation::ForceMc).unwrap();
        let exact = density_curve(&s, &HPoint::ORIGIN, &radii, &plan, Evaluation::Auto).unwrap();
        for (a, b) in mc.points.iter().zip(&exact.points) {
            prop_assert_eq!(b.std_error, 0.0);
            prop_assert!((a.fraction - b.fraction).abs() <= 4.0 * a.std_error.max(1e-4));
        }
    }

    #[test]
    fn covered_area_grows_with_the_ball(w in 0.5..6.0f64, r0 in 0.1..10.0f64, dr in 0.01..3.0f64) {
        let a0 = quad_black_fraction(r0, w).unwrap() * ball_area(r0);
        let a1 = quad_black_fraction(r0 + dr, w).unwrap() * ball_area(r0 + dr);
        prop_assert!(a1 >= a0 * (1.0 - 1e-9));
    }

    #[test]
    fn density_curve_is_equivariant(g in isometry(), c in point(), seed in any::<u64>()) {
        let t = TightPacking::new(7).unwrap();
        let radii = [1.0, 2.5];
        let plan = SamplePlan::new(seed, 20_000).unwrap();
        let a = density_curve(&t, &c, &radii, &plan, Evaluation::ForceMc).unwrap();
        let gt = Transformed::new(t.clone(), g);
        let b = density_curve(&gt, &g.apply(&c).unwrap(), &radii, &plan.reseeded(seed ^ 1), Evaluation::ForceMc).unwrap();
        for (x, y) in a.points.iter().zip(&b.points) {
            prop_assert!((x.fraction - y.fraction).abs() <= 4.0 * x.std_error.hypot(y.std_error).max(1e-4));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn packings_are_disjoint_in_random_windows(c in point(), r in 0.5..3.5f64, m in 7u32..=9) {
        let b = BallSpec::new(c, r).unwrap();
        let disks = BoroczkyPacking::maximal().bodies_in_ball(&b).unwrap();
        prop_assert!(disjointness_gap(&disks) >= -1e-9);
        let disks = TightPacking::new(m).unwrap().bodies_in_ball(&b).unwrap();
        prop_assert!(disjointness_gap(&disks) >= -1e-9);
    }

    #[test]
    fn boroczky_is_dilation_invariant(c in point(), r in 0.5..3.0f64) {
        let p = BoroczkyPacking::maximal();
        let g = Isometry::dilation(2f64.exp()).unwrap();
        let b = BallSpec::new(c, r).unwrap();
        let here: Vec<HPoint> = p.bodies_in_ball(&b).unwrap().iter().map(|d| g.apply(&d.center).unwrap()).collect();
        let there = p.bodies_in_ball(&b.transformed(&g).unwrap()).unwrap();
        prop_assert_eq!(here.len(), there.len());
        let idx = PointIndex::from_points(there.iter().map(|d| d.center), 0.5);
        for q in &here {
            prop_assert!(idx.nearest(q).unwrap().1 <= 1e-9);
        }
    }
}

#[test]
fn tight_packing_rotation_symmetry() {
    for m in [7u32, 8] {
        let t = TightPacking::new(m).unwrap();
        let big = BallSpec::at_origin(4.0).unwrap();
        let centers: Vec<HPoint> = t.bodies_in_ball(&big).unwrap().iter().map(|d| d.center).collect();
        for v in centers.iter().filter(|v| distance(v, &HPoint::ORIGIN) < 1.5).take(4) {
            let rot = Isometry::rotation(v, 2.0 * PI / m as f64);
            let small = BallSpec::new(*v, 2.0).unwrap();
            let a: Vec<HPoint> = centers.iter().filter(|p| small.contains(p)).copied().collect();
            let b: Vec<HPoint> = a.iter().map(|p| rot.apply(p).unwrap()).collect();
            // rotated points must land on centres; compare against the full set
            let idx = PointIndex::from_points(centers.iter().copied(), 0.5);
            for q in &b {
                assert!(idx.nearest(q).unwrap().1 <= 1e-6);
            }
            assert!(hausdorff_distance(&a, &b).unwrap() <= 1e-6);
        }
    }
}

#[test]
fn monte_carlo_ignores_thread_count() {
    let s = StripeModel::new(2.0).unwrap();
    let b = BallSpec::new(HPoint::new(0.3, 2.0), 4.0).unwrap();
    let plan = SamplePlan::new(77, 50_000).unwrap();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| mc_area_fraction(&s, &b, &plan))
    };
    let one = run(1);
    for t in [2, 3, 8] {
        let other = run(t);
        assert_eq!(one.fraction.to_bits(), other.fraction.to_bits());
        assert_eq!(one.std_error.to_bits(), other.std_error.to_bits());
    }
}
