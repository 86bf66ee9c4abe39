mod common;

use osculant::convexity::{check_convex_criterion, check_convex_sampling, random_point, Verdict, Witness};
use osculant::discriminant::sample_discriminant;
use osculant::projection::{project_iterated, project_onto_osculating_hyperplane, recursion_check};
use osculant::stratification::{
    component_census, elliptic_hull_membership, factor_binary_form, hull_center, stratum_label, tangency_data,
    EllipticHull, DEFAULT_TAU_GRID,
};
use osculant::tangency::{sturm_count, BinaryForm, RootCounter};
use osculant::{build_model, count_roots, dual_curve, normalize, order_of_tangency, Error, ModelKind, Tolerances};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn tol() -> Tolerances {
    Tolerances::default()
}

#[test]
fn non_convex_space_curve_fails_both_checks() {
    let c = common::non_convex_space_curve();
    let s = check_convex_sampling(&c, 4000, 5, &tol()).unwrap();
    assert_eq!(s.verdict, Verdict::Fail);
    match s.witness {
        Some(Witness::Point { ref roots, .. }) => assert!(roots.total > 3),
        ref w => panic!("unexpected witness {w:?}"),
    }
    let k = check_convex_criterion(&c, 200, 5, &tol()).unwrap();
    assert_eq!(k.verdict, Verdict::Fail);
    assert!(matches!(k.witness, Some(Witness::Moments { dim, .. }) if dim > 0));
}

#[test]
fn non_convex_plane_curve_has_no_hull() {
    let c = common::non_convex_plane_curve();
    assert!(matches!(hull_center(&c, 64, &tol()), Err(Error::Geometry(_))));
}

#[test]
fn duals_of_models_are_convex() {
    for kind in [ModelKind::TrigConvex, ModelKind::RationalNormal] {
        for n in 2..=4 {
            let d = dual_curve(&build_model(kind, n).unwrap(), &tol()).unwrap();
            assert!(check_convex_sampling(&d, 1000, 1, &tol()).unwrap().passed());
            assert!(check_convex_criterion(&d, 60, 1, &tol()).unwrap().passed());
        }
    }
}

#[test]
fn projections_stay_convex_and_satisfy_recursion() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for n in 3..=5 {
        let c = build_model(ModelKind::TrigConvex, n).unwrap();
        for _ in 0..4 {
            let k = rng.random_range(1..=n - 2);
            let moments: Vec<f64> = (0..k).map(|_| rng.random_range(0.0..c.period())).collect();
            let proj = project_iterated(&c, &moments, &tol()).unwrap();
            assert_eq!(proj.curve().dim(), n - k);
            assert!(check_convex_sampling(proj.curve(), 500, 2, &tol()).unwrap().passed());
            assert!(recursion_check(&proj, 30, 2, &tol()).unwrap().holds());
        }
    }
}

#[test]
fn circle_projection_drops_one_root() {
    let c = build_model(ModelKind::TrigConvex, 2).unwrap();
    let proj = project_onto_osculating_hyperplane(&c, 0.8, &tol()).unwrap();
    assert_eq!(proj.curve().dim(), 1);
    let r = recursion_check(&proj, 40, 4, &tol()).unwrap();
    assert!(r.holds(), "{r:?}");
}

#[test]
fn merged_moments_project_into_deeper_subspace() {
    let c = build_model(ModelKind::RationalNormal, 5).unwrap();
    let proj = project_iterated(&c, &[0.7, 0.7], &tol()).unwrap();
    let flag = osculant::osculating_subspace(&c, 0.7, 3, &tol()).unwrap();
    assert!(proj.ambient().contains_subspace(&flag, &tol()) && flag.contains_subspace(proj.ambient(), &tol()));
}

#[test]
fn hull_midpoints_are_members() {
    for n in [2, 4] {
        let c = build_model(ModelKind::TrigConvex, n).unwrap();
        let hull = EllipticHull::new(&c, DEFAULT_TAU_GRID, &tol()).unwrap();
        let counter = RootCounter::new(&c, &tol()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut members = Vec::new();
        while members.len() < 40 {
            let p = random_point(&mut rng, n);
            if counter.count(&p).map(|r| r.total == 0).unwrap_or(false) {
                members.push(p);
            }
        }
        for pair in members.chunks(2) {
            let chart = hull.chart();
            let a = pair[0].to_vector() / chart.dot(&pair[0].to_vector());
            let b = pair[1].to_vector() / chart.dot(&pair[1].to_vector());
            let mid = osculant::ProjPoint::from_vector(&((a + b) * 0.5)).unwrap();
            assert!(hull.contains(&mid).unwrap());
        }
    }
}

#[test]
fn odd_hull_members_have_one_moment() {
    let c = build_model(ModelKind::RationalNormal, 3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut seen = 0;
    while seen < 30 {
        let p = random_point(&mut rng, 3);
        if !elliptic_hull_membership(&c, &p, &tol()).unwrap() {
            continue;
        }
        let d = tangency_data(&c, &p, &tol()).unwrap();
        assert_eq!(d.index, 1);
        assert_eq!(d.moments.len(), 1);
        assert!(d.fiber.unwrap().radius < 1.0);
        seen += 1;
    }
}

#[test]
fn trig_quartic_hull_center_has_no_roots() {
    let c = build_model(ModelKind::TrigConvex, 4).unwrap();
    let center = hull_center(&c, 128, &tol()).unwrap();
    assert_eq!(count_roots(&c, &center, &tol()).unwrap().total, 0);
    assert_eq!(stratum_label(&c, &center, &tol()).unwrap(), 2);
}

#[test]
fn census_examples() {
    let cases = [
        (ModelKind::TrigConvex, 2, vec![0, 2]),
        (ModelKind::TrigConvex, 4, vec![0, 2, 4]),
        (ModelKind::RationalNormal, 3, vec![1, 3]),
    ];
    for (kind, n, support) in cases {
        let r = component_census(&build_model(kind, n).unwrap(), 1500, 5, &tol()).unwrap();
        assert_eq!(r.support(), support);
        assert_eq!(r.components, support.len());
    }
}

#[test]
fn census_is_deterministic() {
    let c = build_model(ModelKind::RationalNormal, 4).unwrap();
    let a = component_census(&c, 300, 9, &tol()).unwrap();
    let b = component_census(&c, 300, 9, &tol()).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn random_product_forms_factor_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..20 {
        let real = rng.random_range(0..=3usize);
        let quads = rng.random_range(0..=2usize);
        let mut f = BinaryForm::from_ints(&[rng.random_range(1..5)]).unwrap();
        for _ in 0..real {
            f = f.mul(&BinaryForm::from_ints(&[rng.random_range(-4..=4), rng.random_range(1..=5)]).unwrap());
        }
        for _ in 0..quads {
            let b: i64 = rng.random_range(-3..=3);
            let c = b * b / 4 + rng.random_range(1..=4);
            f = f.mul(&BinaryForm::from_ints(&[1, b, c]).unwrap());
        }
        let (r, q) = factor_binary_form(&f).unwrap();
        assert_eq!(r.mul(&q), f);
        assert_eq!(r.degree(), sturm_count(&f, true));
        assert_eq!(sturm_count(&r, true), r.degree());
        assert_eq!(sturm_count(&q, true), 0);
    }
}

#[test]
fn tangent_developable_spot_check() {
    let c = build_model(ModelKind::RationalNormal, 3).unwrap();
    let s = sample_discriminant(&c, 25, 4, &tol()).unwrap();
    for i in 0..s.len() {
        let p = s.point(i).unwrap();
        let t = s.points[i].t;
        assert!(order_of_tangency(&c, &p, t, &tol()).unwrap() >= 2);
        match count_roots(&c, &p, &tol()) {
            Ok(rc) => {
                let double = rc.tangencies.iter().any(|z| z.m >= 2);
                let label = stratum_label(&c, &p, &tol());
                assert!(double || matches!(label, Err(Error::OnDiscriminant(_))), "{rc:?}");
            }
            Err(e) => assert!(e.is_precision(), "{e}"),
        }
    }
}

#[test]
fn point_far_outside_quartic_chart() {
    let c = build_model(ModelKind::TrigConvex, 4).unwrap();
    let p = normalize(&[1.0, 0.0, 0.0, 10.0, 0.0]).unwrap();
    assert_eq!(count_roots(&c, &p, &tol()).unwrap().total, 4);
    assert!(!elliptic_hull_membership(&c, &p, &tol()).unwrap());
}
