use osculant::projection::project_iterated;
use osculant::projective::intersect_osculating;
use osculant::tangency::RootCounter;
use osculant::{build_model, dual_curve, normalize, osculating_subspace, ModelKind, ParamCurve, ProjPoint, Tolerances};
use proptest::prelude::*;

fn model(rn: bool, n: usize) -> ParamCurve {
    let kind = if rn { ModelKind::RationalNormal } else { ModelKind::TrigConvex };
    build_model(kind, n).unwrap()
}

fn nonzero_vec(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0f64..10.0, len).prop_filter("nonzero", |v| v.iter().any(|x| x.abs() > 1e-3))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normalize_is_idempotent_and_scale_free(v in nonzero_vec(5), s in prop_oneof![-50.0f64..-0.01, 0.01f64..50.0]) {
        let p = normalize(&v).unwrap();
        let again = normalize(p.coords()).unwrap();
        prop_assert!(p.distance(&again) < 1e-15);
        let scaled: Vec<f64> = v.iter().map(|x| x * s).collect();
        let q = normalize(&scaled).unwrap();
        prop_assert!(p.distance(&q) < 1e-12);
        prop_assert!((p.coords().iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn osculating_flag_is_nested(rn in any::<bool>(), n in 2usize..=6, t in 0.0f64..7.0) {
        let tol = Tolerances::default();
        let c = model(rn, n);
        let mut prev = osculating_subspace(&c, t, 0, &tol).unwrap();
        prop_assert!(prev.contains(&ProjPoint::from_vector(&c.eval(t)).unwrap(), &tol));
        for k in 1..=n {
            let next = osculating_subspace(&c, t, k, &tol).unwrap();
            prop_assert_eq!(next.dim(), k as isize);
            prop_assert!(next.contains_subspace(&prev, &tol));
            prev = next;
        }
    }

    #[test]
    fn intersection_ignores_moment_order(rn in any::<bool>(), ts in prop::collection::vec(0.0f64..3.1, 3), k0 in 1usize..=2) {
        let tol = Tolerances::default();
        let c = model(rn, 4);
        let moments = vec![(ts[0], k0), (ts[1], 1), (ts[2], 1)];
        let mut rev = moments.clone();
        rev.reverse();
        let a = intersect_osculating(&c, &moments, &tol);
        let b = intersect_osculating(&c, &rev, &tol);
        match (a, b) {
            (Ok(a), Ok(b)) => {
                prop_assert_eq!(a.dim(), b.dim());
                prop_assert!(a.contains_subspace(&b, &tol) && b.contains_subspace(&a, &tol));
            }
            (a, b) => prop_assert_eq!(a.is_ok(), b.is_ok()),
        }
    }

    #[test]
    fn jets_match_finite_differences(rn in any::<bool>(), n in 2usize..=5, t in 0.0f64..7.0) {
        let c = model(rn, n);
        let h = 1e-5;
        let jets = c.jet_rows(t, 2);
        let fd1 = (c.eval(t + h) - c.eval(t - h)) / (2.0 * h);
        let fd2 = (c.eval(t + h) - c.eval(t) * 2.0 + c.eval(t - h)) / (h * h);
        let scale = jets.row(0).norm().max(1.0);
        prop_assert!((fd1 - jets.row(1).transpose()).norm() < 1e-7 * scale * 10.0);
        prop_assert!((fd2 - jets.row(2).transpose()).norm() < 1e-3 * scale);
    }

    #[test]
    fn root_count_parity_on_convex_models(rn in any::<bool>(), n in 2usize..=5, v in nonzero_vec(6)) {
        let tol = Tolerances::default();
        let c = model(rn, n);
        let p = normalize(&v[..=n]).unwrap();
        let counter = RootCounter::new(&c, &tol).unwrap();
        if let Ok(rc) = counter.count(&p) {
            prop_assert!(rc.total <= n);
            prop_assert_eq!(rc.total % 2, n % 2);
        }
    }

    #[test]
    fn projection_counts_ignore_moment_order(t1 in 0.1f64..3.0, gap in 0.2f64..2.5, v in nonzero_vec(4)) {
        let tol = Tolerances::default();
        let c = model(false, 5);
        let t2 = t1 + gap;
        let a = project_iterated(&c, &[t1, t2], &tol).unwrap();
        let b = project_iterated(&c, &[t2, t1], &tol).unwrap();
        let q = normalize(&v).unwrap();
        let p = a.to_ambient(&q).unwrap();
        let qb = b.to_internal(&p, &tol).unwrap();
        let ca = RootCounter::new(a.curve(), &tol).unwrap();
        let cb = RootCounter::new(b.curve(), &tol).unwrap();
        if let (Ok(x), Ok(y)) = (ca.count(&q), cb.count(&qb)) {
            prop_assert_eq!(x.total, y.total);
        }
    }
}

#[test]
fn bidual_is_the_curve() {
    let tol = Tolerances::default();
    for n in 2..=5 {
        for rn in [false, true] {
            let c = model(rn, n);
            let dd = dual_curve(&dual_curve(&c, &tol).unwrap(), &tol).unwrap();
            for k in 0..16 {
                let t = c.period() * k as f64 / 16.0 + 0.01;
                let a = ProjPoint::from_vector(&c.eval(t)).unwrap();
                let b = ProjPoint::from_vector(&dd.eval(t)).unwrap();
                assert!(a.distance(&b) < 1e-8, "{} at t = {t}", c.label());
            }
        }
    }
}
