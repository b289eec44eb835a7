use std::cmp::Ordering;

use kee_core::closed_form;
use kee_core::tvariety::{
    anticanonical_support_function, build_fdivisor, delta_tvariety, futaki_vanishes, legendre_dual, vol_psi,
};
use kee_core::verdict::{condition_sign, delta_upper_bound, k_polystable, rational_condition_point, Status};
use kee_core::zariski::{check_decomposition, volume};
use kee_core::*;
use proptest::prelude::*;

fn q(n: i64, d: i64) -> Rat {
    Rat::from_frac(n, d)
}

/// `(n, m, β)` with `β` strictly inside the ample box.
fn ample_input() -> impl Strategy<Value = (SurfaceParams, Angles<Rat>)> {
    (0u32..=6, 0usize..=6, 1i64..64, 1i64..64).prop_map(|(n, m, t1, t2)| {
        // t/64 of the way to each upper bound, where 2 stands in for none.
        let cap = |k: i64| if k > 0 { q(2, k) } else { q(2, 1) };
        let b1 = cap(n as i64) * q(t1, 64);
        let b2 = cap(m as i64 - n as i64) * q(t2, 64);
        (SurfaceParams::new(n, m), Angles::new(b1, b2).unwrap())
    })
}

fn curve_for(m: usize, pick: usize) -> CurveId {
    let mut ids = vec![
        CurveId::C1Tilde,
        CurveId::C2Tilde,
        CurveId::GenericFiber,
        CurveId::PullbackC2,
    ];
    if m > 0 {
        ids.extend([CurveId::E(1 + pick % m), CurveId::FTilde(1 + pick % m)]);
    }
    ids[pick % ids.len()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn strategy_stays_ample((params, angles) in ample_input()) {
        prop_assert!(make_surface(params).ample_angle_range(&angles));
    }

    #[test]
    fn volume_curves_are_well_formed((params, angles) in ample_input(), pick in 0usize..12) {
        let model = make_surface(params);
        let curve = curve_for(params.m, pick);
        let vc = volume_curve(&model, curve, &angles).unwrap();
        let l = model.log_anticanonical(&angles);
        let e = model.class_of::<Rat>(curve).unwrap();
        prop_assert!(vc.is_continuous());
        prop_assert!(vc.is_nonincreasing());
        prop_assert_eq!(vc.pieces[0].lo.clone(), q(0, 1));
        prop_assert_eq!(vc.eval(&q(0, 1)).unwrap(), model.intersect(&l, &l).unwrap());
        prop_assert_eq!(vc.eval(&vc.tau()).unwrap(), q(0, 1));
        prop_assert_eq!(
            vc.pieces[0].poly.derivative_at(&q(0, 1)),
            -(q(2, 1) * model.intersect(&l, &e).unwrap())
        );
        // Inside each chamber the volume is the Zariski volume.
        for p in &vc.pieces {
            let mid = (p.lo.clone() + p.hi.clone()) / q(2, 1);
            let d = l.clone() - e.scale(&mid);
            prop_assert_eq!(volume(&model, &d).unwrap(), p.poly.eval(&mid));
        }
    }

    #[test]
    fn section_s_values_are_symmetric((params, angles) in ample_input()) {
        let model = make_surface(params);
        let s1 = expected_vanishing_order(&model, CurveId::C1Tilde, &angles).unwrap();
        let s2 = expected_vanishing_order(&model, CurveId::C2Tilde, &angles).unwrap();
        prop_assert_eq!(angles.beta1.clone() - s1.clone(), s2.clone() - angles.beta2.clone());
        let on = condition_sign(params, &angles) == Ordering::Equal;
        prop_assert_eq!(s1 == angles.beta1, on);
        prop_assert_eq!(futaki_vanishes(params, &angles), condition_sign(params, &angles));
    }

    #[test]
    fn decompositions_along_the_curve_certify((params, angles) in ample_input(), pick in 0usize..12, t in 0i64..=16) {
        let model = make_surface(params);
        let curve = curve_for(params.m, pick);
        let tau = threshold(&model, curve, &angles).unwrap();
        let x = tau * q(t, 16);
        let d = model.log_anticanonical(&angles) - model.class_of::<Rat>(curve).unwrap().scale(&x);
        let zd = zariski_decompose(&model, &d).unwrap();
        check_decomposition(&model, &d, &zd).unwrap();
    }

    #[test]
    fn volume_grows_along_effective_directions((params, angles) in ample_input(), pick in 0usize..12, t in 1i64..=8) {
        let model = make_surface(params);
        let l = model.log_anticanonical(&angles);
        let e = model.class_of::<Rat>(curve_for(params.m, pick)).unwrap();
        let bigger = l.clone() + e.scale(&q(t, 4));
        prop_assert!(volume(&model, &bigger).unwrap() >= volume(&model, &l).unwrap());
    }

    #[test]
    fn dual_is_concave_and_halves_the_volume((params, angles) in ample_input()) {
        let model = make_surface(params);
        let d = legendre_dual(&anticanonical_support_function(&build_fdivisor(params), &angles));
        for f in std::iter::once(&d.psi_p0).chain(&d.psi_marked).chain([&d.psi_generic, &d.deg_psi]) {
            prop_assert!(f.is_concave() && f.is_continuous());
        }
        let l = model.log_anticanonical(&angles);
        prop_assert_eq!(vol_psi(&d) * q(2, 1), model.intersect(&l, &l).unwrap());
        prop_assert_eq!(vol_psi(&d), closed_form::vol_psi(params, &angles));
    }

    #[test]
    fn routes_agree_and_bound_delta((params, angles) in ample_input()) {
        let model = make_surface(params);
        let report = delta_tvariety(params, &angles).unwrap();
        for (v, t) in &report.terms {
            prop_assert_eq!(t.clone(), stability_ratio(&model, v.curve(), &angles).unwrap(), "{}", v);
        }
        prop_assert!(report.witnesses.iter().all(|w| report.terms[w] == report.delta));
        let (bound, _) = delta_upper_bound(params, &angles).unwrap();
        prop_assert!(report.delta <= bound && bound <= q(1, 1));
    }

    #[test]
    fn condition_points_are_polystable_unless_m_is_one(n in 0u32..=6, m in 0usize..=6, sn in 1i64..=40) {
        let params = SurfaceParams::new(n, m);
        let s = q(sn, 20);
        if let Ok(angles) = rational_condition_point(params, &s) {
            prop_assert_eq!(condition_sign(params, &angles), Ordering::Equal);
            let v = k_polystable(params, &angles).unwrap();
            let expected = if m == 1 { Status::NotKPolystable } else { Status::KPolystable };
            prop_assert_eq!(v.status, expected);
        }
    }
}

#[test]
fn float_instantiation_tracks_the_exact_one() {
    let params = SurfaceParams::new(1, 3);
    let exact = Angles::new(q(1, 3), q(2, 5)).unwrap();
    let approx = Angles::new(1.0 / 3.0, 0.4).unwrap();
    let model = make_surface(params);
    let r_exact = stability_ratio(&model, CurveId::E(2), &exact).unwrap();
    let r_f64 = stability_ratio(&model, CurveId::E(2), &approx).unwrap();
    assert!((r_exact.to_f64() - r_f64).abs() < 1e-12);
    let d32 = delta_tvariety(params, &Angles::new(1.0f32 / 3.0, 0.4).unwrap()).unwrap();
    let d_exact = delta_tvariety(params, &exact).unwrap();
    assert!((d_exact.delta.to_f64() - d32.delta as f64).abs() < 1e-5);
}
