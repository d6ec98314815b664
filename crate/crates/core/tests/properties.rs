use approx::assert_relative_eq;
use proptest::prelude::*;

use casimir_neq::cli::{preset_cannex, preset_gold, ModelChoice};
use casimir_neq::nonequilibrium::{evanescent_integrand, plate_blackbody, propagating_integrand};
use casimir_neq::quadrature::integrate_adaptive;
use casimir_neq::{
    blackbody_term, delta_p_neq, pressure_eq, total_pressure, DielectricModel, LayeredPlate, PlateIndex,
    QuadratureSettings, SystemConfig,
};

fn coating(drude: bool) -> DielectricModel {
    if drude {
        DielectricModel::gold_drude()
    } else {
        DielectricModel::gold_plasma()
    }
}

fn pair(drude: bool, d1: f64, d2: f64, eps1: f64, eps2: f64, a: f64) -> SystemConfig {
    SystemConfig {
        plate1: LayeredPlate::new(coating(drude), d1, DielectricModel::constant(eps1)),
        plate2: LayeredPlate::new(coating(drude), d2, DielectricModel::constant(eps2)),
        separation: a,
        t1: 300.0,
        t2: 310.0,
        t3: 300.0,
    }
}

fn swapped_plates(cfg: &SystemConfig) -> SystemConfig {
    SystemConfig {
        plate1: cfg.plate2.clone(),
        plate2: cfg.plate1.clone(),
        ..cfg.clone()
    }
}

fn settings(tol: f64) -> QuadratureSettings {
    QuadratureSettings::default().with_rel_tol(tol)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn identical_plates_have_no_integrand(
        drude in any::<bool>(),
        d_nm in 20.0f64..2000.0,
        eps in 1.0f64..15.0,
        u in 0.01f64..200.0,
        c in 0.0f64..=1.0,
        s in 0.0f64..50.0,
    ) {
        let cfg = pair(drude, d_nm * 1e-9, d_nm * 1e-9, eps, eps, 3e-6);
        prop_assert_eq!(propagating_integrand(&cfg, u, c).unwrap(), [0.0, 0.0]);
        prop_assert_eq!(evanescent_integrand(&cfg, u, s).unwrap(), [0.0, 0.0]);
    }

    #[test]
    fn propagating_integrand_flips_with_the_plates(
        drude in any::<bool>(),
        d1_nm in 20.0f64..2000.0,
        d2_nm in 20.0f64..2000.0,
        u in 0.01f64..200.0,
        c in 0.0f64..=1.0,
    ) {
        let cfg = pair(drude, d1_nm * 1e-9, d2_nm * 1e-9, 11.66, 3.81, 4e-6);
        let f = propagating_integrand(&cfg, u, c).unwrap();
        let g = propagating_integrand(&swapped_plates(&cfg), u, c).unwrap();
        for i in 0..2 {
            prop_assert!((f[i] + g[i]).abs() <= 1e-13 * f[i].abs(), "{:?} {:?}", f, g);
        }
    }

    #[test]
    fn integrand_vanishes_linearly_as_thicknesses_meet(
        d_nm in 30.0f64..300.0,
        u in 0.05f64..20.0,
        c in 0.05f64..0.95,
    ) {
        let d = d_nm * 1e-9;
        let at = |h: f64| propagating_integrand(&pair(true, d, d * (1.0 + h), 3.81, 3.81, 2e-6), u, c).unwrap();
        let (near, far) = (at(1e-7), at(1e-4));
        for i in 0..2 {
            prop_assert!(near[i].abs() <= 2e-3 * far[i].abs() + 1e-300, "{:?} {:?}", near, far);
        }
    }

    #[test]
    fn plate_blackbody_difference(t1 in 1.0f64..600.0, t2 in 1.0f64..600.0, t3 in 1.0f64..600.0) {
        let cfg = SystemConfig { t1, t2, t3, ..pair(true, 1e-6, 1e-6, 1.0, 1.0, 1e-6) };
        let diff = plate_blackbody(&cfg, PlateIndex::One) - plate_blackbody(&cfg, PlateIndex::Two);
        let expected = blackbody_term(t2, 0.0) - blackbody_term(t1, 0.0);
        prop_assert!((diff - expected).abs() <= 1e-12 * blackbody_term(t1, t2));
    }

    #[test]
    fn error_estimates_cover_the_true_error(
        centre in 0.05f64..0.95,
        log_width in -6.0f64..-1.0,
        tol_exp in 4i32..11,
    ) {
        let w = 10f64.powf(log_width);
        let f = |x: f64| w / ((x - centre).powi(2) + w * w);
        let exact = ((1.0 - centre) / w).atan() + (centre / w).atan();
        let r = integrate_adaptive(f, 0.0, 1.0, 10f64.powi(-tol_exp), 0.0, 1).unwrap();
        prop_assert!((r.value - exact).abs() <= r.error_estimate.max(4.0 * f64::EPSILON * exact), "{} vs {exact} ± {}", r.value, r.error_estimate);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn undamped_drude_is_the_plasma_model(a_um in 0.5f64..8.0, t in 1.0f64..600.0, d_nm in 50.0f64..1500.0) {
        let plate = |m: DielectricModel| LayeredPlate::new(m, d_nm * 1e-9, DielectricModel::constant(3.81));
        let cfg = |m: DielectricModel| SystemConfig {
            plate1: plate(m.clone()),
            plate2: plate(m),
            separation: a_um * 1e-6,
            t1: t,
            t2: t,
            t3: t,
        };
        let s = settings(1e-9);
        let drude = pressure_eq(&cfg(DielectricModel::drude_ev(9.0, 0.0)), t, &s).unwrap().value;
        let plasma = pressure_eq(&cfg(DielectricModel::plasma_ev(9.0)), t, &s).unwrap().value;
        prop_assert!((drude / plasma - 1.0).abs() < 1e-12, "{drude} vs {plasma}");
    }

    #[test]
    fn breakdown_adds_up(plasma in any::<bool>(), a_um in 0.5f64..6.0, t2 in 250.0f64..550.0, t3 in 250.0f64..550.0) {
        let model = if plasma { ModelChoice::Plasma } else { ModelChoice::Drude };
        let cfg = SystemConfig { t2, t3, ..preset_gold(model).unwrap() }.with_separation(a_um * 1e-6);
        let s = settings(1e-7);
        let p1 = total_pressure(&cfg, PlateIndex::One, &s).unwrap();
        let p2 = total_pressure(&cfg, PlateIndex::Two, &s).unwrap();
        for p in [&p1, &p2] {
            prop_assert_eq!(p.total, p.eq_mean + p.delta_neq + p.blackbody);
            prop_assert_eq!(p.eq_mean, 0.5 * (p.eq_t1 + p.eq_t2));
            // Identical plates exchange no net antisymmetric force.
            prop_assert_eq!(p.delta_neq, 0.0);
        }
        let expected = blackbody_term(t2, 0.0) - blackbody_term(cfg.t1, 0.0);
        assert_relative_eq!(p1.total - p2.total, expected, max_relative = 1e-9);
    }
}

#[test]
fn thick_coatings_hide_the_substrate() {
    for model in [ModelChoice::Drude, ModelChoice::Plasma] {
        let (cfg, _) = preset_cannex(model).unwrap();
        let s = settings(1e-10);
        for plate in [1, 2] {
            let base = pressure_eq(&cfg, 300.0, &s).unwrap().value;
            for factor in [0.5, 1.5] {
                let mut c = cfg.clone();
                let p = if plate == 1 { &mut c.plate1 } else { &mut c.plate2 };
                let eps = p.substrate.eps_imag_axis(0.0).unwrap();
                p.substrate = DielectricModel::constant(eps * factor);
                let v = pressure_eq(&c, 300.0, &s).unwrap().value;
                assert!((v / base - 1.0).abs() < 1e-6, "{model:?} plate {plate} ×{factor}: {v} vs {base}");
            }
        }
    }
}

#[test]
fn identical_plates_short_circuit() {
    let cfg = preset_gold(ModelChoice::Drude).unwrap();
    let r = delta_p_neq(&cfg, &settings(1e-8)).unwrap();
    assert_eq!(r.value, 0.0);
    assert!(r.identical_plates);
}

#[test]
fn antisymmetric_term_is_reproducible_across_thread_pools() {
    let (cfg, _) = preset_cannex(ModelChoice::Drude).unwrap();
    let cfg = cfg.with_separation(8e-6);
    let s = settings(1e-4);
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| delta_p_neq(&cfg, &s).unwrap())
    };
    let one = run(1);
    let four = run(4);
    assert_eq!(one.value.to_bits(), four.value.to_bits());
    assert_eq!(one.propagating.to_bits(), four.propagating.to_bits());
    let swapped = delta_p_neq(&cfg.swapped_temperatures(), &s).unwrap();
    assert_eq!(swapped.value, -one.value);
}
