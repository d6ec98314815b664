//! Acceptance run: one line per criterion. Exits non-zero when a criterion
//! outside `KNOWN_FAILURES` fails, or when a known failure starts passing
//! (so the list is kept honest).

use std::process::ExitCode;
use std::time::Instant;

use casimir_neq::cli::{preset_cannex, run_sweep, ModelChoice, Preset, Scenario, SweepSpec, SweepVariable};
use casimir_neq::constants::{C, HBAR, SIGMA};
use casimir_neq::dielectric::synthesize_table;
use casimir_neq::nonequilibrium::{delta_p_neq_gradient, propagating_integrand};
use casimir_neq::quadrature::Integrator;
use casimir_neq::reflection::{fresnel, k_imag, plate_reflection_imag, ImagAxisPoint};
use casimir_neq::{
    delta_p_neq, differential_gradient, pressure_eq, pressure_eq_gradient, total_pressure, DielectricModel,
    LayeredPlate, LowFrequencyTail, PlateIndex, Polarization, QuadratureSettings, SystemConfig,
};

/// Criteria that fail for physical reasons recorded in the README.
const KNOWN_FAILURES: &[u32] = &[6];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn settings(tol: f64) -> QuadratureSettings {
    QuadratureSettings::default().with_rel_tol(tol)
}

fn gold(model: ModelChoice) -> SystemConfig {
    Scenario::preset(Preset::Gold).system(model).unwrap()
}

fn cannex(model: ModelChoice) -> SystemConfig {
    preset_cannex(model).unwrap().0
}

/// Root of `f` in `[lo, hi]` by bisection; `f` must change sign.
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> Option<f64> {
    let (mut f_lo, f_hi) = (f(lo), f(hi));
    if f_lo.signum() == f_hi.signum() {
        return None;
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

fn ideal_metal_oracle() -> Outcome {
    let metal = DielectricModel::plasma_ev(9.0e3);
    let plate = LayeredPlate::new(metal, 1e-6, DielectricModel::vacuum());
    let a = 1e-6;
    let config = SystemConfig {
        plate1: plate.clone(),
        plate2: plate,
        separation: a,
        t1: 1.0,
        t2: 1.0,
        t3: 1.0,
    };
    let p = pressure_eq(&config, 1.0, &settings(1e-6)).unwrap().value;
    let exact = -std::f64::consts::PI.powi(2) * HBAR * C / (240.0 * a.powi(4));
    let rel = (p / exact - 1.0).abs();
    outcome(rel < 5e-3, format!("P_eq = {p:.6e} Pa, ideal {exact:.6e} Pa, deviation {rel:.2e}"))
}

fn gradient_consistency() -> Outcome {
    let s = settings(1e-9);
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for model in [ModelChoice::Drude, ModelChoice::Plasma] {
        let c = cannex(model).with_separation(5e-6);
        let g = pressure_eq_gradient(&c, 300.0, &s).unwrap().value;
        let h = 5e-9;
        let plus = pressure_eq(&c.with_separation(5e-6 + h), 300.0, &s).unwrap().value;
        let minus = pressure_eq(&c.with_separation(5e-6 - h), 300.0, &s).unwrap().value;
        let fd = (plus - minus) / (2.0 * h);
        let rel = (g / fd - 1.0).abs();
        worst = worst.max(rel);
        parts.push(format!("{} {rel:.1e}", model.name()));
    }
    outcome(worst <= 1e-4, format!("relative disagreement {}", parts.join(", ")))
}

fn crossing_point() -> Outcome {
    let base = gold(ModelChoice::Drude);
    let s = settings(1e-7);
    let gap = |a: f64| {
        let c = base.with_separation(a);
        let total = total_pressure(&c, PlateIndex::Two, &s).unwrap().total;
        total.abs() - pressure_eq(&c, 300.0, &s).unwrap().value.abs()
    };
    match bisect(gap, 1.0e-6, 4.0e-6, 1e-9) {
        Some(a) => outcome((a - 2.3e-6).abs() <= 0.3e-6, format!("crossing at a = {:.3} µm", a * 1e6)),
        None => outcome(false, "no crossing in [1, 4] µm".into()),
    }
}

fn plate_one_sign_change() -> Outcome {
    let s = settings(1e-7);
    let mut pass = true;
    let mut parts = Vec::new();
    for (model, expected) in [(ModelChoice::Plasma, 4.3e-6), (ModelChoice::Drude, 3.5e-6)] {
        let base = gold(model);
        let total = |a: f64| total_pressure(&base.with_separation(a), PlateIndex::One, &s).unwrap().total;
        match bisect(total, 2.0e-6, 7.0e-6, 1e-9) {
            Some(a) => {
                let attractive_before = total(a - 0.2e-6) < 0.0;
                pass &= (a - expected).abs() <= 0.4e-6 && attractive_before;
                parts.push(format!("{} at {:.3} µm", model.name(), a * 1e6));
            }
            None => {
                pass = false;
                parts.push(format!("{} has no sign change", model.name()));
            }
        }
    }
    outcome(pass, parts.join(", "))
}

fn blackbody_offset() -> Outcome {
    let offset = 2.0 * SIGMA / (3.0 * C) * (310f64.powi(4) - 300f64.powi(4));
    let rounded = (offset * 1e8).round() / 1e8;
    let mut spec = SweepSpec::linear(SweepVariable::Separation, 4e-6, 10e-6, 3, vec![ModelChoice::Drude]);
    spec.differential = true;
    let table = run_sweep(&Scenario::preset(Preset::Cannex), &spec, &settings(1e-4)).unwrap();
    let with = table.numbers("drude_diff_pressure_Pa").unwrap();
    let without = table.numbers("drude_diff_pressure_no_const_Pa").unwrap();
    let worst = with
        .iter()
        .zip(&without)
        .map(|(w, o)| ((w - o) / offset - 1.0).abs())
        .fold(0.0, f64::max);
    outcome(
        rounded == 1.4e-7 && worst < 1e-12,
        format!(
            "offset {:.4} µPa, sweep columns differ from it by at most {worst:.1e} relative",
            offset * 1e6
        ),
    )
}

fn antisymmetric_suppression() -> Outcome {
    let s = settings(1e-4);
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for model in [ModelChoice::Drude, ModelChoice::Plasma] {
        for a in [4e-6, 6e-6, 8e-6, 10e-6] {
            let c = cannex(model).with_separation(a);
            let dneq = delta_p_neq_gradient(&c, &s).unwrap();
            let g1 = pressure_eq_gradient(&c, c.t1, &s).unwrap().value;
            let g2 = pressure_eq_gradient(&c, c.t2, &s).unwrap().value;
            let ratio = (dneq / (0.5 * (g1 + g2))).abs();
            worst = worst.max(ratio);
            parts.push(format!("{}@{:.0}µm {ratio:.1e}", &model.name()[..1], a * 1e6));
        }
    }
    outcome(worst < 1e-4, format!("|ΔP'_neq / mean P'_eq|: {}", parts.join(" ")))
}

fn discriminability() -> Outcome {
    let s = settings(1e-6);
    let gap = |a: f64| {
        let g = |m: ModelChoice| {
            let c = cannex(m).with_separation(a);
            casimir_neq::total_pressure_gradient(&c, &s).unwrap().total
        };
        (g(ModelChoice::Plasma) - g(ModelChoice::Drude)) / 1e-3
    };
    let (near, far) = (gap(4e-6), gap(9e-6));
    let within = |x: f64, target: f64| x / target <= 3.0 && target / x <= 3.0;
    outcome(
        within(near, 2e3) && within(far, 1e2) && near > far,
        format!("factor {near:.3e} at 4 µm, {far:.3e} at 9 µm"),
    )
}

fn differential_margins() -> Outcome {
    let s = settings(1e-6);
    let grid: Vec<f64> = (0..=24).map(|i| 4e-6 + 0.25e-6 * i as f64).collect();
    let mut pass = true;
    let mut parts = Vec::new();
    for (model, lo, hi) in [(ModelChoice::Drude, 2.0, 8.0), (ModelChoice::Plasma, 9.0, 36.0)] {
        let base = cannex(model);
        let peak = grid
            .iter()
            .map(|&a| differential_gradient(&base.with_separation(a), &s).unwrap().value.abs() / 2e-3)
            .fold(0.0, f64::max);
        pass &= (lo..=hi).contains(&peak);
        parts.push(format!("{} {peak:.2}", model.name()));
    }
    outcome(pass, format!("max |differential gradient| / 2 mPa/m: {}", parts.join(", ")))
}

fn factor_two_gap() -> Outcome {
    let s = settings(1e-8);
    let p = |m: ModelChoice| pressure_eq(&gold(m).with_separation(5e-6), 300.0, &s).unwrap().value;
    let ratio = (p(ModelChoice::Plasma) / p(ModelChoice::Drude)).abs();
    outcome((1.6..=2.4).contains(&ratio), format!("|P_plasma / P_drude| = {ratio:.4}"))
}

fn property_suite() -> Outcome {
    let mut failures = Vec::new();
    let mut check = |name: &str, ok: bool| {
        if !ok {
            failures.push(name.to_string());
        }
    };
    let s = settings(1e-5);

    let c = cannex(ModelChoice::Drude).with_separation(4e-6);
    let forward = delta_p_neq(&c, &s).unwrap();
    let backward = delta_p_neq(&c.swapped_temperatures(), &s).unwrap();
    check(
        "antisymmetry",
        (forward.value + backward.value).abs() <= forward.error_estimate + backward.error_estimate,
    );

    let g = gold(ModelChoice::Drude);
    let identical = delta_p_neq(&g, &s).unwrap();
    let pointwise = (1..50).all(|i| {
        let u = 0.5 * i as f64;
        (0..=20).all(|j| propagating_integrand(&g, u, j as f64 / 20.0).unwrap() == [0.0, 0.0])
    });
    check("identical plates", identical.value == 0.0 && pointwise);

    let b = total_pressure(&g, PlateIndex::One, &s).unwrap();
    check("breakdown identity", b.total == b.eq_mean + b.delta_neq + b.blackbody);

    let mut undamped = gold(ModelChoice::Plasma);
    let wp = undamped.plate1.coating.plasma_frequency().unwrap();
    let zero_damping = DielectricModel::Drude { plasma_freq: wp, damping: 0.0 };
    undamped.plate1.coating = zero_damping.clone();
    undamped.plate2.coating = zero_damping;
    let p_zero = pressure_eq(&undamped, 300.0, &s).unwrap().value;
    let p_plasma = pressure_eq(&gold(ModelChoice::Plasma), 300.0, &s).unwrap().value;
    check("Drude without damping", (p_zero / p_plasma - 1.0).abs() < 1e-12);

    let metal = DielectricModel::gold_drude();
    let point = ImagAxisPoint::new(0.7, 2.0, 1e-6).unwrap();
    let eps_m = metal.eps_imag_axis(point.xi()).unwrap();
    let thin = LayeredPlate::new(metal.clone(), 1e-19, DielectricModel::constant(3.81));
    let thick = LayeredPlate::new(metal, 1e-3, DielectricModel::constant(3.81));
    for pol in [Polarization::TM, Polarization::TE] {
        let substrate = fresnel(1.0, 3.81, k_imag(1.0, &point), k_imag(3.81, &point), pol).unwrap();
        let bulk = fresnel(1.0, eps_m, k_imag(1.0, &point), k_imag(eps_m, &point), pol).unwrap();
        let r_thin = plate_reflection_imag(&thin, &point, pol).unwrap();
        let r_thick = plate_reflection_imag(&thick, &point, pol).unwrap();
        check("thin-film limit", (r_thin - substrate).abs() < 1e-8 * substrate.abs());
        check("thick-film limit", (r_thick - bulk).abs() < 1e-14);
    }

    let drude = DielectricModel::gold_drude();
    let wp = drude.plasma_frequency().unwrap();
    let table = synthesize_table(&drude, 0.02, 100.0, 400).unwrap();
    let tail = LowFrequencyTail::Drude {
        plasma_freq: wp,
        damping: casimir_neq::constants::ev_to_rad_per_s(0.035),
    };
    let tabulated = DielectricModel::tabulated(table, tail);
    let kk_worst = [1e13, 1e14, 1e15, 5e15]
        .iter()
        .map(|&xi| (tabulated.eps_imag_axis(xi).unwrap() / drude.eps_imag_axis(xi).unwrap() - 1.0).abs())
        .fold(0.0, f64::max);
    check("Kramers-Kronig round trip", kk_worst <= 1e-2);

    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| delta_p_neq(&c, &settings(1e-4)).unwrap().value)
    };
    check("determinism", run(1).to_bits() == run(4).to_bits());

    let integrator = Integrator::new(1e-10, 0.0);
    let fixtures: [(&(dyn Fn(f64) -> f64 + Sync), f64, f64, f64); 4] = [
        (&|x: f64| x.powi(7), 0.0, 2.0, 32.0),
        (&|x: f64| x.sqrt(), 0.0, 1.0, 2.0 / 3.0),
        (&|x: f64| 1e-3 / (x * x + 1e-6), -1.0, 1.0, 2.0 * 1e3f64.atan()),
        (&|x: f64| (40.0 * x).cos(), 0.0, 1.0, 40f64.sin() / 40.0),
    ];
    let honest = fixtures.iter().all(|&(f, lo, hi, exact)| {
        let r = integrator.integrate(f, lo, hi, 4).unwrap();
        (r.value - exact).abs() <= r.error_estimate.max(1e-15 * exact.abs())
    });
    check("error-bound honesty", honest);

    if failures.is_empty() {
        outcome(true, "all properties hold".into())
    } else {
        outcome(false, format!("failed: {}", failures.join(", ")))
    }
}

fn ratio_shapes() -> Outcome {
    let s = settings(1e-7);
    let temps: Vec<f64> = (0..=20).map(|i| 300.0 + 10.0 * i as f64).collect();
    let mut pass = true;
    let mut parts = Vec::new();
    for a in [1e-6, 2e-6, 2.5e-6] {
        for model in [ModelChoice::Plasma, ModelChoice::Drude] {
            let base = gold(model).with_separation(a);
            let eq = pressure_eq(&base, 300.0, &s).unwrap().value;
            let ratios: Vec<f64> = temps
                .iter()
                .map(|&t2| total_pressure(&base.with_temperatures(300.0, t2), PlateIndex::Two, &s).unwrap().total / eq)
                .collect();
            let increasing = ratios.windows(2).all(|w| w[1] > w[0]);
            let ok = match model {
                ModelChoice::Plasma => increasing,
                _ => !increasing,
            };
            pass &= ok;
            let (min, max) = ratios
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &r| (lo.min(r), hi.max(r)));
            parts.push(format!(
                "{}@{}µm {} [{min:.3}, {max:.3}]",
                &model.name()[..1],
                a * 1e6,
                if increasing { "monotone" } else { "non-monotone" }
            ));
        }
    }
    outcome(pass, parts.join(", "))
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, fn() -> Outcome); 11] = [
        (1, "ideal-metal oracle", ideal_metal_oracle),
        (2, "gradient consistency", gradient_consistency),
        (3, "nonequilibrium crossing near 2.3 µm", crossing_point),
        (4, "plate-1 sign change", plate_one_sign_change),
        (5, "blackbody offset", blackbody_offset),
        (6, "antisymmetric gradient suppression", antisymmetric_suppression),
        (7, "discriminability factors", discriminability),
        (8, "differential-gradient margins", differential_margins),
        (9, "factor-two model gap", factor_two_gap),
        (10, "property suite", property_suite),
        (11, "temperature-ratio shapes", ratio_shapes),
    ];
    let mut unexpected = 0;
    for (n, name, run) in criteria {
        let start = Instant::now();
        let o = run();
        let known = KNOWN_FAILURES.contains(&n);
        let verdict = match (o.pass, known) {
            (true, false) => "PASS",
            (false, false) => "FAIL",
            (false, true) => "FAIL (known)",
            (true, true) => "PASS (listed as known failure)",
        };
        if o.pass == known {
            unexpected += 1;
        }
        println!(
            "criterion {n:>2} {verdict}: {name}: {} [{:.1} s]",
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
