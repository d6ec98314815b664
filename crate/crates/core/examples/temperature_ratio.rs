//! Ratio of the plate-2 total pressure to the 300 K equilibrium pressure as
//! the lower plate heats from 300 K to 500 K.

use casimir_neq::cli::{run_sweep, ModelChoice, Preset, Scenario, SweepSpec, SweepVariable};
use casimir_neq::QuadratureSettings;

fn main() -> casimir_neq::Result<()> {
    let settings = QuadratureSettings::default().with_rel_tol(1e-7);
    let spec = SweepSpec::linear(
        SweepVariable::T2,
        300.0,
        500.0,
        11,
        vec![ModelChoice::Drude, ModelChoice::Plasma],
    );
    for a in [1e-6, 2e-6, 2.5e-6] {
        let mut scenario = Scenario::preset(Preset::Gold);
        scenario.separation = a;
        let table = run_sweep(&scenario, &spec, &settings)?;
        let drude = table.numbers("drude_ratio_to_eq_t1").unwrap_or_default();
        let plasma = table.numbers("plasma_ratio_to_eq_t1").unwrap_or_default();
        println!("a = {:.1} µm", a * 1e6);
        for ((t2, d), p) in spec.values.iter().zip(&drude).zip(&plasma) {
            println!("  T2 = {t2:5.1} K  drude {d:.5}  plasma {p:.5}");
        }
    }
    Ok(())
}
