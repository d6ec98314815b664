//! Two identical gold plates at 300 K and 500 K: total pressure on each
//! plate against the 300 K equilibrium pressure, for both metal models.

use casimir_neq::cli::{preset_gold, ModelChoice};
use casimir_neq::{pressure_eq, total_pressure, PlateIndex, QuadratureSettings};

fn main() -> casimir_neq::Result<()> {
    let settings = QuadratureSettings::default().with_rel_tol(1e-7);
    println!("model,a_m,plate1_total_Pa,plate2_total_Pa,eq_300K_Pa");
    for model in [ModelChoice::Drude, ModelChoice::Plasma] {
        let base = preset_gold(model)?;
        for i in 0..=10 {
            let config = base.with_separation(1e-6 + 0.5e-6 * i as f64);
            let p1 = total_pressure(&config, PlateIndex::One, &settings)?;
            let p2 = total_pressure(&config, PlateIndex::Two, &settings)?;
            let eq = pressure_eq(&config, 300.0, &settings)?;
            println!(
                "{},{:.12e},{:.12e},{:.12e},{:.12e}",
                model.name(),
                config.separation,
                p1.total,
                p2.total,
                eq.value
            );
        }
    }
    Ok(())
}
