//! Equilibrium pressure between near-perfect mirrors approaches the
//! zero-temperature ideal-metal result `−π²ħc/240a⁴`.

use casimir_neq::constants::{C, HBAR};
use casimir_neq::{pressure_eq, DielectricModel, LayeredPlate, QuadratureSettings, SystemConfig};

fn main() -> casimir_neq::Result<()> {
    let settings = QuadratureSettings::default().with_rel_tol(1e-7);
    let a: f64 = 1e-6;
    let ideal = -std::f64::consts::PI.powi(2) * HBAR * C / (240.0 * a.powi(4));
    println!("plasma_freq_eV,pressure_Pa,ratio_to_ideal");
    for scale in [1.0, 10.0, 100.0, 1000.0] {
        let plate = LayeredPlate::new(DielectricModel::plasma_ev(9.0 * scale), 1e-6, DielectricModel::vacuum());
        let config = SystemConfig {
            plate1: plate.clone(),
            plate2: plate,
            separation: a,
            t1: 1.0,
            t2: 1.0,
            t3: 1.0,
        };
        let p = pressure_eq(&config, 1.0, &settings)?;
        println!("{:.1},{:.12e},{:.6}", 9.0 * scale, p.value, p.value / ideal);
    }
    Ok(())
}
