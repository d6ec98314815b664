//! Converts pressures into the extension of the sensor springs.

use casimir_neq::cli::{spring_extension, SensorConfig};

fn main() -> casimir_neq::Result<()> {
    let mut sensor = SensorConfig::cannex();
    sensor.spring_constant = Some(1.0);
    println!("pressure_Pa,extension_m");
    for p in [1e-9, 2e-9, 1.43e-7, 1e-6] {
        println!("{p:.3e},{:.12e}", spring_extension(p, &sensor)?);
    }
    sensor.effective_mass = Some(1e-4);
    if let Some(w0) = sensor.resonance_frequency() {
        println!("resonance frequency {w0:.3} rad/s");
    }
    Ok(())
}
