//! Drude against plasma for the CANNEX plates: how far apart the two models
//! are relative to the sensor sensitivities.

use casimir_neq::cli::{discriminability_report, report_table, ModelChoice, Preset, Scenario};
use casimir_neq::QuadratureSettings;

fn main() -> casimir_neq::Result<()> {
    let settings = QuadratureSettings::default().with_rel_tol(1e-5);
    let scenario = Scenario::preset(Preset::Cannex);
    let models = [ModelChoice::Drude, ModelChoice::Plasma];
    let separations: Vec<f64> = (4..=10).map(|i| i as f64 * 1e-6).collect();
    let rows = discriminability_report(&scenario, &models, &separations, &settings)?;
    for r in &rows {
        println!(
            "a = {:4.1} µm  gradient ×{:8.1}  differential gradient ×{:6.2}  ({}: {:.3e}, {}: {:.3e} Pa/m)",
            r.separation * 1e6,
            r.gradient_ratio,
            r.differential_gradient_ratio,
            models[0].name(),
            r.differential_gradients[0],
            models[1].name(),
            r.differential_gradients[1],
        );
    }
    print!("{}", report_table(&rows, &models).to_csv());
    Ok(())
}
