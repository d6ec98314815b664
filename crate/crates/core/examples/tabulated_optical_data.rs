//! Loads an `eV n k` optical table, extends it below its first row with a
//! Drude tail, and compares the resulting equilibrium pressure with the
//! pure Drude model.

use std::path::PathBuf;

use casimir_neq::cli::{ModelChoice, Preset, Scenario};
use casimir_neq::{pressure_eq, QuadratureSettings};

fn main() -> casimir_neq::Result<()> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/au_drude_synthetic.txt"));
    let mut scenario = Scenario::preset(Preset::Gold);
    scenario.separation = 1e-6;
    scenario.load_table(&path)?;
    let settings = QuadratureSettings::default().with_rel_tol(1e-6);

    let table = scenario.table.as_ref().expect("table loaded");
    println!("{}: {} rows", path.display(), table.rows().len());
    for model in [ModelChoice::Tabulated, ModelChoice::Drude] {
        let p = pressure_eq(&scenario.system(model)?, 300.0, &settings)?;
        println!("{:>9}: P_eq(1 µm, 300 K) = {:.9e} Pa", model.name(), p.value);
    }
    Ok(())
}
