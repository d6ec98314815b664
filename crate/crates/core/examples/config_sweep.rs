//! Runs a separation sweep described by a TOML file and writes CSV plus a
//! gnuplot script.

use casimir_neq::cli::{plot_script, run_sweep, ConfigFile, ModelChoice};
use casimir_neq::QuadratureSettings;

const EXPERIMENT: &str = r#"
preset = "gold"
models = ["drude", "plasma"]

[system]
t2 = 500.0

[quadrature]
rel_tol = 1e-7

[sweep]
variable = "a"
start = 1e-6
stop = 6e-6
points = 11
plate = 2
"#;

fn main() -> casimir_neq::Result<()> {
    let file = ConfigFile::parse(EXPERIMENT)?;
    let scenario = file.scenario()?;
    let models = file.models.clone().unwrap_or_else(|| vec![ModelChoice::Drude]);
    let spec = file.sweep.as_ref().expect("sweep section").to_spec(models)?;
    let settings = file.quadrature.clone().unwrap_or_else(QuadratureSettings::default);
    let table = run_sweep(&scenario, &spec, &settings)?;

    let dir = std::env::temp_dir();
    let csv = dir.join("gold_sweep.csv");
    std::fs::write(&csv, table.to_csv())?;
    std::fs::write(dir.join("gold_sweep.gp"), plot_script(&table, "gold_sweep.csv"))?;
    print!("{}", table.to_csv());
    eprintln!("wrote {} and gold_sweep.gp", csv.display());
    Ok(())
}
