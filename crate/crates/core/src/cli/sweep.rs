use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ModelChoice, Scenario, Table};
use crate::nonequilibrium::{antisymmetric_asymptote, plate_blackbody};
use crate::quadrature::Warning;
use crate::{total_pressure, total_pressure_gradient, Error, PlateIndex, QuadratureSettings, Result};

/// The swept quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepVariable {
    /// Separation `a`, m.
    #[serde(rename = "a")]
    Separation,
    /// Lower-plate temperature, K.
    #[serde(rename = "t2")]
    T2,
}

impl SweepVariable {
    fn column(self) -> &'static str {
        match self {
            SweepVariable::Separation => "a_m",
            SweepVariable::T2 => "t2_K",
        }
    }
}

impl std::str::FromStr for SweepVariable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "a" | "separation" => Ok(SweepVariable::Separation),
            "t2" => Ok(SweepVariable::T2),
            other => Err(Error::Config(format!("unknown sweep variable {other:?} (a, t2)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub values: Vec<f64>,
    pub models: Vec<ModelChoice>,
    /// Plate whose total pressure is reported.
    pub plate: PlateIndex,
    /// Add gradient columns.
    pub gradient: bool,
    /// Add differential pressure and gradient columns.
    pub differential: bool,
}

impl SweepSpec {
    /// `points` equally spaced values from `start` to `stop` inclusive.
    pub fn linear(variable: SweepVariable, start: f64, stop: f64, points: usize, models: Vec<ModelChoice>) -> Self {
        SweepSpec {
            variable,
            values: linspace(start, stop, points),
            models,
            plate: PlateIndex::Two,
            gradient: false,
            differential: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::Config("sweep needs at least one value".into()));
        }
        if self.models.is_empty() {
            return Err(Error::Config("sweep needs at least one model".into()));
        }
        if self.values.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::Config("sweep values must be positive".into()));
        }
        Ok(())
    }
}

pub(super) fn linspace(start: f64, stop: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![start],
        n => (0..n)
            .map(|i| {
                if i == n - 1 {
                    stop
                } else {
                    start + (stop - start) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

fn warning_text(ws: &[Warning]) -> String {
    if ws.is_empty() {
        return "ok".into();
    }
    let parts: Vec<String> = ws
        .iter()
        .map(|w| match w {
            Warning::ResonanceFloor(n) => format!("resonance-floor:{n}"),
            Warning::CutoffSaturation => "cutoff-saturation".into(),
            Warning::PanelTooNarrow => "panel-too-narrow".into(),
            Warning::NoiseFloor => "noise-floor".into(),
            Warning::PanelLimit => "panel-limit".into(),
        })
        .collect();
    format!("warn {}", parts.join(" "))
}

fn sweep_point(
    scenario: &Scenario,
    spec: &SweepSpec,
    model: ModelChoice,
    value: f64,
    settings: &QuadratureSettings,
) -> Result<(Vec<f64>, Vec<Warning>)> {
    let mut s = scenario.clone();
    match spec.variable {
        SweepVariable::Separation => s.separation = value,
        SweepVariable::T2 => s.t2 = value,
    }
    let config = s.system(model)?;
    let p = total_pressure(&config, spec.plate, settings)?;
    let mut warnings = p.warnings.clone();
    let mut out = vec![p.total, p.eq_mean, p.delta_neq, p.blackbody, p.eq_t1, p.total / p.eq_t1];
    let gradient = if spec.gradient || spec.differential {
        let g = total_pressure_gradient(&config, settings)?;
        warnings.extend(g.warnings.iter().copied());
        Some(g)
    } else {
        None
    };
    if spec.gradient {
        let g = gradient.as_ref().expect("gradient computed");
        out.extend([g.total, g.delta_neq]);
    }
    if spec.differential {
        let g = gradient.as_ref().expect("gradient computed");
        let without = 0.5 * (p.eq_t2 - p.eq_t1) + p.delta_neq;
        let constant = plate_blackbody(&config, PlateIndex::One);
        out.extend([without + constant, without, 0.5 * (g.eq_t2 - g.eq_t1) + g.delta_neq]);
    }
    Ok((out, warnings))
}

/// Evaluates every model at every sweep value. Failed points become rows
/// with NaN values and the error text in the status column.
pub fn run_sweep(scenario: &Scenario, spec: &SweepSpec, settings: &QuadratureSettings) -> Result<Table> {
    spec.validate()?;
    settings.validate()?;
    for &m in &spec.models {
        scenario.system(m)?;
    }
    let mut header = vec![spec.variable.column().to_string()];
    let mut per_model = vec!["total_Pa", "eq_mean_Pa", "delta_neq_Pa", "blackbody_Pa", "eq_t1_Pa", "ratio_to_eq_t1"];
    if spec.gradient {
        per_model.extend(["gradient_Pa_per_m", "delta_neq_gradient_Pa_per_m"]);
    }
    if spec.differential {
        per_model.extend(["diff_pressure_Pa", "diff_pressure_no_const_Pa", "diff_gradient_Pa_per_m"]);
    }
    for m in &spec.models {
        for col in &per_model {
            header.push(format!("{}_{col}", m.name()));
        }
        header.push(format!("{}_status", m.name()));
    }
    let width = per_model.len();

    let jobs: Vec<(usize, usize)> = (0..spec.values.len())
        .flat_map(|i| (0..spec.models.len()).map(move |j| (i, j)))
        .collect();
    let results: Vec<Result<(Vec<f64>, Vec<Warning>)>> = jobs
        .par_iter()
        .map(|&(i, j)| sweep_point(scenario, spec, spec.models[j], spec.values[i], settings))
        .collect();

    let mut table = Table::new(header);
    let mut results = results.into_iter();
    for &value in &spec.values {
        let mut row = vec![value.into()];
        for m in &spec.models {
            match results.next().expect("one result per job") {
                Ok((vals, ws)) => {
                    row.extend(vals.into_iter().map(Into::into));
                    row.push(warning_text(&ws).into());
                }
                Err(e) => {
                    eprintln!("{} at {value:e}: {e}", m.name());
                    row.extend(std::iter::repeat(f64::NAN.into()).take(width));
                    row.push(format!("error {e}").into());
                }
            }
        }
        table.rows.push(row);
    }
    Ok(table)
}

/// Breakdown of the total pressure for each model at the scenario point.
pub fn pressure_table(
    scenario: &Scenario,
    models: &[ModelChoice],
    plate: PlateIndex,
    settings: &QuadratureSettings,
) -> Result<Table> {
    let header = [
        "model", "a_m", "t1_K", "t2_K", "t3_K", "plate", "total_Pa", "eq_mean_Pa", "delta_neq_Pa",
        "delta_neq_propagating_Pa", "delta_neq_evanescent_Pa", "blackbody_Pa", "eq_t1_Pa", "eq_t2_Pa", "status",
    ];
    let mut table = Table::new(header.iter().map(|s| s.to_string()).collect());
    for &m in models {
        let config = scenario.system(m)?;
        let p = total_pressure(&config, plate, settings)?;
        table.rows.push(vec![
            m.name().into(),
            config.separation.into(),
            config.t1.into(),
            config.t2.into(),
            config.t3.into(),
            f64::from(plate.number()).into(),
            p.total.into(),
            p.eq_mean.into(),
            p.delta_neq.into(),
            p.delta_neq_propagating.into(),
            p.delta_neq_evanescent.into(),
            p.blackbody.into(),
            p.eq_t1.into(),
            p.eq_t2.into(),
            warning_text(&p.warnings).into(),
        ]);
    }
    Ok(table)
}

/// Gradient breakdown for each model at the scenario point.
pub fn gradient_table(scenario: &Scenario, models: &[ModelChoice], settings: &QuadratureSettings) -> Result<Table> {
    let header = [
        "model",
        "a_m",
        "t1_K",
        "t2_K",
        "gradient_Pa_per_m",
        "eq_mean_gradient_Pa_per_m",
        "delta_neq_gradient_Pa_per_m",
        "diff_gradient_Pa_per_m",
        "antisymmetric_omitted",
        "status",
    ];
    let mut table = Table::new(header.iter().map(|s| s.to_string()).collect());
    for &m in models {
        let config = scenario.system(m)?;
        let g = total_pressure_gradient(&config, settings)?;
        table.rows.push(vec![
            m.name().into(),
            config.separation.into(),
            config.t1.into(),
            config.t2.into(),
            g.total.into(),
            g.eq_mean.into(),
            g.delta_neq.into(),
            (0.5 * (g.eq_t2 - g.eq_t1) + g.delta_neq).into(),
            if g.antisymmetric_omitted { "yes" } else { "no" }.into(),
            warning_text(&g.warnings).into(),
        ]);
    }
    Ok(table)
}

/// `ΔP_neq` at increasing separations.
pub fn asymptote_table(
    scenario: &Scenario,
    model: ModelChoice,
    separations: &[f64],
    settings: &QuadratureSettings,
) -> Result<Table> {
    let config = scenario.system(model)?;
    let points = antisymmetric_asymptote(&config, separations, settings)?;
    let header = [
        "a_m",
        "delta_neq_Pa",
        "delta_neq_propagating_Pa",
        "delta_neq_evanescent_Pa",
        "delta_neq_plus_blackbody_Pa",
    ];
    let mut table = Table::new(header.iter().map(|s| s.to_string()).collect());
    for p in points {
        table.rows.push(vec![
            p.separation.into(),
            p.delta_neq.into(),
            p.propagating.into(),
            p.evanescent.into(),
            p.with_blackbody.into(),
        ]);
    }
    Ok(table)
}

/// Model-vs-model differences at one separation, and their ratios to the
/// sensor sensitivities.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub separation: f64,
    /// Difference of total pressures on plate 1, Pa.
    pub pressure_diff: f64,
    pub pressure_ratio: f64,
    /// Difference of total gradients, Pa/m.
    pub gradient_diff: f64,
    pub gradient_ratio: f64,
    /// Difference of differential pressures, Pa.
    pub differential_pressure_diff: f64,
    pub differential_pressure_ratio: f64,
    /// Difference of differential gradients, Pa/m.
    pub differential_gradient_diff: f64,
    pub differential_gradient_ratio: f64,
    /// Separation-independent part of the differential pressure, Pa.
    pub constant_term: f64,
    pub constant_ratio: f64,
    /// Per-model differential gradients, Pa/m.
    pub differential_gradients: [f64; 2],
}

impl ReportRow {
    pub fn gradient_discriminable(&self) -> bool {
        self.gradient_ratio > 1.0
    }
}

/// Compares two models over `separations` against the scenario's sensor.
pub fn discriminability_report(
    scenario: &Scenario,
    models: &[ModelChoice],
    separations: &[f64],
    settings: &QuadratureSettings,
) -> Result<Vec<ReportRow>> {
    if models.len() != 2 || models[0] == models[1] {
        return Err(Error::Config("the report compares exactly two different models".into()));
    }
    settings.validate()?;
    let sensor = &scenario.sensor;
    separations
        .par_iter()
        .map(|&a| {
            let mut s = scenario.clone();
            s.separation = a;
            let eval = |m: ModelChoice| -> Result<(f64, f64, f64, f64, f64)> {
                let config = s.system(m)?;
                let p = total_pressure(&config, PlateIndex::One, settings)?;
                let g = total_pressure_gradient(&config, settings)?;
                let diff_p = 0.5 * (p.eq_t2 - p.eq_t1) + p.delta_neq + p.blackbody;
                let diff_g = 0.5 * (g.eq_t2 - g.eq_t1) + g.delta_neq;
                Ok((p.total, g.total, diff_p, diff_g, p.blackbody))
            };
            let (first, second) = rayon::join(|| eval(models[0]), || eval(models[1]));
            let (p0, g0, dp0, dg0, constant) = first?;
            let (p1, g1, dp1, dg1, _) = second?;
            Ok(ReportRow {
                separation: a,
                pressure_diff: p1 - p0,
                pressure_ratio: (p1 - p0).abs() / sensor.pressure_sensitivity,
                gradient_diff: g1 - g0,
                gradient_ratio: (g1 - g0).abs() / sensor.gradient_sensitivity,
                differential_pressure_diff: dp1 - dp0,
                differential_pressure_ratio: (dp1 - dp0).abs() / sensor.differential_pressure_sensitivity,
                differential_gradient_diff: dg1 - dg0,
                differential_gradient_ratio: (dg1 - dg0).abs() / sensor.differential_gradient_sensitivity,
                constant_term: constant,
                constant_ratio: constant.abs() / sensor.differential_pressure_sensitivity,
                differential_gradients: [dg0, dg1],
            })
        })
        .collect()
}

/// Report rows as a table with verdict columns.
pub fn report_table(rows: &[ReportRow], models: &[ModelChoice]) -> Table {
    let verdict = |r: f64| if r > 1.0 { "yes" } else { "no" };
    let mut header: Vec<String> = [
        "a_m",
        "pressure_diff_Pa",
        "pressure_ratio",
        "pressure_discriminable",
        "gradient_diff_Pa_per_m",
        "gradient_ratio",
        "gradient_discriminable",
        "diff_pressure_diff_Pa",
        "diff_pressure_ratio",
        "diff_pressure_discriminable",
        "diff_gradient_diff_Pa_per_m",
        "diff_gradient_ratio",
        "diff_gradient_discriminable",
        "constant_term_Pa",
        "constant_term_ratio",
        "constant_term_discriminable",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    for m in models {
        header.push(format!("{}_diff_gradient_Pa_per_m", m.name()));
    }
    let mut table = Table::new(header);
    for r in rows {
        table.rows.push(vec![
            r.separation.into(),
            r.pressure_diff.into(),
            r.pressure_ratio.into(),
            verdict(r.pressure_ratio).into(),
            r.gradient_diff.into(),
            r.gradient_ratio.into(),
            verdict(r.gradient_ratio).into(),
            r.differential_pressure_diff.into(),
            r.differential_pressure_ratio.into(),
            verdict(r.differential_pressure_ratio).into(),
            r.differential_gradient_diff.into(),
            r.differential_gradient_ratio.into(),
            verdict(r.differential_gradient_ratio).into(),
            r.constant_term.into(),
            r.constant_ratio.into(),
            verdict(r.constant_ratio).into(),
            r.differential_gradients[0].into(),
            r.differential_gradients[1].into(),
        ]);
    }
    table
}

/// A gnuplot script plotting every numeric column of `table` against its
/// first column, reading the data from `csv_name`.
pub fn plot_script(table: &Table, csv_name: &str) -> String {
    let mut s = String::new();
    s.push_str("set datafile separator ','\n");
    s.push_str("set key autotitle columnhead\n");
    s.push_str(&format!("set xlabel '{}'\n", table.header.first().map(String::as_str).unwrap_or("x")));
    s.push_str("set terminal pngcairo size 1000,700\n");
    let stem = csv_name.strip_suffix(".csv").unwrap_or(csv_name);
    s.push_str(&format!("set output '{stem}.png'\n"));
    let numeric: Vec<usize> = (1..table.header.len())
        .filter(|&i| table.rows.iter().all(|r| r[i].as_f64().is_some()))
        .collect();
    let plots: Vec<String> = numeric
        .iter()
        .map(|i| format!("'{csv_name}' using 1:{} with linespoints", i + 1))
        .collect();
    if !plots.is_empty() {
        s.push_str("plot ");
        s.push_str(&plots.join(", \\\n     "));
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::Preset;

    #[test]
    fn linspace_endpoints() {
        assert_eq!(linspace(1.0, 2.0, 3), vec![1.0, 1.5, 2.0]);
        assert_eq!(linspace(1.0, 2.0, 1), vec![1.0]);
    }

    #[test]
    fn single_model_report_rejected() {
        let s = Scenario::preset(Preset::Cannex);
        let settings = QuadratureSettings::default();
        assert!(discriminability_report(&s, &[ModelChoice::Drude], &[5e-6], &settings).is_err());
        assert!(discriminability_report(&s, &[ModelChoice::Drude, ModelChoice::Drude], &[5e-6], &settings).is_err());
    }

    #[test]
    fn equal_temperature_sweep_ratio_is_one() {
        let mut s = Scenario::preset(Preset::Gold);
        s.t2 = 300.0;
        let spec = SweepSpec::linear(SweepVariable::Separation, 2e-6, 3e-6, 2, vec![ModelChoice::Drude]);
        let settings = QuadratureSettings::default().with_rel_tol(1e-6);
        let t = run_sweep(&s, &spec, &settings).unwrap();
        for r in t.numbers("drude_ratio_to_eq_t1").unwrap() {
            assert!((r - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn plot_script_lists_columns() {
        let mut t = Table::new(vec!["a_m".into(), "p_Pa".into(), "status".into()]);
        t.rows.push(vec![1.0.into(), 2.0.into(), "ok".into()]);
        let s = plot_script(&t, "out.csv");
        assert!(s.contains("'out.csv' using 1:2"));
        assert!(!s.contains("1:3"));
    }
}
