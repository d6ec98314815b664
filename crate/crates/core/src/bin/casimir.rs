use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use casimir_neq::cli::{
    asymptote_table, discriminability_report, gradient_table, plot_script, pressure_table, report_table, run_sweep,
    spring_extension, ConfigFile, ModelChoice, Preset, Scenario, SweepSpec, SweepVariable, Table,
};
use casimir_neq::{Error, PlateIndex, QuadratureSettings, Result};

#[derive(Parser)]
#[command(name = "casimir", version, about = "Casimir pressures between plates at different temperatures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct Common {
    /// Starting configuration: cannex or gold.
    #[arg(long)]
    preset: Option<String>,
    /// Metal model(s): drude, plasma, tabulated (comma-separated or repeated).
    #[arg(long, value_delimiter = ',')]
    model: Vec<String>,
    /// Optical data file (eV n k) for the tabulated model.
    #[arg(long)]
    data: Option<PathBuf>,
    /// Separation, m.
    #[arg(long)]
    a: Option<f64>,
    /// Upper-plate temperature, K.
    #[arg(long)]
    t1: Option<f64>,
    /// Lower-plate temperature, K.
    #[arg(long)]
    t2: Option<f64>,
    /// Environment temperature, K.
    #[arg(long)]
    t3: Option<f64>,
    /// Plate whose total pressure is reported (1 or 2).
    #[arg(long)]
    plate: Option<u8>,
    /// Write CSV here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// TOML experiment file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Relative tolerance of every integral.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args, Clone)]
struct Range {
    /// First value (m for separations, K for temperatures).
    #[arg(long)]
    from: Option<f64>,
    /// Last value.
    #[arg(long)]
    to: Option<f64>,
    /// Number of points.
    #[arg(long)]
    points: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Total pressure on one plate, with its breakdown.
    Pressure {
        #[command(flatten)]
        common: Common,
    },
    /// Separation gradient of the total pressure.
    Gradient {
        #[command(flatten)]
        common: Common,
    },
    /// Pressures over a range of separations or lower-plate temperatures.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        range: Range,
        /// Swept variable: a or t2.
        #[arg(long)]
        var: Option<String>,
        /// Add gradient columns.
        #[arg(long)]
        gradient: bool,
        /// Add differential pressure and gradient columns.
        #[arg(long)]
        differential: bool,
        /// Write a gnuplot script next to the CSV file.
        #[arg(long)]
        plot: bool,
    },
    /// Differences between two models against the sensor sensitivities.
    Report {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        range: Range,
    },
    /// The antisymmetric term at large separations.
    Asymptote {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        range: Range,
    },
    /// Spring extension produced by a pressure.
    Convert {
        #[command(flatten)]
        common: Common,
        /// Pressure, Pa.
        #[arg(long)]
        pressure: f64,
        /// Spring constant, N/m.
        #[arg(long)]
        k: Option<f64>,
        /// Plate radius, m.
        #[arg(long)]
        radius: Option<f64>,
    },
}

struct Resolved {
    scenario: Scenario,
    models: Option<Vec<ModelChoice>>,
    settings: QuadratureSettings,
    file: ConfigFile,
}

fn resolve(common: &Common) -> Result<Resolved> {
    let file = match &common.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let preset = match &common.preset {
        Some(p) => p.parse::<Preset>()?,
        None => file.preset.unwrap_or(Preset::Cannex),
    };
    let mut scenario = Scenario::preset(preset);
    file.apply(&mut scenario)?;
    for (field, flag) in [
        (&mut scenario.separation, common.a),
        (&mut scenario.t1, common.t1),
        (&mut scenario.t2, common.t2),
        (&mut scenario.t3, common.t3),
    ] {
        if let Some(v) = flag {
            *field = v;
        }
    }
    if let Some(path) = &common.data {
        scenario.load_table(path)?;
    }
    let models = if common.model.is_empty() {
        file.models.clone()
    } else {
        Some(common.model.iter().map(|m| m.parse()).collect::<Result<Vec<_>>>()?)
    };
    let mut settings = file.quadrature.clone().unwrap_or_default();
    if let Some(tol) = common.tol {
        settings.rel_tol = tol;
    }
    settings.validate()?;
    Ok(Resolved {
        scenario,
        models,
        settings,
        file,
    })
}

fn plate(common: &Common, default: PlateIndex) -> Result<PlateIndex> {
    common.plate.map_or(Ok(default), PlateIndex::from_number)
}

fn emit(table: &Table, out: Option<&PathBuf>, plot: bool) -> Result<()> {
    let csv = table.to_csv();
    match out {
        Some(path) => {
            std::fs::write(path, csv).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            if plot {
                let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("sweep.csv");
                let script = path.with_extension("gp");
                std::fs::write(&script, plot_script(table, name))
                    .map_err(|e| Error::Io(format!("{}: {e}", script.display())))?;
                eprintln!("wrote {} and {}", path.display(), script.display());
            }
        }
        None => {
            if plot {
                eprintln!("--plot needs --out; no script written");
            }
            print!("{csv}");
        }
    }
    Ok(())
}

fn range_values(range: &Range, default: (f64, f64, usize)) -> Vec<f64> {
    let from = range.from.unwrap_or(default.0);
    let to = range.to.unwrap_or(default.1);
    let n = range.points.unwrap_or(default.2);
    SweepSpec::linear(SweepVariable::Separation, from, to, n, Vec::new()).values
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Pressure { common } => {
            let r = resolve(&common)?;
            let models = r.models.unwrap_or_else(|| vec![ModelChoice::Drude]);
            let t = pressure_table(&r.scenario, &models, plate(&common, PlateIndex::Two)?, &r.settings)?;
            emit(&t, common.out.as_ref(), false)
        }
        Command::Gradient { common } => {
            let r = resolve(&common)?;
            let models = r.models.unwrap_or_else(|| vec![ModelChoice::Drude]);
            let t = gradient_table(&r.scenario, &models, &r.settings)?;
            emit(&t, common.out.as_ref(), false)
        }
        Command::Sweep {
            common,
            range,
            var,
            gradient,
            differential,
            plot,
        } => {
            let r = resolve(&common)?;
            let models = r.models.unwrap_or_else(|| vec![ModelChoice::Drude, ModelChoice::Plasma]);
            let mut spec = match (&r.file.sweep, &var, range.from) {
                (Some(section), None, None) => section.to_spec(models)?,
                _ => {
                    let variable = match var {
                        Some(v) => v.parse()?,
                        None => SweepVariable::Separation,
                    };
                    let default = match variable {
                        SweepVariable::Separation => (1e-6, 6e-6, 11),
                        SweepVariable::T2 => (300.0, 500.0, 11),
                    };
                    let mut spec = SweepSpec::linear(variable, 0.0, 0.0, 0, models);
                    spec.values = range_values(&range, default);
                    spec
                }
            };
            spec.plate = plate(&common, spec.plate)?;
            spec.gradient |= gradient;
            spec.differential |= differential;
            let t = run_sweep(&r.scenario, &spec, &r.settings)?;
            emit(&t, common.out.as_ref(), plot)
        }
        Command::Report { common, range } => {
            let r = resolve(&common)?;
            let models = r.models.unwrap_or_else(|| vec![ModelChoice::Drude, ModelChoice::Plasma]);
            let separations = range_values(&range, (4e-6, 10e-6, 7));
            let rows = discriminability_report(&r.scenario, &models, &separations, &r.settings)?;
            emit(&report_table(&rows, &models), common.out.as_ref(), false)
        }
        Command::Asymptote { common, range } => {
            let r = resolve(&common)?;
            let model = r.models.as_ref().and_then(|m| m.first().copied()).unwrap_or(ModelChoice::Drude);
            let separations = range_values(&range, (5e-6, 50e-6, 10));
            let t = asymptote_table(&r.scenario, model, &separations, &r.settings)?;
            emit(&t, common.out.as_ref(), false)
        }
        Command::Convert {
            common,
            pressure,
            k,
            radius,
        } => {
            let r = resolve(&common)?;
            let mut sensor = r.scenario.sensor.clone();
            if k.is_some() {
                sensor.spring_constant = k;
            }
            if let Some(radius) = radius {
                sensor.radius = radius;
            }
            let da = spring_extension(pressure, &sensor)?;
            let mut t = Table::new(vec![
                "pressure_Pa".into(),
                "radius_m".into(),
                "spring_constant_N_per_m".into(),
                "extension_m".into(),
            ]);
            t.rows.push(vec![
                pressure.into(),
                sensor.radius.into(),
                sensor.spring_constant.unwrap_or(f64::NAN).into(),
                da.into(),
            ]);
            emit(&t, common.out.as_ref(), false)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
