//! Presets, scenario assembly, sweeps and reports behind the `casimir`
//! binary.

mod config;
mod sweep;
mod table;

use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::constants::ev_to_rad_per_s;
use crate::dielectric::{ingest_optical_table, AU_DAMPING_EV, AU_PLASMA_EV};
use crate::{DielectricModel, Error, LayeredPlate, LowFrequencyTail, OpticalDataTable, Result, SystemConfig};

pub use config::{ConfigFile, PlateSection, SweepSection, SystemSection};
pub use sweep::{
    asymptote_table, discriminability_report, gradient_table, plot_script, pressure_table, report_table, run_sweep,
    ReportRow,
    SweepSpec, SweepVariable,
};
pub use table::{Cell, Table};

/// Permittivity of the silicon substrate.
pub const EPS_SI: f64 = 11.66;
/// Permittivity of the fused-silica substrate.
pub const EPS_SIO2: f64 = 3.81;

/// Which metal response to use for the coatings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelChoice {
    Drude,
    Plasma,
    Tabulated,
}

impl ModelChoice {
    pub fn name(self) -> &'static str {
        match self {
            ModelChoice::Drude => "drude",
            ModelChoice::Plasma => "plasma",
            ModelChoice::Tabulated => "tabulated",
        }
    }
}

impl FromStr for ModelChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "drude" => Ok(ModelChoice::Drude),
            "plasma" => Ok(ModelChoice::Plasma),
            "tabulated" => Ok(ModelChoice::Tabulated),
            other => Err(Error::Config(format!("unknown model {other:?} (drude, plasma, tabulated)"))),
        }
    }
}

/// Named starting configurations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    /// Au 200 nm on Si facing Au 1 µm on SiO₂; 300 K / 310 K.
    Cannex,
    /// Two identical 1 µm Au films on vacuum; 300 K / 500 K.
    Gold,
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "cannex" => Ok(Preset::Cannex),
            "gold" => Ok(Preset::Gold),
            other => Err(Error::Config(format!("unknown preset {other:?} (cannex, gold)"))),
        }
    }
}

/// Sensor geometry and sensitivities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SensorConfig {
    /// Radius of the sensing plate, m.
    pub radius: f64,
    /// Pa.
    pub pressure_sensitivity: f64,
    /// Pa/m.
    pub gradient_sensitivity: f64,
    /// Pa.
    pub differential_pressure_sensitivity: f64,
    /// Pa/m.
    pub differential_gradient_sensitivity: f64,
    /// Spring constant, N/m. No default.
    pub spring_constant: Option<f64>,
    /// Effective mass, kg. No default.
    pub effective_mass: Option<f64>,
}

impl Default for SensorConfig {
    fn default() -> Self {
        SensorConfig::cannex()
    }
}

impl SensorConfig {
    pub fn cannex() -> Self {
        SensorConfig {
            radius: 5.742e-3,
            pressure_sensitivity: 1e-9,
            gradient_sensitivity: 1e-3,
            differential_pressure_sensitivity: 2e-9,
            differential_gradient_sensitivity: 2e-3,
            spring_constant: None,
            effective_mass: None,
        }
    }

    /// `ω₀ = (k/m_eff)^{1/2}` when both are known, rad/s.
    pub fn resonance_frequency(&self) -> Option<f64> {
        match (self.spring_constant, self.effective_mass) {
            (Some(k), Some(m)) if k > 0.0 && m > 0.0 => Some((k / m).sqrt()),
            _ => None,
        }
    }
}

/// Spring extension `Δa = πR²P/k` caused by the pressure `p`, m.
pub fn spring_extension(p: f64, sensor: &SensorConfig) -> Result<f64> {
    let k = sensor
        .spring_constant
        .ok_or_else(|| Error::Config("spring_constant is required for the spring extension".into()))?;
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::Config(format!("spring_constant must be positive, got {k}")));
    }
    Ok(std::f64::consts::PI * sensor.radius * sensor.radius * p / k)
}

/// Everything that defines a computation except the metal model, which is
/// chosen per run.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub separation: f64,
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
    pub thickness1: f64,
    pub thickness2: f64,
    pub substrate1: DielectricModel,
    pub substrate2: DielectricModel,
    pub plasma_freq_ev: f64,
    pub damping_ev: f64,
    /// Optical data for [`ModelChoice::Tabulated`].
    pub table: Option<Arc<OpticalDataTable>>,
    /// Low-frequency extension of the table.
    pub tail: ModelChoice,
    pub sensor: SensorConfig,
}

impl Scenario {
    pub fn preset(preset: Preset) -> Self {
        match preset {
            Preset::Cannex => Scenario {
                separation: 5e-6,
                t1: 300.0,
                t2: 310.0,
                t3: 300.0,
                thickness1: 200e-9,
                thickness2: 1e-6,
                substrate1: DielectricModel::constant(EPS_SI),
                substrate2: DielectricModel::constant(EPS_SIO2),
                plasma_freq_ev: AU_PLASMA_EV,
                damping_ev: AU_DAMPING_EV,
                table: None,
                tail: ModelChoice::Drude,
                sensor: SensorConfig::cannex(),
            },
            Preset::Gold => Scenario {
                separation: 2e-6,
                t1: 300.0,
                t2: 500.0,
                t3: 300.0,
                thickness1: 1e-6,
                thickness2: 1e-6,
                substrate1: DielectricModel::vacuum(),
                substrate2: DielectricModel::vacuum(),
                plasma_freq_ev: AU_PLASMA_EV,
                damping_ev: AU_DAMPING_EV,
                table: None,
                tail: ModelChoice::Drude,
                sensor: SensorConfig::cannex(),
            },
        }
    }

    /// Loads optical data for the tabulated model.
    pub fn load_table(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        self.table = Some(Arc::new(ingest_optical_table(&text)?));
        Ok(())
    }

    /// Coating permittivity for `model`.
    pub fn coating(&self, model: ModelChoice) -> Result<DielectricModel> {
        match model {
            ModelChoice::Drude => Ok(DielectricModel::drude_ev(self.plasma_freq_ev, self.damping_ev)),
            ModelChoice::Plasma => Ok(DielectricModel::plasma_ev(self.plasma_freq_ev)),
            ModelChoice::Tabulated => {
                let table = self
                    .table
                    .clone()
                    .ok_or_else(|| Error::Config("the tabulated model needs --data <optical file>".into()))?;
                let plasma_freq = ev_to_rad_per_s(self.plasma_freq_ev);
                let tail = match self.tail {
                    ModelChoice::Plasma => LowFrequencyTail::Plasma { plasma_freq },
                    _ => LowFrequencyTail::Drude {
                        plasma_freq,
                        damping: ev_to_rad_per_s(self.damping_ev),
                    },
                };
                Ok(DielectricModel::Tabulated {
                    table,
                    tail: Some(tail),
                })
            }
        }
    }

    /// The plate system for `model`.
    pub fn system(&self, model: ModelChoice) -> Result<SystemConfig> {
        let coating = self.coating(model)?;
        let config = SystemConfig {
            plate1: LayeredPlate::new(coating.clone(), self.thickness1, self.substrate1.clone()),
            plate2: LayeredPlate::new(coating, self.thickness2, self.substrate2.clone()),
            separation: self.separation,
            t1: self.t1,
            t2: self.t2,
            t3: self.t3,
        };
        config.validate()?;
        Ok(config)
    }
}

/// CANNEX plates for `model`, with the sensor description.
pub fn preset_cannex(model: ModelChoice) -> Result<(SystemConfig, SensorConfig)> {
    let s = Scenario::preset(Preset::Cannex);
    Ok((s.system(model)?, s.sensor.clone()))
}

/// Two identical thick gold plates for `model`.
pub fn preset_gold(model: ModelChoice) -> Result<SystemConfig> {
    Scenario::preset(Preset::Gold).system(model)
}
