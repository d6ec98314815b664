use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::sweep::linspace;
use super::{ModelChoice, Preset, Scenario, SensorConfig, SweepSpec, SweepVariable};
use crate::{DielectricModel, Error, PlateIndex, QuadratureSettings, Result};

/// Experiment definition read from a TOML file. Every field is optional;
/// missing fields keep the preset's value.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigFile {
    pub preset: Option<Preset>,
    pub models: Option<Vec<ModelChoice>>,
    /// Optical data file, relative to the config file's directory.
    pub data: Option<PathBuf>,
    /// Low-frequency extension of tabulated data: `drude` or `plasma`.
    pub tail: Option<ModelChoice>,
    pub system: SystemSection,
    pub plate1: PlateSection,
    pub plate2: PlateSection,
    pub sensor: Option<SensorConfig>,
    pub quadrature: Option<QuadratureSettings>,
    pub sweep: Option<SweepSection>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SystemSection {
    pub separation: Option<f64>,
    pub t1: Option<f64>,
    pub t2: Option<f64>,
    pub t3: Option<f64>,
    pub plasma_freq_ev: Option<f64>,
    pub damping_ev: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlateSection {
    /// Coating thickness, m.
    pub thickness: Option<f64>,
    /// Substrate permittivity.
    pub substrate_eps: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    #[serde(default)]
    pub plate: Option<u8>,
    #[serde(default)]
    pub gradient: bool,
    #[serde(default)]
    pub differential: bool,
}

impl SweepSection {
    pub fn to_spec(&self, models: Vec<ModelChoice>) -> Result<SweepSpec> {
        Ok(SweepSpec {
            variable: self.variable,
            values: linspace(self.start, self.stop, self.points),
            models,
            plate: PlateIndex::from_number(self.plate.unwrap_or(2))?,
            gradient: self.gradient,
            differential: self.differential,
        })
    }
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Reads a file; a relative `data` path is resolved against the file's
    /// directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let mut cfg = ConfigFile::parse(&text)?;
        if let (Some(data), Some(dir)) = (cfg.data.as_mut(), path.parent()) {
            if data.is_relative() {
                *data = dir.join(&*data);
            }
        }
        Ok(cfg)
    }

    /// Scenario from the file's preset (CANNEX by default) with the file's
    /// overrides applied.
    pub fn scenario(&self) -> Result<Scenario> {
        let mut s = Scenario::preset(self.preset.unwrap_or(Preset::Cannex));
        self.apply(&mut s)?;
        Ok(s)
    }

    pub fn apply(&self, s: &mut Scenario) -> Result<()> {
        let sys = &self.system;
        set(&mut s.separation, sys.separation);
        set(&mut s.t1, sys.t1);
        set(&mut s.t2, sys.t2);
        set(&mut s.t3, sys.t3);
        set(&mut s.plasma_freq_ev, sys.plasma_freq_ev);
        set(&mut s.damping_ev, sys.damping_ev);
        set(&mut s.thickness1, self.plate1.thickness);
        set(&mut s.thickness2, self.plate2.thickness);
        if let Some(eps) = self.plate1.substrate_eps {
            s.substrate1 = DielectricModel::constant(eps);
        }
        if let Some(eps) = self.plate2.substrate_eps {
            s.substrate2 = DielectricModel::constant(eps);
        }
        if let Some(tail) = self.tail {
            if tail == ModelChoice::Tabulated {
                return Err(Error::Config("tail must be drude or plasma".into()));
            }
            s.tail = tail;
        }
        if let Some(sensor) = &self.sensor {
            s.sensor = sensor.clone();
        }
        if let Some(path) = &self.data {
            s.load_table(path)?;
        }
        Ok(())
    }
}

fn set(field: &mut f64, value: Option<f64>) {
    if let Some(v) = value {
        *field = v;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_file() {
        let text = r#"
preset = "gold"
models = ["drude", "plasma"]

[system]
separation = 3e-6
t2 = 400.0

[plate1]
thickness = 5e-7

[quadrature]
rel_tol = 1e-7

[sweep]
variable = "t2"
start = 300.0
stop = 500.0
points = 5
"#;
        let cfg = ConfigFile::parse(text).unwrap();
        let s = cfg.scenario().unwrap();
        assert_eq!(s.separation, 3e-6);
        assert_eq!(s.t2, 400.0);
        assert_eq!(s.t1, 300.0);
        assert_eq!(s.thickness1, 5e-7);
        assert_eq!(cfg.quadrature.unwrap().rel_tol, 1e-7);
        let spec = cfg.sweep.unwrap().to_spec(cfg.models.unwrap()).unwrap();
        assert_eq!(spec.values, vec![300.0, 350.0, 400.0, 450.0, 500.0]);
        assert_eq!(spec.variable, SweepVariable::T2);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(ConfigFile::parse("[system]\nseparaton = 1e-6\n").is_err());
        assert!(ConfigFile::parse("[quadrature]\nreltol = 1e-6\n").is_err());
    }

    #[test]
    fn empty_file_is_cannex() {
        let s = ConfigFile::parse("").unwrap().scenario().unwrap();
        assert_eq!(s, Scenario::preset(Preset::Cannex));
    }
}
