//! Equilibrium Lifshitz pressure and its separation gradient.
//!
//! Both are primed Matsubara sums (the `l = 0` term carries weight ½) of
//! integrals over `y ∈ [ζ_l, ∞)`:
//!
//! ```text
//! P_eq(a, T)  = −(k_B T / 8πa³) Σ′ ∫ y² Σ_α X/(1 − X) dy
//! P′_eq(a, T) = +(k_B T / 8πa⁴) Σ′ ∫ y³ Σ_α X/(1 − X)² dy,   X = R⁽¹⁾R⁽²⁾e^{−y}
//! ```
//!
//! At fixed `(ξ, k⊥)` the reflection coefficients do not depend on `a`, so
//! the gradient expression is the exact derivative of the pressure.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::constants::{C, HBAR, K_B};
use crate::quadrature::{exp_poly_cutoff, push_warning, sum_with_tail, Integrator, Warning};
use crate::reflection::LayeredPlate;
use crate::{Error, Result};

/// Two plates, their separation and the three temperatures.
///
/// Plate 1 is the upper (sensor) plate at `t1`; plate 2 the lower plate at
/// `t2`; `t3` is the environment.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    pub plate1: LayeredPlate,
    pub plate2: LayeredPlate,
    /// Gap width `a`, m.
    pub separation: f64,
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
}

impl SystemConfig {
    pub fn validate(&self) -> Result<()> {
        self.plate1.validate()?;
        self.plate2.validate()?;
        if !(self.separation > 0.0 && self.separation.is_finite()) {
            return Err(Error::Config(format!(
                "separation must be positive, got {}",
                self.separation
            )));
        }
        for (name, t) in [("T1", self.t1), ("T2", self.t2), ("T3", self.t3)] {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::Config(format!("{name} must be positive, got {t}")));
            }
        }
        Ok(())
    }

    pub fn with_separation(&self, a: f64) -> Self {
        SystemConfig {
            separation: a,
            ..self.clone()
        }
    }

    pub fn with_temperatures(&self, t1: f64, t2: f64) -> Self {
        SystemConfig {
            t1,
            t2,
            ..self.clone()
        }
    }

    /// Exchanges the two plate temperatures.
    pub fn swapped_temperatures(&self) -> Self {
        self.with_temperatures(self.t2, self.t1)
    }
}

/// Tolerances and truncation rules for every sum and integral.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureSettings {
    /// Relative tolerance of each adaptive integral.
    pub rel_tol: f64,
    /// Absolute tolerance, Pa (Pa/m for gradients).
    pub abs_tol: f64,
    /// Matsubara truncation: last term and geometric tail below this
    /// fraction of the accumulated sum.
    pub matsubara_tail_tol: f64,
    pub max_matsubara_terms: usize,
    /// The `y` range is cut where `y^p e^{−y}` is this many decades below its peak.
    pub y_cutoff_decades: f64,
    /// The `u` range is cut at `ħω_c u / k_B T_max` equal to this.
    pub u_cutoff_exponent: f64,
    /// Relative step in `a` for finite-difference derivatives.
    pub fd_relative_step: f64,
    /// Drop the antisymmetric term from gradients when both coatings pass
    /// the thick-coating test.
    pub omit_thick_antisymmetric_gradient: bool,
    pub max_panels: usize,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        QuadratureSettings {
            rel_tol: 1e-8,
            abs_tol: 1e-18,
            matsubara_tail_tol: 1e-9,
            max_matsubara_terms: 200_000,
            y_cutoff_decades: 16.0,
            u_cutoff_exponent: 40.0,
            fd_relative_step: 1e-3,
            omit_thick_antisymmetric_gradient: true,
            max_panels: crate::quadrature::DEFAULT_MAX_PANELS,
        }
    }
}

impl QuadratureSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol <= 1e-2) {
            return Err(Error::Config(format!("rel_tol must lie in (0, 1e-2], got {}", self.rel_tol)));
        }
        if !(self.abs_tol >= 0.0) {
            return Err(Error::Config("abs_tol must be ≥ 0".into()));
        }
        if self.max_matsubara_terms < 100 {
            return Err(Error::Config("max_matsubara_terms must be ≥ 100".into()));
        }
        if !(self.matsubara_tail_tol > 0.0 && self.matsubara_tail_tol < 1.0) {
            return Err(Error::Config("matsubara_tail_tol must lie in (0, 1)".into()));
        }
        if !(self.y_cutoff_decades > 0.0 && self.u_cutoff_exponent > 0.0) {
            return Err(Error::Config("cutoffs must be positive".into()));
        }
        if !(self.fd_relative_step > 0.0 && self.fd_relative_step < 0.1) {
            return Err(Error::Config("fd_relative_step must lie in (0, 0.1)".into()));
        }
        Ok(())
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub(crate) fn integrator(&self, abs_tol: f64) -> Integrator {
        Integrator::new(self.rel_tol, abs_tol).with_max_panels(self.max_panels)
    }
}

/// Value of a Matsubara sum with its error budget.
#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumResult {
    pub value: f64,
    /// Sum of the reported quadrature errors, same units as `value`.
    pub quadrature_error: f64,
    /// Bound on the neglected Matsubara remainder, same units as `value`.
    pub tail_estimate: f64,
    pub matsubara_terms: usize,
    pub warnings: Vec<Warning>,
}

/// Dimensionless Matsubara frequency `ζ_l = 4πa k_B T l / ħc`.
pub fn matsubara_zeta(a: f64, temperature: f64, l: usize) -> f64 {
    4.0 * PI * a * K_B * temperature * l as f64 / (HBAR * C)
}

/// Matsubara frequency `ξ_l = 2π k_B T l / ħ`, rad/s.
pub fn matsubara_xi(temperature: f64, l: usize) -> f64 {
    2.0 * PI * K_B * temperature * l as f64 / HBAR
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Quantity {
    Pressure,
    Gradient,
}

/// `1 − R₁R₂e^{−y}` without cancellation when `R₁R₂ → 1` and `y → 0`.
fn one_minus_x(rr: f64, y: f64) -> f64 {
    (1.0 - rr) - rr * (-y).exp_m1()
}

/// The `y`-integrand of the `l`-th term, summed over polarizations.
pub(crate) fn y_integrand(
    p1: &crate::reflection::MatsubaraPlate,
    p2: &crate::reflection::MatsubaraPlate,
    y: f64,
    gradient: bool,
) -> f64 {
    let r1 = p1.reflection_pair(y);
    let r2 = p2.reflection_pair(y);
    let ey = (-y).exp();
    let mut acc = 0.0;
    for pol in 0..2 {
        let rr = r1[pol] * r2[pol];
        if rr == 0.0 {
            continue;
        }
        let x = rr * ey;
        let den = one_minus_x(rr, y);
        acc += if gradient {
            y * y * y * x / (den * den)
        } else {
            y * y * x / den
        };
    }
    acc
}

fn matsubara_sum(
    config: &SystemConfig,
    temperature: f64,
    settings: &QuadratureSettings,
    quantity: Quantity,
) -> Result<EquilibriumResult> {
    config.validate()?;
    settings.validate()?;
    if !(temperature > 0.0 && temperature.is_finite()) {
        return Err(Error::Config(format!("temperature must be positive, got {temperature}")));
    }
    let a = config.separation;
    let (prefactor, power) = match quantity {
        Quantity::Pressure => (-K_B * temperature / (8.0 * PI * a.powi(3)), 2.0),
        Quantity::Gradient => (K_B * temperature / (8.0 * PI * a.powi(4)), 3.0),
    };
    let integrator = settings.integrator(settings.abs_tol / prefactor.abs());
    let drop = 10f64.powf(-settings.y_cutoff_decades);
    let diagnostics: Mutex<BTreeMap<usize, (f64, Vec<Warning>)>> = Mutex::new(BTreeMap::new());

    let term = |l: usize| -> Result<f64> {
        let xi = matsubara_xi(temperature, l);
        let p1 = config.plate1.at_matsubara(xi, a)?;
        let p2 = config.plate2.at_matsubara(xi, a)?;
        let zeta = p1.zeta();
        let hi = exp_poly_cutoff(power, zeta, drop);
        let gradient = quantity == Quantity::Gradient;
        let r = integrator.integrate(|y| y_integrand(&p1, &p2, y, gradient), zeta, hi, 4)?;
        let weight = if l == 0 { 0.5 } else { 1.0 };
        diagnostics
            .lock()
            .expect("diagnostics lock")
            .insert(l, (weight * r.error_estimate, r.warnings));
        Ok(weight * r.value)
    };

    let series = sum_with_tail(term, settings.matsubara_tail_tol, settings.max_matsubara_terms)?;
    let diagnostics = diagnostics.into_inner().expect("diagnostics lock");
    let mut quad_err = 0.0;
    let mut warnings = Vec::new();
    for (_, (err, ws)) in diagnostics.range(..series.terms_used) {
        quad_err += err;
        for w in ws {
            push_warning(&mut warnings, *w);
        }
    }
    Ok(EquilibriumResult {
        value: prefactor * series.value,
        quadrature_error: prefactor.abs() * quad_err,
        tail_estimate: prefactor.abs() * series.tail_estimate,
        matsubara_terms: series.terms_used,
        warnings,
    })
}

/// Equilibrium Casimir pressure at temperature `temperature` (negative is
/// attractive). The config's own temperatures are ignored.
pub fn pressure_eq(config: &SystemConfig, temperature: f64, settings: &QuadratureSettings) -> Result<EquilibriumResult> {
    matsubara_sum(config, temperature, settings, Quantity::Pressure)
}

/// Separation gradient `∂P_eq/∂a`, Pa/m.
pub fn pressure_eq_gradient(
    config: &SystemConfig,
    temperature: f64,
    settings: &QuadratureSettings,
) -> Result<EquilibriumResult> {
    matsubara_sum(config, temperature, settings, Quantity::Gradient)
}
