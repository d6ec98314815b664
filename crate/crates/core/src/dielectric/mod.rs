//! Material permittivities on the real and imaginary frequency axes.
//!
//! All frequencies are angular frequencies in rad/s. Constructors taking
//! photon energies in eV convert once at the boundary.

use std::sync::Arc;

use num_complex::Complex64;

use crate::constants::ev_to_rad_per_s;
use crate::{Error, Result};

mod kk;
mod table;

pub use table::{ingest_optical_table, synthesize_table, OpticalDataTable, OpticalRow};

/// Gold plasma frequency, eV.
pub const AU_PLASMA_EV: f64 = 9.0;
/// Gold relaxation parameter at 300 K, eV.
pub const AU_DAMPING_EV: f64 = 0.035;

/// Low-frequency extension used below the first row of an optical table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LowFrequencyTail {
    Drude { plasma_freq: f64, damping: f64 },
    Plasma { plasma_freq: f64 },
}

impl LowFrequencyTail {
    fn as_model(&self) -> DielectricModel {
        match *self {
            LowFrequencyTail::Drude {
                plasma_freq,
                damping,
            } => DielectricModel::Drude {
                plasma_freq,
                damping,
            },
            LowFrequencyTail::Plasma { plasma_freq } => DielectricModel::Plasma { plasma_freq },
        }
    }
}

/// Permittivity model of a material.
#[derive(Debug, Clone, PartialEq)]
pub enum DielectricModel {
    /// `1 − ωp² / (ω(ω + iγ))`.
    Drude { plasma_freq: f64, damping: f64 },
    /// `1 − ωp² / ω²`.
    Plasma { plasma_freq: f64 },
    /// Dispersionless dielectric.
    Constant { eps: f64 },
    /// Measured `(n, k)` data, extended below the table by `tail`.
    Tabulated {
        table: Arc<OpticalDataTable>,
        tail: Option<LowFrequencyTail>,
    },
}

/// Complex permittivity at a real frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexPermittivity {
    pub re: f64,
    pub im: f64,
}

impl ComplexPermittivity {
    pub fn new(re: f64, im: f64) -> Self {
        ComplexPermittivity { re, im }
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

impl From<ComplexPermittivity> for Complex64 {
    fn from(e: ComplexPermittivity) -> Self {
        e.to_complex()
    }
}

/// Permittivity at an imaginary frequency `iξ`, including the `ξ = 0`
/// limit of conductors, where ε itself diverges.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ImagPermittivity {
    Finite(f64),
    /// Conductor at zero frequency. `plasma_freq_sq` is the limit of
    /// `(ε(iξ) − 1)·ξ²` as `ξ → 0`: `ωp²` for the plasma model, zero for Drude.
    StaticConductor { plasma_freq_sq: f64 },
}

impl ImagPermittivity {
    /// `(ε − 1)·ζ²` for dimensionless frequency `zeta = ξ / ω_c`, finite in the
    /// static conductor case. `omega_c` is `c / 2a`.
    pub fn susceptibility_zeta2(&self, zeta: f64, omega_c: f64) -> f64 {
        match *self {
            ImagPermittivity::Finite(eps) => (eps - 1.0) * zeta * zeta,
            ImagPermittivity::StaticConductor { plasma_freq_sq } => {
                plasma_freq_sq / (omega_c * omega_c)
            }
        }
    }

    pub fn is_static_conductor(&self) -> bool {
        matches!(self, ImagPermittivity::StaticConductor { .. })
    }
}

impl DielectricModel {
    pub fn drude_ev(plasma_ev: f64, damping_ev: f64) -> Self {
        DielectricModel::Drude {
            plasma_freq: ev_to_rad_per_s(plasma_ev),
            damping: ev_to_rad_per_s(damping_ev),
        }
    }

    pub fn plasma_ev(plasma_ev: f64) -> Self {
        DielectricModel::Plasma {
            plasma_freq: ev_to_rad_per_s(plasma_ev),
        }
    }

    pub fn gold_drude() -> Self {
        Self::drude_ev(AU_PLASMA_EV, AU_DAMPING_EV)
    }

    pub fn gold_plasma() -> Self {
        Self::plasma_ev(AU_PLASMA_EV)
    }

    pub fn constant(eps: f64) -> Self {
        DielectricModel::Constant { eps }
    }

    pub fn vacuum() -> Self {
        DielectricModel::Constant { eps: 1.0 }
    }

    pub fn tabulated(table: OpticalDataTable, tail: LowFrequencyTail) -> Self {
        DielectricModel::Tabulated {
            table: Arc::new(table),
            tail: Some(tail),
        }
    }

    /// Checks the parameter invariants of the model.
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::Model(format!("{name} must be positive and finite, got {v}")))
            }
        };
        match self {
            DielectricModel::Drude {
                plasma_freq,
                damping,
            } => {
                positive("plasma frequency", *plasma_freq)?;
                if !(damping.is_finite() && *damping >= 0.0) {
                    return Err(Error::Model(format!("damping must be ≥ 0, got {damping}")));
                }
                Ok(())
            }
            DielectricModel::Plasma { plasma_freq } => positive("plasma frequency", *plasma_freq),
            DielectricModel::Constant { eps } => {
                if eps.is_finite() && *eps >= 1.0 {
                    Ok(())
                } else {
                    Err(Error::Model(format!("constant permittivity must be ≥ 1, got {eps}")))
                }
            }
            DielectricModel::Tabulated { tail, .. } => match tail {
                None => Err(Error::Model("tabulated model needs a low-frequency tail".into())),
                Some(t) => t.as_model().validate(),
            },
        }
    }

    /// Plasma frequency of a metal model (of its tail, for tabulated data).
    pub fn plasma_frequency(&self) -> Option<f64> {
        match self {
            DielectricModel::Drude { plasma_freq, .. } | DielectricModel::Plasma { plasma_freq } => {
                Some(*plasma_freq)
            }
            DielectricModel::Constant { .. } => None,
            DielectricModel::Tabulated { tail, .. } => tail.map(|t| match t {
                LowFrequencyTail::Drude { plasma_freq, .. } | LowFrequencyTail::Plasma { plasma_freq } => {
                    plasma_freq
                }
            }),
        }
    }

    /// Whether ε(iξ) diverges as ξ → 0.
    pub fn is_conductor(&self) -> bool {
        !matches!(self, DielectricModel::Constant { .. })
    }

    /// ε(iξ) for ξ > 0 (ξ = 0 only for non-conductors).
    pub fn eps_imag_axis(&self, xi: f64) -> Result<f64> {
        if !(xi >= 0.0) {
            return Err(Error::Domain(format!("imaginary frequency must be ≥ 0, got {xi}")));
        }
        if xi == 0.0 && self.is_conductor() {
            return Err(Error::Domain(
                "ε(i·0) diverges for conductors; use the static limit".into(),
            ));
        }
        match self {
            DielectricModel::Drude {
                plasma_freq,
                damping,
            } => Ok(1.0 + plasma_freq * plasma_freq / (xi * (xi + damping))),
            DielectricModel::Plasma { plasma_freq } => Ok(1.0 + (plasma_freq / xi).powi(2)),
            DielectricModel::Constant { eps } => Ok(*eps),
            DielectricModel::Tabulated { table, tail } => {
                let tail = tail.ok_or_else(|| {
                    Error::Model("tabulated model needs a low-frequency tail".into())
                })?;
                Ok(kk::eps_imag_axis(table, &tail, xi))
            }
        }
    }

    /// ε(iξ) with the ξ = 0 conductor limit made explicit.
    pub fn imag_response(&self, xi: f64) -> Result<ImagPermittivity> {
        if xi == 0.0 {
            return Ok(match self {
                DielectricModel::Constant { eps } => ImagPermittivity::Finite(*eps),
                // Without damping the Drude form is the plasma model.
                DielectricModel::Drude { plasma_freq, damping } => ImagPermittivity::StaticConductor {
                    plasma_freq_sq: if *damping == 0.0 { plasma_freq * plasma_freq } else { 0.0 },
                },
                DielectricModel::Plasma { plasma_freq } => ImagPermittivity::StaticConductor {
                    plasma_freq_sq: plasma_freq * plasma_freq,
                },
                DielectricModel::Tabulated { tail, .. } => match tail {
                    None => {
                        return Err(Error::Model(
                            "tabulated model needs a low-frequency tail".into(),
                        ))
                    }
                    Some(t) => return t.as_model().imag_response(0.0),
                },
            });
        }
        self.eps_imag_axis(xi).map(ImagPermittivity::Finite)
    }

    /// Complex ε(ω) at a real frequency ω > 0.
    pub fn eps_real_axis(&self, omega: f64) -> Result<ComplexPermittivity> {
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::Domain(format!("real frequency must be > 0, got {omega}")));
        }
        Ok(match self {
            DielectricModel::Drude {
                plasma_freq,
                damping,
            } => {
                let wp2 = plasma_freq * plasma_freq;
                let denom = omega * omega + damping * damping;
                ComplexPermittivity::new(1.0 - wp2 / denom, wp2 * damping / (omega * denom))
            }
            DielectricModel::Plasma { plasma_freq } => {
                ComplexPermittivity::new(1.0 - (plasma_freq / omega).powi(2), 0.0)
            }
            DielectricModel::Constant { eps } => ComplexPermittivity::new(*eps, 0.0),
            DielectricModel::Tabulated { table, tail } => {
                if omega < table.min_omega() {
                    let tail = tail.ok_or_else(|| {
                        Error::Model("tabulated model needs a low-frequency tail".into())
                    })?;
                    return tail.as_model().eps_real_axis(omega);
                }
                if omega > table.max_omega() {
                    ComplexPermittivity::new(1.0, 0.0)
                } else {
                    table.permittivity_at(omega)
                }
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::{HBAR, K_B};
    use std::f64::consts::PI;

    fn xi1_300k() -> f64 {
        2.0 * PI * K_B * 300.0 / HBAR
    }

    #[test]
    fn drude_at_first_matsubara() {
        // 1 + 81 / (0.16244 (0.16244 + 0.035)) with ħξ₁ = 2π k_B 300 K in eV
        let e1 = 2.0 * PI * K_B * 300.0 / crate::constants::EV;
        let expected = 1.0 + 81.0 / (e1 * (e1 + 0.035));
        let eps = DielectricModel::gold_drude().eps_imag_axis(xi1_300k()).unwrap();
        assert!((eps / expected - 1.0).abs() < 1e-12);
        assert!((eps / 2.527e3 - 1.0).abs() < 1e-3, "{eps}");
    }

    #[test]
    fn plasma_at_first_matsubara() {
        let eps = DielectricModel::gold_plasma().eps_imag_axis(xi1_300k()).unwrap();
        assert!((eps / 3.071e3 - 1.0).abs() < 1e-3, "{eps}");
    }

    #[test]
    fn high_frequency_transparency() {
        for m in [DielectricModel::gold_drude(), DielectricModel::gold_plasma()] {
            let eps = m.eps_imag_axis(1e22).unwrap();
            assert!((eps - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn zero_damping_drude_is_plasma() {
        let wp = ev_to_rad_per_s(9.0);
        let d = DielectricModel::Drude {
            plasma_freq: wp,
            damping: 0.0,
        };
        let p = DielectricModel::Plasma { plasma_freq: wp };
        for i in 0..100 {
            let xi = 1e12 * 1.2f64.powi(i);
            let (a, b) = (d.eps_imag_axis(xi).unwrap(), p.eps_imag_axis(xi).unwrap());
            assert!(((a - b) / b).abs() <= 4.0 * f64::EPSILON);
            let w = xi;
            let (ra, rb) = (d.eps_real_axis(w).unwrap(), p.eps_real_axis(w).unwrap());
            assert!((ra.re - rb.re).abs() <= 4.0 * f64::EPSILON * rb.re.abs().max(1.0));
            assert_eq!(ra.im, 0.0);
        }
    }

    #[test]
    fn small_damping_converges_to_plasma() {
        let wp = ev_to_rad_per_s(9.0);
        let d = DielectricModel::Drude {
            plasma_freq: wp,
            damping: 1e-6 * wp,
        };
        let p = DielectricModel::Plasma { plasma_freq: wp };
        let xi = xi1_300k();
        let (a, b) = (d.eps_imag_axis(xi).unwrap(), p.eps_imag_axis(xi).unwrap());
        assert!(((a - b) / b).abs() < 1e-4);
    }

    #[test]
    fn strictly_decreasing_on_imaginary_axis() {
        for m in [DielectricModel::gold_drude(), DielectricModel::gold_plasma()] {
            let mut prev = f64::INFINITY;
            for i in 0..200 {
                let xi = 1e11 * 1.15f64.powi(i);
                let e = m.eps_imag_axis(xi).unwrap();
                assert!(e < prev);
                assert!(e >= 1.0);
                prev = e;
            }
        }
    }

    #[test]
    fn negative_frequency_is_domain_error() {
        let m = DielectricModel::gold_drude();
        assert!(matches!(m.eps_imag_axis(-1.0), Err(Error::Domain(_))));
        assert!(matches!(m.eps_imag_axis(0.0), Err(Error::Domain(_))));
        assert!(matches!(m.eps_real_axis(0.0), Err(Error::Domain(_))));
        assert!(matches!(m.eps_real_axis(-5.0), Err(Error::Domain(_))));
    }

    #[test]
    fn static_limits() {
        assert_eq!(
            DielectricModel::gold_drude().imag_response(0.0).unwrap(),
            ImagPermittivity::StaticConductor { plasma_freq_sq: 0.0 }
        );
        let wp = ev_to_rad_per_s(9.0);
        assert_eq!(
            DielectricModel::gold_plasma().imag_response(0.0).unwrap(),
            ImagPermittivity::StaticConductor {
                plasma_freq_sq: wp * wp
            }
        );
        assert_eq!(
            DielectricModel::constant(3.81).imag_response(0.0).unwrap(),
            ImagPermittivity::Finite(3.81)
        );
    }

    #[test]
    fn plasma_zero_crossing() {
        let wp = ev_to_rad_per_s(9.0);
        let e = DielectricModel::Plasma { plasma_freq: wp }
            .eps_real_axis(wp)
            .unwrap();
        assert_eq!((e.re, e.im), (0.0, 0.0));
    }

    #[test]
    fn drude_real_axis_matches_complex_arithmetic() {
        let wp = ev_to_rad_per_s(9.0);
        let g = ev_to_rad_per_s(0.035);
        let w = wp;
        let e = DielectricModel::Drude {
            plasma_freq: wp,
            damping: g,
        }
        .eps_real_axis(w)
        .unwrap();
        let direct = Complex64::new(1.0, 0.0)
            - Complex64::new(wp * wp, 0.0) / (Complex64::new(w, 0.0) * Complex64::new(w, g));
        assert!((e.re - direct.re).abs() < 1e-14);
        assert!((e.im - direct.im).abs() < 1e-14);
        // ħω = ħωp: re = 1 − 1/(1 + (γ/ω)²), im = (γ/ω)/(1 + (γ/ω)²)
        let r = 0.035 / 9.0;
        assert!((e.re - (1.0 - 1.0 / (1.0 + r * r))).abs() < 1e-14);
        assert!((e.im - r / (1.0 + r * r)).abs() < 1e-14);
    }

    #[test]
    fn constant_is_dispersionless() {
        let m = DielectricModel::constant(3.8);
        for w in [1e10, 1e14, 1e17] {
            assert_eq!(m.eps_real_axis(w).unwrap(), ComplexPermittivity::new(3.8, 0.0));
            assert_eq!(m.eps_imag_axis(w).unwrap(), 3.8);
        }
    }

    #[test]
    fn invalid_parameters() {
        assert!(DielectricModel::constant(0.5).validate().is_err());
        assert!(DielectricModel::Plasma { plasma_freq: 0.0 }.validate().is_err());
        assert!(DielectricModel::Drude {
            plasma_freq: 1.0,
            damping: -1.0
        }
        .validate()
        .is_err());
        assert!(DielectricModel::gold_drude().validate().is_ok());
    }

    #[test]
    fn missing_tail_is_model_error() {
        let table = ingest_optical_table("1.0 0.5 2.0\n2.0 0.3 1.0\n").unwrap();
        let m = DielectricModel::Tabulated {
            table: Arc::new(table),
            tail: None,
        };
        assert!(matches!(m.eps_imag_axis(1e14), Err(Error::Model(_))));
        assert!(matches!(m.validate(), Err(Error::Model(_))));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn passive_imaginary_part(log_w in 9.0f64..18.0, gamma_ev in 0.0f64..0.5) {
                let w = 10f64.powf(log_w);
                for m in [
                    DielectricModel::drude_ev(9.0, gamma_ev),
                    DielectricModel::gold_plasma(),
                    DielectricModel::constant(11.66),
                ] {
                    prop_assert!(m.eps_real_axis(w).unwrap().im >= 0.0);
                }
            }
        }
    }
}
