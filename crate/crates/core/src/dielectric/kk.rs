//! Dispersion relation for tabulated data:
//! ε(iξ) = 1 + (2/π) ∫₀^∞ ω Im ε(ω) / (ω² + ξ²) dω.
//!
//! Below the first table row the tail model supplies Im ε analytically
//! (Drude), or a zero-frequency pole of weight ωp²/ξ² (plasma). Above the
//! last row Im ε is taken as zero.

use std::f64::consts::FRAC_2_PI;

use super::table::OpticalDataTable;
use super::LowFrequencyTail;
use crate::quadrature::{integrate_adaptive, Integrator};

const TABLE_REL_TOL: f64 = 1e-10;

pub(super) fn eps_imag_axis(table: &OpticalDataTable, tail: &LowFrequencyTail, xi: f64) -> f64 {
    1.0 + tail_contribution(tail, table.min_omega(), xi) + table_contribution(table, xi)
}

fn table_contribution(table: &OpticalDataTable, xi: f64) -> f64 {
    let xi2 = xi * xi;
    // In x = ln ω the measure ω dω / (ω² + ξ²) becomes ω² dx / (ω² + ξ²).
    let f = |x: f64| {
        let w = x.exp();
        let w2 = w * w;
        w2 * table.im_eps_at(w) / (w2 + xi2)
    };
    let nodes = table.log_omega_nodes();
    match Integrator::new(TABLE_REL_TOL, 0.0).integrate_breakpoints(f, nodes) {
        Ok(r) => FRAC_2_PI * r.value,
        Err(crate::Error::MaxSubdivisions { value, .. }) => FRAC_2_PI * value,
        Err(_) => f64::NAN,
    }
}

fn tail_contribution(tail: &LowFrequencyTail, omega_min: f64, xi: f64) -> f64 {
    match *tail {
        LowFrequencyTail::Plasma { plasma_freq } => (plasma_freq / xi).powi(2),
        LowFrequencyTail::Drude {
            plasma_freq,
            damping,
        } => {
            if damping == 0.0 {
                return (plasma_freq / xi).powi(2);
            }
            // ω Im ε_D(ω) = ωp² γ / (ω² + γ²)
            let wp2g = plasma_freq * plasma_freq * damping;
            let (g2, xi2) = (damping * damping, xi * xi);
            let diff = xi2 - g2;
            let integral = if diff.abs() > 1e-4 * xi2.max(g2) {
                ((omega_min / damping).atan() / damping - (omega_min / xi).atan() / xi) / diff
            } else {
                let f = |w: f64| 1.0 / ((w * w + g2) * (w * w + xi2));
                integrate_adaptive(f, 0.0, omega_min, 1e-12, 0.0, 8)
                    .map(|r| r.value)
                    .unwrap_or(f64::NAN)
            };
            FRAC_2_PI * wp2g * integral
        }
    }
}
