//! Fixed CODATA 2018 constants, SI units.

/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380_649e-23;
/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Speed of light in vacuum, m/s.
pub const C: f64 = 299_792_458.0;
/// Stefan–Boltzmann constant, W·m⁻²·K⁻⁴.
pub const SIGMA: f64 = 5.670_374_419e-8;
/// Electron-volt, J.
pub const EV: f64 = 1.602_176_634e-19;

/// The constants as a value, for callers that want to pass them around or
/// print them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub k_b: f64,
    pub hbar: f64,
    pub c: f64,
    pub sigma: f64,
    pub ev: f64,
}

impl PhysicalConstants {
    pub const CODATA: PhysicalConstants = PhysicalConstants {
        k_b: K_B,
        hbar: HBAR,
        c: C,
        sigma: SIGMA,
        ev: EV,
    };
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::CODATA
    }
}

/// Angular frequency (rad/s) of a photon energy given in eV.
pub fn ev_to_rad_per_s(energy_ev: f64) -> f64 {
    energy_ev * EV / HBAR
}

/// Photon energy in eV of an angular frequency in rad/s.
pub fn rad_per_s_to_ev(omega: f64) -> f64 {
    omega * HBAR / EV
}
