//! Casimir pressures between two parallel layered plates held at different
//! temperatures.
//!
//! Each plate is a metallic coating of finite thickness on a semi-infinite
//! dielectric substrate. The pressure on either plate is assembled from
//!
//! * the mean of the equilibrium Lifshitz pressures at the two plate
//!   temperatures ([`equilibrium`]),
//! * a contribution antisymmetric under exchange of the temperatures,
//!   computed from real-frequency reflection coefficients
//!   ([`nonequilibrium`]),
//! * separation-independent blackbody terms.
//!
//! Metal response is described by interchangeable [`DielectricModel`]s
//! (Drude, plasma, constant, or tabulated optical data with a low-frequency
//! model extension). The [`cli`] module hosts presets, sweeps and the
//! discriminability report used by the `casimir` binary.

pub mod cli;
pub mod constants;
pub mod dielectric;
pub mod equilibrium;
mod error;
pub mod nonequilibrium;
pub mod quadrature;
pub mod reflection;

pub use constants::PhysicalConstants;
pub use dielectric::{ComplexPermittivity, DielectricModel, LowFrequencyTail, OpticalDataTable};
pub use equilibrium::{
    pressure_eq, pressure_eq_gradient, EquilibriumResult, QuadratureSettings, SystemConfig,
};
pub use error::{Error, Result};
pub use nonequilibrium::{
    blackbody_term, bose_occupation, delta_p_neq, differential_gradient, differential_pressure,
    total_pressure, total_pressure_gradient, GradientBreakdown, NeqResult, PlateIndex,
    PressureBreakdown,
};
pub use reflection::{LayeredPlate, Polarization};
