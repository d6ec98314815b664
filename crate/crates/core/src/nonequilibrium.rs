//! The antisymmetric nonequilibrium term, blackbody terms, and the total and
//! differential pressures and gradients assembled from them.
//!
//! In the variables `u = ω/ω_c` (`ω_c = c/2a`) and `t = k⊥c/ω`,
//!
//! ```text
//! ΔP_neq = (ħc / 64π²a⁴) ∫₀^∞ u³ [n(u,T₁) − n(u,T₂)] Σ_α [ I_α^prop(u) − 2 I_α^ev(u) ] du
//! ```
//!
//! The propagating part is integrated in `c = √(1 − t²)` and the evanescent
//! part in `s = √(t² − 1)`:
//!
//! ```text
//! I^prop = ∫₀¹ c² (|R₂|² − |R₁|²) / |1 − R₁R₂e^{iuc}|² dc
//! I^ev   = ∫₀^∞ s² e^{−us} Im(R₁ R₂*) / |1 − R₁R₂e^{−us}|² ds
//! ```
//!
//! For weakly absorbing plates `|D|⁻²` has tall Fabry-Perot peaks. They are
//! located on a grid fine enough to bracket each one, refined, and integrated
//! through a tangent map centred on the peak.

use std::f64::consts::PI;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use crate::constants::{C, HBAR, K_B, SIGMA};
use crate::equilibrium::{pressure_eq, pressure_eq_gradient, EquilibriumResult, QuadratureSettings, SystemConfig};
use crate::quadrature::{push_warning, uniform_breaks, IntegrationResult, Integrator, Warning};
use crate::reflection::{reflection_difference, LayeredPlate, RealFrequencyPlate, Transverse};
use crate::{Error, Result};

/// `|D|²` is clamped from below at this value.
pub const RESONANCE_FLOOR: f64 = 1e-30;

/// A coating counts as thick when it spans this many skin depths `c/ωp`;
/// the substrate then enters `|R|²` at the `e^{-16}` level.
pub const THICK_COATING_SKIN_DEPTHS: f64 = 8.0;

const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Decades below `u_max` seeded with their own outer panel.
const OUTER_DECADES: usize = 9;

/// Panel cap for each inner integral; the outer integral absorbs the error
/// left when it is reached.
const INNER_MAX_PANELS: usize = 400;

/// Scan step in `u` when locating resonance entries; well below the period 2π.
const ENTRY_SCAN_STEP: f64 = 0.25;

/// Decades below the largest transverse wave number sampled on a log grid,
/// and how many of them are sampled densely.
const GRAZING_DECADES: usize = 15;
const GRAZING_FINE_DECADES: usize = 6;

/// Decades of relative offset sampled on each side of a surface mode.
const SURFACE_MODE_DECADES: usize = 14;

/// Panels seeded from the sampling grid.
const INITIAL_PANELS: usize = 12;


#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PlateIndex {
    One,
    Two,
}

impl PlateIndex {
    pub fn number(self) -> u8 {
        match self {
            PlateIndex::One => 1,
            PlateIndex::Two => 2,
        }
    }

    pub fn from_number(n: u8) -> Result<Self> {
        match n {
            1 => Ok(PlateIndex::One),
            2 => Ok(PlateIndex::Two),
            _ => Err(Error::Config(format!("plate index must be 1 or 2, got {n}"))),
        }
    }
}

/// The antisymmetric term with its propagating and evanescent parts, Pa.
#[derive(Debug, Clone, PartialEq)]
pub struct NeqResult {
    pub value: f64,
    pub propagating: f64,
    pub evanescent: f64,
    pub error_estimate: f64,
    pub warnings: Vec<Warning>,
    /// Set when the plates coincide and the term vanishes identically.
    pub identical_plates: bool,
}

impl NeqResult {
    fn zero(identical_plates: bool) -> Self {
        NeqResult {
            value: 0.0,
            propagating: 0.0,
            evanescent: 0.0,
            error_estimate: 0.0,
            warnings: Vec::new(),
            identical_plates,
        }
    }
}

/// Pressure on one plate, split into its parts (Pa; negative is attractive).
#[derive(Debug, Clone, PartialEq)]
pub struct PressureBreakdown {
    /// `½[P_eq(a,T₁) + P_eq(a,T₂)]`.
    pub eq_mean: f64,
    pub delta_neq: f64,
    /// Separation-independent blackbody part acting on this plate.
    pub blackbody: f64,
    /// `eq_mean + delta_neq + blackbody`.
    pub total: f64,
    pub plate_index: PlateIndex,
    pub eq_t1: f64,
    pub eq_t2: f64,
    pub delta_neq_propagating: f64,
    pub delta_neq_evanescent: f64,
    pub warnings: Vec<Warning>,
}

/// Separation gradient of the total pressure, Pa/m. It is the same on both
/// plates.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientBreakdown {
    pub eq_mean: f64,
    pub delta_neq: f64,
    pub total: f64,
    pub eq_t1: f64,
    pub eq_t2: f64,
    /// Set when the antisymmetric term was skipped for thick coatings.
    pub antisymmetric_omitted: bool,
    pub warnings: Vec<Warning>,
}

/// `P_tot⁽¹⁾(a,T₁,T₂) − P_eq(a,T₁)`, Pa.
#[derive(Debug, Clone, PartialEq)]
pub struct DifferentialPressure {
    pub value: f64,
    /// The same quantity without its separation-independent blackbody part.
    pub without_constant: f64,
    pub constant: f64,
    pub delta_neq: f64,
}

/// `∂/∂a [P_tot⁽¹⁾(a,T₁,T₂) − P_eq(a,T₁)]`, Pa/m.
#[derive(Debug, Clone, PartialEq)]
pub struct DifferentialGradient {
    pub value: f64,
    pub eq_part: f64,
    pub delta_neq: f64,
    pub antisymmetric_omitted: bool,
}

/// `ħω_c / k_B T` per unit `u`.
fn reduced_energy(a: f64, temperature: f64) -> f64 {
    HBAR * C / (2.0 * a * K_B * temperature)
}

/// Bose-Einstein occupation `n(u, T)` at `ω = u c / 2a`.
pub fn bose_occupation(u: f64, a: f64, temperature: f64) -> f64 {
    let x = u * reduced_energy(a, temperature);
    if x > 700.0 {
        0.0
    } else {
        1.0 / x.exp_m1()
    }
}

/// `(2σ/3c)(T_a⁴ + T_b⁴)`, Pa.
pub fn blackbody_term(t_a: f64, t_b: f64) -> f64 {
    2.0 * SIGMA / (3.0 * C) * (t_a.powi(4) + t_b.powi(4))
}

/// `(2σ/3c)(T_b⁴ − T_a⁴)`, Pa.
pub fn blackbody_difference(t_a: f64, t_b: f64) -> f64 {
    2.0 * SIGMA / (3.0 * C) * (t_b.powi(4) - t_a.powi(4))
}

/// Blackbody part of the total pressure on `plate`:
/// `(2σ/3c)(T₁⁴ + T₂⁴) − (2σ/3c)(T_i⁴ + T₃⁴)`.
pub fn plate_blackbody(config: &SystemConfig, plate: PlateIndex) -> f64 {
    // The plate's own emission cancels, leaving the other plate against T₃.
    let other = match plate {
        PlateIndex::One => config.t2,
        PlateIndex::Two => config.t1,
    };
    blackbody_difference(config.t3, other)
}

/// Whether the coating is thick enough that the substrate is invisible:
/// at least [`THICK_COATING_SKIN_DEPTHS`] skin depths `c/ωp`.
pub fn is_thick_coating(plate: &LayeredPlate) -> bool {
    match plate.coating.plasma_frequency() {
        Some(wp) if wp > 0.0 => plate.thickness >= THICK_COATING_SKIN_DEPTHS * C / wp,
        _ => false,
    }
}

/// Real-axis plates at one `u`.
struct RealAxisPair {
    p1: RealFrequencyPlate,
    p2: RealFrequencyPlate,
    u: f64,
}

/// Integrand pieces at one point for one polarization.
#[derive(Debug, Clone, Copy)]
struct Sample {
    num: f64,
    /// `|D|²`.
    d2: f64,
    /// Relative rounding noise of `num/|D|²`.
    noise: f64,
}

impl Sample {
    /// `num/|D|²` with the floor on `|D|²`. A vanishing numerator gives
    /// zero, which covers grazing incidence where both vanish.
    fn value(&self) -> f64 {
        if self.num == 0.0 {
            0.0
        } else {
            self.num / self.d2.max(RESONANCE_FLOOR)
        }
    }
}

impl RealAxisPair {
    fn new(config: &SystemConfig, u: f64) -> Result<Self> {
        let a = config.separation;
        Ok(RealAxisPair {
            p1: config.plate1.at_real_frequency(u, a)?,
            p2: config.plate2.at_real_frequency(u, a)?,
            u,
        })
    }

    fn propagating(&self, c: f64) -> [Sample; 2] {
        let tr = Transverse::Propagating(c);
        let r1 = self.p1.reflection_pair(tr);
        let r2 = self.p2.reflection_pair(tr);
        let l1 = self.p1.loss_pair(tr);
        let l2 = self.p2.loss_pair(tr);
        let diff = reflection_difference(&self.p1, &self.p2, tr);
        let mut out = [Sample { num: 0.0, d2: 1.0, noise: 0.0 }; 2];
        for pol in 0..2 {
            // |D|² = (1 − ρ)² + 4ρ sin²(θ/2) with ρ = |R₁R₂|; 1 − ρ comes from
            // the plate losses so that nearly lossless cavities keep their
            // peak height.
            let rho = ((1.0 - l1[pol]) * (1.0 - l2[pol])).max(0.0).sqrt();
            let one_minus_rho = (l1[pol] + l2[pol] - l1[pol] * l2[pol]) / (1.0 + rho);
            let theta = self.u * c + r1[pol].arg() + r2[pol].arg();
            let half = (0.5 * theta).sin();
            let d2 = one_minus_rho * one_minus_rho + 4.0 * rho * half * half;
            // |R₂|² − |R₁|² = −Re[(R₁ − R₂)*(R₁ + R₂)]
            let gap = -(diff[pol].conj() * (r1[pol] + r2[pol])).re;
            let phase_error = 4.0 * f64::EPSILON * (self.u * c + 2.0 * PI);
            out[pol] = Sample {
                num: c * c * gap,
                d2,
                noise: 16.0 * f64::EPSILON + 2.0 * phase_error / d2.max(RESONANCE_FLOOR).sqrt(),
            };
        }
        out
    }

    fn evanescent(&self, s: f64) -> [Sample; 2] {
        let tr = Transverse::Evanescent(s);
        let r1 = self.p1.reflection_pair(tr);
        let r2 = self.p2.reflection_pair(tr);
        let diff = reflection_difference(&self.p1, &self.p2, tr);
        let damping = (-self.u * s).exp();
        let mut out = [Sample { num: 0.0, d2: 1.0, noise: 0.0 }; 2];
        for pol in 0..2 {
            // |D|² = (1 − ρ)² + 4ρ sin²(Θ/2), ρ = |R₁R₂|e^{−us}; the phase
            // form keeps the depth of the narrow bound-mode minima.
            let rho = r1[pol].norm() * r2[pol].norm() * damping;
            let half = (0.5 * (r1[pol].arg() + r2[pol].arg())).sin();
            let d2 = (1.0 - rho) * (1.0 - rho) + 4.0 * rho * half * half;
            // Im(R₁R₂*) = Im[(R₁ − R₂)R₂*]
            let cross = (diff[pol] * r2[pol].conj()).im;
            out[pol] = Sample {
                num: s * s * damping * cross,
                d2,
                noise: 16.0 * f64::EPSILON + 8.0 * f64::EPSILON * (1.0 + rho) / d2.max(RESONANCE_FLOOR).sqrt(),
            };
        }
        out
    }
}

/// Propagating-wave integrand `c²(|R₂|² − |R₁|²)/|D|²` for `[TM, TE]` at
/// `(u, c)`, with `c = √(1 − t²)`.
pub fn propagating_integrand(config: &SystemConfig, u: f64, c: f64) -> Result<[f64; 2]> {
    config.validate()?;
    if !(u > 0.0 && (0.0..=1.0).contains(&c)) {
        return Err(Error::Domain(format!("need u > 0 and 0 ≤ c ≤ 1, got u = {u}, c = {c}")));
    }
    Ok(RealAxisPair::new(config, u)?.propagating(c).map(|p| p.value()))
}

/// Evanescent-wave integrand `s² e^{−us} Im(R₁R₂*)/|D|²` for `[TM, TE]` at
/// `(u, s)`, with `s = √(t² − 1)`.
pub fn evanescent_integrand(config: &SystemConfig, u: f64, s: f64) -> Result<[f64; 2]> {
    config.validate()?;
    if !(u > 0.0 && s >= 0.0) {
        return Err(Error::Domain(format!("need u > 0 and s ≥ 0, got u = {u}, s = {s}")));
    }
    Ok(RealAxisPair::new(config, u)?.evanescent(s).map(|p| p.value()))
}

#[derive(Debug, Clone, Copy)]
struct Peak {
    x0: f64,
    width: f64,
}

fn golden_min<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64) -> f64 {
    let mut x1 = hi - GOLDEN * (hi - lo);
    let mut x2 = lo + GOLDEN * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..80 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - GOLDEN * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + GOLDEN * (hi - lo);
            f2 = f(x2);
        }
        if hi - lo <= 1e-15 * (lo.abs() + hi.abs()) {
            break;
        }
    }
    let (flo, fhi) = (f(lo), f(hi));
    let mid = 0.5 * (lo + hi);
    let fm = f(mid);
    if flo < fm && flo <= fhi {
        lo
    } else if fhi < fm {
        hi
    } else {
        mid
    }
}

/// Sharp minima of `denom` on `[grid[0], grid[last]]` at which `|f|` peaks.
/// Minima where the numerator vanishes as well (grazing incidence) are not
/// resonances.
fn find_peaks<D, F>(grid: &[f64], values: &[f64], denom: &D, f: &F) -> Vec<Peak>
where
    D: Fn(f64) -> f64,
    F: Fn(f64) -> f64,
{
    let n = grid.len();
    let (lo, hi) = (grid[0], grid[n - 1]);
    let mut peaks: Vec<Peak> = Vec::new();
    for i in 0..n {
        let left_higher = i == 0 || values[i] < values[i - 1];
        let right_higher = i == n - 1 || values[i] <= values[i + 1];
        if !(left_higher && right_higher) {
            continue;
        }
        let b_lo = grid[i.saturating_sub(1)];
        let b_hi = grid[(i + 1).min(n - 1)];
        let x0 = golden_min(denom, b_lo, b_hi);
        let m = denom(x0);
        if f(x0).abs() <= f(b_lo).abs().min(f(b_hi).abs()) {
            continue;
        }
        let span = b_hi - b_lo;
        let h = 1e-4 * span;
        // Second difference, one-sided at the range ends; |D|² ≈ m + (q/2)(x − x0)².
        let q = if x0 - h >= lo && x0 + h <= hi {
            (denom(x0 + h) + denom(x0 - h) - 2.0 * m) / (h * h)
        } else if x0 + 2.0 * h <= hi {
            (denom(x0 + 2.0 * h) - 2.0 * denom(x0 + h) + m) / (h * h)
        } else {
            (denom(x0 - 2.0 * h) - 2.0 * denom(x0 - h) + m) / (h * h)
        };
        if !(q > 0.0) {
            continue;
        }
        let width = (2.0 * m.max(0.0) / q).sqrt().max(1e-14 * span);
        if width >= span {
            continue;
        }
        if peaks.iter().any(|p| (p.x0 - x0).abs() <= 2.0 * p.width.max(width)) {
            continue;
        }
        peaks.push(Peak { x0, width });
    }
    peaks.sort_by(|a, b| a.x0.total_cmp(&b.x0));
    peaks
}

/// Integrates `f` from `x0` over `length` in the direction `sign` through
/// `x = x0 + sign·w·cot φ`, which flattens a Lorentzian of half-width `w`.
/// The cotangent form stays well conditioned at both ends of the range.
fn integrate_mapped<F>(integrator: &Integrator, f: &F, x0: f64, width: f64, length: f64, sign: f64) -> Result<IntegrationResult>
where
    F: Fn(f64) -> (f64, f64) + Sync,
{
    let phi_min = (width / length).atan();
    let g = |phi: f64| {
        let (sin, cos) = phi.sin_cos();
        let jacobian = width / (sin * sin);
        let (v, noise) = f(x0 + sign * width * cos / sin);
        (v * jacobian, noise * jacobian)
    };
    // One panel per decade of distance from the peak keeps broad structure
    // in the tail from hiding inside a single panel.
    let mut breaks = uniform_breaks(phi_min, std::f64::consts::FRAC_PI_2, 8)?;
    let mut phi = 10.0 * phi_min;
    while phi < breaks[1] {
        breaks.push(phi);
        phi *= 10.0;
    }
    breaks.sort_by(|a, b| a.total_cmp(b));
    integrator.integrate_noisy(g, &breaks)
}

/// Accepts an integral that ran out of panels, keeping its error estimate.
fn lenient(r: Result<IntegrationResult>) -> Result<IntegrationResult> {
    match r {
        Err(Error::MaxSubdivisions { value, error, panels }) => Ok(IntegrationResult {
            value,
            error_estimate: error,
            panels_used: panels,
            warnings: vec![Warning::PanelLimit],
        }),
        other => other,
    }
}

/// Integrates `f` over the grid range, treating every sharp minimum of
/// `denom` as a resonance peak of `f`. `f` returns its value and absolute
/// rounding noise.
fn resonant_integral<D, F>(integrator: &Integrator, grid: &[f64], values: &[f64], denom: &D, f: &F) -> Result<IntegrationResult>
where
    D: Fn(f64) -> f64,
    F: Fn(f64) -> (f64, f64) + Sync,
{
    let (lo, hi) = (grid[0], grid[grid.len() - 1]);
    let peaks = find_peaks(grid, values, denom, &|x| f(x).0);
    let plain = |a: f64, b: f64, sub: &Integrator| -> Result<IntegrationResult> {
        if b <= a {
            return Ok(IntegrationResult::zero());
        }
        // The grid only locates peaks; a few of its points seed the panels.
        let stride = grid.len().div_ceil(INITIAL_PANELS);
        let mut breaks = vec![a];
        breaks.extend(grid.iter().step_by(stride).copied().filter(|&x| x > a && x < b));
        breaks.push(b);
        lenient(sub.integrate_noisy(f, &breaks))
    };
    if peaks.is_empty() {
        return plain(lo, hi, integrator);
    }
    let sub = Integrator {
        abs_tol: integrator.abs_tol / (2 * peaks.len()) as f64,
        ..*integrator
    };
    let mut bounds = Vec::with_capacity(peaks.len() + 1);
    bounds.push(lo);
    for w in peaks.windows(2) {
        bounds.push(0.5 * (w[0].x0 + w[1].x0));
    }
    bounds.push(hi);
    let mut total = IntegrationResult::zero();
    for (k, p) in peaks.iter().enumerate() {
        let (left, right) = (bounds[k], bounds[k + 1]);
        if p.x0 > left {
            let r = if p.width < p.x0 - left {
                lenient(integrate_mapped(&sub, f, p.x0, p.width, p.x0 - left, -1.0))?
            } else {
                plain(left, p.x0, &sub)?
            };
            total.accumulate(&r);
        }
        if right > p.x0 {
            let r = if p.width < right - p.x0 {
                lenient(integrate_mapped(&sub, f, p.x0, p.width, right - p.x0, 1.0))?
            } else {
                plain(p.x0, right, &sub)?
            };
            total.accumulate(&r);
        }
    }
    Ok(total)
}

fn trapezoid_abs(grid: &[f64], values: &[f64]) -> f64 {
    grid.windows(2)
        .zip(values.windows(2))
        .map(|(x, v)| 0.5 * (x[1] - x[0]) * (v[0].abs() + v[1].abs()))
        .sum()
}

fn propagating_grid(u: f64) -> Vec<f64> {
    // At least four points per Fabry-Perot period 2π/u in c.
    let n = (2.0 * u / PI).ceil() as usize + 8;
    let mut g: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
    // Guided modes cross grazing incidence as narrow peaks near c = 0.
    g.extend(grazing_points(1.0));
    g.sort_by(|a, b| a.total_cmp(b));
    g.dedup();
    g
}

/// Log-spaced points in `(0, top)`: dense over the upper decades, sparser
/// down to the rounding level, where guided modes crossing grazing
/// incidence sit.
fn grazing_points(top: f64) -> impl Iterator<Item = f64> {
    let fine = (0..GRAZING_FINE_DECADES * 24).map(|i| -(i as f64) / 24.0);
    let coarse = (0..(GRAZING_DECADES - GRAZING_FINE_DECADES) * 8)
        .map(|i| -(GRAZING_FINE_DECADES as f64) - i as f64 / 8.0);
    fine.chain(coarse).map(move |e| top * 10f64.powf(e)).filter(move |&x| x < top)
}

fn evanescent_grid(s_max: f64, surface_modes: &[f64]) -> Vec<f64> {
    let mut g = vec![0.0];
    g.extend(grazing_points(s_max));
    for i in 1..64 {
        g.push(s_max * i as f64 / 64.0);
    }
    // Coupled surface modes straddle the interface pole at offsets that
    // shrink like e^{−us/2}; sample both sides down to rounding level.
    for &sp in surface_modes {
        for k in 0..=4 * SURFACE_MODE_DECADES {
            let offset = sp * 10f64.powf(-(k as f64) / 4.0);
            for x in [sp - offset, sp + offset] {
                if x > 0.0 && x < s_max {
                    g.push(x);
                }
            }
        }
    }
    g.push(s_max);
    g.sort_by(|a, b| a.total_cmp(b));
    g.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * a.abs().max(b.abs()));
    g
}

struct InnerSettings {
    rel_tol: f64,
    max_panels: usize,
    u_cutoff_exponent: f64,
}

/// `[Σ_α I_α^prop, Σ_α I_α^ev]` at one `u`, with error estimates.
struct InnerValues {
    value: [f64; 2],
    error: [f64; 2],
    warnings: Vec<Warning>,
}

fn inner_integrals(config: &SystemConfig, u: f64, inner: &InnerSettings) -> Result<InnerValues> {
    let pair = RealAxisPair::new(config, u)?;
    let floor_hits = AtomicUsize::new(0);
    let mut out = InnerValues {
        value: [0.0; 2],
        error: [0.0; 2],
        warnings: Vec::new(),
    };

    let s_max = inner.u_cutoff_exponent / u;
    let mut modes = pair.p1.surface_mode_s();
    modes.extend(pair.p2.surface_mode_s());
    let grids = [propagating_grid(u), evanescent_grid(s_max, &modes)];
    for (branch, grid) in grids.iter().enumerate() {
        let samples_at = |x: f64| -> [Sample; 2] {
            if branch == 0 {
                pair.propagating(x)
            } else {
                pair.evanescent(x)
            }
        };
        let sampled: Vec<[Sample; 2]> = grid.iter().map(|&x| samples_at(x)).collect();
        for pol in 0..2 {
            let denom_grid: Vec<f64> = sampled.iter().map(|p| p[pol].d2).collect();
            let f_grid: Vec<f64> = sampled.iter().map(|p| p[pol].value()).collect();
            let scale = trapezoid_abs(grid, &f_grid);
            let integrator = Integrator::new(inner.rel_tol, 1e-13 * scale.max(f64::MIN_POSITIVE))
                .with_max_panels(inner.max_panels);
            let denom = |x: f64| samples_at(x)[pol].d2;
            let f = |x: f64| {
                let sample = samples_at(x)[pol];
                if sample.num != 0.0 && sample.d2 < RESONANCE_FLOOR {
                    floor_hits.fetch_add(1, Ordering::Relaxed);
                }
                let v = sample.value();
                (v, v.abs() * sample.noise)
            };
            let r = resonant_integral(&integrator, grid, &denom_grid, &denom, &f)?;
            out.value[branch] += r.value;
            out.error[branch] += r.error_estimate;
            for w in r.warnings {
                push_warning(&mut out.warnings, w);
            }
        }
    }
    let hits = floor_hits.into_inner();
    if hits > 0 {
        push_warning(&mut out.warnings, Warning::ResonanceFloor(hits));
    }
    Ok(out)
}

/// Values of `u` at which a Fabry-Perot resonance enters the propagating
/// range at normal incidence, `arg(R₁R₂e^{iu}) = 0` at `c = 1`. For weakly
/// absorbing plates the inner integral steps there.
fn resonance_entries(config: &SystemConfig, u_max: f64) -> Result<Vec<f64>> {
    let normal = Transverse::Propagating(1.0);
    let z = |u: f64| -> Result<num_complex::Complex64> {
        let pair = RealAxisPair::new(config, u)?;
        let r = pair.p1.reflection_pair(normal)[0] * pair.p2.reflection_pair(normal)[0];
        Ok(r * num_complex::Complex64::from_polar(1.0, u))
    };
    let steps = (u_max / ENTRY_SCAN_STEP).ceil() as usize;
    let mut entries = Vec::new();
    let mut prev = (ENTRY_SCAN_STEP * 1e-3, z(ENTRY_SCAN_STEP * 1e-3)?);
    for i in 1..=steps {
        let u = u_max * i as f64 / steps as f64;
        let zu = z(u)?;
        let (u0, z0) = prev;
        if z0.im < 0.0 && zu.im >= 0.0 && z0.re > 0.0 && zu.re > 0.0 {
            let (mut lo, mut hi) = (u0, u);
            while hi - lo > 1e-14 * hi {
                let mid = 0.5 * (lo + hi);
                if z(mid)?.im < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            entries.push(0.5 * (lo + hi));
        }
        prev = (u, zu);
    }
    Ok(entries)
}

/// The term `ΔP_neq(a, T₁, T₂)` antisymmetric in the plate temperatures, Pa.
pub fn delta_p_neq(config: &SystemConfig, settings: &QuadratureSettings) -> Result<NeqResult> {
    config.validate()?;
    settings.validate()?;
    if config.plate1 == config.plate2 {
        return Ok(NeqResult::zero(true));
    }
    if config.t1 == config.t2 {
        return Ok(NeqResult::zero(false));
    }
    let a = config.separation;
    let prefactor = HBAR * C / (64.0 * PI * PI * a.powi(4));
    let t_max = config.t1.max(config.t2);
    let u_max = settings.u_cutoff_exponent / reduced_energy(a, t_max);
    let inner = InnerSettings {
        rel_tol: 0.1 * settings.rel_tol,
        max_panels: settings.max_panels.min(INNER_MAX_PANELS),
        u_cutoff_exponent: settings.u_cutoff_exponent,
    };

    let failure: Mutex<Option<Error>> = Mutex::new(None);
    let warnings: Mutex<Vec<Warning>> = Mutex::new(Vec::new());
    let integrand = |u: f64| -> ([f64; 3], f64) {
        let occupation = bose_occupation(u, a, config.t1) - bose_occupation(u, a, config.t2);
        if occupation == 0.0 {
            return ([0.0; 3], 0.0);
        }
        match inner_integrals(config, u, &inner) {
            Ok(r) => {
                if !r.warnings.is_empty() {
                    let mut list = warnings.lock().expect("warnings lock");
                    for w in r.warnings {
                        push_warning(&mut list, w);
                    }
                }
                let weight = u * u * u * occupation;
                let (prop, ev) = (weight * r.value[0], -2.0 * weight * r.value[1]);
                ([prop + ev, prop, ev], weight.abs() * (r.error[0] + 2.0 * r.error[1]))
            }
            Err(e) => {
                failure.lock().expect("failure lock").get_or_insert(e);
                ([0.0; 3], 0.0)
            }
        }
    };
    let integrator = settings.integrator(settings.abs_tol / prefactor);
    // Low-frequency evanescent transfer in lossy metals peaks many decades
    // below u_max, so the panels are seeded logarithmically as well.
    let mut breaks = vec![0.0];
    breaks.extend((1..=OUTER_DECADES).rev().map(|k| u_max * 10f64.powi(-(k as i32))));
    breaks.extend(uniform_breaks(0.0, u_max, 8)?.into_iter().skip(1));
    breaks.extend(resonance_entries(config, u_max)?);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|x, y| *x - *y <= 1e-12 * u_max);
    // Guided modes pass between the two branches at grazing incidence, where
    // each branch steps but their sum stays smooth; only the sum is refined.
    let result = integrator.integrate_tracked_noisy(&integrand, &breaks);
    // Certify the cutoff: beyond u_max the integrand decays like u³e^{−x u}.
    let (edge, _) = integrand(u_max);
    if let Some(e) = failure.lock().expect("failure lock").take() {
        return Err(e);
    }
    let result = result?;
    let x = reduced_energy(a, t_max);
    let decay = (1.0 - 3.0 / (x * u_max)).max(0.1);
    let tail = edge[0].abs() / (x * decay);
    let magnitude = result.value[0].abs();
    if prefactor * tail > settings.abs_tol.max(settings.rel_tol * prefactor * magnitude) {
        return Err(Error::NonConvergence {
            terms: result.panels_used,
            tail: prefactor * tail,
        });
    }

    let mut ws = std::mem::take(&mut *warnings.lock().expect("warnings lock"));
    for w in result.warnings {
        push_warning(&mut ws, w);
    }
    Ok(NeqResult {
        value: prefactor * result.value[0],
        propagating: prefactor * result.value[1],
        evanescent: prefactor * result.value[2],
        error_estimate: prefactor * result.error_estimate[0],
        warnings: ws,
        identical_plates: false,
    })
}

/// Central finite difference of `ΔP_neq` in the separation, Pa/m.
pub fn delta_p_neq_gradient(config: &SystemConfig, settings: &QuadratureSettings) -> Result<f64> {
    config.validate()?;
    if config.plate1 == config.plate2 || config.t1 == config.t2 {
        return Ok(0.0);
    }
    let a = config.separation;
    let h = settings.fd_relative_step * a;
    let (plus, minus) = rayon::join(
        || delta_p_neq(&config.with_separation(a + h), settings),
        || delta_p_neq(&config.with_separation(a - h), settings),
    );
    Ok((plus?.value - minus?.value) / (2.0 * h))
}

fn equilibrium_pair(
    config: &SystemConfig,
    settings: &QuadratureSettings,
    f: fn(&SystemConfig, f64, &QuadratureSettings) -> Result<EquilibriumResult>,
) -> Result<(EquilibriumResult, EquilibriumResult)> {
    if config.t1 == config.t2 {
        let r = f(config, config.t1, settings)?;
        return Ok((r.clone(), r));
    }
    let (r1, r2) = rayon::join(|| f(config, config.t1, settings), || f(config, config.t2, settings));
    Ok((r1?, r2?))
}

fn merge_warnings(lists: &[&[Warning]]) -> Vec<Warning> {
    let mut out = Vec::new();
    for list in lists {
        for w in *list {
            push_warning(&mut out, *w);
        }
    }
    out
}

/// Total pressure on `plate` with the environment at `config.t3`.
pub fn total_pressure(config: &SystemConfig, plate: PlateIndex, settings: &QuadratureSettings) -> Result<PressureBreakdown> {
    config.validate()?;
    settings.validate()?;
    let (eq, neq) = rayon::join(
        || equilibrium_pair(config, settings, pressure_eq),
        || delta_p_neq(config, settings),
    );
    let (eq1, eq2) = eq?;
    let neq = neq?;
    let eq_mean = 0.5 * (eq1.value + eq2.value);
    let blackbody = plate_blackbody(config, plate);
    Ok(PressureBreakdown {
        eq_mean,
        delta_neq: neq.value,
        blackbody,
        total: eq_mean + neq.value + blackbody,
        plate_index: plate,
        eq_t1: eq1.value,
        eq_t2: eq2.value,
        delta_neq_propagating: neq.propagating,
        delta_neq_evanescent: neq.evanescent,
        warnings: merge_warnings(&[&eq1.warnings, &eq2.warnings, &neq.warnings]),
    })
}

fn omit_antisymmetric(config: &SystemConfig, settings: &QuadratureSettings) -> bool {
    settings.omit_thick_antisymmetric_gradient && is_thick_coating(&config.plate1) && is_thick_coating(&config.plate2)
}

/// Separation gradient of the total pressure, Pa/m.
pub fn total_pressure_gradient(config: &SystemConfig, settings: &QuadratureSettings) -> Result<GradientBreakdown> {
    config.validate()?;
    settings.validate()?;
    let omitted = omit_antisymmetric(config, settings);
    let (eq, neq) = rayon::join(
        || equilibrium_pair(config, settings, pressure_eq_gradient),
        || {
            if omitted {
                Ok(0.0)
            } else {
                delta_p_neq_gradient(config, settings)
            }
        },
    );
    let (g1, g2) = eq?;
    let delta_neq = neq?;
    let eq_mean = 0.5 * (g1.value + g2.value);
    Ok(GradientBreakdown {
        eq_mean,
        delta_neq,
        total: eq_mean + delta_neq,
        eq_t1: g1.value,
        eq_t2: g2.value,
        antisymmetric_omitted: omitted,
        warnings: merge_warnings(&[&g1.warnings, &g2.warnings]),
    })
}

/// `P_tot⁽¹⁾(a,T₁,T₂) − P_eq(a,T₁)`.
pub fn differential_pressure(config: &SystemConfig, settings: &QuadratureSettings) -> Result<DifferentialPressure> {
    let b = total_pressure(config, PlateIndex::One, settings)?;
    let without_constant = 0.5 * (b.eq_t2 - b.eq_t1) + b.delta_neq;
    Ok(DifferentialPressure {
        value: without_constant + b.blackbody,
        without_constant,
        constant: b.blackbody,
        delta_neq: b.delta_neq,
    })
}

/// Gradient of [`differential_pressure`].
pub fn differential_gradient(config: &SystemConfig, settings: &QuadratureSettings) -> Result<DifferentialGradient> {
    let g = total_pressure_gradient(config, settings)?;
    let eq_part = 0.5 * (g.eq_t2 - g.eq_t1);
    Ok(DifferentialGradient {
        value: eq_part + g.delta_neq,
        eq_part,
        delta_neq: g.delta_neq,
        antisymmetric_omitted: g.antisymmetric_omitted,
    })
}

/// One point of a large-separation scan of the antisymmetric term.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptotePoint {
    pub separation: f64,
    pub delta_neq: f64,
    pub propagating: f64,
    pub evanescent: f64,
    /// `delta_neq` plus the blackbody part acting on plate 1.
    pub with_blackbody: f64,
}

/// Evaluates `ΔP_neq` at increasing separations to expose its
/// separation-independent limit.
pub fn antisymmetric_asymptote(
    config: &SystemConfig,
    separations: &[f64],
    settings: &QuadratureSettings,
) -> Result<Vec<AsymptotePoint>> {
    let blackbody = plate_blackbody(config, PlateIndex::One);
    separations
        .iter()
        .map(|&a| {
            let r = delta_p_neq(&config.with_separation(a), settings)?;
            Ok(AsymptotePoint {
                separation: a,
                delta_neq: r.value,
                propagating: r.propagating,
                evanescent: r.evanescent,
                with_blackbody: r.value + blackbody,
            })
        })
        .collect()
}
