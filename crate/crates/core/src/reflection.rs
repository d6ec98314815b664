//! Fresnel coefficients and two-layer plate reflection coefficients.
//!
//! A plate is a coating of thickness `d` on a semi-infinite substrate, seen
//! from vacuum. On the imaginary frequency axis everything is real; at real
//! frequencies the coefficients are complex and the wavevector branch is
//! chosen with `Im k ≥ 0` (decaying fields, bounded `e^{2idk}`).
//!
//! Substrates are semi-infinite. That is adequate once the substrate is
//! thicker than roughly 2 µm.

use num_complex::Complex64;

use crate::constants::C;
use crate::dielectric::{DielectricModel, ImagPermittivity};
use crate::{Error, Result};

/// `e^{-x}` is replaced by zero for `x` above this.
pub const UNDERFLOW_EXPONENT: f64 = 700.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarization {
    TM,
    TE,
}

impl Polarization {
    pub const ALL: [Polarization; 2] = [Polarization::TM, Polarization::TE];

    fn index(self) -> usize {
        match self {
            Polarization::TM => 0,
            Polarization::TE => 1,
        }
    }
}

/// Metallic coating of thickness `thickness` (m) on a semi-infinite substrate.
#[derive(Debug, Clone, PartialEq)]
pub struct LayeredPlate {
    pub coating: DielectricModel,
    pub thickness: f64,
    pub substrate: DielectricModel,
}

impl LayeredPlate {
    pub fn new(coating: DielectricModel, thickness: f64, substrate: DielectricModel) -> Self {
        LayeredPlate {
            coating,
            thickness,
            substrate,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.thickness > 0.0 && self.thickness.is_finite()) {
            return Err(Error::Config(format!(
                "coating thickness must be positive, got {}",
                self.thickness
            )));
        }
        self.coating.validate()?;
        self.substrate.validate()
    }

    /// Permittivities at the Matsubara frequency `xi` (rad/s), whose
    /// dimensionless value at separation `a` is `zeta = 2aξ/c`.
    pub fn at_matsubara(&self, xi: f64, a: f64) -> Result<MatsubaraPlate> {
        Ok(MatsubaraPlate {
            coating: self.coating.imag_response(xi)?,
            substrate: self.substrate.imag_response(xi)?,
            thickness: self.thickness,
            zeta: 2.0 * a * xi / C,
            a,
        })
    }

    /// Permittivities at the real frequency `ω = u c / 2a`.
    pub fn at_real_frequency(&self, u: f64, a: f64) -> Result<RealFrequencyPlate> {
        let omega = u * C / (2.0 * a);
        let eps_m: Complex64 = self.coating.eps_real_axis(omega)?.into();
        let eps_s: Complex64 = self.substrate.eps_real_axis(omega)?.into();
        for e in [eps_m, eps_s] {
            if e.im < 0.0 {
                return Err(Error::Branch(e.im));
            }
        }
        Ok(RealFrequencyPlate {
            eps_m,
            eps_s,
            thickness: self.thickness,
            u,
            a,
        })
    }
}

/// A point on the imaginary frequency axis in dimensionless variables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImagAxisPoint {
    /// ζ = 2aξ/c.
    pub zeta: f64,
    /// y = 2a (k⊥² + ξ²/c²)^{1/2} ≥ ζ.
    pub y: f64,
    /// Separation, m.
    pub a: f64,
}

impl ImagAxisPoint {
    pub fn new(zeta: f64, y: f64, a: f64) -> Result<Self> {
        if !(a > 0.0) {
            return Err(Error::Domain(format!("separation must be positive, got {a}")));
        }
        if !(zeta >= 0.0) || !(y >= zeta * (1.0 - 1e-14)) {
            return Err(Error::Domain(format!("need y ≥ ζ ≥ 0, got ζ = {zeta}, y = {y}")));
        }
        Ok(ImagAxisPoint { zeta, y, a })
    }

    /// The Matsubara frequency ξ in rad/s.
    pub fn xi(&self) -> f64 {
        self.zeta * C / (2.0 * self.a)
    }
}

/// A real-frequency point: `u = ω/ω_c` with `ω_c = c/2a`, `t = k⊥c/ω`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealAxisPoint {
    pub u: f64,
    pub t: f64,
    pub a: f64,
}

impl RealAxisPoint {
    pub fn new(u: f64, t: f64, a: f64) -> Result<Self> {
        if !(u > 0.0 && t >= 0.0 && a > 0.0) {
            return Err(Error::Domain(format!(
                "need u > 0, t ≥ 0, a > 0; got u = {u}, t = {t}, a = {a}"
            )));
        }
        Ok(RealAxisPoint { u, t, a })
    }

    fn transverse(&self) -> Transverse {
        if self.t <= 1.0 {
            Transverse::Propagating((1.0 - self.t * self.t).sqrt())
        } else {
            Transverse::Evanescent((self.t * self.t - 1.0).sqrt())
        }
    }
}

/// Transverse state of the vacuum wave, parametrized so that `1 − t²` is
/// exact: `c² = 1 − t²` for propagating waves and `s² = t² − 1` for
/// evanescent ones.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Transverse {
    Propagating(f64),
    Evanescent(f64),
}

impl Transverse {
    fn one_minus_t2(self) -> f64 {
        match self {
            Transverse::Propagating(c) => c * c,
            Transverse::Evanescent(s) => -s * s,
        }
    }
}

/// `k(ε) = (1/2a) √((ε − 1)ζ² + y²)`, in 1/m.
pub fn k_imag(eps: f64, point: &ImagAxisPoint) -> f64 {
    ((eps - 1.0) * point.zeta * point.zeta + point.y * point.y).sqrt() / (2.0 * point.a)
}

/// Fresnel coefficient `r_α(ε, ε̃)` for real permittivities and wavevectors.
pub fn fresnel(eps: f64, eps_tilde: f64, k_eps: f64, k_eps_tilde: f64, pol: Polarization) -> Result<f64> {
    let (num, den) = match pol {
        Polarization::TM => (
            eps_tilde * k_eps - eps * k_eps_tilde,
            eps_tilde * k_eps + eps * k_eps_tilde,
        ),
        Polarization::TE => (k_eps - k_eps_tilde, k_eps + k_eps_tilde),
    };
    if den == 0.0 {
        return Err(Error::DegenerateInterface);
    }
    Ok(num / den)
}

/// Fresnel coefficient for complex permittivities and wavevectors.
pub fn fresnel_complex(
    eps: Complex64,
    eps_tilde: Complex64,
    k_eps: Complex64,
    k_eps_tilde: Complex64,
    pol: Polarization,
) -> Result<Complex64> {
    let (num, den) = match pol {
        Polarization::TM => (
            eps_tilde * k_eps - eps * k_eps_tilde,
            eps_tilde * k_eps + eps * k_eps_tilde,
        ),
        Polarization::TE => (k_eps - k_eps_tilde, k_eps + k_eps_tilde),
    };
    if den == Complex64::new(0.0, 0.0) {
        return Err(Error::DegenerateInterface);
    }
    Ok(num / den)
}

/// Ratio that treats 0/0 as 0; used where that limit is the physical one.
fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

fn compose(r1: f64, r2: f64, exponent: f64) -> f64 {
    if exponent > UNDERFLOW_EXPONENT {
        return r1;
    }
    let e = (-exponent).exp();
    (r1 + r2 * e) / (1.0 + r1 * r2 * e)
}

/// Plate permittivities evaluated at one Matsubara frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatsubaraPlate {
    coating: ImagPermittivity,
    substrate: ImagPermittivity,
    thickness: f64,
    zeta: f64,
    a: f64,
}

impl MatsubaraPlate {
    pub fn zeta(&self) -> f64 {
        self.zeta
    }

    /// `[R_TM, R_TE]` at the transverse variable `y ≥ ζ`.
    pub fn reflection_pair(&self, y: f64) -> [f64; 2] {
        let omega_c = C / (2.0 * self.a);
        let chi_m = self.coating.susceptibility_zeta2(self.zeta, omega_c);
        let chi_s = self.substrate.susceptibility_zeta2(self.zeta, omega_c);
        let y2 = y * y;
        // Dimensionless 2a·k.
        let q_vac = y;
        let q_m = (chi_m + y2).sqrt();
        let q_s = (chi_s + y2).sqrt();
        let exponent = self.thickness * q_m / self.a;

        let te = compose(
            ratio(q_vac - q_m, q_vac + q_m),
            ratio(q_m - q_s, q_m + q_s),
            exponent,
        );

        let tm = match (self.coating, self.substrate) {
            // A static conductor coating reflects TM perfectly whatever lies below.
            (ImagPermittivity::StaticConductor { .. }, _) => 1.0,
            (ImagPermittivity::Finite(eps_m), ImagPermittivity::StaticConductor { .. }) => {
                compose(ratio(eps_m * q_vac - q_m, eps_m * q_vac + q_m), 1.0, exponent)
            }
            (ImagPermittivity::Finite(eps_m), ImagPermittivity::Finite(eps_s)) => compose(
                ratio(eps_m * q_vac - q_m, eps_m * q_vac + q_m),
                ratio(eps_s * q_m - eps_m * q_s, eps_s * q_m + eps_m * q_s),
                exponent,
            ),
        };
        [tm, te]
    }

    pub fn reflection(&self, y: f64, pol: Polarization) -> f64 {
        self.reflection_pair(y)[pol.index()]
    }
}

/// `R_α(iζ, y)` for a layered plate.
pub fn plate_reflection_imag(plate: &LayeredPlate, point: &ImagAxisPoint, pol: Polarization) -> Result<f64> {
    let p = plate.at_matsubara(point.xi(), point.a)?;
    Ok(p.reflection(point.y, pol))
}

/// Square root with `Im ≥ 0`, and `Re ≥ 0` when the imaginary part vanishes.
pub fn root_upper(z: Complex64) -> Complex64 {
    let s = z.sqrt();
    if s.im < 0.0 || (s.im == 0.0 && s.re < 0.0) {
        -s
    } else {
        s
    }
}

fn compose_film(top: Complex64, bottom: Complex64, film: Complex64) -> Complex64 {
    (top + bottom * film) / (Complex64::new(1.0, 0.0) + top * bottom * film)
}

fn ratio_c(num: Complex64, den: Complex64) -> Complex64 {
    if den == Complex64::new(0.0, 0.0) {
        Complex64::new(0.0, 0.0)
    } else {
        num / den
    }
}

#[derive(Debug, Clone, Copy)]
struct Layers {
    top: Complex64,
    one_minus_top_sq: Complex64,
    /// `1 − |top|²`.
    top_loss: f64,
    bottom: Complex64,
    /// `1 − |bottom·film|²`.
    bottom_loss: f64,
    film: Complex64,
}

impl Layers {
    fn new(top: (Complex64, Complex64), bottom: (Complex64, Complex64), film: Complex64, film_loss: f64) -> Self {
        let (p, q) = top;
        let den = p + q;
        let bottom_r = ratio_c(bottom.0 - bottom.1, bottom.0 + bottom.1);
        let film_abs2 = film.norm_sqr();
        Layers {
            top: ratio_c(p - q, den),
            one_minus_top_sq: ratio_c(4.0 * p * q, den * den),
            top_loss: interface_loss(p, q),
            bottom: bottom_r,
            bottom_loss: interface_loss(bottom.0, bottom.1) * film_abs2 + film_loss,
            film,
        }
    }

    /// `1 − |R|²` without the cancellation of the direct form.
    fn loss(&self) -> f64 {
        let b = self.bottom * self.film;
        let den = (Complex64::new(1.0, 0.0) + self.top * b).norm_sqr();
        if den == 0.0 {
            return 0.0;
        }
        (self.top_loss * self.bottom_loss - 4.0 * self.top.im * b.im) / den
    }
}

/// `1 − |(p − q)/(p + q)|² = 4 Re(p q*)/|p + q|²`.
fn interface_loss(p: Complex64, q: Complex64) -> f64 {
    let den = (p + q).norm_sqr();
    if den == 0.0 {
        0.0
    } else {
        4.0 * (p * q.conj()).re / den
    }
}

/// Plate permittivities evaluated at one real frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealFrequencyPlate {
    eps_m: Complex64,
    eps_s: Complex64,
    thickness: f64,
    u: f64,
    a: f64,
}

impl RealFrequencyPlate {
    pub fn u(&self) -> f64 {
        self.u
    }

    /// Per polarization `[TM, TE]`: the vacuum/coating coefficient `r`,
    /// `1 − r²` formed without cancellation, the coating/substrate
    /// coefficient and the film factor `e^{2idk(ε_m)}` (zero once it
    /// underflows).
    fn layers(&self, tr: Transverse) -> [Layers; 2] {
        let one = Complex64::new(1.0, 0.0);
        // Dimensionless √(ε − t²); the common factor u/2a cancels in the
        // Fresnel ratios.
        let q_vac = match tr {
            Transverse::Propagating(c) => Complex64::new(c, 0.0),
            Transverse::Evanescent(s) => Complex64::new(0.0, s),
        };
        let shift = tr.one_minus_t2();
        let q_m = root_upper(self.eps_m - one + shift);
        let q_s = root_upper(self.eps_s - one + shift);
        let phase = q_m * (self.u * self.thickness / self.a);
        let (film, film_loss) = if phase.im > UNDERFLOW_EXPONENT {
            (Complex64::new(0.0, 0.0), 1.0)
        } else {
            // 1 − |film|² = −expm1(−2 Im phase)
            ((Complex64::i() * phase).exp(), -(-2.0 * phase.im).exp_m1())
        };
        [
            Layers::new(
                (self.eps_m * q_vac, q_m),
                (self.eps_s * q_m, self.eps_m * q_s),
                film,
                film_loss,
            ),
            Layers::new((q_vac, q_m), (q_m, q_s), film, film_loss),
        ]
    }

    /// `[R_TM, R_TE]` for the given transverse state of the vacuum wave.
    pub fn reflection_pair(&self, tr: Transverse) -> [Complex64; 2] {
        self.layers(tr).map(|l| compose_film(l.top, l.bottom, l.film))
    }

    /// Evanescent `s = √(t² − 1)` of the surface modes of the vacuum/coating
    /// and coating/substrate interfaces (poles of the TM coefficients for
    /// lossless media), where they exist.
    pub fn surface_mode_s(&self) -> Vec<f64> {
        let (em, es) = (self.eps_m.re, self.eps_s.re);
        let mut out = Vec::new();
        // ε_m s + √(s² + 1 − ε_m) = 0  ⇒  s² = −1/(ε_m + 1)
        if em < -1.0 {
            out.push((-1.0 / (em + 1.0)).sqrt());
        }
        // ε_s q_m + ε_m q_s = 0  ⇒  s² + 1 = ε_m ε_s/(ε_m + ε_s)
        let t2 = em * es / (em + es);
        if em + es < 0.0 && t2 > 1.0 {
            out.push((t2 - 1.0).sqrt());
        }
        out
    }

    /// `[1 − |R_TM|², 1 − |R_TE|²]`, accurate when the plate reflects
    /// almost perfectly.
    pub fn loss_pair(&self, tr: Transverse) -> [f64; 2] {
        self.layers(tr).map(|l| l.loss())
    }

    pub fn reflection(&self, tr: Transverse, pol: Polarization) -> Complex64 {
        self.reflection_pair(tr)[pol.index()]
    }

    /// Coating wavevector `k(ε_m) = (u/2a)√(ε_m − t²)` in 1/m.
    pub fn coating_wavevector(&self, tr: Transverse) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        root_upper(self.eps_m - one + tr.one_minus_t2()) * (self.u / (2.0 * self.a))
    }
}

/// `R_α(u, t)` for a layered plate at a real frequency.
pub fn plate_reflection_real(plate: &LayeredPlate, point: &RealAxisPoint, pol: Polarization) -> Result<Complex64> {
    let p = plate.at_real_frequency(point.u, point.a)?;
    let tr = point.transverse();
    let k = p.coating_wavevector(tr);
    if k.im < 0.0 {
        return Err(Error::Branch(k.im));
    }
    Ok(p.reflection(tr, pol))
}

/// `[R⁽¹⁾ − R⁽²⁾]` for `[TM, TE]`.
///
/// When both coatings have the same permittivity the difference is formed
/// as `(1 − r²)(r₁E₁ − r₂E₂) / ((1 + r r₁E₁)(1 + r r₂E₂))`, which stays
/// accurate when the two coefficients agree to many digits.
pub fn reflection_difference(p1: &RealFrequencyPlate, p2: &RealFrequencyPlate, tr: Transverse) -> [Complex64; 2] {
    let l1 = p1.layers(tr);
    let l2 = p2.layers(tr);
    let one = Complex64::new(1.0, 0.0);
    let mut out = [Complex64::new(0.0, 0.0); 2];
    for pol in 0..2 {
        let (x, y) = (l1[pol], l2[pol]);
        out[pol] = if p1.eps_m == p2.eps_m {
            let (b1, b2) = (x.bottom * x.film, y.bottom * y.film);
            x.one_minus_top_sq * (b1 - b2) / ((one + x.top * b1) * (one + x.top * b2))
        } else {
            compose_film(x.top, x.bottom, x.film) - compose_film(y.top, y.bottom, y.film)
        };
    }
    out
}
