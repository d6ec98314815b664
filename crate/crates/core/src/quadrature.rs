//! One-dimensional adaptive quadrature and series summation.
//!
//! The integrator uses the 7-point Gauss / 15-point Kronrod nested pair with
//! QUADPACK-style error estimation, bisecting the panel with the largest
//! local error until the global tolerance is met. Panels are evaluated on the
//! rayon pool, but the sequence of bisections depends only on the panel
//! values, and the final sum is taken in interval order, so the result is
//! bit-identical for any number of worker threads.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;

use crate::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the Kronrod nodes XGK[1], XGK[3], XGK[5] and the centre.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Default cap on the number of panels in one adaptive integral.
pub const DEFAULT_MAX_PANELS: usize = 4000;

/// Non-fatal conditions noticed while integrating.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Warning {
    /// A resonance denominator was clamped to its floor this many times.
    ResonanceFloor(usize),
    /// A truncated range was cut while the integrand was not yet negligible.
    CutoffSaturation,
    /// A panel became too narrow to bisect before meeting its tolerance.
    PanelTooNarrow,
    /// Rounding noise of the integrand limited the attainable accuracy.
    NoiseFloor,
    /// A sub-integral hit its panel limit; its error estimate is carried on.
    PanelLimit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegrationResult {
    pub value: f64,
    pub error_estimate: f64,
    pub panels_used: usize,
    pub warnings: Vec<Warning>,
}

impl IntegrationResult {
    pub fn zero() -> Self {
        IntegrationResult {
            value: 0.0,
            error_estimate: 0.0,
            panels_used: 0,
            warnings: Vec::new(),
        }
    }

    /// Adds another integral over a disjoint range.
    pub fn accumulate(&mut self, other: &IntegrationResult) {
        self.value += other.value;
        self.error_estimate += other.error_estimate;
        self.panels_used += other.panels_used;
        for w in &other.warnings {
            push_warning(&mut self.warnings, *w);
        }
    }

    pub fn scaled(mut self, factor: f64) -> Self {
        self.value *= factor;
        self.error_estimate *= factor.abs();
        self
    }
}

/// Records a warning, merging resonance-floor counters.
pub fn push_warning(list: &mut Vec<Warning>, w: Warning) {
    match w {
        Warning::ResonanceFloor(n) => {
            for existing in list.iter_mut() {
                if let Warning::ResonanceFloor(m) = existing {
                    *m += n;
                    return;
                }
            }
            list.push(w);
        }
        _ => {
            if !list.contains(&w) {
                list.push(w);
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel<const N: usize> {
    lo: f64,
    hi: f64,
    value: [f64; N],
    error: [f64; N],
    total_error: f64,
    /// Integral of the integrand's absolute rounding noise.
    noise: f64,
}

impl<const N: usize> PartialEq for Panel<N> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<const N: usize> Eq for Panel<N> {}

impl<const N: usize> PartialOrd for Panel<N> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<const N: usize> Ord for Panel<N> {
    // Largest error first; ties broken by position so the order is total.
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_error
            .total_cmp(&other.total_error)
            .then_with(|| other.lo.total_cmp(&self.lo))
    }
}

/// One 15-point panel; `total_error` sums the first `controlled` components.
fn gauss_kronrod<const N: usize, F: Fn(f64) -> ([f64; N], f64)>(f: &F, lo: f64, hi: f64, controlled: usize) -> Panel<N> {
    let centre = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let (fc, nc) = f(centre);
    let mut fv1 = [[0.0; N]; 7];
    let mut fv2 = [[0.0; N]; 7];
    let mut noise = WGK[7] * nc.abs();
    for j in 0..7 {
        let dx = half * XGK[j];
        let (v1, n1) = f(centre - dx);
        let (v2, n2) = f(centre + dx);
        fv1[j] = v1;
        fv2[j] = v2;
        noise += WGK[j] * (n1.abs() + n2.abs());
    }
    let mut value = [0.0; N];
    let mut error = [0.0; N];
    for c in 0..N {
        let mut res_k = fc[c] * WGK[7];
        let mut res_g = fc[c] * WG[3];
        let mut res_abs = res_k.abs();
        for j in 0..7 {
            let (f1, f2) = (fv1[j][c], fv2[j][c]);
            res_k += WGK[j] * (f1 + f2);
            res_abs += WGK[j] * (f1.abs() + f2.abs());
            if j % 2 == 1 {
                res_g += WG[j / 2] * (f1 + f2);
            }
        }
        let mean = 0.5 * res_k;
        let mut res_asc = WGK[7] * (fc[c] - mean).abs();
        for j in 0..7 {
            res_asc += WGK[j] * ((fv1[j][c] - mean).abs() + (fv2[j][c] - mean).abs());
        }
        let res_asc = res_asc * half.abs();
        let res_abs = res_abs * half.abs();
        let v = res_k * half;
        let mut err = ((res_k - res_g) * half).abs();
        if res_asc != 0.0 && err != 0.0 {
            err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
        }
        if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
            err = err.max(50.0 * f64::EPSILON * res_abs);
        }
        if !v.is_finite() {
            err = f64::INFINITY;
        }
        value[c] = v;
        error[c] = err;
    }
    Panel {
        lo,
        hi,
        value,
        error,
        total_error: error[..controlled].iter().sum(),
        noise: noise * half.abs(),
    }
}

/// Result of integrating a vector-valued integrand component by component
/// on a shared panel set.
#[derive(Debug, Clone, PartialEq)]
pub struct VecIntegrationResult<const N: usize> {
    pub value: [f64; N],
    pub error_estimate: [f64; N],
    pub panels_used: usize,
    pub warnings: Vec<Warning>,
}

/// Adaptive integrator settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integrator {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_panels: usize,
}

impl Integrator {
    pub fn new(rel_tol: f64, abs_tol: f64) -> Self {
        Integrator {
            rel_tol,
            abs_tol,
            max_panels: DEFAULT_MAX_PANELS,
        }
    }

    pub fn with_max_panels(mut self, max_panels: usize) -> Self {
        self.max_panels = max_panels;
        self
    }

    /// Integrates over `[lo, hi]` starting from `initial_panels` equal panels.
    pub fn integrate<F>(&self, f: F, lo: f64, hi: f64, initial_panels: usize) -> Result<IntegrationResult>
    where
        F: Fn(f64) -> f64 + Sync,
    {
        self.integrate_breakpoints(f, &uniform_breaks(lo, hi, initial_panels)?)
    }

    /// Integrates over `[breaks[0], breaks[last]]`, using the strictly
    /// increasing breakpoints as the initial panel edges.
    pub fn integrate_breakpoints<F>(&self, f: F, breaks: &[f64]) -> Result<IntegrationResult>
    where
        F: Fn(f64) -> f64 + Sync,
    {
        let r = self.integrate_vec(|x| [f(x)], breaks)?;
        Ok(IntegrationResult {
            value: r.value[0],
            error_estimate: r.error_estimate[0],
            panels_used: r.panels_used,
            warnings: r.warnings,
        })
    }

    /// Scalar version of [`Integrator::integrate_vec_noisy`].
    pub fn integrate_noisy<F>(&self, f: F, breaks: &[f64]) -> Result<IntegrationResult>
    where
        F: Fn(f64) -> (f64, f64) + Sync,
    {
        let r = self.integrate_vec_noisy(
            |x| {
                let (v, noise) = f(x);
                ([v], noise)
            },
            breaks,
        )?;
        Ok(IntegrationResult {
            value: r.value[0],
            error_estimate: r.error_estimate[0],
            panels_used: r.panels_used,
            warnings: r.warnings,
        })
    }

    /// Vector-valued version of [`Integrator::integrate_breakpoints`]. The
    /// tolerance applies to the sum of component errors against the sum of
    /// component magnitudes.
    pub fn integrate_vec<const N: usize, F>(&self, f: F, breaks: &[f64]) -> Result<VecIntegrationResult<N>>
    where
        F: Fn(f64) -> [f64; N] + Sync,
    {
        self.integrate_vec_noisy(|x| (f(x), 0.0), breaks)
    }

    /// Like [`Integrator::integrate_vec`] for an integrand that also reports
    /// its absolute rounding noise at each point. A panel whose error
    /// estimate is already below its integrated noise is not bisected
    /// further, and the reported error never falls below the noise.
    pub fn integrate_vec_noisy<const N: usize, F>(&self, f: F, breaks: &[f64]) -> Result<VecIntegrationResult<N>>
    where
        F: Fn(f64) -> ([f64; N], f64) + Sync,
    {
        self.integrate_controlled(f, breaks, N)
    }

    /// Like [`Integrator::integrate_vec_noisy`], but only the first component
    /// drives the refinement; the others are integrated on the same panels
    /// and reported with their own error estimates. Useful when the others
    /// are parts of the first that vary steeply where their sum does not.
    pub fn integrate_tracked_noisy<const N: usize, F>(&self, f: F, breaks: &[f64]) -> Result<VecIntegrationResult<N>>
    where
        F: Fn(f64) -> ([f64; N], f64) + Sync,
    {
        self.integrate_controlled(f, breaks, 1)
    }

    fn integrate_controlled<const N: usize, F>(
        &self,
        f: F,
        breaks: &[f64],
        controlled: usize,
    ) -> Result<VecIntegrationResult<N>>
    where
        F: Fn(f64) -> ([f64; N], f64) + Sync,
    {
        if breaks.len() < 2 {
            return Err(Error::Domain("need at least two breakpoints".into()));
        }
        for w in breaks.windows(2) {
            check_range(w[0], w[1])?;
        }
        let initial: Vec<Panel<N>> = breaks
            .par_windows(2)
            .map(|w| gauss_kronrod(&f, w[0], w[1], controlled))
            .collect();

        let mut total = [0.0; N];
        for p in &initial {
            for c in 0..N {
                total[c] += p.value[c];
            }
        }
        let mut total_err: f64 = initial.iter().map(effective_error).sum();
        let mut heap: BinaryHeap<Panel<N>> = initial.into_iter().collect();
        let mut frozen: Vec<Panel<N>> = Vec::new();
        let mut warnings = Vec::new();

        loop {
            let magnitude: f64 = total[..controlled].iter().map(|v| v.abs()).sum();
            let target = self.abs_tol.max(self.rel_tol * magnitude);
            if total_err <= target {
                break;
            }
            if heap.len() + frozen.len() >= self.max_panels {
                let (value, error, panels) = finish(heap, frozen, controlled);
                let value: f64 = value[..controlled].iter().sum();
                if !value.is_finite() {
                    return Err(Error::NonFinite("integral".into()));
                }
                return Err(Error::MaxSubdivisions {
                    value,
                    error: error[..controlled].iter().sum(),
                    panels,
                });
            }
            let worst = match heap.pop() {
                Some(p) => p,
                None => break,
            };
            let mid = 0.5 * (worst.lo + worst.hi);
            if worst.total_error <= worst.noise {
                frozen.push(worst);
                push_warning(&mut warnings, Warning::NoiseFloor);
                continue;
            }
            if !(mid > worst.lo && mid < worst.hi) || worst.total_error == 0.0 {
                frozen.push(worst);
                push_warning(&mut warnings, Warning::PanelTooNarrow);
                continue;
            }
            let (left, right) = rayon::join(
                || gauss_kronrod(&f, worst.lo, mid, controlled),
                || gauss_kronrod(&f, mid, worst.hi, controlled),
            );
            for c in 0..N {
                total[c] += left.value[c] + right.value[c] - worst.value[c];
            }
            total_err += effective_error(&left) + effective_error(&right) - effective_error(&worst);
            heap.push(left);
            heap.push(right);
        }

        let (value, error_estimate, panels_used) = finish(heap, frozen, controlled);
        if value.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("integral".into()));
        }
        Ok(VecIntegrationResult {
            value,
            error_estimate,
            panels_used,
            warnings,
        })
    }

    /// Integrates over `[lo, ∞)` through the map `x = lo + s / (1 - s)`.
    pub fn integrate_semi_infinite<F>(&self, f: F, lo: f64, initial_panels: usize) -> Result<IntegrationResult>
    where
        F: Fn(f64) -> f64 + Sync,
    {
        let g = |s: f64| {
            let one_minus = 1.0 - s;
            let x = lo + s / one_minus;
            let v = f(x) / (one_minus * one_minus);
            if v.is_finite() {
                v
            } else {
                0.0
            }
        };
        self.integrate(g, 0.0, 1.0, initial_panels)
    }
}

/// `n` equal panels spanning `[lo, hi]`, as breakpoints.
pub fn uniform_breaks(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    check_range(lo, hi)?;
    let n = n.max(1);
    Ok((0..=n)
        .map(|i| {
            if i == n {
                hi
            } else {
                lo + (hi - lo) * (i as f64) / (n as f64)
            }
        })
        .collect())
}

fn check_range(lo: f64, hi: f64) -> Result<()> {
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::Domain(format!("non-finite integration bound [{lo}, {hi}]")));
    }
    if lo >= hi {
        return Err(Error::Domain(format!("empty integration range [{lo}, {hi}]")));
    }
    Ok(())
}

fn finish<const N: usize>(
    heap: BinaryHeap<Panel<N>>,
    frozen: Vec<Panel<N>>,
    controlled: usize,
) -> ([f64; N], [f64; N], usize) {
    let mut panels: Vec<Panel<N>> = heap.into_vec();
    panels.extend(frozen);
    panels.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    let mut value = [0.0; N];
    let mut error = [0.0; N];
    for p in &panels {
        // Noise beyond the discretisation error is shared in proportion to
        // the component errors.
        let inflate = if p.noise > p.total_error && p.total_error > 0.0 {
            p.noise / p.total_error
        } else {
            1.0
        };
        for c in 0..N {
            value[c] += p.value[c];
            error[c] += if p.total_error == 0.0 && c < controlled {
                p.noise / controlled as f64
            } else {
                p.error[c] * inflate
            };
        }
    }
    (value, error, panels.len())
}

fn effective_error<const N: usize>(p: &Panel<N>) -> f64 {
    p.total_error.max(p.noise)
}

/// Adaptive integral of `f` over `[lo, hi]`.
pub fn integrate_adaptive<F>(
    f: F,
    lo: f64,
    hi: f64,
    rel_tol: f64,
    abs_tol: f64,
    initial_panels: usize,
) -> Result<IntegrationResult>
where
    F: Fn(f64) -> f64 + Sync,
{
    Integrator::new(rel_tol, abs_tol).integrate(f, lo, hi, initial_panels)
}

/// Upper limit `Y ≥ lo` beyond which `y^power e^{-y}` has fallen by the
/// factor `drop` below its maximum on `[lo, ∞)`.
pub fn exp_poly_cutoff(power: f64, lo: f64, drop: f64) -> f64 {
    let peak = power.max(lo).max(f64::MIN_POSITIVE);
    let log_peak = if power > 0.0 { power * peak.ln() } else { 0.0 } - peak;
    let target = log_peak + drop.ln();
    // Solve y - power ln y = -target for y > peak by Newton's method.
    let mut y = peak + (-drop.ln()) + power;
    for _ in 0..60 {
        let g = y - power * y.ln() + target;
        let dg = 1.0 - power / y;
        let next = y - g / dg;
        if !(next > peak) {
            y = 0.5 * (y + peak);
            continue;
        }
        if (next - y).abs() <= 1e-14 * y {
            y = next;
            break;
        }
        y = next;
    }
    y
}

/// A truncated series with a bound on the neglected remainder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSum {
    /// Partial sum of the evaluated terms.
    pub value: f64,
    /// Geometric estimate of the magnitude of the remainder.
    pub tail_estimate: f64,
    pub terms_used: usize,
}

/// Number of leading terms exempt from the monotone-decay check.
pub const DECAY_GRACE_TERMS: usize = 32;

/// Sums `term(0) + term(1) + …` until both the last term and the geometric
/// tail estimate drop below `tail_tol` times the accumulated sum.
///
/// Terms are evaluated in parallel chunks; the stopping rule walks them in
/// index order, so the result does not depend on the thread count.
pub fn sum_with_tail<F>(term: F, tail_tol: f64, max_terms: usize) -> Result<SeriesSum>
where
    F: Fn(usize) -> Result<f64> + Sync,
{
    let mut sum = 0.0;
    let mut prev: Option<f64> = None;
    let mut next = 0usize;
    let mut chunk = 8usize;
    let mut last_tail = f64::INFINITY;
    while next < max_terms {
        let end = (next + chunk).min(max_terms);
        let values: Vec<Result<f64>> = (next..end).into_par_iter().map(&term).collect();
        for (offset, v) in values.into_iter().enumerate() {
            let l = next + offset;
            let t = v?;
            if !t.is_finite() {
                return Err(Error::NonFinite(format!("series term {l}")));
            }
            sum += t;
            let Some(p) = prev else {
                prev = Some(t);
                continue;
            };
            let (at, ap) = (t.abs(), p.abs());
            let tail = if at == 0.0 {
                0.0
            } else if at < ap {
                let r = at / ap;
                at * r / (1.0 - r)
            } else {
                f64::INFINITY
            };
            if l >= DECAY_GRACE_TERMS && at > ap {
                return Err(Error::NonDecay { index: l });
            }
            last_tail = tail;
            let scale = tail_tol * sum.abs();
            if at <= scale && tail <= scale {
                return Ok(SeriesSum {
                    value: sum,
                    tail_estimate: tail,
                    terms_used: l + 1,
                });
            }
            prev = Some(t);
        }
        next = end;
        chunk = (chunk * 2).min(512);
    }
    Err(Error::NonConvergence {
        terms: max_terms,
        tail: last_tail,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate_adaptive(|x| x * x, 0.0, 1.0, 1e-12, 0.0, 1).unwrap();
        assert!((r.value - 1.0 / 3.0).abs() < 1e-12);
        assert!(r.error_estimate >= 0.0);
    }

    #[test]
    fn gamma_three_via_transform() {
        let r = Integrator::new(1e-10, 0.0)
            .integrate_semi_infinite(|y| y * y * (-y).exp(), 0.0, 4)
            .unwrap();
        assert!((r.value - 2.0).abs() < 2e-10, "{}", r.value);
    }

    #[test]
    fn sharp_lorentzian_matches_arctan() {
        let eps = 1e-6;
        let f = |x: f64| 1.0 / ((x - 0.5).powi(2) + eps);
        let exact = 2.0 * (0.5 / eps.sqrt()).atan() / eps.sqrt();
        let r = integrate_adaptive(f, 0.0, 1.0, 1e-9, 0.0, 1).unwrap();
        assert!(((r.value - exact) / exact).abs() < 1e-9);
    }

    #[test]
    fn empty_range_is_rejected() {
        assert!(matches!(
            integrate_adaptive(|x| x, 1.0, 1.0, 1e-8, 0.0, 1),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn max_subdivisions_reports_best_estimate() {
        let r = Integrator::new(1e-14, 0.0)
            .with_max_panels(8)
            .integrate(|x: f64| x.sqrt().sin() / x.sqrt(), 0.0, 100.0, 1);
        match r {
            Err(Error::MaxSubdivisions { value, error, panels }) => {
                assert!(value.is_finite() && error > 0.0);
                assert!(panels >= 8);
            }
            other => panic!("expected MaxSubdivisions, got {other:?}"),
        }
    }

    #[test]
    fn breakpoints_cover_range() {
        let r = Integrator::new(1e-12, 1e-13)
            .integrate_breakpoints(|x: f64| x.cos(), &[0.0, 0.3, 1.0, PI])
            .unwrap();
        assert!(r.value.abs() < 1e-12);
    }

    #[test]
    fn cutoff_drops_integrand() {
        for (p, lo) in [(2.0, 0.0), (3.0, 0.0), (2.0, 50.0), (0.0, 1.0)] {
            let y = exp_poly_cutoff(p, lo, 1e-16);
            let f = |x: f64| if p > 0.0 { x.powf(p) } else { 1.0 } * (-x).exp();
            let peak = f(f64::max(p, lo));
            assert!(y > lo);
            assert!((f(y) / peak / 1e-16 - 1.0).abs() < 1e-6, "p={p} lo={lo}");
        }
    }

    #[test]
    fn noise_floor_stops_refinement() {
        let r = Integrator::new(1e-15, 0.0)
            .integrate_noisy(|x: f64| ((10.0 * x).sin(), 1e-3), &[0.0, 1.0])
            .unwrap();
        assert!(r.error_estimate >= 1e-3 * 0.999, "{}", r.error_estimate);
        assert!(r.panels_used < 16, "{}", r.panels_used);
    }

    #[test]
    fn tracked_components_follow_the_first() {
        // The second and third parts spike but cancel in the first.
        let spike = |x: f64| 1.0 / ((x - 0.3).powi(2) + 1e-8);
        let f = |x: f64| ([x.cos(), x.cos() + spike(x), -spike(x)], 0.0);
        let tracked = Integrator::new(1e-10, 0.0).integrate_tracked_noisy(f, &[0.0, 1.0]).unwrap();
        let full = Integrator::new(1e-10, 0.0).integrate_vec_noisy(f, &[0.0, 1.0]).unwrap();
        assert!((tracked.value[0] - 1f64.sin()).abs() < 1e-12);
        assert!(tracked.panels_used < full.panels_used);
        assert!(tracked.error_estimate[1] > tracked.error_estimate[0]);
    }

    #[test]
    fn geometric_series() {
        let s = sum_with_tail(|l| Ok(0.5f64.powi(l as i32)), 1e-12, 1000).unwrap();
        assert!((s.value + s.tail_estimate - 2.0).abs() < 1e-12);
        assert!((s.value - 2.0).abs() < 1e-11);
    }

    #[test]
    fn tail_bounds_remainder() {
        // stop exactly at l = 30: tolerance chosen between 2^-30 and 2^-29 of the sum
        let s = sum_with_tail(|l| Ok(0.5f64.powi(l as i32)), 2f64.powi(-30) / 1.9, 1000).unwrap();
        assert_eq!(s.terms_used, 31);
        let remainder = 2.0 - s.value;
        assert!(s.tail_estimate >= remainder);
    }

    #[test]
    fn growing_terms_fail() {
        let r = sum_with_tail(|l| Ok(1.01f64.powi(l as i32)), 1e-9, 10_000);
        assert!(matches!(r, Err(Error::NonDecay { .. })));
    }

    #[test]
    fn slow_series_hits_cap() {
        let r = sum_with_tail(|l| Ok(0.999f64.powi(l as i32)), 1e-12, 100);
        assert!(matches!(r, Err(Error::NonConvergence { terms: 100, .. })));
    }

    #[test]
    fn all_zero_series() {
        let s = sum_with_tail(|_| Ok(0.0), 1e-9, 100).unwrap();
        assert_eq!(s.value, 0.0);
        assert_eq!(s.terms_used, 2);
    }
}
