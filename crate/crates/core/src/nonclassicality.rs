//! Negative volume of the Wigner function and related scans.
//!
//! `delta = (int |W| - 1) / 2`, which for a normalized `W` equals the volume
//! of the negative part `int max(-W, 0)`. The latter is what is accumulated,
//! so positive states give exactly zero apart from the clamp.

use std::f64::consts::FRAC_1_PI;

use num_complex::Complex64;

use crate::decoherence::{AmplitudeChannel, DecayedKernel};
use crate::error::{Error, Result};
use crate::phasespace::{PhasePoint, WignerKernel};
use crate::quadrature::{integrate_2d, CubatureOptions, Rect};
use crate::states::{make_gbs, make_rbs, FockSuperposition, GbsParams, RbsParams};

/// Values of `delta` below this are reported as zero.
pub const DELTA_CLAMP: f64 = 1e-9;

/// Integration controls for phase-space integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Half-width of the integration square, which contains the disc of this
    /// radius.
    pub radius: f64,
    pub rel_tol: f64,
    /// Maximum dyadic splits per base panel.
    pub max_refine: usize,
}

impl QuadratureSpec {
    pub const DEFAULT_REL_TOL: f64 = 1e-6;
    pub const DEFAULT_MAX_REFINE: usize = 12;

    /// `radius = max(6, 4 + sqrt N)`.
    pub fn default_radius(n_max: usize) -> f64 {
        6.0f64.max(4.0 + (n_max as f64).sqrt())
    }

    pub fn for_state(state: &FockSuperposition) -> Self {
        Self {
            radius: Self::default_radius(state.n_max()),
            rel_tol: Self::DEFAULT_REL_TOL,
            max_refine: Self::DEFAULT_MAX_REFINE,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(Error::InvalidQuadrature(format!("radius must be > 0 (got {})", self.radius)));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return Err(Error::InvalidQuadrature(format!(
                "rel_tol must lie in (0, 1) (got {})",
                self.rel_tol
            )));
        }
        if self.max_refine < 1 {
            return Err(Error::InvalidQuadrature("max_refine must be >= 1".into()));
        }
        Ok(())
    }

    fn options(&self) -> CubatureOptions {
        CubatureOptions {
            max_depth: self.max_refine,
            // |W| integrates to at least 1, so an absolute target of rel_tol
            // is relative to the magnitude being measured
            abs_tol: self.rel_tol,
            ..CubatureOptions::default()
        }
    }
}

/// Detailed result of a phase-space integration of `W`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VolumeEstimate {
    pub delta: f64,
    pub integral: f64,
    pub abs_integral: f64,
    pub error: f64,
    pub evaluations: usize,
}

fn volume_of<F>(w: F, quad: &QuadratureSpec) -> Result<VolumeEstimate>
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    quad.validate()?;
    let r = integrate_2d(w, Rect::square(quad.radius), &quad.options())?;
    let m = r.moments;
    if (m.signed - 1.0).abs() > quad.rel_tol {
        return Err(Error::Normalization { integral: m.signed });
    }
    let delta = if m.negative < DELTA_CLAMP { 0.0 } else { m.negative };
    Ok(VolumeEstimate {
        delta,
        integral: m.signed,
        abs_integral: m.absolute,
        error: r.error,
        evaluations: r.evaluations,
    })
}

pub fn negative_volume_report(state: &FockSuperposition, quad: &QuadratureSpec) -> Result<VolumeEstimate> {
    let kernel = WignerKernel::new(state);
    volume_of(|x, y| kernel.eval(PhasePoint::new(x, y)), quad)
}

/// Nonclassical volume `delta` of the state.
pub fn negative_volume(state: &FockSuperposition, quad: &QuadratureSpec) -> Result<f64> {
    negative_volume_report(state, quad).map(|v| v.delta)
}

pub fn negative_volume_decayed_report(
    state: &FockSuperposition,
    channel: AmplitudeChannel,
    quad: &QuadratureSpec,
) -> Result<VolumeEstimate> {
    let kernel = DecayedKernel::new(state, channel);
    volume_of(|x, y| kernel.eval(PhasePoint::new(x, y)), quad)
}

/// `delta` of the amplitude-decayed Wigner function.
pub fn negative_volume_decayed(
    state: &FockSuperposition,
    channel: AmplitudeChannel,
    quad: &QuadratureSpec,
) -> Result<f64> {
    negative_volume_decayed_report(state, channel, quad).map(|v| v.delta)
}

/// Integral of an arbitrary phase-space function with the same scheme,
/// without the normalization gate.
pub fn integrate_phase_space<F>(f: F, quad: &QuadratureSpec) -> Result<f64>
where
    F: Fn(PhasePoint) -> f64 + Sync,
{
    quad.validate()?;
    let r = integrate_2d(|x, y| f(PhasePoint::new(x, y)), Rect::square(quad.radius), &quad.options())?;
    Ok(r.moments.signed)
}

/// Base state for a parameter sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateFamily {
    Gbs(GbsParams),
    Rbs(RbsParams),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    N,
    A,
    B,
    Phi,
}

impl SweepAxis {
    pub fn name(&self) -> &'static str {
        match self {
            SweepAxis::N => "N",
            SweepAxis::A => "a",
            SweepAxis::B => "b",
            SweepAxis::Phi => "phi",
        }
    }
}

impl std::str::FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "N" | "n" => Ok(SweepAxis::N),
            "a" => Ok(SweepAxis::A),
            "b" => Ok(SweepAxis::B),
            "phi" => Ok(SweepAxis::Phi),
            other => Err(Error::Domain(format!("unknown sweep parameter '{other}' (use N, a, b or phi)"))),
        }
    }
}

impl StateFamily {
    /// The family member with `axis` set to `value`.
    pub fn with(&self, axis: SweepAxis, value: f64) -> Result<FockSuperposition> {
        let as_n = |v: f64| -> Result<usize> {
            if v >= 0.0 && v.fract() == 0.0 && v.is_finite() {
                Ok(v as usize)
            } else {
                Err(Error::Domain(format!("N must be a nonnegative integer (got {v})")))
            }
        };
        match (*self, axis) {
            (StateFamily::Gbs(p), SweepAxis::N) => make_gbs(GbsParams { n: as_n(value)?, ..p }),
            (StateFamily::Gbs(p), SweepAxis::A) => make_gbs(GbsParams { a: value, ..p }),
            (StateFamily::Gbs(p), SweepAxis::B) => make_gbs(GbsParams { b: value, ..p }),
            (StateFamily::Rbs(p), SweepAxis::N) => make_rbs(RbsParams { n: as_n(value)?, ..p }),
            (StateFamily::Rbs(p), SweepAxis::Phi) => make_rbs(RbsParams { phi: value, ..p }),
            (fam, axis) => Err(Error::Domain(format!(
                "parameter {} does not apply to {}",
                axis.name(),
                match fam {
                    StateFamily::Gbs(_) => "gbs",
                    StateFamily::Rbs(_) => "rbs",
                }
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    pub deltas: Vec<f64>,
}

/// `delta` at each parameter value. With `quad = None` each point uses
/// [`QuadratureSpec::for_state`].
pub fn sweep_delta(
    family: StateFamily,
    axis: SweepAxis,
    values: &[f64],
    quad: Option<QuadratureSpec>,
) -> Result<SweepResult> {
    if values.is_empty() {
        return Err(Error::Domain("sweep needs at least one value".into()));
    }
    let increasing = values.windows(2).all(|w| w[0] < w[1]);
    let decreasing = values.windows(2).all(|w| w[0] > w[1]);
    if !(increasing || decreasing) {
        return Err(Error::Domain("sweep values must be strictly monotone".into()));
    }
    let mut deltas = Vec::with_capacity(values.len());
    for &v in values {
        let annotate = |e: Error| Error::Sweep { parameter: axis.name().into(), value: v, source: Box::new(e) };
        let state = family.with(axis, v).map_err(annotate)?;
        let q = quad.unwrap_or_else(|| QuadratureSpec::for_state(&state));
        deltas.push(negative_volume(&state, &q).map_err(annotate)?);
    }
    Ok(SweepResult { axis, values: values.to_vec(), deltas })
}

/// `<gamma|psi>` up to the Gaussian factor, and its derivative, on the real
/// axis: `A(x) = sum_n c_n x^n / sqrt(n!)`.
fn real_axis_amplitude(state: &FockSuperposition, x: f64) -> (Complex64, Complex64) {
    let mut basis = 1.0;
    let mut dbasis = 0.0;
    let mut a = Complex64::new(0.0, 0.0);
    let mut da = Complex64::new(0.0, 0.0);
    for (n, c) in state.coeffs().iter().enumerate() {
        if n > 0 {
            let s = (n as f64).sqrt();
            // d/dx x^n/sqrt(n!) = sqrt(n) x^{n-1}/sqrt((n-1)!)
            dbasis = s * basis;
            basis = basis * x / s;
        }
        a += c * basis;
        da += c * dbasis;
    }
    (a, da)
}

fn q_real(state: &FockSuperposition, x: f64) -> f64 {
    let (a, _) = real_axis_amplitude(state, x);
    FRAC_1_PI * (-x * x).exp() * a.norm_sqr()
}

fn dq_real(state: &FockSuperposition, x: f64) -> f64 {
    let (a, da) = real_axis_amplitude(state, x);
    FRAC_1_PI * (-x * x).exp() * (-2.0 * x * a.norm_sqr() + 2.0 * (a.conj() * da).re)
}

/// Default `Q` threshold for reporting a zero.
pub const Q_ZERO_THRESHOLD: f64 = 1e-8;

/// Approximate zeros of `Q` on the real axis within `[lo, hi]`.
///
/// Interior local minima of the sampled `Q` are refined by bisection on the
/// sign of `dQ/dx` and kept when `Q` there is below `threshold`.
pub fn q_zero_scan(
    state: &FockSuperposition,
    lo: f64,
    hi: f64,
    samples: usize,
    threshold: f64,
) -> Result<Vec<f64>> {
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::Domain(format!("invalid scan interval [{lo}, {hi}]")));
    }
    if samples < 16 {
        return Err(Error::Domain(format!("q_zero_scan needs at least 16 samples (got {samples})")));
    }
    let xs: Vec<f64> = (0..samples)
        .map(|i| crate::phasespace::linspace_at(lo, hi, samples, i))
        .collect();
    let qs: Vec<f64> = xs.iter().map(|&x| q_real(state, x)).collect();
    let mut zeros: Vec<f64> = Vec::new();
    for i in 1..samples - 1 {
        if !(qs[i] <= qs[i - 1] && qs[i] <= qs[i + 1]) {
            continue;
        }
        let (mut a, mut b) = (xs[i - 1], xs[i + 1]);
        if dq_real(state, a) > 0.0 || dq_real(state, b) < 0.0 {
            // flat or degenerate bracket; keep the sample itself
            a = xs[i];
            b = xs[i];
        }
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            if dq_real(state, mid) < 0.0 {
                a = mid;
            } else {
                b = mid;
            }
        }
        let x = 0.5 * (a + b);
        if q_real(state, x) < threshold && zeros.last().is_none_or(|&z| (x - z).abs() > 1e-9) {
            zeros.push(x);
        }
    }
    Ok(zeros)
}
