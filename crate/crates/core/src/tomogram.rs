//! Closed-form optical tomogram `w(X, theta)` of a Fock superposition.
//!
//! ```text
//! w(X, theta) = exp(-X^2)/sqrt(pi) * [ sum_n |c_n|^2 H_n(X)^2 / (2^n n!)
//!     + sum_{n<k} |c_n||c_k| cos((n-k) theta - (phi_n - phi_k)) H_n H_k / sqrt(2^(n+k-2) n! k!) ]
//! ```
//!
//! with `c_j = |c_j| e^{i phi_j}`.

use std::f64::consts::{LN_2, PI};

use crate::error::Result;
use crate::phasespace::{eval_grid, GridSpec, PhasePoint, ScalarField};
use crate::specfun::{hermite_all, log_factorial};
use crate::states::FockSuperposition;

/// Quadrature value `x` measured at local-oscillator angle `theta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TomogramPoint {
    pub x: f64,
    pub theta: f64,
}

impl TomogramPoint {
    pub fn new(x: f64, theta: f64) -> Self {
        Self { x, theta }
    }
}

pub fn optical_tomogram(state: &FockSuperposition, point: TomogramPoint) -> f64 {
    let c = state.coeffs();
    let h = hermite_all(state.n_max(), point.x);
    // ln sqrt(2^n n!)
    let log_norm: Vec<f64> =
        (0..c.len()).map(|n| 0.5 * (n as f64 * LN_2 + log_factorial(n))).collect();
    let mags: Vec<f64> = c.iter().map(|z| z.norm()).collect();
    let phases: Vec<f64> = c.iter().map(|z| z.arg()).collect();

    let mut diag = 0.0;
    for n in 0..c.len() {
        if mags[n] == 0.0 {
            continue;
        }
        diag += mags[n] * mags[n] * h[n] * h[n] * (-2.0 * log_norm[n]).exp();
    }
    let mut cross = 0.0;
    for n in 0..c.len() {
        if mags[n] == 0.0 {
            continue;
        }
        for k in (n + 1)..c.len() {
            if mags[k] == 0.0 {
                continue;
            }
            let angle = (n as f64 - k as f64) * point.theta - (phases[n] - phases[k]);
            // 1/sqrt(2^(n+k-2) n! k!) = exp(ln 2 - ln sqrt(2^n n!) - ln sqrt(2^k k!))
            let scale = (LN_2 - log_norm[n] - log_norm[k]).exp();
            cross += mags[n] * mags[k] * angle.cos() * h[n] * h[k] * scale;
        }
    }
    (-point.x * point.x).exp() / PI.sqrt() * (diag + cross)
}

/// Tomogram on an `(X, theta)` grid; the grid's x axis is `X` and its y axis
/// is `theta`.
pub fn tomogram_grid(state: &FockSuperposition, grid: GridSpec) -> Result<ScalarField> {
    eval_grid(grid, |p: PhasePoint| optical_tomogram(state, TomogramPoint::new(p.re, p.im)))
}
