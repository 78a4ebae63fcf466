//! Wigner function under amplitude decay and the long-time phase-damping
//! limit.
//!
//! Amplitude decay with `beta = exp(-kappa t)` replaces `X_nm` by
//!
//! ```text
//! Y_nm = 2 (-1)^n / pi * sqrt(n! m!) * exp(-2|g|^2) * (2 beta g)^d
//!        * sum_{j=0}^{n} (-2)^j S_j / ((n-j)! (d+j)!),          d = m - n
//! S_j  = (1-beta^2)^j L_j^d(-2 beta^2 |g|^2 / (1-beta^2))
//!      = sum_{i=0}^{j} C(j+d, j-i) (1-beta^2)^(j-i) (2 beta^2 |g|^2)^i / i!
//! ```
//!
//! The second form of `S_j` has only nonnegative terms and stays finite as
//! `beta -> 1`, where the Laguerre argument diverges. `beta == 1` itself goes
//! straight to the undamped coefficients.

use std::f64::consts::FRAC_2_PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::phasespace::{cpowi, x_coeff, PhasePoint, WignerKernel};
use crate::specfun::{binomial_unchecked, log_factorial};
use crate::states::FockSuperposition;

/// Amplitude-decay channel with transmission amplitude `beta = exp(-kappa t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeChannel {
    beta: f64,
}

impl AmplitudeChannel {
    pub const IDENTITY: AmplitudeChannel = AmplitudeChannel { beta: 1.0 };

    pub fn new(beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta <= 1.0) {
            return Err(Error::Domain(format!("channel requires 0 < beta <= 1 (got {beta})")));
        }
        Ok(Self { beta })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Rescaled time `kappa t = -ln beta`.
    pub fn kappa_t(&self) -> f64 {
        -self.beta.ln()
    }

    pub fn is_identity(&self) -> bool {
        self.beta == 1.0
    }
}

/// `beta = exp(-kappa t)`.
pub fn kt_to_beta(kappa_t: f64) -> Result<AmplitudeChannel> {
    if !(kappa_t >= 0.0) || !kappa_t.is_finite() {
        return Err(Error::Domain(format!("kappa t must be finite and >= 0 (got {kappa_t})")));
    }
    AmplitudeChannel::new((-kappa_t).exp())
}

/// `S_j` for every `(d, j)` with `d + j <= n_max`, indexed `[d][j]`.
fn s_table(n_max: usize, s: f64, u: f64, binom: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut spow = Vec::with_capacity(n_max + 1);
    let mut upow = Vec::with_capacity(n_max + 1);
    let (mut sp, mut up) = (1.0, 1.0);
    for i in 0..=n_max {
        if i > 0 {
            sp *= s;
            up *= u / i as f64;
        }
        spow.push(sp);
        upow.push(up);
    }
    (0..=n_max)
        .map(|d| {
            (0..=(n_max - d))
                .map(|j| (0..=j).map(|i| binom[j + d][j - i] * spow[j - i] * upow[i]).sum())
                .collect()
        })
        .collect()
}

fn binomial_rows(n_max: usize) -> Vec<Vec<f64>> {
    (0..=n_max).map(|a| (0..=a).map(|b| binomial_unchecked(a, b)).collect()).collect()
}

/// Decayed pair coefficient `Y_nm(gamma)`; `Y_mn = conj(Y_nm)`.
pub fn y_coeff(n: usize, m: usize, gamma: PhasePoint, channel: AmplitudeChannel) -> Complex64 {
    if n > m {
        return y_coeff(m, n, gamma, channel).conj();
    }
    if channel.is_identity() {
        return x_coeff(n, m, gamma);
    }
    let beta = channel.beta;
    let d = m - n;
    let r2 = gamma.norm_sqr();
    let s = 1.0 - beta * beta;
    let u = 2.0 * beta * beta * r2;
    let binom = binomial_rows(m);
    let table = s_table(m, s, u, &binom);
    let sum = j_sum(n, d, &table[d]);
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let radial = sign * FRAC_2_PI * (-2.0 * r2).exp() * sum;
    cpowi(2.0 * beta * gamma.as_complex(), d) * radial
}

/// `sqrt(n! m!) sum_j (-2)^j S_j / ((n-j)! (d+j)!)`, accumulated with term
/// ratios from `sqrt(m!/n!) / d!`.
fn j_sum(n: usize, d: usize, s_row: &[f64]) -> f64 {
    let m = n + d;
    let mut f = (0.5 * (log_factorial(m) - log_factorial(n)) - log_factorial(d)).exp();
    let mut acc = f * s_row[0];
    for j in 0..n {
        f *= -2.0 * (n - j) as f64 / (d + j + 1) as f64;
        acc += f * s_row[j + 1];
    }
    acc
}

/// Per-state data for repeated decayed-Wigner evaluation.
#[derive(Debug, Clone)]
pub struct DecayedKernel {
    channel: AmplitudeChannel,
    n_max: usize,
    /// `c_n conj(c_m) 2 (-1)^n / pi` indexed `[d][n]`.
    pairs: Vec<Vec<Complex64>>,
    binom: Vec<Vec<f64>>,
    undamped: Option<WignerKernel>,
}

impl DecayedKernel {
    pub fn new(state: &FockSuperposition, channel: AmplitudeChannel) -> Self {
        let n_max = state.n_max();
        let c = state.coeffs();
        let pairs = (0..=n_max)
            .map(|d| {
                (0..=(n_max - d))
                    .map(|n| {
                        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                        c[n] * c[n + d].conj() * (sign * FRAC_2_PI)
                    })
                    .collect()
            })
            .collect();
        let undamped = channel.is_identity().then(|| WignerKernel::new(state));
        Self { channel, n_max, pairs, binom: binomial_rows(n_max), undamped }
    }

    pub fn eval(&self, gamma: PhasePoint) -> f64 {
        if let Some(k) = &self.undamped {
            return k.eval(gamma);
        }
        let beta = self.channel.beta;
        let r2 = gamma.norm_sqr();
        let envelope = (-2.0 * r2).exp();
        if envelope == 0.0 {
            return 0.0;
        }
        let table = s_table(self.n_max, 1.0 - beta * beta, 2.0 * beta * beta * r2, &self.binom);
        let z = 2.0 * beta * gamma.as_complex();
        let mut zd = Complex64::new(1.0, 0.0);
        let mut sum = 0.0;
        for d in 0..=self.n_max {
            let mut acc = Complex64::new(0.0, 0.0);
            for (n, w) in self.pairs[d].iter().enumerate() {
                if *w != Complex64::new(0.0, 0.0) {
                    acc += w * j_sum(n, d, &table[d]);
                }
            }
            let re = acc.re * zd.re - acc.im * zd.im;
            sum += if d == 0 { re } else { 2.0 * re };
            zd *= z;
        }
        envelope * sum
    }
}

/// Wigner function after amplitude decay.
pub fn wigner_decayed(state: &FockSuperposition, gamma: PhasePoint, channel: AmplitudeChannel) -> f64 {
    DecayedKernel::new(state, channel).eval(gamma)
}

/// `W(0, 0, t) = (2/pi) sum_n (1 - 2 beta^2)^n |c_n|^2`.
pub fn wigner_origin_decayed(state: &FockSuperposition, channel: AmplitudeChannel) -> f64 {
    let q = 1.0 - 2.0 * channel.beta * channel.beta;
    let mut pow = 1.0;
    let mut acc = 0.0;
    for c in state.coeffs() {
        acc += pow * c.norm_sqr();
        pow *= q;
    }
    FRAC_2_PI * acc
}

/// Long-time limit under phase damping: `sum_n |c_n|^2 X_nn(gamma)`.
///
/// Depends on `gamma` only through `|gamma|`.
pub fn dephased_wigner_inf(state: &FockSuperposition, gamma: PhasePoint) -> f64 {
    state
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| c.norm_sqr() != 0.0)
        .map(|(n, c)| c.norm_sqr() * x_coeff(n, n, gamma).re)
        .sum()
}

/// Radial profile of [`dephased_wigner_inf`] along the positive real axis.
pub fn dephased_profile(state: &FockSuperposition, radii: &[f64]) -> Vec<f64> {
    radii.iter().map(|&r| dephased_wigner_inf(state, PhasePoint::new(r, 0.0))).collect()
}
