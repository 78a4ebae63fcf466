//! Finite superpositions of Fock states `sum_n c_n |n>`, plus the generalized
//! binomial and reciprocal binomial families.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::specfun::{binomial_unchecked, log_factorial, log_pochhammer};

/// Largest supported truncation `N`.
pub const MAX_N: usize = 512;

/// Normalized coefficient vector `c_0 ..= c_N` over Fock states.
#[derive(Debug, Clone, PartialEq)]
pub struct FockSuperposition {
    coeffs: Vec<Complex64>,
}

impl FockSuperposition {
    fn from_raw_normalizing(mut coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidState("coefficient list is empty".into()));
        }
        if coeffs.len() - 1 > MAX_N {
            return Err(Error::TooLarge { requested: coeffs.len() - 1, max: MAX_N });
        }
        if let Some(i) = coeffs.iter().position(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidState(format!("coefficient {i} is not finite")));
        }
        let norm = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidState("all coefficients are zero".into()));
        }
        // already normalized to rounding: leave entries untouched
        if (norm - 1.0).abs() > 4.0 * f64::EPSILON {
            for c in &mut coeffs {
                *c /= norm;
            }
        }
        Ok(Self { coeffs })
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Truncation `N` (highest Fock index present).
    pub fn n_max(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `|c_n|^2` for every `n`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.norm_sqr()).collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Multiply every coefficient by `e^{i theta}`.
    pub fn with_global_phase(&self, theta: f64) -> Self {
        let p = Complex64::from_polar(1.0, theta);
        Self { coeffs: self.coeffs.iter().map(|c| c * p).collect() }
    }

    /// `c_n -> c_n e^{i n delta}`, i.e. a phase-space rotation.
    pub fn rotated(&self, delta: f64) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(n, c)| c * Complex64::from_polar(1.0, n as f64 * delta))
                .collect(),
        }
    }
}

/// Parameters of the generalized binomial state `|N, a, b>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GbsParams {
    pub n: usize,
    pub a: f64,
    pub b: f64,
}

impl GbsParams {
    pub fn new(n: usize, a: f64, b: f64) -> Self {
        Self { n, a, b }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a > -1.0 && self.a.is_finite()) {
            return Err(Error::Domain(format!("GBS requires a > -1 (got a = {})", self.a)));
        }
        if !(self.b > -1.0 && self.b.is_finite()) {
            return Err(Error::Domain(format!("GBS requires b > -1 (got b = {})", self.b)));
        }
        if self.n > MAX_N {
            return Err(Error::TooLarge { requested: self.n, max: MAX_N });
        }
        Ok(())
    }
}

/// Parameters of the reciprocal binomial state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RbsParams {
    pub n: usize,
    pub phi: f64,
}

impl RbsParams {
    pub fn new(n: usize, phi: f64) -> Self {
        Self { n, phi }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.phi.is_finite() {
            return Err(Error::Domain("RBS requires a finite phi".into()));
        }
        if self.n > MAX_N {
            return Err(Error::TooLarge { requested: self.n, max: MAX_N });
        }
        Ok(())
    }
}

/// GBS weight `omega(n, N, a, b)` in log space:
///
/// ```text
/// ln omega = ln N! - ln (a+b+2)_N + ln (a+1)_n + ln (b+1)_{N-n} - ln n! - ln (N-n)!
/// ```
///
/// Every Pochhammer base is positive for `a, b > -1`.
pub fn gbs_log_weight(n: usize, params: &GbsParams) -> f64 {
    let big_n = params.n;
    log_factorial(big_n) - log_pochhammer(params.a + params.b + 2.0, big_n)
        + log_pochhammer(params.a + 1.0, n)
        + log_pochhammer(params.b + 1.0, big_n - n)
        - log_factorial(n)
        - log_factorial(big_n - n)
}

/// Generalized binomial state with real nonnegative amplitudes `sqrt(omega)`.
pub fn make_gbs(params: GbsParams) -> Result<FockSuperposition> {
    params.validate()?;
    let coeffs = (0..=params.n)
        .map(|n| Complex64::new((0.5 * gbs_log_weight(n, &params)).exp(), 0.0))
        .collect();
    FockSuperposition::from_raw_normalizing(coeffs)
}

/// Reciprocal binomial state
/// `c_k = C(N, k)^{-1/2} e^{i k (phi - pi/2)} / norm`.
pub fn make_rbs(params: RbsParams) -> Result<FockSuperposition> {
    params.validate()?;
    let big_n = params.n;
    let coeffs = (0..=big_n)
        .map(|k| {
            let mag = binomial_unchecked(big_n, k).sqrt().recip();
            Complex64::from_polar(mag, k as f64 * (params.phi - FRAC_PI_2))
        })
        .collect();
    FockSuperposition::from_raw_normalizing(coeffs)
}

/// Number state `|n>`.
pub fn make_fock(n: usize) -> Result<FockSuperposition> {
    if n > MAX_N {
        return Err(Error::TooLarge { requested: n, max: MAX_N });
    }
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
    coeffs[n] = Complex64::new(1.0, 0.0);
    Ok(FockSuperposition { coeffs })
}

/// Arbitrary superposition, normalized to unit norm.
pub fn make_custom(raw: &[Complex64]) -> Result<FockSuperposition> {
    FockSuperposition::from_raw_normalizing(raw.to_vec())
}
