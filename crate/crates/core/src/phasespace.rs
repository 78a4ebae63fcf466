//! Wigner and Q functions of a finite Fock superposition.
//!
//! The Wigner function is assembled from the closed-form pair coefficients
//!
//! ```text
//! X_nm(g) = 2 (-1)^n / pi * sqrt(n!/m!) * exp(-2|g|^2) * (2g)^(m-n) * L_n^(m-n)(4|g|^2),  n <= m
//! X_mn    = conj(X_nm)
//! W(g)    = sum_n |c_n|^2 X_nn + 2 Re sum_{n<m} c_n conj(c_m) X_nm
//! ```
//!
//! so no series truncation is involved.

use std::f64::consts::{FRAC_2_PI, FRAC_1_PI};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::specfun::{binomial_unchecked, laguerre_assoc, log_factorial};
use crate::states::FockSuperposition;

/// Phase-space point `gamma = re + i im`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub re: f64,
    pub im: f64,
}

impl PhasePoint {
    pub const ORIGIN: PhasePoint = PhasePoint { re: 0.0, im: 0.0 };

    pub fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    pub fn from_polar(r: f64, theta: f64) -> Self {
        Self { re: r * theta.cos(), im: r * theta.sin() }
    }

    pub fn as_complex(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

impl From<Complex64> for PhasePoint {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

/// Rectangular evaluation grid with inclusive end points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub xmin: f64,
    pub xmax: f64,
    pub nx: usize,
    pub ymin: f64,
    pub ymax: f64,
    pub ny: usize,
}

impl GridSpec {
    pub fn new(xmin: f64, xmax: f64, nx: usize, ymin: f64, ymax: f64, ny: usize) -> Result<Self> {
        let g = Self { xmin, xmax, nx, ymin, ymax, ny };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.xmin, self.xmax, self.ymin, self.ymax].iter().all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidGrid("bounds must be finite".into()));
        }
        if !(self.xmin < self.xmax) || !(self.ymin < self.ymax) {
            return Err(Error::InvalidGrid("require xmin < xmax and ymin < ymax".into()));
        }
        if self.nx < 2 || self.ny < 2 {
            return Err(Error::InvalidGrid("require at least 2 points per axis".into()));
        }
        Ok(())
    }

    pub fn x(&self, i: usize) -> f64 {
        linspace_at(self.xmin, self.xmax, self.nx, i)
    }

    pub fn y(&self, j: usize) -> f64 {
        linspace_at(self.ymin, self.ymax, self.ny, j)
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Node `k` in row-major order, x outer and y inner.
    pub fn node(&self, k: usize) -> (f64, f64) {
        (self.x(k / self.ny), self.y(k % self.ny))
    }
}

pub(crate) fn linspace_at(lo: f64, hi: f64, n: usize, i: usize) -> f64 {
    if i + 1 == n {
        hi
    } else {
        lo + (hi - lo) * i as f64 / (n - 1) as f64
    }
}

/// Values on a [`GridSpec`], stored with x as the outer index.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    pub grid: GridSpec,
    pub values: Vec<f64>,
}

impl ScalarField {
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.grid.ny + j]
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Integer power by repeated multiplication; `z^0 = 1` for every `z`.
pub(crate) fn cpowi(z: Complex64, k: usize) -> Complex64 {
    (0..k).fold(Complex64::new(1.0, 0.0), |acc, _| acc * z)
}

/// Pair coefficient `X_nm(gamma)`.
pub fn x_coeff(n: usize, m: usize, gamma: PhasePoint) -> Complex64 {
    if n > m {
        return x_coeff(m, n, gamma).conj();
    }
    let d = m - n;
    let r2 = gamma.norm_sqr();
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let ratio = (0.5 * (log_factorial(n) - log_factorial(m))).exp();
    let radial = sign * FRAC_2_PI * ratio * (-2.0 * r2).exp() * laguerre_assoc(n, d, 4.0 * r2);
    if d == 0 {
        Complex64::new(radial, 0.0)
    } else {
        cpowi(2.0 * gamma.as_complex(), d) * radial
    }
}

/// Precomputed per-state data for repeated Wigner evaluation.
///
/// Holds `c_n conj(c_m) 2(-1)^n/pi sqrt(n!/m!)` for every `n <= m` and the
/// Laguerre coefficient tables, so that a point costs one exponential, the
/// powers of `2 gamma`, and a polynomial evaluation per pair.
#[derive(Debug, Clone)]
pub struct WignerKernel {
    n_max: usize,
    /// `pairs[d][n]` for `m = n + d`.
    pairs: Vec<Vec<Complex64>>,
    /// `laguerre[d][n][i]`: coefficient of `x^i` in `L_n^d(x)`.
    laguerre: Vec<Vec<Vec<f64>>>,
}

impl WignerKernel {
    pub fn new(state: &FockSuperposition) -> Self {
        let c = state.coeffs();
        let n_max = state.n_max();
        let mut pairs = Vec::with_capacity(n_max + 1);
        let mut laguerre = Vec::with_capacity(n_max + 1);
        for d in 0..=n_max {
            let mut row = Vec::with_capacity(n_max + 1 - d);
            let mut lrow = Vec::with_capacity(n_max + 1 - d);
            for n in 0..=(n_max - d) {
                let m = n + d;
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                let w = sign * FRAC_2_PI * (0.5 * (log_factorial(n) - log_factorial(m))).exp();
                row.push(c[n] * c[m].conj() * w);
                lrow.push(laguerre_coefficients(n, d));
            }
            pairs.push(row);
            laguerre.push(lrow);
        }
        Self { n_max, pairs, laguerre }
    }

    pub fn eval(&self, gamma: PhasePoint) -> f64 {
        let r2 = gamma.norm_sqr();
        let envelope = (-2.0 * r2).exp();
        if envelope == 0.0 {
            return 0.0;
        }
        let t = 4.0 * r2;
        let z = 2.0 * gamma.as_complex();
        let mut zd = Complex64::new(1.0, 0.0);
        let mut sum = 0.0;
        for d in 0..=self.n_max {
            let mut acc = Complex64::new(0.0, 0.0);
            for (w, coeffs) in self.pairs[d].iter().zip(&self.laguerre[d]) {
                if *w != Complex64::new(0.0, 0.0) {
                    acc += w * horner(coeffs, t);
                }
            }
            // Re(acc * z^d); off-diagonal pairs count twice
            let re = acc.re * zd.re - acc.im * zd.im;
            sum += if d == 0 { re } else { 2.0 * re };
            zd *= z;
        }
        envelope * sum
    }
}

/// Coefficients of `L_n^alpha(x) = sum_i (-1)^i C(n+alpha, n-i) x^i / i!`.
pub(crate) fn laguerre_coefficients(n: usize, alpha: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut term = binomial_unchecked(n + alpha, n);
    out.push(term);
    for i in 0..n {
        term *= -((n - i) as f64) / (((alpha + i + 1) * (i + 1)) as f64);
        out.push(term);
    }
    out
}

pub(crate) fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &a| acc * x + a)
}

/// Wigner function at `gamma`.
pub fn wigner(state: &FockSuperposition, gamma: PhasePoint) -> f64 {
    WignerKernel::new(state).eval(gamma)
}

/// Full double sum `sum_{n,m} c_n conj(c_m) X_nm` without folding the
/// Hermitian pairs; its imaginary part is rounding noise.
pub fn wigner_full_sum(state: &FockSuperposition, gamma: PhasePoint) -> Complex64 {
    let c = state.coeffs();
    let mut acc = Complex64::new(0.0, 0.0);
    for (n, cn) in c.iter().enumerate() {
        for (m, cm) in c.iter().enumerate() {
            acc += cn * cm.conj() * x_coeff(n, m, gamma);
        }
    }
    acc
}

/// `W(0, 0) = (2/pi) sum_n (-1)^n |c_n|^2`.
pub fn wigner_origin(state: &FockSuperposition) -> f64 {
    FRAC_2_PI
        * state
            .coeffs()
            .iter()
            .enumerate()
            .map(|(n, c)| if n % 2 == 0 { c.norm_sqr() } else { -c.norm_sqr() })
            .sum::<f64>()
}

/// Husimi function `Q(gamma) = |<gamma|psi>|^2 / pi`.
pub fn q_function(state: &FockSuperposition, gamma: PhasePoint) -> f64 {
    let gc = gamma.as_complex().conj();
    let mut basis = Complex64::new(1.0, 0.0);
    let mut amp = Complex64::new(0.0, 0.0);
    for (n, c) in state.coeffs().iter().enumerate() {
        if n > 0 {
            basis = basis * gc / (n as f64).sqrt();
        }
        amp += c * basis;
    }
    FRAC_1_PI * (-gamma.norm_sqr()).exp() * amp.norm_sqr()
}

fn field<F>(grid: GridSpec, f: F) -> Result<ScalarField>
where
    F: Fn(PhasePoint) -> f64 + Sync,
{
    grid.validate()?;
    let values = (0..grid.len())
        .into_par_iter()
        .map(|k| {
            let (x, y) = grid.node(k);
            f(PhasePoint::new(x, y))
        })
        .collect();
    Ok(ScalarField { grid, values })
}

pub fn wigner_grid(state: &FockSuperposition, grid: GridSpec) -> Result<ScalarField> {
    let kernel = WignerKernel::new(state);
    field(grid, |g| kernel.eval(g))
}

pub fn q_grid(state: &FockSuperposition, grid: GridSpec) -> Result<ScalarField> {
    field(grid, |g| q_function(state, g))
}

/// Evaluate an arbitrary point function on a grid (used by the CLI for the
/// decayed and dephased fields).
pub fn eval_grid<F>(grid: GridSpec, f: F) -> Result<ScalarField>
where
    F: Fn(PhasePoint) -> f64 + Sync,
{
    field(grid, f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{make_custom, make_fock, make_gbs, make_rbs, GbsParams, RbsParams};
    use std::f64::consts::PI;

    fn vacuum_w(g: PhasePoint) -> f64 {
        FRAC_2_PI * (-2.0 * g.norm_sqr()).exp()
    }

    #[test]
    fn x_coeff_examples() {
        let o = PhasePoint::ORIGIN;
        assert_eq!(x_coeff(0, 0, o), Complex64::new(FRAC_2_PI, 0.0));
        assert_eq!(x_coeff(1, 1, o), Complex64::new(-FRAC_2_PI, 0.0));
        let v = x_coeff(0, 1, PhasePoint::new(1.0, 0.0));
        let want = FRAC_2_PI * (-2.0f64).exp() * 2.0;
        assert!((v.re - want).abs() < 1e-15 && v.im == 0.0);
        assert!((v.re - 0.17231).abs() < 1e-5);
    }

    #[test]
    fn x_coeff_hermitian() {
        let g = PhasePoint::new(0.4, -1.3);
        for n in 0..6 {
            assert_eq!(x_coeff(n, n, g).im, 0.0);
            for m in 0..6 {
                assert!((x_coeff(m, n, g) - x_coeff(n, m, g).conj()).norm() < 1e-16);
            }
        }
    }

    #[test]
    fn vacuum_wigner() {
        let vac = make_fock(0).unwrap();
        for g in [PhasePoint::ORIGIN, PhasePoint::new(1.0, 0.0), PhasePoint::new(1.0, 1.0)] {
            assert!((wigner(&vac, g) - vacuum_w(g)).abs() < 1e-15);
        }
    }

    #[test]
    fn fock_one_closed_form() {
        let s = make_fock(1).unwrap();
        for &(x, y) in &[(0.0, 0.0), (0.5, 0.0), (0.3, -0.8), (1.7, 1.1)] {
            let g = PhasePoint::new(x, y);
            let r2 = g.norm_sqr();
            let want = FRAC_2_PI * (4.0 * r2 - 1.0) * (-2.0 * r2).exp();
            assert!((wigner(&s, g) - want).abs() < 1e-15);
        }
    }

    #[test]
    fn gbs_origin_value() {
        let s = make_gbs(GbsParams::new(5, 0.9, -0.9)).unwrap();
        // (2/pi) * alternating sum of the printed |c_n|^2 table
        let printed = [0.00407779, 0.00944854, 0.0176779, 0.0328304, 0.0731223, 0.862843];
        let from_table: f64 = FRAC_2_PI
            * printed.iter().enumerate().map(|(n, p)| if n % 2 == 0 { *p } else { -p }).sum::<f64>();
        assert!((from_table + 0.515818).abs() < 1e-6);
        let w = wigner(&s, PhasePoint::ORIGIN);
        assert!((w - from_table).abs() < 1e-5);
        assert!((w - wigner_origin(&s)).abs() < 1e-12);
    }

    #[test]
    fn rbs_origin_sign_by_parity() {
        for phi in [0.0, PI / 4.0, 1.3] {
            let odd = make_rbs(RbsParams::new(5, phi)).unwrap();
            assert!(wigner(&odd, PhasePoint::ORIGIN).abs() < 1e-12);
            assert!(wigner_origin(&odd).abs() < 1e-12);
        }
        let even = make_rbs(RbsParams::new(4, PI / 4.0)).unwrap();
        assert!(wigner_origin(&even) > 0.0);
    }

    #[test]
    fn origin_shortcut_matches() {
        assert_eq!(wigner_origin(&make_fock(0).unwrap()), FRAC_2_PI);
        assert_eq!(wigner_origin(&make_fock(1).unwrap()), -FRAC_2_PI);
        let s = make_custom(&[
            Complex64::new(0.3, 0.1),
            Complex64::new(-0.2, 0.5),
            Complex64::new(0.0, -0.7),
            Complex64::new(0.4, 0.4),
        ])
        .unwrap();
        assert!((wigner_origin(&s) - wigner(&s, PhasePoint::ORIGIN)).abs() < 1e-12);
    }

    #[test]
    fn q_function_examples() {
        let vac = make_fock(0).unwrap();
        assert!((q_function(&vac, PhasePoint::ORIGIN) - FRAC_1_PI).abs() < 1e-16);
        for n in 1..5 {
            assert_eq!(q_function(&make_fock(n).unwrap(), PhasePoint::ORIGIN), 0.0);
        }
        // Fock |n>: Q = e^{-r^2} r^{2n} / (pi n!)
        let g = PhasePoint::new(0.8, -1.1);
        let r2 = g.norm_sqr();
        let q3 = q_function(&make_fock(3).unwrap(), g);
        assert!((q3 - (-r2).exp() * r2.powi(3) / (6.0 * PI)).abs() < 1e-15);
    }

    #[test]
    fn grids() {
        let vac = make_fock(0).unwrap();
        let grid = GridSpec::new(-1.0, 1.0, 3, -1.0, 1.0, 3).unwrap();
        let f = wigner_grid(&vac, grid).unwrap();
        assert_eq!(f.values.len(), 9);
        assert!((f.at(1, 1) - FRAC_2_PI).abs() < 1e-15);
        assert!(f.values.iter().all(|v| *v > 0.0));

        let grid = GridSpec::new(-2.0, 2.0, 41, -2.0, 2.0, 41).unwrap();
        let f = wigner_grid(&make_fock(1).unwrap(), grid).unwrap();
        assert!((f.min() + FRAC_2_PI).abs() < 1e-15);
        assert_eq!(f.at(20, 20), f.min());

        let q = q_grid(&vac, grid).unwrap();
        assert!((q.max() - FRAC_1_PI).abs() < 1e-15);
    }

    #[test]
    fn grid_rejects_invalid() {
        assert!(GridSpec::new(1.0, -1.0, 3, 0.0, 1.0, 3).is_err());
        assert!(GridSpec::new(-1.0, 1.0, 1, 0.0, 1.0, 3).is_err());
        assert!(GridSpec::new(-1.0, f64::NAN, 3, 0.0, 1.0, 3).is_err());
        let bad = GridSpec { xmin: 0.0, xmax: 0.0, nx: 3, ymin: 0.0, ymax: 1.0, ny: 3 };
        assert!(wigner_grid(&make_fock(0).unwrap(), bad).is_err());
    }

    #[test]
    fn grid_row_major_x_outer() {
        let g = GridSpec::new(0.0, 1.0, 2, 10.0, 12.0, 3).unwrap();
        assert_eq!(g.node(0), (0.0, 10.0));
        assert_eq!(g.node(1), (0.0, 11.0));
        assert_eq!(g.node(3), (1.0, 10.0));
        assert_eq!(g.node(5), (1.0, 12.0));
    }

    #[test]
    fn kernel_matches_pairwise_assembly() {
        let s = make_gbs(GbsParams::new(7, 0.3, 1.2)).unwrap().rotated(0.4);
        let k = WignerKernel::new(&s);
        for &(x, y) in &[(0.0, 0.0), (0.7, -0.2), (-1.5, 2.0), (2.5, 0.1)] {
            let g = PhasePoint::new(x, y);
            let full = wigner_full_sum(&s, g);
            assert!((k.eval(g) - full.re).abs() < 1e-13);
            assert!(full.im.abs() < 1e-13);
        }
    }
}
