//! Independent Wigner evaluator: the truncated displaced-number-state series
//!
//! ```text
//! W(a) = (2/pi) sum_k (-1)^k |<a, k|psi>|^2,    |a, k> = D(a)|k>
//! ```
//!
//! Used only to cross-check [`crate::phasespace`]. It shares nothing with that
//! module except the special functions.
//!
//! Index convention: [`displaced_overlap`]`(n, k, a)` is the matrix element
//! `<n|D(a)|k>`, so `<a, k|psi> = sum_n c_n conj(<n|D(a)|k>)`. The `n >= k`
//! branch carries `a^(n-k)`; the `n < k` branch carries `(-conj a)^(k-n)`.

use std::f64::consts::FRAC_2_PI;

use num_complex::Complex64;

use crate::phasespace::PhasePoint;
use crate::specfun::{laguerre_assoc, log_factorial};
use crate::states::FockSuperposition;

/// A series term larger than this at the cut marks the result unconverged.
pub const TAIL_TOLERANCE: f64 = 1e-10;

/// Extra terms kept beyond the state's truncation by default.
pub const DEFAULT_EXTRA_TERMS: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeriesTruncation(usize);

impl SeriesTruncation {
    pub fn new(terms: usize) -> Option<Self> {
        (terms >= 1).then_some(Self(terms))
    }

    pub fn default_for(state: &FockSuperposition) -> Self {
        Self(state.n_max() + DEFAULT_EXTRA_TERMS)
    }

    pub fn terms(&self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesEstimate {
    pub value: f64,
    /// Magnitude of the last retained term, `(2/pi) |<a, K-1|psi>|^2`.
    pub last_term: f64,
}

impl SeriesEstimate {
    pub fn converged(&self) -> bool {
        self.last_term <= TAIL_TOLERANCE
    }
}

/// `<n|D(alpha)|k>`.
pub fn displaced_overlap(n: usize, k: usize, alpha: PhasePoint) -> Complex64 {
    let a = alpha.as_complex();
    let r2 = alpha.norm_sqr();
    let gauss = (-0.5 * r2).exp();
    let (lo, hi, base) = if n >= k { (k, n, a) } else { (n, k, -a.conj()) };
    let d = hi - lo;
    let scale = (0.5 * (log_factorial(lo) - log_factorial(hi))).exp();
    let mut power = Complex64::new(1.0, 0.0);
    for _ in 0..d {
        power *= base;
    }
    power * (scale * gauss * laguerre_assoc(lo, d, r2))
}

/// Series value truncated after `trunc` terms (`k = 0 .. K-1`).
pub fn wigner_series(
    state: &FockSuperposition,
    alpha: PhasePoint,
    trunc: SeriesTruncation,
) -> SeriesEstimate {
    let mut value = 0.0;
    let mut last_term = 0.0;
    for k in 0..trunc.terms() {
        let amp: Complex64 = state
            .coeffs()
            .iter()
            .enumerate()
            .map(|(n, c)| c * displaced_overlap(n, k, alpha).conj())
            .sum();
        let term = FRAC_2_PI * amp.norm_sqr();
        value += if k % 2 == 0 { term } else { -term };
        last_term = term;
    }
    SeriesEstimate { value, last_term }
}

/// Series term magnitudes `(2/pi) |<a, k|psi>|^2` for `k < terms`.
pub fn series_terms(state: &FockSuperposition, alpha: PhasePoint, terms: usize) -> Vec<f64> {
    (0..terms)
        .map(|k| {
            let amp: Complex64 = state
                .coeffs()
                .iter()
                .enumerate()
                .map(|(n, c)| c * displaced_overlap(n, k, alpha).conj())
                .sum();
            FRAC_2_PI * amp.norm_sqr()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{make_custom, make_fock, make_gbs, GbsParams};

    #[test]
    fn overlap_examples() {
        let a = PhasePoint::new(0.3, -0.4);
        let v = displaced_overlap(0, 0, a);
        assert!((v.re - (-0.5 * a.norm_sqr()).exp()).abs() < 1e-16 && v.im == 0.0);
        assert_eq!(displaced_overlap(2, 2, PhasePoint::ORIGIN), Complex64::new(1.0, 0.0));
        assert_eq!(displaced_overlap(2, 1, PhasePoint::ORIGIN), Complex64::new(0.0, 0.0));
        let v = displaced_overlap(1, 0, PhasePoint::new(0.5, 0.0));
        assert!((v.re - 0.5 * (-0.125f64).exp()).abs() < 1e-16);
        assert!((v.re - 0.441248).abs() < 1e-6);
    }

    #[test]
    fn overlap_is_unitary_column() {
        // sum_n |<n|D|k>|^2 = 1 for each k
        let a = PhasePoint::new(0.9, 0.6);
        for k in 0..5 {
            let s: f64 = (0..80).map(|n| displaced_overlap(n, k, a).norm_sqr()).sum();
            assert!((s - 1.0).abs() < 1e-12, "k={k}: {s}");
        }
        // <n|D(a)|k> = conj(<k|D(-a)|n>)
        let neg = PhasePoint::new(-0.9, -0.6);
        for n in 0..5 {
            for k in 0..5 {
                let lhs = displaced_overlap(n, k, a);
                let rhs = displaced_overlap(k, n, neg).conj();
                assert!((lhs - rhs).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn fock_series_at_origin() {
        for n in 0..=5 {
            let s = make_fock(n).unwrap();
            let est = wigner_series(&s, PhasePoint::ORIGIN, SeriesTruncation::new(n + 1).unwrap());
            let want = if n % 2 == 0 { FRAC_2_PI } else { -FRAC_2_PI };
            assert!((est.value - want).abs() < 1e-14);
        }
        let vac = make_fock(0).unwrap();
        let est = wigner_series(&vac, PhasePoint::ORIGIN, SeriesTruncation::new(1).unwrap());
        assert_eq!(est.value, FRAC_2_PI);
    }

    #[test]
    fn truncation_flags_non_convergence() {
        let s = make_gbs(GbsParams::new(5, 0.9, -0.9)).unwrap();
        let a = PhasePoint::new(1.0, 1.0);
        let short = wigner_series(&s, a, SeriesTruncation::new(3).unwrap());
        assert!(!short.converged());
        let long = wigner_series(&s, a, SeriesTruncation::default_for(&s));
        assert!(long.converged());
        assert!(SeriesTruncation::new(0).is_none());
    }

    #[test]
    fn superposition_sign_convention() {
        // (|0> + |1>)/sqrt 2 has <a> = 1/2, so W is larger at +x than at -x
        let s = make_custom(&[Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)]).unwrap();
        let t = SeriesTruncation::default_for(&s);
        let right = wigner_series(&s, PhasePoint::new(0.5, 0.0), t).value;
        let left = wigner_series(&s, PhasePoint::new(-0.5, 0.0), t).value;
        assert!(right > left);
    }
}
