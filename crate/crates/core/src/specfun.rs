//! Special functions: log-factorials, Pochhammer symbols, binomial
//! coefficients, associated Laguerre and Hermite polynomials.
//!
//! Factorial ratios are handled in log space throughout so that truncations
//! well beyond `170!` stay finite.

use std::sync::LazyLock;

use crate::error::{Error, Result};

/// Largest argument held in the shared log-factorial table. Larger arguments
/// are accumulated on demand.
pub const LOG_FACTORIAL_TABLE_LEN: usize = 2048;

/// Table of `ln(k!)` for `k < len`.
#[derive(Debug, Clone)]
pub struct LogFactorialCache {
    table: Vec<f64>,
}

impl LogFactorialCache {
    pub fn new(len: usize) -> Self {
        let mut table = Vec::with_capacity(len.max(1));
        let mut acc = 0.0_f64;
        table.push(0.0);
        for k in 1..len.max(1) {
            acc += (k as f64).ln();
            table.push(acc);
        }
        Self { table }
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn get(&self, n: usize) -> f64 {
        match self.table.get(n) {
            Some(v) => *v,
            None => {
                let last = self.table.len() - 1;
                let mut acc = self.table[last];
                for k in (last + 1)..=n {
                    acc += (k as f64).ln();
                }
                acc
            }
        }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.table
    }
}

static LOG_FACTORIALS: LazyLock<LogFactorialCache> =
    LazyLock::new(|| LogFactorialCache::new(LOG_FACTORIAL_TABLE_LEN));

/// `ln(n!)`.
pub fn log_factorial(n: usize) -> f64 {
    LOG_FACTORIALS.get(n)
}

/// Rising factorial `(x)_n = x (x+1) ... (x+n-1)`, with `(x)_0 = 1`.
pub fn pochhammer(x: f64, n: usize) -> f64 {
    (0..n).fold(1.0, |acc, i| acc * (x + i as f64))
}

/// `ln (x)_n` for `x > 0`.
pub fn log_pochhammer(x: f64, n: usize) -> f64 {
    debug_assert!(x > 0.0);
    (0..n).map(|i| (x + i as f64).ln()).sum()
}

/// Binomial coefficient `C(n, k)`.
///
/// Exact integer arithmetic for `n <= 20`; exponentiated log-factorials above.
pub fn binomial_coefficient(n: usize, k: usize) -> Result<f64> {
    if k > n {
        return Err(Error::Domain(format!(
            "binomial coefficient C({n}, {k}) requires k <= N"
        )));
    }
    Ok(binomial_unchecked(n, k))
}

pub(crate) fn binomial_unchecked(n: usize, k: usize) -> f64 {
    debug_assert!(k <= n);
    if n <= 20 {
        let k = k.min(n - k) as u64;
        let n = n as u64;
        // C(n, i+1) = C(n, i) (n - i) / (i + 1) stays integral at every step
        let mut c: u64 = 1;
        for i in 0..k {
            c = c * (n - i) / (i + 1);
        }
        c as f64
    } else {
        // canonical order so that C(n, k) and C(n, n - k) round identically
        let k = k.min(n - k);
        (log_factorial(n) - log_factorial(k) - log_factorial(n - k)).exp()
    }
}

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi) / 2`.
#[derive(Debug, Clone, Copy)]
struct DoubleDouble {
    hi: f64,
    lo: f64,
}

impl DoubleDouble {
    fn new(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    fn renorm(hi: f64, lo: f64) -> Self {
        let s = hi + lo;
        Self { hi: s, lo: lo - (s - hi) }
    }

    fn add(self, o: Self) -> Self {
        let s = self.hi + o.hi;
        let bb = s - self.hi;
        let err = (self.hi - (s - bb)) + (o.hi - bb);
        Self::renorm(s, err + self.lo + o.lo)
    }

    fn mul_f64(self, b: f64) -> Self {
        let p = self.hi * b;
        let e = self.hi.mul_add(b, -p);
        Self::renorm(p, e + self.lo * b)
    }

    fn div_f64(self, b: f64) -> Self {
        let q1 = self.hi / b;
        let p = q1 * b;
        let e = q1.mul_add(b, -p);
        let r = (self.hi - p - e + self.lo) / b;
        Self::renorm(q1, r)
    }
}

/// Associated Laguerre polynomial `L_n^alpha(x)` for integer `alpha >= 0`.
///
/// Evaluated by the explicit finite sum
/// `sum_{i=0}^{n} (-1)^i C(n+alpha, n-i) x^i / i!`. For `x > 0` the terms
/// alternate and cancel heavily, so the terms and the sum are carried in
/// double-double arithmetic.
pub fn laguerre_assoc(n: usize, alpha: usize, x: f64) -> f64 {
    // C(n + alpha, n) = prod_{i=1}^{n} (alpha + i) / i
    let mut term = DoubleDouble::new(1.0);
    for i in 1..=n {
        term = term.mul_f64((alpha + i) as f64).div_f64(i as f64);
    }
    let mut sum = term;
    for i in 0..n {
        // t_{i+1} / t_i = -x (n - i) / ((alpha + i + 1)(i + 1))
        term = term
            .mul_f64(-x)
            .mul_f64((n - i) as f64)
            .div_f64((alpha + i + 1) as f64)
            .div_f64((i + 1) as f64);
        sum = sum.add(term);
    }
    sum.hi + sum.lo
}

/// Physicists' Hermite polynomial `H_n(x)` by three-term recurrence.
pub fn hermite(n: usize, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let (mut prev, mut cur) = (1.0, 2.0 * x);
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `H_0(x) ..= H_n(x)` in one recurrence pass.
pub fn hermite_all(n: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(1.0);
    if n >= 1 {
        out.push(2.0 * x);
    }
    for k in 1..n {
        out.push(2.0 * x * out[k] - 2.0 * k as f64 * out[k - 1]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn log_factorial_examples() {
        assert_eq!(log_factorial(0), 0.0);
        assert_eq!(log_factorial(1), 0.0);
        let direct: f64 = (1..=10).map(|k| k as f64).product::<f64>().ln();
        assert!((log_factorial(10) - direct).abs() < 1e-13);
        assert!((log_factorial(10) - 15.104413).abs() < 1e-6);
    }

    #[test]
    fn log_factorial_table_increments() {
        let cache = LogFactorialCache::new(300);
        assert_eq!(cache.as_slice()[0], 0.0);
        for k in 1..cache.len() {
            let inc = cache.get(k) - cache.get(k - 1);
            assert!(rel(inc, (k as f64).ln()) < 1e-12 || k == 1, "k = {k}");
        }
        // past the table end
        let beyond = cache.get(305);
        let expect = cache.get(299) + (300..=305).map(|k| (k as f64).ln()).sum::<f64>();
        assert!(rel(beyond, expect) < 1e-14);
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(123.4, 0), 1.0);
        assert_eq!(pochhammer(2.0, 3), 24.0);
        assert!((pochhammer(-0.9, 2) + 0.09).abs() < 1e-15);
        assert!((log_pochhammer(1.9, 5) - pochhammer(1.9, 5).ln()).abs() < 1e-13);
    }

    #[test]
    fn pochhammer_of_one_is_factorial() {
        let mut fact = 1.0;
        for n in 0..=15 {
            if n > 0 {
                fact *= n as f64;
            }
            assert!(rel(pochhammer(1.0, n), fact) < 1e-12);
        }
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial_coefficient(5, 0).unwrap(), 1.0);
        assert_eq!(binomial_coefficient(5, 2).unwrap(), 10.0);
        assert_eq!(binomial_coefficient(10, 5).unwrap(), 252.0);
        assert_eq!(binomial_coefficient(20, 10).unwrap(), 184756.0);
        assert!(matches!(binomial_coefficient(3, 4), Err(Error::Domain(_))));
    }

    #[test]
    fn binomial_log_path_matches_pascal() {
        // Pascal's triangle in f64 is exact up to n = 50 or so
        let mut row = vec![1.0_f64];
        for n in 1..=60 {
            let mut next = vec![1.0; n + 1];
            for k in 1..n {
                next[k] = row[k - 1] + row[k];
            }
            row = next;
            for (k, &v) in row.iter().enumerate() {
                assert!(rel(binomial_coefficient(n, k).unwrap(), v) < 1e-12, "C({n},{k})");
            }
        }
    }

    #[test]
    fn laguerre_examples() {
        assert_eq!(laguerre_assoc(0, 3, 7.2), 1.0);
        assert_eq!(laguerre_assoc(1, 0, 2.0), -1.0);
        assert!((laguerre_assoc(2, 1, 1.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn laguerre_recurrence_consistency() {
        for alpha in 0..=12 {
            for &x in &[-5.0, -1.0, 0.0, 0.5, 3.0, 10.0] {
                for n in 1..=12 {
                    let lhs = (n + 1) as f64 * laguerre_assoc(n + 1, alpha, x);
                    let rhs = (2.0 * n as f64 + alpha as f64 + 1.0 - x) * laguerre_assoc(n, alpha, x)
                        - (n + alpha) as f64 * laguerre_assoc(n - 1, alpha, x);
                    let scale = lhs.abs().max(rhs.abs()).max(1.0);
                    assert!(
                        (lhs - rhs).abs() / scale < 1e-9,
                        "n={n} alpha={alpha} x={x}: {lhs} vs {rhs}"
                    );
                }
            }
        }
    }

    #[test]
    fn hermite_examples() {
        assert_eq!(hermite(0, 3.1), 1.0);
        assert_eq!(hermite(1, 0.5), 1.0);
        assert_eq!(hermite(3, 2.0), 40.0);
        let all = hermite_all(7, 0.37);
        for (n, &h) in all.iter().enumerate() {
            assert_eq!(h, hermite(n, 0.37));
        }
    }

    #[test]
    fn hermite_orthogonality() {
        use crate::quadrature::gauss_legendre;
        let rule = gauss_legendre(24);
        let panels = 64;
        let (lo, hi) = (-8.0, 8.0);
        let h = (hi - lo) / panels as f64;
        let integrate = |m: usize, n: usize| {
            let mut acc = 0.0;
            for p in 0..panels {
                let a = lo + p as f64 * h;
                for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
                    let x = a + 0.5 * h * (t + 1.0);
                    acc += 0.5 * h * w * (-x * x).exp() * hermite(m, x) * hermite(n, x);
                }
            }
            acc
        };
        for m in 0..=6 {
            for n in 0..=6 {
                let norm = (2f64.powi(n as i32) * (1..=n).product::<usize>() as f64)
                    * std::f64::consts::PI.sqrt();
                let v = integrate(m, n);
                if m == n {
                    assert!(rel(v, norm) < 1e-6);
                } else {
                    assert!((v / norm).abs() < 1e-6);
                }
            }
        }
    }
}
