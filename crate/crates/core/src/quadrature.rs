//! Gauss–Legendre rules and adaptive tensor-product cubature on rectangles.
//!
//! The 2D integrator refines panels dyadically (each split into four) where
//! the panel's own rule and the rule applied to its four children disagree.
//! It integrates `f`, `|f|` and `max(-f, 0)` from the same samples, since the
//! negative part is what the nonclassicality measures need and it has kinks
//! along the nodal lines of `f`.

use rayon::prelude::*;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct GaussLegendre {
    /// Nodes on `[-1, 1]`, ascending.
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Integrate `f` over `[a, b]` split into `panels` equal pieces.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64, panels: usize) -> f64 {
        let h = (b - a) / panels as f64;
        let mut acc = 0.0;
        for p in 0..panels {
            let lo = a + p as f64 * h;
            for (&t, &w) in self.nodes.iter().zip(&self.weights) {
                acc += w * f(lo + 0.5 * h * (t + 1.0));
            }
        }
        0.5 * h * acc
    }
}

/// `n`-point Gauss–Legendre rule by Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> GaussLegendre {
    assert!(n >= 1, "Gauss-Legendre order must be positive");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..(n + 1) / 2 {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pnm1 = if n == 1 { 1.0 } else { p0 };
            dp = nf * (x * pn - pnm1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        if n == 1 {
            dp = 1.0;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    GaussLegendre { nodes, weights }
}

/// Axis-aligned rectangle `[x0, x1] x [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub fn square(half_width: f64) -> Self {
        Self { x0: -half_width, x1: half_width, y0: -half_width, y1: half_width }
    }

    fn quarters(&self) -> [Rect; 4] {
        let xm = 0.5 * (self.x0 + self.x1);
        let ym = 0.5 * (self.y0 + self.y1);
        [
            Rect { x0: self.x0, x1: xm, y0: self.y0, y1: ym },
            Rect { x0: xm, x1: self.x1, y0: self.y0, y1: ym },
            Rect { x0: self.x0, x1: xm, y0: ym, y1: self.y1 },
            Rect { x0: xm, x1: self.x1, y0: ym, y1: self.y1 },
        ]
    }
}

/// Integrals of `f`, `|f|` and `max(-f, 0)`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    pub signed: f64,
    pub absolute: f64,
    pub negative: f64,
}

impl Moments {
    fn add(self, o: Moments) -> Moments {
        Moments {
            signed: self.signed + o.signed,
            absolute: self.absolute + o.absolute,
            negative: self.negative + o.negative,
        }
    }

    fn max_abs_diff(&self, o: &Moments) -> f64 {
        (self.signed - o.signed)
            .abs()
            .max((self.absolute - o.absolute).abs())
            .max((self.negative - o.negative).abs())
    }
}

#[derive(Debug, Clone)]
pub struct CubatureOptions {
    /// Gauss–Legendre points per axis per panel.
    pub order: usize,
    /// Initial panels per axis.
    pub base_panels: usize,
    /// Maximum number of dyadic splits below a base panel.
    pub max_depth: usize,
    /// Target for the summed per-panel error estimate.
    pub abs_tol: f64,
}

impl Default for CubatureOptions {
    fn default() -> Self {
        Self { order: 8, base_panels: 16, max_depth: 12, abs_tol: 1e-6 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubatureResult {
    pub moments: Moments,
    /// Summed `|fine - coarse|` over the final leaves.
    pub error: f64,
    pub evaluations: usize,
    pub rounds: usize,
}

#[derive(Debug, Clone)]
struct Leaf {
    rect: Rect,
    depth: usize,
    /// The four children's single-panel estimates.
    children: [Moments; 4],
    fine: Moments,
    error: f64,
}

fn panel<F: Fn(f64, f64) -> f64>(f: &F, rule: &GaussLegendre, r: &Rect) -> Moments {
    let hx = 0.5 * (r.x1 - r.x0);
    let hy = 0.5 * (r.y1 - r.y0);
    let cx = 0.5 * (r.x1 + r.x0);
    let cy = 0.5 * (r.y1 + r.y0);
    let mut m = Moments::default();
    for (&tx, &wx) in rule.nodes.iter().zip(&rule.weights) {
        let x = cx + hx * tx;
        for (&ty, &wy) in rule.nodes.iter().zip(&rule.weights) {
            let v = f(x, cy + hy * ty);
            let w = wx * wy;
            m.signed += w * v;
            m.absolute += w * v.abs();
            if v < 0.0 {
                m.negative -= w * v;
            }
        }
    }
    let area = hx * hy;
    Moments { signed: m.signed * area, absolute: m.absolute * area, negative: m.negative * area }
}

fn make_leaf<F: Fn(f64, f64) -> f64>(
    f: &F,
    rule: &GaussLegendre,
    rect: Rect,
    depth: usize,
    coarse: Moments,
) -> Leaf {
    let q = rect.quarters();
    let children = [panel(f, rule, &q[0]), panel(f, rule, &q[1]), panel(f, rule, &q[2]), panel(f, rule, &q[3])];
    let fine = children.iter().fold(Moments::default(), |a, c| a.add(*c));
    let error = fine.max_abs_diff(&coarse);
    Leaf { rect, depth, children, fine, error }
}

fn total(leaves: &[Leaf]) -> (Moments, f64) {
    leaves.iter().fold((Moments::default(), 0.0), |(m, e), l| (m.add(l.fine), e + l.error))
}

/// Adaptive cubature of `f` over `domain`.
///
/// Each round refines every leaf whose error estimate exceeds
/// `abs_tol / n_leaves`. The loop stops when the summed estimate drops below
/// `abs_tol`. Panel evaluations run in parallel; all reductions are sequential
/// in a fixed order, so results do not depend on the thread count.
pub fn integrate_2d<F>(f: F, domain: Rect, opts: &CubatureOptions) -> Result<CubatureResult>
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    if !(opts.abs_tol > 0.0) || opts.order == 0 || opts.base_panels == 0 {
        return Err(Error::InvalidQuadrature(format!("{opts:?}")));
    }
    let rule = gauss_legendre(opts.order);
    let per_panel = opts.order * opts.order;
    let nb = opts.base_panels;
    let dx = (domain.x1 - domain.x0) / nb as f64;
    let dy = (domain.y1 - domain.y0) / nb as f64;
    let base: Vec<Rect> = (0..nb * nb)
        .map(|k| {
            let (i, j) = (k / nb, k % nb);
            Rect {
                x0: domain.x0 + i as f64 * dx,
                x1: if i + 1 == nb { domain.x1 } else { domain.x0 + (i + 1) as f64 * dx },
                y0: domain.y0 + j as f64 * dy,
                y1: if j + 1 == nb { domain.y1 } else { domain.y0 + (j + 1) as f64 * dy },
            }
        })
        .collect();

    let mut leaves: Vec<Leaf> = base
        .par_iter()
        .map(|r| {
            let coarse = panel(&f, &rule, r);
            make_leaf(&f, &rule, *r, 0, coarse)
        })
        .collect();
    let mut evaluations = leaves.len() * 5 * per_panel;
    let mut rounds = 0;
    let mut previous = f64::NAN;

    loop {
        let (moments, error) = total(&leaves);
        if error <= opts.abs_tol {
            return Ok(CubatureResult { moments, error, evaluations, rounds });
        }
        let threshold = opts.abs_tol / leaves.len() as f64;
        let (split, keep): (Vec<Leaf>, Vec<Leaf>) = leaves
            .into_iter()
            .partition(|l| l.error > threshold && l.depth < opts.max_depth);
        if split.is_empty() {
            return Err(Error::NotConverged { previous, last: moments.absolute, error });
        }
        previous = moments.absolute;
        let refined: Vec<Leaf> = split
            .par_iter()
            .flat_map_iter(|l| {
                let q = l.rect.quarters();
                (0..4).map(move |c| (q[c], l.depth + 1, l.children[c])).collect::<Vec<_>>()
            })
            .map(|(rect, depth, coarse)| make_leaf(&f, &rule, rect, depth, coarse))
            .collect();
        evaluations += refined.len() * 4 * per_panel;
        rounds += 1;
        leaves = keep;
        leaves.extend(refined);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_integrates_polynomials_exactly() {
        for n in 1..=20 {
            let rule = gauss_legendre(n);
            assert!((rule.weights.iter().sum::<f64>() - 2.0).abs() < 1e-14);
            for deg in 0..(2 * n) {
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                let got: f64 = rule
                    .nodes
                    .iter()
                    .zip(&rule.weights)
                    .map(|(x, w)| w * x.powi(deg as i32))
                    .sum();
                assert!((got - exact).abs() < 1e-13, "n={n} deg={deg}");
            }
            assert!(rule.nodes.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn gaussian_integral() {
        let opts = CubatureOptions { abs_tol: 1e-10, ..Default::default() };
        let r = integrate_2d(|x, y| (-(x * x + y * y)).exp(), Rect::square(7.0), &opts).unwrap();
        assert!((r.moments.signed - std::f64::consts::PI).abs() < 1e-10);
        assert_eq!(r.moments.negative, 0.0);
    }

    #[test]
    fn kinked_integrand_converges() {
        // int |x| over [-1, 1] x [-1, 1] with the kink off-grid
        let opts = CubatureOptions { base_panels: 3, ..Default::default() };
        let shift = 0.123;
        let r = integrate_2d(|x, _| x - shift, Rect::square(1.0), &opts).unwrap();
        let exact_abs = 2.0 * ((1.0 - shift).powi(2) / 2.0 + (1.0 + shift).powi(2) / 2.0);
        assert!((r.moments.absolute - exact_abs).abs() < 2e-6, "{r:?}");
        assert!((r.moments.negative - (1.0 + shift).powi(2)).abs() < 2e-6);
    }

    #[test]
    fn reports_non_convergence() {
        let opts = CubatureOptions { max_depth: 1, abs_tol: 1e-14, base_panels: 2, ..Default::default() };
        let err = integrate_2d(|x, y| (x * y - 0.1).signum(), Rect::square(1.0), &opts).unwrap_err();
        assert!(matches!(err, Error::NotConverged { .. }));
    }
}
