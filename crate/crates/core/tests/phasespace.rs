use std::f64::consts::{FRAC_1_PI, FRAC_2_PI, PI};

use fockphase::oracle::{series_terms, wigner_series, SeriesTruncation};
use fockphase::phasespace::wigner_full_sum;
use fockphase::quadrature::gauss_legendre;
use fockphase::{
    make_custom, make_gbs, make_rbs, optical_tomogram, q_function, wigner, FockSuperposition, GbsParams,
    PhasePoint, RbsParams, TomogramPoint,
};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn state_strategy(max_n: usize) -> impl Strategy<Value = FockSuperposition> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..=max_n + 1)
        .prop_filter("nonzero", |v| v.iter().any(|(a, b)| a.abs() + b.abs() > 1e-3))
        .prop_map(|v| make_custom(&v.iter().map(|&(a, b)| Complex64::new(a, b)).collect::<Vec<_>>()).unwrap())
}

fn point_strategy(r: f64) -> impl Strategy<Value = PhasePoint> {
    (0.0..r, 0.0..2.0 * PI).prop_map(|(r, t)| PhasePoint::from_polar(r, t))
}

proptest! {
    #[test]
    fn pairing_leaves_no_imaginary_residue(s in state_strategy(8), g in point_strategy(3.5)) {
        let full = wigner_full_sum(&s, g);
        prop_assert!(full.im.abs() < 1e-12);
        prop_assert!((full.re - wigner(&s, g)).abs() < 1e-12);
    }

    #[test]
    fn wigner_bounded(s in state_strategy(10), g in point_strategy(5.0)) {
        prop_assert!(wigner(&s, g).abs() <= FRAC_2_PI + 1e-12);
    }

    #[test]
    fn q_is_a_bounded_density(s in state_strategy(10), g in point_strategy(5.0)) {
        let q = q_function(&s, g);
        prop_assert!(q >= 0.0);
        prop_assert!(q <= FRAC_1_PI + 1e-12);
    }

    #[test]
    fn global_phase_is_invisible(s in state_strategy(8), g in point_strategy(3.0), theta in 0.0..2.0 * PI) {
        let t = s.with_global_phase(theta);
        prop_assert!((wigner(&s, g) - wigner(&t, g)).abs() < 1e-12);
        prop_assert!((q_function(&s, g) - q_function(&t, g)).abs() < 1e-12);
    }

    // c_n e^{i n d} is the state rotated by d in phase space
    #[test]
    fn fock_phase_rotates_phase_space(s in state_strategy(8), g in point_strategy(3.0), d in -PI..PI) {
        let back = PhasePoint::from(g.as_complex() * Complex64::from_polar(1.0, -d));
        prop_assert!((wigner(&s.rotated(d), g) - wigner(&s, back)).abs() < 1e-12);
        prop_assert!((q_function(&s.rotated(d), g) - q_function(&s, back)).abs() < 1e-12);
    }
}

fn random_state(rng: &mut ChaCha8Rng, max_n: usize) -> FockSuperposition {
    let n = rng.gen_range(0..=max_n);
    let raw: Vec<Complex64> =
        (0..=n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    make_custom(&raw).unwrap()
}

#[test]
fn series_agrees_with_closed_form_inside_radius_three() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..20 {
        let s = random_state(&mut rng, 8);
        let trunc = SeriesTruncation::default_for(&s);
        assert_eq!(trunc.terms(), s.n_max() + 40);
        for _ in 0..20 {
            let g = PhasePoint::from_polar(3.0 * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..2.0 * PI));
            let est = wigner_series(&s, g, trunc);
            assert!((est.value - wigner(&s, g)).abs() < 1e-8, "{g:?}: {} vs {}", est.value, wigner(&s, g));
        }
    }
}

#[test]
fn series_tail_is_negligible_past_default_truncation() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let mut states: Vec<FockSuperposition> = (0..10).map(|_| random_state(&mut rng, 8)).collect();
    states.push(make_gbs(GbsParams::new(5, 0.9, -0.9)).unwrap());
    states.push(make_rbs(RbsParams::new(8, PI / 2.0)).unwrap());
    for s in &states {
        let k0 = s.n_max() + 40;
        for i in 0..16 {
            let g = PhasePoint::from_polar(3.0, i as f64 * PI / 8.0);
            let terms = series_terms(s, g, k0 + 20);
            for (k, t) in terms.iter().enumerate().skip(k0 + 1) {
                assert!(*t < 1e-12, "N={} k={k} at {g:?}: {t:e}", s.n_max());
            }
        }
    }
}

// integrating W over the conjugate quadrature gives the homodyne density
#[test]
fn wigner_marginal_is_the_tomogram() {
    let rule = gauss_legendre(24);
    let states = [make_gbs(GbsParams::new(5, 0.9, -0.9)).unwrap(), make_rbs(RbsParams::new(5, 0.4)).unwrap()];
    for s in &states {
        for x in [-2.3, -0.4, 0.0, 0.9, 1.7] {
            // X = sqrt 2 Re gamma
            let marginal = rule.integrate(|y| wigner(s, PhasePoint::new(x / 2f64.sqrt(), y)), -7.0, 7.0, 28)
                / 2f64.sqrt();
            let w = optical_tomogram(s, TomogramPoint::new(x, 0.0));
            assert!((marginal - w).abs() < 1e-10, "X={x}: {marginal} vs {w}");
        }
    }
}
