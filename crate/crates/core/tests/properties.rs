use cstat_sampsize::solvers::{mathgpt_terms, n_raw};
use cstat_sampsize::{
    n_iterative, round_up, se_c, se_c_squared_expanded, se_c_squared_simplified,
    DiscriminationInputs, IterativeConfig, SearchStrategy, SolverMethod,
};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn inputs(c: f64, phi: f64, se: f64) -> DiscriminationInputs {
    DiscriminationInputs::new(c, phi, se).unwrap()
}

#[test]
fn squared_forms_agree_with_forward_formula() {
    let mut rng = StdRng::seed_from_u64(0x5eed_0001);
    for _ in 0..20_000 {
        let c = rng.random_range(0.001..0.999);
        let phi = rng.random_range(0.001..0.999);
        let n = 10f64.powf(rng.random_range(0.3..7.0));
        let se = se_c(c, phi, n).unwrap();
        assert!(se > 0.0 && se.is_finite());
        let simplified = se_c_squared_simplified(c, phi, n).unwrap();
        let expanded = se_c_squared_expanded(c, phi, n).unwrap();
        assert!(rel(simplified, se * se) <= 1e-12, "{c} {phi} {n}");
        assert!(rel(expanded, se * se) <= 1e-12, "{c} {phi} {n}");
    }
}

#[test]
fn se_decreasing_on_geometric_grid() {
    let mut rng = StdRng::seed_from_u64(0x5eed_0002);
    for _ in 0..200 {
        let c = rng.random_range(0.01..0.99);
        let phi = rng.random_range(0.01..0.99);
        let mut previous = f64::INFINITY;
        let mut n = 2.0f64;
        while n <= 1.0e7 {
            let se = se_c(c, phi, n).unwrap();
            assert!(se < previous, "not decreasing at c={c} phi={phi} n={n}");
            previous = se;
            n *= 1.05;
        }
    }
}

#[test]
fn root_decreasing_in_se() {
    let mut rng = StdRng::seed_from_u64(0x5eed_0003);
    for _ in 0..500 {
        let c = rng.random_range(0.51..0.99);
        let phi = rng.random_range(0.005..0.5);
        for method in SolverMethod::CLOSED {
            let mut previous = f64::INFINITY;
            for k in 0..50 {
                let se = 0.005 * 1.05f64.powi(k);
                let n = n_raw(&inputs(c, phi, se), method).unwrap();
                assert!(n < previous, "{method} at c={c} phi={phi} se={se}");
                previous = n;
            }
        }
    }
}

#[test]
fn delta_bound_over_unit_interval() {
    for i in 1..100_000 {
        let c = i as f64 / 100_000.0;
        let t = mathgpt_terms(&inputs(c, 0.3, 0.02));
        assert!(
            t.delta > 0.5 && t.delta <= 2.0 / 3.0,
            "c={c} delta={}",
            t.delta
        );
        assert!(t.radicand > 0.0);
        assert!(t.numerator >= t.a * t.delta);
    }
    assert_eq!(mathgpt_terms(&inputs(0.5, 0.3, 0.02)).delta, 2.0 / 3.0);
}

#[test]
fn mathematica_and_maxima_denominators_match() {
    // 4 SE^2 (alpha - 1)(alpha + 2)(phi - 1) phi with alpha = C - 1 against
    // 4 (C - 2)(C + 1) x (phi - 1) with x = phi SE^2.
    let mut rng = StdRng::seed_from_u64(0x5eed_0004);
    for _ in 0..10_000 {
        let c: f64 = rng.random_range(0.01..0.99);
        let phi: f64 = rng.random_range(0.01..0.99);
        let se: f64 = rng.random_range(0.005..0.1);
        let alpha = c - 1.0;
        let first = 4.0 * se * se * (alpha - 1.0) * (alpha + 2.0) * (phi - 1.0) * phi;
        let second = 4.0 * (c - 2.0) * (c + 1.0) * (phi * se * se) * (phi - 1.0);
        assert!(rel(first, second) < 1e-14);
    }
}

#[test]
fn scan_and_bracketed_agree_on_random_inputs() {
    let mut rng = StdRng::seed_from_u64(0x5eed_0005);
    let scan = IterativeConfig::default();
    let fast = IterativeConfig::bracketed();
    for _ in 0..150 {
        let i = inputs(
            rng.random_range(0.51..0.99),
            rng.random_range(0.005..0.5),
            rng.random_range(0.01..0.1),
        );
        let a = n_iterative(&i, &scan).unwrap();
        let b = n_iterative(&i, &fast).unwrap();
        assert_eq!(a, b);
        // first qualifying integer
        let n = a.n;
        assert!(se_c(i.c(), i.phi(), n as f64).unwrap() <= i.se_target());
        if n > scan.start_n {
            assert!(se_c(i.c(), i.phi(), (n - 1) as f64).unwrap() > i.se_target());
        }
        let closed = round_up(n_raw(&i, SolverMethod::MathGpt).unwrap());
        assert!(closed.abs_diff(n) <= 1);
    }
}

#[test]
fn custom_start_point_is_honored() {
    let i = inputs(0.8, 0.5, 0.02551);
    for strategy in [SearchStrategy::Scan, SearchStrategy::Bracketed] {
        let config = IterativeConfig::new(400, 10_000, strategy).unwrap();
        assert_eq!(n_iterative(&i, &config).unwrap().n, 400);
    }
}

// phi = k / 2^20 so that 1 - phi is exact and (phi, 1 - phi) is a true
// mirror pair in floating point.
fn dyadic_phi(k: u32) -> f64 {
    f64::from(k) / f64::from(1u32 << 20)
}

proptest! {
    #[test]
    fn se_symmetries(c in 0.001f64..0.999, k in 1u32..(1 << 20), n in 2.0f64..1.0e7) {
        let phi = dyadic_phi(k);
        let base = se_c(c, phi, n).unwrap();
        prop_assert!(base > 0.0);
        prop_assert_eq!(base, se_c(c, 1.0 - phi, n).unwrap());
        prop_assert!(rel(se_c(1.0 - c, phi, n).unwrap(), base) <= 1e-12);
    }

    #[test]
    fn every_closed_form_round_trips(
        c in 0.51f64..0.99,
        phi in 0.005f64..0.5,
        se in 0.005f64..0.1,
    ) {
        let i = inputs(c, phi, se);
        for method in SolverMethod::CLOSED {
            let n = n_raw(&i, method).unwrap();
            prop_assert!(n > 0.0 && n.is_finite());
            prop_assert!(rel(se_c(c, phi, n).unwrap(), se) <= 1e-10, "{}", method);
        }
    }

    #[test]
    fn phi_symmetry_of_root(c in 0.01f64..0.99, k in 5_000u32..1_043_000, se in 0.005f64..0.1) {
        let phi = dyadic_phi(k);
        for method in SolverMethod::CLOSED {
            let a = n_raw(&inputs(c, phi, se), method).unwrap();
            let b = n_raw(&inputs(c, 1.0 - phi, se), method).unwrap();
            prop_assert!(rel(a, b) <= 4.0 * f64::EPSILON, "{}: {} vs {}", method, a, b);
        }
    }

    #[test]
    fn inputs_deserialize_only_when_valid(c in -1.0f64..2.0, phi in -1.0f64..2.0, se in -0.1f64..0.2) {
        let json = format!(r#"{{"c":{c},"phi":{phi},"se_target":{se}}}"#);
        let parsed = serde_json::from_str::<DiscriminationInputs>(&json);
        let valid = c > 0.0 && c < 1.0 && phi > 0.0 && phi < 1.0 && se > 0.0;
        prop_assert_eq!(parsed.is_ok(), valid);
    }
}
