//! Properties of the zero-gradient equilibria.

use nematic_core::analytic::{
    critical_inverse_anchoring, enumerate_equilibria, equilibrium, solve_type1_slopes,
    solve_type2_slopes, Family, DEFAULT_A_MAX,
};
use nematic_core::statics::solve_equilibrium;
use nematic_core::LeslieCoefficients;
use proptest::prelude::*;
use std::f64::consts::PI;

proptest! {
    #[test]
    fn slopes_solve_their_equations(b in 0.01f64..3.0) {
        for r in solve_type1_slopes(b, DEFAULT_A_MAX).unwrap() {
            prop_assert!((b * r.a + (2.0 * r.a).sin()).abs() < 1e-12);
        }
        for r in solve_type2_slopes(b, DEFAULT_A_MAX).unwrap() {
            prop_assert!((b * r.a - (2.0 * r.a).sin()).abs() < 1e-12);
        }
    }

    #[test]
    fn root_sets_are_symmetric(b in 0.01f64..3.0) {
        let eqs = enumerate_equilibria(b, DEFAULT_A_MAX, &[Family::TypeI, Family::TypeII]).unwrap();
        for e in &eqs {
            let mirrored = eqs.iter().any(|f| f.family == e.family && f.index == -e.index && f.slope == -e.slope);
            prop_assert!(mirrored, "{:?}", e);
        }
    }

    #[test]
    fn constant_states_always_exist(b in 1e-4f64..50.0) {
        prop_assert_eq!(equilibrium(Family::TypeI, 0, b).unwrap().slope, 0.0);
        prop_assert_eq!(equilibrium(Family::TypeII, 0, b).unwrap().slope, 0.0);
    }
}

#[test]
fn pairs_vanish_past_their_thresholds() {
    for i in 1..=6 {
        let family = if i % 2 == 0 {
            Family::TypeI
        } else {
            Family::TypeII
        };
        let star = critical_inverse_anchoring(family, i).unwrap();
        for idx in [i, -i, i - 1] {
            if idx == 0 {
                continue;
            }
            assert!(
                equilibrium(family, idx, star * (1.0 - 1e-6)).is_ok(),
                "{family}:{idx} below {star}"
            );
            assert!(
                equilibrium(family, idx, star * (1.0 + 1e-6)).is_err(),
                "{family}:{idx} above {star}"
            );
        }
    }
}

#[test]
fn strong_anchoring_boundary_angles() {
    let b = 1e-4;
    for (family, indices) in [
        (Family::TypeI, [0, 2, -2, 4]),
        (Family::TypeII, [1, -1, 3, -3]),
    ] {
        for i in indices {
            let eq = equilibrium(family, i, b).unwrap();
            let r = eq.theta(1.0).rem_euclid(PI);
            assert!(
                r.min(PI - r) < 0.01,
                "{family}:{i} ends at {}",
                eq.theta(1.0)
            );
        }
    }
}

#[test]
fn linear_profiles_solve_the_static_problem() {
    let c = LeslieCoefficients::FIVE_CB;
    let b = 0.3;
    let all = enumerate_equilibria(
        b,
        2.0 * PI,
        &[
            Family::TypeI,
            Family::TypeII,
            Family::TypeIII,
            Family::TypeIV,
        ],
    )
    .unwrap();
    for fam in [
        Family::TypeI,
        Family::TypeII,
        Family::TypeIII,
        Family::TypeIV,
    ] {
        assert!(all.iter().any(|e| e.family == fam), "{fam} missing");
    }
    for e in &all {
        let exact = e.profile(161);
        let guess = exact.shifted(0);
        let solved = solve_equilibrium(&c, 0.0, b, &guess).unwrap();
        assert!(solved.sup_distance(&exact) < 1e-8, "{e:?}");
    }
}
