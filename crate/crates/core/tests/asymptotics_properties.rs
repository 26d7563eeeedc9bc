//! Asymptotic approximations against full solutions.

use nematic_core::analytic::{equilibrium, Family};
use nematic_core::asymptotics::{
    composite_large_g, extract_outer_states, large_g::DEFAULT_LAYER_NODES, small_g_correction,
};
use nematic_core::statics::{continue_seed_in_g, ContinuationOptions};
use nematic_core::LeslieCoefficients;

const C: LeslieCoefficients = LeslieCoefficients::FIVE_CB;
const B: f64 = 1.0 / 3.0;

fn small_g_errors(family: Family, index: i32, gs: &[f64]) -> Vec<f64> {
    let n = 801;
    let base = equilibrium(family, index, B).unwrap();
    let corr = small_g_correction(&C, &base, B, n).unwrap();
    let branch = continue_seed_in_g(&C, &base, B, gs, n, &ContinuationOptions::default()).unwrap();
    gs.iter()
        .map(|&g| {
            branch
                .at(g)
                .unwrap()
                .profile
                .sup_distance(&corr.composite(g))
        })
        .collect()
}

#[test]
fn small_g_remainder_is_second_order() {
    let e = small_g_errors(Family::TypeII, 1, &[0.05, 0.1, 0.2]);
    for r in [e[1] / e[0], e[2] / e[1]] {
        assert!((3.2..=4.8).contains(&r), "{e:?}");
    }
}

#[test]
fn constant_base_remainder_is_third_order() {
    // Q is even, so the a₀ branch is odd in 𝒢 and has no second-order term
    // errors near 1e-8 reach the discretization floor, so start at 0.1
    let e = small_g_errors(Family::TypeI, 0, &[0.1, 0.2, 0.4]);
    for r in [e[1] / e[0], e[2] / e[1]] {
        assert!((6.4..=9.6).contains(&r), "{e:?}");
    }
}

#[test]
fn large_g_layers_and_composite() {
    let gs = [100.0, 1000.0];
    let n = 4001;
    let opts = ContinuationOptions {
        max_step: 50.0,
        ..Default::default()
    };
    let seed = equilibrium(Family::TypeI, 0, B).unwrap();
    let branch = continue_seed_in_g(&C, &seed, B, &gs, n, &opts).unwrap();
    let mut errors = Vec::new();
    for &g in &gs {
        let full = &branch.at(g).unwrap().profile;
        let (ls, rs) = extract_outer_states(&C, full).unwrap();
        let comp = composite_large_g(&C, ls, rs, g, B, DEFAULT_LAYER_NODES).unwrap();
        for layer in [&comp.left, &comp.right, &comp.center] {
            let d: Vec<f64> = layer.theta.windows(2).map(|w| w[1] - w[0]).collect();
            assert!(
                d.iter().all(|v| *v >= -1e-12) || d.iter().all(|v| *v <= 1e-12),
                "G = {g}"
            );
        }
        errors.push(full.sup_distance(&comp.profile(n)));
    }
    assert!(errors[1] < errors[0], "{errors:?}");
}
