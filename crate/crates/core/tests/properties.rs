//! Randomized properties across modules.

mod common;

use gkdecomp::codec::{self, Corner};
use gkdecomp::examples;
use gkdecomp::network::{check_feasibility, check_feasibility_limited, star_network};
use gkdecomp::objectives::{cut_sets, disagreement_probability};
use gkdecomp::search::{brute_force, spectral_threshold_search, ObjectiveKind};
use gkdecomp::{connected_components, gk_common_information};
use proptest::prelude::*;
use rand::Rng;

fn joint_strategy(max_n: usize) -> impl Strategy<Value = (u64, usize, usize, f64)> {
    (any::<u64>(), 1..=max_n, 1..=max_n, 0.0..0.7f64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn every_scheme_is_zero_error((seed, n_x, n_y, sparsity) in joint_strategy(5), labels in 1usize..=3) {
        let mut rng = common::rng(seed);
        let j = common::random_joint(&mut rng, n_x, n_y, sparsity);
        let l = common::random_labeling(&mut rng, &j, labels);
        let block = codec::sample(&j, 500, seed);
        codec::run_gk_scheme(&j, &block).unwrap();
        codec::run_general_helper_scheme(&j, &l, &block).unwrap();
        codec::run_limited_helper_scheme(&j, &l, &block).unwrap();
        if l.is_binary() {
            for corner in [Corner::XSide, Corner::YSide] {
                codec::run_binary_helper_scheme(&j, &l, &block, corner).unwrap();
            }
        }
    }

    #[test]
    fn spectral_never_beats_brute_force((seed, n_x, n_y, sparsity) in joint_strategy(6), lambda in 0.0..8.0f64) {
        let mut rng = common::rng(seed);
        let j = common::random_joint(&mut rng, n_x, n_y, sparsity);
        for kind in [ObjectiveKind::Lagrangian(lambda), ObjectiveKind::Constrained(lambda / 16.0)] {
            let b = brute_force(&j, kind).unwrap();
            let s = spectral_threshold_search(&j, kind).unwrap();
            prop_assert!(s.objective_value <= b.objective_value + 1e-9);
        }
    }

    #[test]
    fn two_exact_components_are_recovered(seed in any::<u64>(), n_x in 2usize..=6, n_y in 2usize..=6) {
        let mut rng = common::rng(seed);
        let j = common::planted_joint(&mut rng, n_x, n_y, 2);
        prop_assert_eq!(connected_components(&j).count(), 2);
        let s = spectral_threshold_search(&j, ObjectiveKind::Constrained(0.0)).unwrap();
        prop_assert!((s.objective_value - gk_common_information(&j).0).abs() < 1e-9);
        prop_assert_eq!(disagreement_probability(&j, &s.labeling), 0.0);
    }

    #[test]
    fn limited_requirements_never_exceed_omniscient((seed, n_x, n_y, sparsity) in joint_strategy(5), cap in 0.0..6.0f64) {
        let mut rng = common::rng(seed);
        let j = common::random_joint(&mut rng, n_x, n_y, sparsity);
        let l = common::random_labeling(&mut rng, &j, 2);
        let net = star_network(cap);
        let full = check_feasibility(&net, &j, &l).unwrap();
        let lim = check_feasibility_limited(&net, &j, &l).unwrap();
        for (a, b) in full.rows.iter().zip(&lim.rows) {
            prop_assert!(b.required <= a.required + 1e-12, "{} {} {}", a.name, a.required, b.required);
        }
        if full.pass {
            prop_assert!(lim.pass);
        }
        let cuts = cut_sets(&j, &l);
        prop_assert!(cuts.h_x_cut <= lim.rows[0].required + 1e-12);
    }

    #[test]
    fn raising_a_capacity_never_breaks_a_condition(seed in any::<u64>(), bump in 0.0..3.0f64) {
        let mut rng = common::rng(seed);
        let j = examples::delta(0.1);
        let l = examples::block_labeling();
        let mut net = star_network(1.0);
        let edges = [("x", "h"), ("y", "h"), ("x", "t"), ("y", "t"), ("h", "t")];
        for (a, b) in edges {
            net.set_capacity(a, b, rng.random::<f64>() * 3.0).unwrap();
        }
        let before = check_feasibility(&net, &j, &l).unwrap();
        let (a, b) = edges[rng.random_range(0..edges.len())];
        let old = net.edges()[net.edges().iter().position(|e| e.0 == net.node_index(a).unwrap() && e.1 == net.node_index(b).unwrap()).unwrap()].2;
        net.set_capacity(a, b, old + bump).unwrap();
        let after = check_feasibility(&net, &j, &l).unwrap();
        for (x, y) in before.rows.iter().zip(&after.rows) {
            prop_assert!(!x.pass || y.pass, "{} turned from pass to fail", x.name);
        }
    }
}
