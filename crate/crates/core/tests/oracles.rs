//! Independent oracles for the common-information computation and the
//! max-flow solver.

mod common;

use gkdecomp::dist::entropy_of;
use gkdecomp::examples;
use gkdecomp::network::min_cut;
use gkdecomp::{gk_common_information, JointDistribution};
use rand::Rng;

/// Largest H(phi_X) over all zero-error labelings with any number of labels.
/// Enumerates every set partition of the x alphabet (restricted growth
/// strings) and keeps those for which each y-symbol only meets one block.
fn zero_error_oracle(joint: &JointDistribution) -> f64 {
    let n = joint.n_x();
    let masses = joint.row_sums();
    let mut best = 0.0f64;
    let mut rgs = vec![0usize; n];
    loop {
        let consistent = (0..joint.n_y()).all(|j| {
            let mut block = None;
            (0..n).filter(|&i| joint.get(i, j) > 0.0).all(|i| *block.get_or_insert(rgs[i]) == rgs[i])
        });
        if consistent {
            let blocks = rgs.iter().max().unwrap() + 1;
            let mut w = vec![0.0; blocks];
            for (i, &b) in rgs.iter().enumerate() {
                w[b] += masses[i];
            }
            best = best.max(entropy_of(&w));
        }
        // Next restricted growth string.
        let mut k = n;
        loop {
            if k == 1 {
                return best;
            }
            k -= 1;
            let prefix_max = rgs[..k].iter().copied().max().unwrap();
            if rgs[k] <= prefix_max {
                rgs[k] += 1;
                for r in rgs.iter_mut().skip(k + 1) {
                    *r = 0;
                }
                break;
            }
        }
    }
}

#[test]
fn common_information_matches_partition_oracle() {
    let mut cases = vec![
        examples::block(),
        examples::delta(0.1),
        examples::epsilon(0.2),
        examples::point_mass(),
        examples::identity_coupling(),
        examples::independent_uniform(),
    ];
    let mut rng = common::rng(17);
    for _ in 0..300 {
        let n_x = rng.random_range(1..=6);
        let n_y = rng.random_range(1..=(10 - n_x).min(6));
        let sparsity = rng.random_range(0.3..0.8);
        cases.push(common::random_joint(&mut rng, n_x, n_y, sparsity));
    }
    for j in &cases {
        assert!(j.n_x() + j.n_y() <= 10);
        let (h_k, _) = gk_common_information(j);
        let oracle = zero_error_oracle(j);
        assert!((h_k - oracle).abs() < 1e-12, "{j}: {h_k} vs {oracle}");
    }
}

#[test]
fn partition_oracle_on_diagonal_support() {
    // On a diagonal support every partition is consistent and the finest
    // one wins.
    let j = JointDistribution::from_rows(vec![
        vec![0.25, 0.0, 0.0, 0.0],
        vec![0.0, 0.25, 0.0, 0.0],
        vec![0.0, 0.0, 0.25, 0.0],
        vec![0.0, 0.0, 0.0, 0.25],
    ])
    .unwrap();
    assert!((zero_error_oracle(&j) - 2.0).abs() < 1e-12);
}

#[test]
fn max_flow_matches_cut_enumeration() {
    let mut rng = common::rng(5);
    for _ in 0..300 {
        let n = rng.random_range(2..=6);
        let net = common::random_dag(&mut rng, n, 10);
        let sink = rng.random_range(1..n);
        let count = rng.random_range(1..=sink);
        let mut sources: Vec<usize> = (0..sink).collect();
        while sources.len() > count {
            sources.remove(rng.random_range(0..sources.len()));
        }
        let cut = min_cut(&net, &sources, sink).unwrap();
        let oracle = common::brute_force_min_cut(&net, &sources, sink);
        assert!((cut.value - oracle).abs() <= 1e-9, "{} vs {oracle}", cut.value);
        assert!((cut.value - cut.cut_capacity).abs() <= 1e-9);
    }
}
