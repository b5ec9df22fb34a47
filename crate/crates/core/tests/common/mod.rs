#![allow(dead_code)]

use gkdecomp::{JointDistribution, LabelingPair};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random n_x x n_y distribution; each cell is zero with probability
/// `sparsity`. At least one cell is positive.
pub fn random_joint(rng: &mut ChaCha8Rng, n_x: usize, n_y: usize, sparsity: f64) -> JointDistribution {
    let mut rows: Vec<Vec<f64>> = (0..n_x)
        .map(|_| {
            (0..n_y)
                .map(|_| if rng.random::<f64>() < sparsity { 0.0 } else { rng.random::<f64>() + 0.01 })
                .collect()
        })
        .collect();
    if rows.iter().flatten().all(|&v| v == 0.0) {
        rows[rng.random_range(0..n_x)][rng.random_range(0..n_y)] = 1.0;
    }
    normalize(rows)
}

/// Rows and columns are split into `groups` planted blocks; every cell
/// inside a block is positive and every cell across blocks is zero, so the
/// support graph has exactly one component per nonempty block.
pub fn planted_joint(rng: &mut ChaCha8Rng, n_x: usize, n_y: usize, groups: usize) -> JointDistribution {
    assert!(groups <= n_x.min(n_y));
    let assign = |rng: &mut ChaCha8Rng, n: usize| {
        let mut g: Vec<usize> = (0..n).map(|k| if k < groups { k } else { rng.random_range(0..groups) }).collect();
        for k in (1..n).rev() {
            g.swap(k, rng.random_range(0..=k));
        }
        g
    };
    let gx = assign(rng, n_x);
    let gy = assign(rng, n_y);
    let rows = (0..n_x)
        .map(|i| {
            (0..n_y)
                .map(|j| if gx[i] == gy[j] { rng.random::<f64>() + 0.05 } else { 0.0 })
                .collect()
        })
        .collect();
    normalize(rows)
}

fn normalize(mut rows: Vec<Vec<f64>>) -> JointDistribution {
    let total: f64 = rows.iter().flatten().sum();
    for v in rows.iter_mut().flatten() {
        *v /= total;
    }
    // Fold the rounding remainder into the largest cell.
    let sum: f64 = rows.iter().flatten().sum();
    let (bi, bj) = (0..rows.len())
        .flat_map(|i| (0..rows[0].len()).map(move |j| (i, j)))
        .max_by(|a, b| rows[a.0][a.1].total_cmp(&rows[b.0][b.1]))
        .unwrap();
    rows[bi][bj] += 1.0 - sum;
    JointDistribution::from_rows(rows).expect("random distribution is valid")
}

pub fn random_labeling(rng: &mut ChaCha8Rng, joint: &JointDistribution, num_labels: usize) -> LabelingPair {
    let phi_x = (0..joint.n_x()).map(|_| rng.random_range(0..num_labels)).collect();
    let phi_y = (0..joint.n_y()).map(|_| rng.random_range(0..num_labels)).collect();
    LabelingPair::new(phi_x, phi_y, num_labels).unwrap()
}

/// Random DAG on `n` nodes (edges only from lower to higher index) with at
/// most `max_edges` edges. Capacities are integers or reals.
pub fn random_dag(rng: &mut ChaCha8Rng, n: usize, max_edges: usize) -> gkdecomp::network::CapacitatedNetwork {
    use gkdecomp::network::{CapacitatedNetwork, Edge, Node};
    let nodes = (0..n).map(|k| Node { id: format!("v{k}"), role: None }).collect();
    let count = rng.random_range(1..=max_edges);
    let edges = (0..count)
        .map(|_| {
            let a = rng.random_range(0..n - 1);
            let b = rng.random_range(a + 1..n);
            let capacity = if rng.random::<bool>() {
                rng.random_range(0..5) as f64
            } else {
                rng.random::<f64>() * 3.0
            };
            Edge { from: format!("v{a}"), to: format!("v{b}"), capacity }
        })
        .collect();
    CapacitatedNetwork::new(nodes, edges).unwrap()
}

/// Minimum total capacity of an edge set whose removal leaves no directed
/// path from any source to the sink, by enumerating every edge subset.
pub fn brute_force_min_cut(net: &gkdecomp::network::CapacitatedNetwork, sources: &[usize], sink: usize) -> f64 {
    let edges = net.edges();
    assert!(edges.len() <= 16);
    let n = net.nodes().len();
    let mut best = f64::INFINITY;
    for mask in 0u32..(1 << edges.len()) {
        let removed = |k: usize| mask >> k & 1 == 1;
        let mut seen = vec![false; n];
        let mut stack: Vec<usize> = sources.to_vec();
        for &s in sources {
            seen[s] = true;
        }
        while let Some(v) = stack.pop() {
            for (k, &(a, b, _)) in edges.iter().enumerate() {
                if a == v && !removed(k) && !seen[b] {
                    seen[b] = true;
                    stack.push(b);
                }
            }
        }
        if !seen[sink] {
            let cost: f64 = (0..edges.len()).filter(|&k| removed(k)).map(|k| edges[k].2).sum();
            best = best.min(cost);
        }
    }
    best
}
