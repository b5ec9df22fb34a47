//! Reference distributions used throughout the tests, the acceptance suite
//! and the CLI's bundled data files.

use crate::dist::JointDistribution;
use crate::objectives::LabelingPair;

/// Two disjoint 2x2 uniform blocks, 1/8 per support cell.
pub fn block() -> JointDistribution {
    let e = 1.0 / 8.0;
    JointDistribution::from_rows(vec![
        vec![e, e, 0.0, 0.0],
        vec![e, e, 0.0, 0.0],
        vec![0.0, 0.0, e, e],
        vec![0.0, 0.0, e, e],
    ])
    .expect("block example is valid")
}

/// The block example with an edge of weight delta/8 joining x2 and y3.
pub fn delta(delta: f64) -> JointDistribution {
    let e = 1.0 / 8.0;
    JointDistribution::from_rows(vec![
        vec![e, e, 0.0, 0.0],
        vec![e, e * (1.0 - delta), e * delta, 0.0],
        vec![0.0, 0.0, e, e],
        vec![0.0, 0.0, e, e],
    ])
    .expect("delta example is valid")
}

/// Three x-symbols, two y-symbols: x1-y1 and x3-y2 carry (1-eps)/2 each,
/// x2 connects to both with eps/2.
pub fn epsilon(eps: f64) -> JointDistribution {
    let a = 0.5 * (1.0 - eps);
    let b = 0.5 * eps;
    JointDistribution::from_rows(vec![vec![a, 0.0], vec![b, b], vec![0.0, a]])
        .expect("epsilon example is valid")
}

pub fn point_mass() -> JointDistribution {
    JointDistribution::from_rows(vec![vec![1.0]]).expect("point mass is valid")
}

pub fn independent_uniform() -> JointDistribution {
    JointDistribution::from_rows(vec![vec![0.25, 0.25], vec![0.25, 0.25]])
        .expect("uniform is valid")
}

/// Uniform on an n x n grid.
pub fn independent_uniform_n(n: usize) -> JointDistribution {
    let c = 1.0 / (n * n) as f64;
    JointDistribution::from_rows(vec![vec![c; n]; n]).expect("uniform is valid")
}

pub fn identity_coupling() -> JointDistribution {
    JointDistribution::from_rows(vec![vec![0.5, 0.0], vec![0.0, 0.5]])
        .expect("identity coupling is valid")
}

/// Three disjoint uniform 2x2 blocks with masses 0.5, 0.3 and 0.2.
pub fn three_blocks() -> JointDistribution {
    let weights = [0.5, 0.3, 0.2];
    let mut rows = vec![vec![0.0; 6]; 6];
    for (b, w) in weights.iter().enumerate() {
        for i in 0..2 {
            for j in 0..2 {
                rows[2 * b + i][2 * b + j] = w / 4.0;
            }
        }
    }
    JointDistribution::from_rows(rows).expect("three-block example is valid")
}

/// x1, x2 labelled +1 and x3, x4 labelled -1, on both sides.
pub fn block_labeling() -> LabelingPair {
    LabelingPair::binary(vec![0, 0, 1, 1], vec![0, 0, 1, 1])
}

/// {x1, x2} labelled +1, x3 labelled -1; y1 labelled +1, y2 labelled -1.
pub fn epsilon_labeling() -> LabelingPair {
    LabelingPair::binary(vec![0, 0, 1], vec![0, 1])
}
