use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dist::JointDistribution;

/// n draws of (X, Y) as symbol indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleBlock {
    pub n: usize,
    pub seed: u64,
    pub x_seq: Vec<usize>,
    pub y_seq: Vec<usize>,
}

impl SampleBlock {
    /// Index of the first pair outside the support of `joint`, if any.
    pub fn first_outside_support(&self, joint: &JointDistribution) -> Option<usize> {
        self.x_seq
            .iter()
            .zip(&self.y_seq)
            .position(|(&x, &y)| x >= joint.n_x() || y >= joint.n_y() || joint.get(x, y) <= 0.0)
    }
}

/// iid draws from P.
///
/// The generator is ChaCha8 seeded with `seed_from_u64(seed)`. Each draw
/// takes one `next_u64`, keeps its top 53 bits as u in [0, 1) and returns the
/// first cell of the row-major flattened P whose cumulative mass exceeds u.
/// Zero cells are never returned.
pub fn sample(joint: &JointDistribution, n: usize, seed: u64) -> SampleBlock {
    assert!(n >= 1, "block length must be positive");
    let mut cum = Vec::with_capacity(joint.as_slice().len());
    let mut acc = 0.0;
    for &p in joint.as_slice() {
        acc += p;
        cum.push(acc);
    }
    let last_positive = joint.as_slice().iter().rposition(|&p| p > 0.0).expect("nonempty support");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x_seq = Vec::with_capacity(n);
    let mut y_seq = Vec::with_capacity(n);
    for _ in 0..n {
        let u = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
        let cell = cum.partition_point(|&c| c <= u).min(last_positive);
        x_seq.push(cell / joint.n_y());
        y_seq.push(cell % joint.n_y());
    }
    SampleBlock { n, seed, x_seq, y_seq }
}
