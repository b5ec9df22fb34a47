use std::time::Instant;

use rayon::prelude::*;

use super::{cond_entropy_2x2, evaluate, sign_normalize, Method, ObjectiveKind, SearchError, SearchResult, TIE_TOLERANCE};
use crate::dist::JointDistribution;
use crate::objectives::LabelingPair;

/// Largest n_X + n_Y accepted by the exhaustive searches.
pub const BRUTE_FORCE_LIMIT: usize = 24;

/// Global optimum of `kind` over all binary labeling pairs.
///
/// phi_X(0) is fixed to +1, which loses nothing because every objective is
/// invariant under negating both functions. Among optima (values within
/// [`TIE_TOLERANCE`] of the maximum) the smallest helper rate
/// H(phi_X | phi_Y) is preferred, then the lexicographically smallest pair of
/// sign vectors, with +1 ordered before -1 and phi_X compared first.
/// The result does not depend on the parallel schedule.
pub fn brute_force(joint: &JointDistribution, kind: ObjectiveKind) -> Result<SearchResult, SearchError> {
    let kind = kind.validate()?;
    let (n_x, n_y) = (joint.n_x(), joint.n_y());
    if n_x + n_y > BRUTE_FORCE_LIMIT {
        return Err(SearchError::SizeLimit {
            size: n_x + n_y,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let start = Instant::now();
    let x_codes: u64 = 1 << (n_x - 1);

    let best = (0..x_codes)
        .into_par_iter()
        .map(|x_code| {
            let masses = ColumnMasses::new(joint, x_code);
            let mut best = f64::NEG_INFINITY;
            for y_code in 0..(1u64 << n_y) {
                if let Some(v) = kind.eval_binary(masses.table(y_code)) {
                    best = best.max(v);
                }
            }
            best
        })
        .reduce(|| f64::NEG_INFINITY, f64::max);
    if best == f64::NEG_INFINITY {
        return Err(SearchError::Infeasible(kind));
    }

    let threshold = if best.is_finite() { best - TIE_TOLERANCE } else { best };
    let near_optimal = |m: [[f64; 2]; 2]| kind.eval_binary(m).is_some_and(|v| v >= threshold);
    let min_helper = (0..x_codes)
        .into_par_iter()
        .map(|x_code| {
            let masses = ColumnMasses::new(joint, x_code);
            (0..(1u64 << n_y))
                .map(|y_code| masses.table(y_code))
                .filter(|&m| near_optimal(m))
                .map(cond_entropy_2x2)
                .fold(f64::INFINITY, f64::min)
        })
        .reduce(|| f64::INFINITY, f64::min);
    let helper_threshold = min_helper + TIE_TOLERANCE;
    let (x_code, y_code) = (0..x_codes)
        .into_par_iter()
        .filter_map(|x_code| {
            let masses = ColumnMasses::new(joint, x_code);
            (0..(1u64 << n_y))
                .find(|&y_code| {
                    let m = masses.table(y_code);
                    near_optimal(m) && cond_entropy_2x2(m) <= helper_threshold
                })
                .map(|y_code| (x_code, y_code))
        })
        .min()
        .expect("the maximum is attained");

    let mut labeling = LabelingPair::binary(decode_x(x_code, n_x), decode_y(y_code, n_y));
    if kind == ObjectiveKind::Conductance {
        labeling = sign_normalize(joint, &labeling);
    }
    let objective_value = evaluate(joint, &labeling, kind).expect("optimum is feasible");
    Ok(SearchResult {
        labeling,
        objective_value,
        objective_kind: kind,
        method: Method::BruteForce,
        runtime_ms: start.elapsed().as_secs_f64() * 1e3,
        warnings: Vec::new(),
    })
}

pub fn brute_force_lagrangian(joint: &JointDistribution, lambda: f64) -> Result<SearchResult, SearchError> {
    brute_force(joint, ObjectiveKind::Lagrangian(lambda))
}

/// Best binary labeling with H(phi_X | phi_Y) <= epsilon. The constant
/// labeling is always feasible.
pub fn brute_force_constrained(joint: &JointDistribution, epsilon: f64) -> Result<SearchResult, SearchError> {
    brute_force(joint, ObjectiveKind::Constrained(epsilon))
}

/// Column masses split by phi_X label for one phi_X.
struct ColumnMasses {
    plus: Vec<f64>,
    minus: Vec<f64>,
}

impl ColumnMasses {
    fn new(joint: &JointDistribution, x_code: u64) -> Self {
        let (n_x, n_y) = (joint.n_x(), joint.n_y());
        let mut plus = vec![0.0; n_y];
        let mut minus = vec![0.0; n_y];
        for i in 0..n_x {
            let target = if x_label(x_code, i, n_x) == 0 { &mut plus } else { &mut minus };
            for (t, p) in target.iter_mut().zip(joint.row(i)) {
                *t += p;
            }
        }
        Self { plus, minus }
    }

    fn table(&self, y_code: u64) -> [[f64; 2]; 2] {
        let n_y = self.plus.len();
        let mut m = [[0.0; 2]; 2];
        for j in 0..n_y {
            let b = ((y_code >> (n_y - 1 - j)) & 1) as usize;
            m[0][b] += self.plus[j];
            m[1][b] += self.minus[j];
        }
        m
    }
}

/// Bits of the x code cover symbols 1..n_x, symbol 1 most significant.
fn x_label(x_code: u64, i: usize, n_x: usize) -> usize {
    if i == 0 {
        0
    } else {
        ((x_code >> (n_x - 1 - i)) & 1) as usize
    }
}

fn decode_x(x_code: u64, n_x: usize) -> Vec<usize> {
    (0..n_x).map(|i| x_label(x_code, i, n_x)).collect()
}

fn decode_y(y_code: u64, n_y: usize) -> Vec<usize> {
    (0..n_y).map(|j| ((y_code >> (n_y - 1 - j)) & 1) as usize).collect()
}
