use std::time::Instant;

use super::{cond_entropy_2x2, evaluate, sign_normalize, Method, ObjectiveKind, SearchError, SearchResult, TIE_TOLERANCE};
use crate::dist::JointDistribution;
use crate::objectives::{lagrangian_objective, LabelingPair};
use crate::spectral::spectral_summary;

/// phi_Y(j) = the label c maximizing sum_i P(i, j) 1{phi_X(i) = c}, ties to
/// the smaller label. For a fixed phi_X this minimizes the disagreement
/// probability.
pub fn best_response_phi_y(joint: &JointDistribution, phi_x: &[usize], num_labels: usize) -> Vec<usize> {
    assert_eq!(phi_x.len(), joint.n_x());
    let mut mass = vec![vec![0.0; num_labels]; joint.n_y()];
    for (i, &c) in phi_x.iter().enumerate() {
        for (j, &p) in joint.row(i).iter().enumerate() {
            mass[j][c] += p;
        }
    }
    mass.iter()
        .map(|col| {
            col.iter()
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |best, (c, &m)| if m > best.1 { (c, m) } else { best })
                .0
        })
        .collect()
}

/// Threshold sets of a score vector: for each cut between consecutive
/// distinct sorted values, the indices strictly above the midpoint, plus the
/// empty set (threshold above the maximum).
fn threshold_sets(scores: &[f64]) -> Vec<Vec<bool>> {
    let mut sorted: Vec<f64> = scores.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    sorted.dedup();
    let mut thresholds = vec![f64::INFINITY];
    thresholds.extend(sorted.windows(2).map(|w| 0.5 * (w[0] + w[1])));
    thresholds
        .into_iter()
        .map(|t| scores.iter().map(|&s| s > t).collect())
        .collect()
}

/// Spectral threshold search on the singular pair (u, v) of sigma_2.
///
/// phi_X(i) = +1 iff u_i > t for every midpoint t between consecutive
/// sorted entries of u (and the constant labeling). Each phi_X is paired
/// with every v-threshold phi_Y and with the best response to it; the
/// candidate maximizing `kind` (ties to the smaller helper rate) is returned, negated if needed so that
/// P(phi_X = +1) <= 1/2.
pub fn spectral_threshold_search(
    joint: &JointDistribution,
    kind: ObjectiveKind,
) -> Result<SearchResult, SearchError> {
    let kind = kind.validate()?;
    let start = Instant::now();
    let summary = spectral_summary(joint)?;
    let mut warnings = Vec::new();
    if summary.degenerate_second {
        warnings.push(format!(
            "sigma_2 = {:.6} is degenerate with sigma_3; the singular vectors are not unique",
            summary.maximal_correlation
        ));
    }

    let (x_sets, y_sets) = match summary.second_pair() {
        Some((u, v)) => (threshold_sets(&u), threshold_sets(&v)),
        None => (vec![vec![false; joint.n_x()]], vec![vec![false; joint.n_y()]]),
    };
    let to_labels = |set: &[bool]| set.iter().map(|&up| usize::from(!up)).collect::<Vec<_>>();

    let mut best: Option<(f64, f64, LabelingPair)> = None;
    for x_set in &x_sets {
        let phi_x = to_labels(x_set);
        let mut candidates: Vec<Vec<usize>> = y_sets.iter().map(|s| to_labels(s)).collect();
        candidates.push(best_response_phi_y(joint, &phi_x, 2));
        for phi_y in candidates {
            let pair = LabelingPair::binary(phi_x.clone(), phi_y);
            let m = table(joint, &pair);
            let Some(value) = kind.eval_binary(m) else { continue };
            let helper = cond_entropy_2x2(m);
            let improves = match &best {
                None => true,
                Some((b, h, _)) => {
                    value > *b + TIE_TOLERANCE
                        || (value.is_infinite() && !b.is_infinite())
                        || (value >= *b - TIE_TOLERANCE && helper < *h - TIE_TOLERANCE)
                }
            };
            if improves {
                best = Some((value, helper, pair));
            }
        }
    }
    let (_, _, labeling) = best.ok_or(SearchError::Infeasible(kind))?;
    let labeling = sign_normalize(joint, &labeling);
    let objective_value = evaluate(joint, &labeling, kind).expect("selected candidate is feasible");
    Ok(SearchResult {
        labeling,
        objective_value,
        objective_kind: kind,
        method: Method::Spectral,
        runtime_ms: start.elapsed().as_secs_f64() * 1e3,
        warnings,
    })
}

fn table(joint: &JointDistribution, pair: &LabelingPair) -> [[f64; 2]; 2] {
    let t = crate::objectives::label_joint(joint, pair);
    [[t[0][0], t[0][1]], [t[1][0], t[1][1]]]
}

#[derive(Debug, Clone)]
pub struct RecursiveResult {
    pub labeling: LabelingPair,
    /// Lagrangian value of the full-distribution labeling after each split.
    pub objective_trace: Vec<f64>,
    pub warnings: Vec<String>,
}

/// Greedy multi-label extension of the spectral search.
///
/// Starting from the constant labeling, every current block (the rows and
/// columns sharing a label) is split by running the binary spectral search
/// on the block's renormalized sub-distribution. The split that most
/// improves the full Lagrangian H(phi_X) - lambda H(phi_X | phi_Y) is kept.
/// Stops at `k` labels or when no split improves.
pub fn recursive_spectral(
    joint: &JointDistribution,
    k: usize,
    lambda: f64,
) -> Result<RecursiveResult, SearchError> {
    if k < 2 {
        return Err(SearchError::BadClusterCount(k));
    }
    ObjectiveKind::Lagrangian(lambda).validate()?;
    let mut phi_x = vec![0usize; joint.n_x()];
    let mut phi_y = vec![0usize; joint.n_y()];
    let mut num_labels = 1;
    let mut current = 0.0;
    let mut trace = vec![current];
    let mut warnings = Vec::new();

    while num_labels < k {
        let mut best: Option<(f64, Vec<usize>, Vec<usize>)> = None;
        for block in 0..num_labels {
            let rows: Vec<usize> = (0..joint.n_x()).filter(|&i| phi_x[i] == block).collect();
            let cols: Vec<usize> = (0..joint.n_y()).filter(|&j| phi_y[j] == block).collect();
            let Some(sub) = joint.restrict(&rows, &cols) else { continue };
            let split = spectral_threshold_search(&sub.dist, ObjectiveKind::Lagrangian(lambda))?;
            warnings.extend(split.warnings.iter().map(|w| format!("block {block}: {w}")));
            let sub_x = split.labeling.phi_x();
            let sub_y = split.labeling.phi_y();
            if sub_x.iter().all(|&l| l == sub_x[0]) && sub_y.iter().all(|&l| l == sub_x[0]) {
                continue;
            }
            let mut new_x = phi_x.clone();
            let mut new_y = phi_y.clone();
            for (local, &parent) in sub.rows.iter().enumerate() {
                if sub_x[local] == 1 {
                    new_x[parent] = num_labels;
                }
            }
            for (local, &parent) in sub.cols.iter().enumerate() {
                if sub_y[local] == 1 {
                    new_y[parent] = num_labels;
                }
            }
            let candidate = LabelingPair::new(new_x.clone(), new_y.clone(), num_labels + 1)
                .expect("labels lie in range");
            let value = lagrangian_objective(joint, &candidate, lambda);
            if best.as_ref().is_none_or(|(b, _, _)| value > *b + TIE_TOLERANCE) {
                best = Some((value, new_x, new_y));
            }
        }
        match best {
            Some((value, new_x, new_y)) if value > current + TIE_TOLERANCE => {
                phi_x = new_x;
                phi_y = new_y;
                num_labels += 1;
                current = value;
                trace.push(value);
            }
            _ => break,
        }
    }

    Ok(RecursiveResult {
        labeling: LabelingPair::new(phi_x, phi_y, num_labels)
            .expect("labels lie in range")
            .canonical(),
        objective_trace: trace,
        warnings,
    })
}
