//! Everything a labeling pair (phi_X, phi_Y) implies about a distribution:
//! disagreement probability, helper rates, the Lagrangian, matrix and
//! conductance objectives, cut sets and the induced rate regions.
//!
//! Binary labelings use label 0 for the value +1 and label 1 for -1.

mod rates;

pub use rates::{
    default_alpha_grid, rate_region_binary, rate_region_general, RatePoint, RateRegion,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dist::{
    binary_entropy_unchecked, conditional_entropy_table, entropy_of, JointDistribution,
};

#[derive(Debug, Error, PartialEq)]
pub enum LabelError {
    #[error("label range must contain at least one label")]
    EmptyRange,
    #[error("{axis}[{index}] = {label} is outside the label range 0..{range}")]
    OutOfRange {
        axis: &'static str,
        index: usize,
        label: usize,
        range: usize,
    },
    #[error("labeling has {phi_x} x-labels and {phi_y} y-labels, distribution is {n_x}x{n_y}")]
    DimensionMismatch {
        phi_x: usize,
        phi_y: usize,
        n_x: usize,
        n_y: usize,
    },
    #[error("sign labels must be +1 or -1, found {0}")]
    BadSign(i64),
    #[error("operation requires a binary labeling, label range is {0}")]
    NotBinary(usize),
}

/// A pair of functions phi_X: [n_X] -> [0, L) and phi_Y: [n_Y] -> [0, L)
/// sharing the label range.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "LabelingFile", into = "LabelingFile")]
pub struct LabelingPair {
    phi_x: Vec<usize>,
    phi_y: Vec<usize>,
    num_labels: usize,
}

impl LabelingPair {
    pub fn new(phi_x: Vec<usize>, phi_y: Vec<usize>, num_labels: usize) -> Result<Self, LabelError> {
        if num_labels == 0 {
            return Err(LabelError::EmptyRange);
        }
        for (axis, phi) in [("phi_x", &phi_x), ("phi_y", &phi_y)] {
            if let Some((index, &label)) = phi.iter().enumerate().find(|(_, &l)| l >= num_labels) {
                return Err(LabelError::OutOfRange {
                    axis,
                    index,
                    label,
                    range: num_labels,
                });
            }
        }
        Ok(Self {
            phi_x,
            phi_y,
            num_labels,
        })
    }

    /// Binary pair over {0, 1}.
    ///
    /// Panics if a label is not 0 or 1.
    pub fn binary(phi_x: Vec<usize>, phi_y: Vec<usize>) -> Self {
        Self::new(phi_x, phi_y, 2).expect("binary labels are 0 or 1")
    }

    /// Builds a binary pair from +1/-1 sign vectors.
    pub fn from_signs(phi_x: &[i64], phi_y: &[i64]) -> Result<Self, LabelError> {
        let map = |s: &[i64]| {
            s.iter()
                .map(|&v| match v {
                    1 => Ok(0),
                    -1 => Ok(1),
                    other => Err(LabelError::BadSign(other)),
                })
                .collect::<Result<Vec<usize>, _>>()
        };
        Ok(Self::binary(map(phi_x)?, map(phi_y)?))
    }

    /// Both functions constant; the binary range is kept.
    pub fn constant(n_x: usize, n_y: usize) -> Self {
        Self::binary(vec![0; n_x], vec![0; n_y])
    }

    pub fn phi_x(&self) -> &[usize] {
        &self.phi_x
    }

    pub fn phi_y(&self) -> &[usize] {
        &self.phi_y
    }

    pub fn num_labels(&self) -> usize {
        self.num_labels
    }

    /// At most two labels; a one-label range counts as binary.
    pub fn is_binary(&self) -> bool {
        self.num_labels <= 2
    }

    /// +1 for label 0, -1 otherwise.
    pub fn signs_x(&self) -> Vec<f64> {
        signs(&self.phi_x)
    }

    pub fn signs_y(&self) -> Vec<f64> {
        signs(&self.phi_y)
    }

    /// Binary pair with phi_Y negated. Panics on non-binary labelings.
    pub fn negate_y(&self) -> Self {
        assert!(self.is_binary(), "negation needs a binary labeling");
        Self::binary(self.phi_x.clone(), self.phi_y.iter().map(|l| l ^ 1).collect())
    }

    /// Binary pair with both functions negated.
    pub fn negate_both(&self) -> Self {
        assert!(self.is_binary(), "negation needs a binary labeling");
        Self::binary(
            self.phi_x.iter().map(|l| l ^ 1).collect(),
            self.phi_y.iter().map(|l| l ^ 1).collect(),
        )
    }

    pub fn check_dims(&self, joint: &JointDistribution) -> Result<(), LabelError> {
        if self.phi_x.len() != joint.n_x() || self.phi_y.len() != joint.n_y() {
            return Err(LabelError::DimensionMismatch {
                phi_x: self.phi_x.len(),
                phi_y: self.phi_y.len(),
                n_x: joint.n_x(),
                n_y: joint.n_y(),
            });
        }
        Ok(())
    }

    /// Relabels so that labels appear in order of first use by phi_X, then
    /// phi_Y. Two pairs that differ only by a label permutation compare equal
    /// after canonicalization.
    pub fn canonical(&self) -> Self {
        let mut map = vec![usize::MAX; self.num_labels];
        let mut next = 0;
        for &l in self.phi_x.iter().chain(&self.phi_y) {
            if map[l] == usize::MAX {
                map[l] = next;
                next += 1;
            }
        }
        Self {
            phi_x: self.phi_x.iter().map(|&l| map[l]).collect(),
            phi_y: self.phi_y.iter().map(|&l| map[l]).collect(),
            num_labels: self.num_labels,
        }
    }

    fn assert_dims(&self, joint: &JointDistribution) {
        if let Err(e) = self.check_dims(joint) {
            panic!("{e}");
        }
    }
}

fn signs(phi: &[usize]) -> Vec<f64> {
    phi.iter().map(|&l| if l == 0 { 1.0 } else { -1.0 }).collect()
}

/// On-disk form: `{"phi_x": [...], "phi_y": [...], "num_labels": L}`.
/// Labels are either nonnegative ids or, for binary pairs, +1/-1 signs;
/// `num_labels` defaults to one more than the largest id.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct LabelingFile {
    phi_x: Vec<i64>,
    phi_y: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    num_labels: Option<usize>,
}

impl TryFrom<LabelingFile> for LabelingPair {
    type Error = LabelError;

    fn try_from(file: LabelingFile) -> Result<Self, LabelError> {
        let any_negative = file.phi_x.iter().chain(&file.phi_y).any(|&v| v < 0);
        if any_negative {
            return LabelingPair::from_signs(&file.phi_x, &file.phi_y);
        }
        let max = file.phi_x.iter().chain(&file.phi_y).copied().max().unwrap_or(0) as usize;
        let to_ids = |v: &[i64]| v.iter().map(|&l| l as usize).collect();
        LabelingPair::new(
            to_ids(&file.phi_x),
            to_ids(&file.phi_y),
            file.num_labels.unwrap_or(max + 1),
        )
    }
}

impl From<LabelingPair> for LabelingFile {
    fn from(pair: LabelingPair) -> Self {
        Self {
            phi_x: pair.phi_x.iter().map(|&l| l as i64).collect(),
            phi_y: pair.phi_y.iter().map(|&l| l as i64).collect(),
            num_labels: Some(pair.num_labels),
        }
    }
}

/// Joint distribution of (phi_X(X), phi_Y(Y)) as an L x L table.
pub fn label_joint(joint: &JointDistribution, labels: &LabelingPair) -> Vec<Vec<f64>> {
    labels.assert_dims(joint);
    let l = labels.num_labels;
    let mut table = vec![vec![0.0; l]; l];
    for i in 0..joint.n_x() {
        let row = &mut table[labels.phi_x[i]];
        for (j, &p) in joint.row(i).iter().enumerate() {
            row[labels.phi_y[j]] += p;
        }
    }
    table
}

/// Distribution of phi_X(X) over the label range.
pub fn label_marginal_x(joint: &JointDistribution, labels: &LabelingPair) -> Vec<f64> {
    labels.assert_dims(joint);
    let mut out = vec![0.0; labels.num_labels];
    for (i, p) in joint.row_sums().into_iter().enumerate() {
        out[labels.phi_x[i]] += p;
    }
    out
}

pub fn label_marginal_y(joint: &JointDistribution, labels: &LabelingPair) -> Vec<f64> {
    labels.assert_dims(joint);
    let mut out = vec![0.0; labels.num_labels];
    for (j, p) in joint.col_sums().into_iter().enumerate() {
        out[labels.phi_y[j]] += p;
    }
    out
}

/// H(phi_X(X)).
pub fn label_entropy_x(joint: &JointDistribution, labels: &LabelingPair) -> f64 {
    entropy_of(&label_marginal_x(joint, labels))
}

/// H(phi_Y(Y)).
pub fn label_entropy_y(joint: &JointDistribution, labels: &LabelingPair) -> f64 {
    entropy_of(&label_marginal_y(joint, labels))
}

/// H(X | phi_X(X)).
pub fn residual_entropy_x(joint: &JointDistribution, labels: &LabelingPair) -> f64 {
    grouped_conditional(&joint.row_sums(), &labels.phi_x, labels.num_labels)
}

/// H(Y | phi_Y(Y)).
pub fn residual_entropy_y(joint: &JointDistribution, labels: &LabelingPair) -> f64 {
    grouped_conditional(&joint.col_sums(), &labels.phi_y, labels.num_labels)
}

fn grouped_conditional(marginal: &[f64], phi: &[usize], num_labels: usize) -> f64 {
    let mut mass = vec![0.0; num_labels];
    for (p, &l) in marginal.iter().zip(phi) {
        mass[l] += p;
    }
    marginal
        .iter()
        .zip(phi)
        .filter(|(p, _)| **p > 0.0)
        .map(|(p, &l)| p * (mass[l] / p).log2())
        .sum::<f64>()
        .max(0.0)
}

/// P(phi_X(X) != phi_Y(Y)).
pub fn disagreement_probability(joint: &JointDistribution, labels: &LabelingPair) -> f64 {
    labels.assert_dims(joint);
    let mut total = 0.0;
    for i in 0..joint.n_x() {
        for (j, &p) in joint.row(i).iter().enumerate() {
            if labels.phi_x[i] != labels.phi_y[j] {
                total += p;
            }
        }
    }
    debug_assert!(
        !labels.is_binary() || (total - bilinear_disagreement(joint, labels)).abs() <= 1e-12,
        "indicator and bilinear disagreement differ"
    );
    total
}

/// (1 - phi_X^T P phi_Y) / 2 for sign vectors; only meaningful for binary pairs.
pub fn bilinear_disagreement(joint: &JointDistribution, labels: &LabelingPair) -> f64 {
    let sx = labels.signs_x();
    let sy = labels.signs_y();
    0.5 * (1.0 - bilinear(joint, &sx, &sy))
}

/// a^T P b.
pub fn bilinear(joint: &JointDistribution, a: &[f64], b: &[f64]) -> f64 {
    let mut total = 0.0;
    for (i, ai) in a.iter().enumerate() {
        let row: f64 = joint.row(i).iter().zip(b).map(|(p, bj)| p * bj).sum();
        total += ai * row;
    }
    total
}

/// h(P_err), the helper rate of the binary error-indicator scheme.
/// `None` for labelings with more than two labels.
pub fn helper_rate_binary(joint: &JointDistribution, labels: &LabelingPair) -> Option<f64> {
    labels
        .is_binary()
        .then(|| binary_entropy_unchecked(disagreement_probability(joint, labels)))
}

/// H(phi_X(X) | phi_Y(Y)).
pub fn helper_rate_general(joint: &JointDistribution, labels: &LabelingPair) -> f64 {
    conditional_entropy_table(&label_joint(joint, labels))
}

/// H(phi_Y(Y) | phi_X(X)), the helper rate of the mirrored corner.
pub fn helper_rate_general_y(joint: &JointDistribution, labels: &LabelingPair) -> f64 {
    let table = label_joint(joint, labels);
    let l = table.len();
    let transposed: Vec<Vec<f64>> = (0..l).map(|b| (0..l).map(|a| table[a][b]).collect()).collect();
    conditional_entropy_table(&transposed)
}

/// H(phi_X(X)) - lambda H(phi_X(X) | phi_Y(Y)).
pub fn lagrangian_objective(joint: &JointDistribution, labels: &LabelingPair, lambda: f64) -> f64 {
    label_entropy_x(joint, labels) - lambda * helper_rate_general(joint, labels)
}

/// h((1 + a^T P 1)/2) - lambda h((1 - a^T P b)/2) for sign vectors a, b.
///
/// Note the penalty is h(P_err), not H(phi_X | phi_Y).
pub fn matrix_objective_binary(
    joint: &JointDistribution,
    signs_x: &[f64],
    signs_y: &[f64],
    lambda: f64,
) -> f64 {
    assert_eq!(signs_x.len(), joint.n_x());
    assert_eq!(signs_y.len(), joint.n_y());
    let ones = vec![1.0; joint.n_y()];
    let p_plus = 0.5 * (1.0 + bilinear(joint, signs_x, &ones));
    let p_err = 0.5 * (1.0 - bilinear(joint, signs_x, signs_y));
    binary_entropy_unchecked(p_plus) - lambda * binary_entropy_unchecked(p_err)
}

/// Value of P(phi_X = +1) / P(phi_X != phi_Y) under the constraint
/// P(phi_X = +1) <= 1/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConductanceRatio {
    Finite(f64),
    /// Zero disagreement with a nonempty +1 side.
    Infinite,
    /// Constraint violated, or both numerator and denominator vanish.
    Undefined,
}

impl ConductanceRatio {
    /// Ordering key for maximization; `Undefined` maps to `None`.
    pub fn value(self) -> Option<f64> {
        match self {
            ConductanceRatio::Finite(v) => Some(v),
            ConductanceRatio::Infinite => Some(f64::INFINITY),
            ConductanceRatio::Undefined => None,
        }
    }
}

impl std::fmt::Display for ConductanceRatio {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConductanceRatio::Finite(v) => write!(f, "{v:.6}"),
            ConductanceRatio::Infinite => write!(f, "infinite"),
            ConductanceRatio::Undefined => write!(f, "undefined"),
        }
    }
}

/// Slack on the P(phi_X = +1) <= 1/2 constraint.
const HALF_SLACK: f64 = 1e-12;

pub fn conductance_ratio(
    joint: &JointDistribution,
    labels: &LabelingPair,
) -> Result<ConductanceRatio, LabelError> {
    if !labels.is_binary() {
        return Err(LabelError::NotBinary(labels.num_labels));
    }
    let p_plus = label_marginal_x(joint, labels)[0];
    let p_err = disagreement_probability(joint, labels);
    Ok(ratio_from_parts(p_plus, p_err))
}

pub(crate) fn ratio_from_parts(p_plus: f64, p_err: f64) -> ConductanceRatio {
    if p_plus > 0.5 + HALF_SLACK {
        ConductanceRatio::Undefined
    } else if p_err > 0.0 {
        ConductanceRatio::Finite(p_plus / p_err)
    } else if p_plus > 0.0 {
        ConductanceRatio::Infinite
    } else {
        ConductanceRatio::Undefined
    }
}

/// Symbols that take part in at least one disagreeing support edge, and the
/// entropies of the collapsed variables X_cut and Y_cut.
#[derive(Debug, Clone, PartialEq)]
pub struct CutSets {
    pub s_x: Vec<usize>,
    pub s_y: Vec<usize>,
    pub h_x_cut: f64,
    pub h_y_cut: f64,
}

pub fn cut_sets(joint: &JointDistribution, labels: &LabelingPair) -> CutSets {
    labels.assert_dims(joint);
    let mut in_x = vec![false; joint.n_x()];
    let mut in_y = vec![false; joint.n_y()];
    for i in 0..joint.n_x() {
        for (j, &p) in joint.row(i).iter().enumerate() {
            if p > 0.0 && labels.phi_x[i] != labels.phi_y[j] {
                in_x[i] = true;
                in_y[j] = true;
            }
        }
    }
    let s_x: Vec<usize> = (0..joint.n_x()).filter(|&i| in_x[i]).collect();
    let s_y: Vec<usize> = (0..joint.n_y()).filter(|&j| in_y[j]).collect();
    let h_x_cut = entropy_of(&collapsed_marginal(&joint.row_sums(), &in_x));
    let h_y_cut = entropy_of(&collapsed_marginal(&joint.col_sums(), &in_y));
    CutSets {
        s_x,
        s_y,
        h_x_cut,
        h_y_cut,
    }
}

/// Distribution of 1{X in S} X: the members of S keep their own mass, every
/// other symbol is merged into a trailing "outside" cell.
pub fn collapsed_marginal(marginal: &[f64], in_set: &[bool]) -> Vec<f64> {
    let mut out: Vec<f64> = marginal
        .iter()
        .zip(in_set)
        .filter(|(_, &inside)| inside)
        .map(|(p, _)| *p)
        .collect();
    out.push(
        marginal
            .iter()
            .zip(in_set)
            .filter(|(_, &inside)| !inside)
            .map(|(p, _)| *p)
            .sum(),
    );
    out
}

/// Summary of one labeling pair.
#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionReport {
    pub h_phi_x: f64,
    pub h_phi_y: f64,
    pub h_x_given_phi_x: f64,
    pub h_y_given_phi_y: f64,
    pub p_err: f64,
    pub helper_rate_binary: Option<f64>,
    pub helper_rate_general: f64,
    /// (lambda, Lagrangian value) for each requested lambda.
    pub lagrangian_at: Vec<(f64, f64)>,
    pub conductance_ratio: Option<ConductanceRatio>,
    pub cuts: CutSets,
}

pub fn decomposition_report(
    joint: &JointDistribution,
    labels: &LabelingPair,
    lambdas: &[f64],
) -> DecompositionReport {
    let h_phi_x = label_entropy_x(joint, labels);
    let helper = helper_rate_general(joint, labels);
    DecompositionReport {
        h_phi_x,
        h_phi_y: label_entropy_y(joint, labels),
        h_x_given_phi_x: residual_entropy_x(joint, labels),
        h_y_given_phi_y: residual_entropy_y(joint, labels),
        p_err: disagreement_probability(joint, labels),
        helper_rate_binary: helper_rate_binary(joint, labels),
        helper_rate_general: helper,
        lagrangian_at: lambdas.iter().map(|&l| (l, h_phi_x - l * helper)).collect(),
        conductance_ratio: conductance_ratio(joint, labels).ok(),
        cuts: cut_sets(joint, labels),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::components::gk_labelings;
    use crate::dist::{entropy, marginals};
    use crate::examples;

    const H_0125: f64 = 0.096_946; // h(0.0125), direct evaluation

    #[test]
    fn disagreement_examples() {
        let block = examples::block();
        assert_eq!(disagreement_probability(&block, &gk_labelings(&block)), 0.0);
        let delta = examples::delta(0.1);
        let l = examples::block_labeling();
        assert!((disagreement_probability(&delta, &l) - 0.0125).abs() < 1e-15);
        let flipped = disagreement_probability(&delta, &l.negate_y());
        assert!((flipped - (1.0 - 0.0125)).abs() < 1e-12);
    }

    #[test]
    fn negate_y_keeps_phi_x() {
        let l = examples::epsilon_labeling();
        let n = l.negate_y();
        assert_eq!(n.phi_x(), l.phi_x());
        assert_eq!(n.phi_y(), &[1, 0]);
    }

    #[test]
    fn helper_rates() {
        let block = examples::block();
        assert_eq!(helper_rate_general(&block, &gk_labelings(&block)), 0.0);

        let eps = examples::epsilon(0.2);
        let l = examples::epsilon_labeling();
        let binary = helper_rate_binary(&eps, &l).unwrap();
        assert!((binary - 0.468_996).abs() < 1e-5);
        let general = helper_rate_general(&eps, &l);
        // column y2 holds 0.1 (label +1) against 0.4 (label -1)
        assert!((general - 0.5 * binary_entropy_unchecked(0.2)).abs() < 1e-12);
        assert!(general <= binary);

        let delta = examples::delta(0.1);
        let l = examples::block_labeling();
        assert!((helper_rate_binary(&delta, &l).unwrap() - H_0125).abs() < 1e-5);

        let indep = examples::independent_uniform();
        let split = LabelingPair::binary(vec![0, 1], vec![0, 0]);
        assert!((helper_rate_general(&indep, &split) - label_entropy_x(&indep, &split)).abs() < 1e-12);
    }

    #[test]
    fn lagrangian_examples() {
        let block = examples::block();
        let gk = gk_labelings(&block);
        for lambda in [0.0, 1.0, 7.5] {
            assert_eq!(lagrangian_objective(&block, &gk, lambda), 1.0);
        }
        let delta = examples::delta(0.1);
        let l = examples::block_labeling();
        assert_eq!(lagrangian_objective(&delta, &l, 0.0), label_entropy_x(&delta, &l));
        // phi_Y = -1 column mass 0.5125 splits 0.0125 / 0.5
        let expected = 1.0 - 0.5125 * binary_entropy_unchecked(0.0125 / 0.5125);
        assert!((lagrangian_objective(&delta, &l, 1.0) - expected).abs() < 1e-12);
    }

    #[test]
    fn matrix_objective_examples() {
        let block = examples::block();
        let gk = examples::block_labeling();
        for lambda in [0.0, 2.0] {
            let v = matrix_objective_binary(&block, &gk.signs_x(), &gk.signs_y(), lambda);
            assert!((v - 1.0).abs() < 1e-15);
        }
        let ones_x = vec![1.0; 4];
        let ones_y = vec![1.0; 4];
        assert_eq!(matrix_objective_binary(&block, &ones_x, &ones_y, 3.0), 0.0);
    }

    #[test]
    fn conductance_examples() {
        let block = examples::block();
        assert_eq!(
            conductance_ratio(&block, &examples::block_labeling()).unwrap(),
            ConductanceRatio::Infinite
        );
        let delta = examples::delta(0.1);
        match conductance_ratio(&delta, &examples::block_labeling()).unwrap() {
            ConductanceRatio::Finite(v) => assert!((v - 40.0).abs() < 1e-9),
            other => panic!("{other:?}"),
        }
        let heavy = LabelingPair::binary(vec![0, 0, 0, 1], vec![0, 0, 0, 1]);
        assert_eq!(conductance_ratio(&block, &heavy).unwrap(), ConductanceRatio::Undefined);
        let three = LabelingPair::new(vec![0, 1, 2], vec![0, 1], 3).unwrap();
        assert!(conductance_ratio(&examples::epsilon(0.2), &three).is_err());
    }

    #[test]
    fn cut_set_examples() {
        let delta = examples::delta(0.1);
        let c = cut_sets(&delta, &examples::block_labeling());
        assert_eq!(c.s_x, vec![1]);
        assert_eq!(c.s_y, vec![2]);
        assert!((c.h_x_cut - 0.811_278).abs() < 1e-6);
        assert!((c.h_x_cut - binary_entropy_unchecked(0.25)).abs() < 1e-12);

        let block = examples::block();
        let c = cut_sets(&block, &gk_labelings(&block));
        assert!(c.s_x.is_empty() && c.s_y.is_empty());
        assert_eq!((c.h_x_cut, c.h_y_cut), (0.0, 0.0));
    }

    #[test]
    fn report_chain_rule_and_bounds() {
        let eps = examples::epsilon(0.2);
        let l = examples::epsilon_labeling();
        let r = decomposition_report(&eps, &l, &[0.0, 1.0]);
        let (px, _) = marginals(&eps);
        assert!((r.h_phi_x + r.h_x_given_phi_x - entropy(&px)).abs() < 1e-9);
        assert!((r.h_x_given_phi_x - 0.550_978).abs() < 1e-5);
        assert!(r.helper_rate_general <= r.h_phi_x + 1e-9);
        assert_eq!(r.lagrangian_at[0], (0.0, r.h_phi_x));
    }

    #[test]
    fn labeling_file_forms() {
        let l: LabelingPair = serde_json::from_str(r#"{"phi_x":[1,1,-1],"phi_y":[1,-1]}"#).unwrap();
        assert_eq!(l, examples::epsilon_labeling());
        let l: LabelingPair = serde_json::from_str(r#"{"phi_x":[0,2,1],"phi_y":[0,1]}"#).unwrap();
        assert_eq!(l.num_labels(), 3);
        let back: LabelingPair = serde_json::from_str(&serde_json::to_string(&l).unwrap()).unwrap();
        assert_eq!(back, l);
        assert!(serde_json::from_str::<LabelingPair>(r#"{"phi_x":[0,5],"phi_y":[0],"num_labels":2}"#).is_err());
        assert!(serde_json::from_str::<LabelingPair>(r#"{"phi_x":[1,-2],"phi_y":[1]}"#).is_err());
    }

    #[test]
    fn canonical_relabels() {
        let a = LabelingPair::new(vec![2, 0, 1], vec![1, 2], 3).unwrap();
        let b = LabelingPair::new(vec![0, 1, 2], vec![2, 0], 3).unwrap();
        assert_eq!(a.canonical(), b);
    }
}
