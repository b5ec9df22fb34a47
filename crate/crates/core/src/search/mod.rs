//! Searches for good labeling pairs.
//!
//! Exhaustive enumeration over binary labelings serves as the oracle at
//! small sizes; the spectral threshold search (and its greedy recursion
//! for more than two labels) scales to any size.

mod brute;
mod spectral;
mod sweep;

pub use brute::{brute_force, brute_force_constrained, brute_force_lagrangian, BRUTE_FORCE_LIMIT};
pub use spectral::{best_response_phi_y, recursive_spectral, spectral_threshold_search, RecursiveResult};
pub use sweep::{
    conductance_agreement, default_lambda_grid, lambda_max_estimate, tradeoff_sweep,
    zero_helper_entropy, ConductanceAgreement, FrontierPoint, LambdaSweep, LambdaSweepPoint,
    SweepGrid,
};

use std::fmt;

use thiserror::Error;

use crate::dist::{binary_entropy_unchecked, conditional_entropy_table, JointDistribution};
use crate::objectives::{
    helper_rate_general, label_entropy_x, label_joint, matrix_objective_binary, ratio_from_parts,
    LabelingPair,
};
use crate::spectral::SpectralError;

/// Slack on the helper-rate constraint H(phi_X | phi_Y) <= epsilon.
pub const CONSTRAINT_SLACK: f64 = 1e-12;

/// Objective values closer than this are treated as ties.
pub const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("brute force supports n_X + n_Y <= {limit}, got {size}")]
    SizeLimit { size: usize, limit: usize },
    #[error("no labeling satisfies the {0} objective")]
    Infeasible(ObjectiveKind),
    #[error("target cluster count must be at least 2, got {0}")]
    BadClusterCount(usize),
    #[error("invalid parameter: {0}")]
    BadParameter(String),
    #[error("brute-force frontier is not monotone at {param}: {detail}")]
    NonMonotone { param: f64, detail: String },
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// What a search maximizes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ObjectiveKind {
    /// H(phi_X) - lambda H(phi_X | phi_Y).
    Lagrangian(f64),
    /// H(phi_X) subject to H(phi_X | phi_Y) <= epsilon.
    Constrained(f64),
    /// P(phi_X = +1) / P(phi_X != phi_Y) with P(phi_X = +1) <= 1/2, after
    /// negating both functions when needed. Binary only.
    Conductance,
    /// h(P(phi_X = +1)) - lambda h(P_err), the sign-vector form. Binary only.
    MatrixBinary(f64),
}

impl ObjectiveKind {
    pub fn validate(self) -> Result<Self, SearchError> {
        match self {
            ObjectiveKind::Lagrangian(l) | ObjectiveKind::MatrixBinary(l) if !l.is_finite() || l < 0.0 => {
                Err(SearchError::BadParameter(format!("lambda must be a finite nonnegative number, got {l}")))
            }
            ObjectiveKind::Constrained(e) if e.is_nan() || e < 0.0 => {
                Err(SearchError::BadParameter(format!("epsilon must be nonnegative, got {e}")))
            }
            other => Ok(other),
        }
    }

    /// Objective of a binary labeling from its 2x2 label table
    /// `[[m00, m01], [m10, m11]]` (rows phi_X, columns phi_Y).
    /// `None` when the labeling is infeasible or the ratio is undefined.
    pub(crate) fn eval_binary(self, m: [[f64; 2]; 2]) -> Option<f64> {
        let p_plus = m[0][0] + m[0][1];
        match self {
            ObjectiveKind::Lagrangian(lambda) => {
                Some(binary_entropy_unchecked(p_plus) - lambda * cond_entropy_2x2(m))
            }
            ObjectiveKind::Constrained(eps) => {
                (cond_entropy_2x2(m) <= eps + CONSTRAINT_SLACK).then(|| binary_entropy_unchecked(p_plus))
            }
            ObjectiveKind::Conductance => {
                let p_err = m[0][1] + m[1][0];
                let p_plus = if p_plus > 0.5 { m[1][0] + m[1][1] } else { p_plus };
                ratio_from_parts(p_plus, p_err).value()
            }
            ObjectiveKind::MatrixBinary(lambda) => {
                let p_err = m[0][1] + m[1][0];
                Some(binary_entropy_unchecked(p_plus) - lambda * binary_entropy_unchecked(p_err))
            }
        }
    }
}

impl fmt::Display for ObjectiveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObjectiveKind::Lagrangian(l) => write!(f, "lagrangian({l})"),
            ObjectiveKind::Constrained(e) => write!(f, "constrained({e})"),
            ObjectiveKind::Conductance => write!(f, "conductance"),
            ObjectiveKind::MatrixBinary(l) => write!(f, "matrix({l})"),
        }
    }
}

pub(crate) fn cond_entropy_2x2(m: [[f64; 2]; 2]) -> f64 {
    conditional_entropy_table(&[m[0].to_vec(), m[1].to_vec()])
}

/// Evaluates an objective on any labeling through the `objectives` module.
pub fn evaluate(joint: &JointDistribution, labels: &LabelingPair, kind: ObjectiveKind) -> Option<f64> {
    match kind {
        ObjectiveKind::Lagrangian(lambda) => {
            Some(label_entropy_x(joint, labels) - lambda * helper_rate_general(joint, labels))
        }
        ObjectiveKind::Constrained(eps) => (helper_rate_general(joint, labels) <= eps + CONSTRAINT_SLACK)
            .then(|| label_entropy_x(joint, labels)),
        ObjectiveKind::Conductance => {
            if !labels.is_binary() {
                return None;
            }
            let normalized = sign_normalize(joint, labels);
            crate::objectives::conductance_ratio(joint, &normalized).ok()?.value()
        }
        ObjectiveKind::MatrixBinary(lambda) => labels
            .is_binary()
            .then(|| matrix_objective_binary(joint, &labels.signs_x(), &labels.signs_y(), lambda)),
    }
}

/// Negates both functions of a binary pair when P(phi_X = +1) > 1/2, or
/// when it equals 1/2 and x-symbol 0 is labelled -1. Objectives other than
/// the conductance ratio are unchanged.
pub fn sign_normalize(joint: &JointDistribution, labels: &LabelingPair) -> LabelingPair {
    if !labels.is_binary() {
        return labels.clone();
    }
    let table = label_joint(joint, labels);
    let p_plus: f64 = table[0].iter().sum();
    let labels = if labels.num_labels() == 1 {
        LabelingPair::binary(labels.phi_x().to_vec(), labels.phi_y().to_vec())
    } else {
        labels.clone()
    };
    let tie = (p_plus - 0.5).abs() <= TIE_TOLERANCE;
    if (!tie && p_plus > 0.5) || (tie && labels.phi_x().first() == Some(&1)) {
        labels.negate_both()
    } else {
        labels
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    BruteForce,
    Spectral,
    Recursive,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::BruteForce => "brute-force",
            Method::Spectral => "spectral",
            Method::Recursive => "recursive",
        })
    }
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub labeling: LabelingPair,
    pub objective_value: f64,
    pub objective_kind: ObjectiveKind,
    pub method: Method,
    pub runtime_ms: f64,
    pub warnings: Vec<String>,
}
