use super::{
    brute_force, brute_force_constrained, brute_force_lagrangian, sign_normalize,
    spectral_threshold_search, Method, ObjectiveKind, SearchError, SearchResult,
};
use crate::components::gk_common_information;
use crate::dist::JointDistribution;
use crate::objectives::{disagreement_probability, helper_rate_general, label_entropy_x};

const MONOTONE_SLACK: f64 = 1e-9;

/// 2^-4, 2^-3, ..., 2^10.
pub fn default_lambda_grid() -> Vec<f64> {
    (-4..=10).map(|e| 2f64.powi(e)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaSweepPoint {
    pub lambda: f64,
    pub h_phi_x: f64,
    pub helper_rate: f64,
    pub p_err: f64,
    /// Zero disagreement and H(phi_X) = H(K).
    pub is_gk: bool,
}

#[derive(Debug, Clone)]
pub struct LambdaSweep {
    pub h_k: f64,
    pub points: Vec<LambdaSweepPoint>,
    /// Smallest grid lambda from which every larger grid lambda yields the
    /// common-information labeling; `None` if the largest does not.
    pub crossover: Option<f64>,
}

/// Grid estimate of the lambda above which the Lagrangian optimum is the
/// common-information labeling. Uses the binary brute-force oracle, so when
/// K has three or more values no grid point can reach H(K).
pub fn lambda_max_estimate(joint: &JointDistribution, lambda_grid: &[f64]) -> Result<LambdaSweep, SearchError> {
    let (h_k, _) = gk_common_information(joint);
    let mut grid = lambda_grid.to_vec();
    grid.sort_by(f64::total_cmp);
    let mut points = Vec::with_capacity(grid.len());
    for &lambda in &grid {
        let r = brute_force_lagrangian(joint, lambda)?;
        let h_phi_x = label_entropy_x(joint, &r.labeling);
        let p_err = disagreement_probability(joint, &r.labeling);
        points.push(LambdaSweepPoint {
            lambda,
            h_phi_x,
            helper_rate: helper_rate_general(joint, &r.labeling),
            p_err,
            is_gk: p_err == 0.0 && (h_phi_x - h_k).abs() <= 1e-9,
        });
    }
    let tail = points.iter().rev().take_while(|p| p.is_gk).count();
    let crossover = (tail > 0).then(|| points[points.len() - tail].lambda);
    Ok(LambdaSweep { h_k, points, crossover })
}

#[derive(Debug, Clone)]
pub enum SweepGrid {
    Epsilon(Vec<f64>),
    Lambda(Vec<f64>),
}

impl SweepGrid {
    fn values(&self) -> &[f64] {
        match self {
            SweepGrid::Epsilon(v) | SweepGrid::Lambda(v) => v,
        }
    }

    fn kind(&self, value: f64) -> ObjectiveKind {
        match self {
            SweepGrid::Epsilon(_) => ObjectiveKind::Constrained(value),
            SweepGrid::Lambda(_) => ObjectiveKind::Lagrangian(value),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrontierPoint {
    pub param: f64,
    pub h_phi_x: f64,
    pub helper_rate: f64,
    pub p_err: f64,
    pub objective_value: f64,
    pub method: Method,
}

/// Runs the chosen search at each grid value and reports the achieved
/// (H(phi_X), H(phi_X | phi_Y)) pair. Points come back sorted by parameter.
///
/// For the brute-force method the frontier must be monotone: nondecreasing
/// entropy in epsilon, and nonincreasing entropy and helper rate in lambda.
/// A violation is reported as an error.
pub fn tradeoff_sweep(
    joint: &JointDistribution,
    grid: &SweepGrid,
    method: Method,
) -> Result<Vec<FrontierPoint>, SearchError> {
    let mut values = grid.values().to_vec();
    values.sort_by(f64::total_cmp);
    let mut out = Vec::with_capacity(values.len());
    for &param in &values {
        let kind = grid.kind(param);
        let r = match method {
            Method::BruteForce => brute_force(joint, kind)?,
            Method::Spectral | Method::Recursive => spectral_threshold_search(joint, kind)?,
        };
        out.push(FrontierPoint {
            param,
            h_phi_x: label_entropy_x(joint, &r.labeling),
            helper_rate: helper_rate_general(joint, &r.labeling),
            p_err: disagreement_probability(joint, &r.labeling),
            objective_value: r.objective_value,
            method,
        });
    }
    if method == Method::BruteForce {
        check_monotone(grid, &out)?;
    }
    Ok(out)
}

fn check_monotone(grid: &SweepGrid, points: &[FrontierPoint]) -> Result<(), SearchError> {
    for w in points.windows(2) {
        let (a, b) = (w[0], w[1]);
        let detail = match grid {
            SweepGrid::Epsilon(_) if b.h_phi_x < a.h_phi_x - MONOTONE_SLACK => {
                Some(format!("entropy fell from {} to {}", a.h_phi_x, b.h_phi_x))
            }
            SweepGrid::Lambda(_) if b.h_phi_x > a.h_phi_x + MONOTONE_SLACK => {
                Some(format!("entropy rose from {} to {}", a.h_phi_x, b.h_phi_x))
            }
            SweepGrid::Lambda(_) if b.helper_rate > a.helper_rate + MONOTONE_SLACK => {
                Some(format!("helper rate rose from {} to {}", a.helper_rate, b.helper_rate))
            }
            _ => None,
        };
        if let Some(detail) = detail {
            return Err(SearchError::NonMonotone { param: b.param, detail });
        }
    }
    Ok(())
}

/// Brute-force optimum of the conductance ratio compared with the
/// brute-force optimum of the sign-vector Lagrangian at each grid lambda.
#[derive(Debug, Clone)]
pub struct ConductanceAgreement {
    pub conductance_optimum: SearchResult,
    /// Grid values whose matrix-objective optimum equals the conductance
    /// optimum (both sign-normalized).
    pub matching_lambdas: Vec<f64>,
}

pub fn conductance_agreement(
    joint: &JointDistribution,
    lambda_grid: &[f64],
) -> Result<ConductanceAgreement, SearchError> {
    let conductance_optimum = brute_force(joint, ObjectiveKind::Conductance)?;
    let target = sign_normalize(joint, &conductance_optimum.labeling);
    let mut matching_lambdas = Vec::new();
    for &lambda in lambda_grid {
        let r = brute_force(joint, ObjectiveKind::MatrixBinary(lambda))?;
        if sign_normalize(joint, &r.labeling) == target {
            matching_lambdas.push(lambda);
        }
    }
    Ok(ConductanceAgreement {
        conductance_optimum,
        matching_lambdas,
    })
}

/// Convenience for the zero-helper case: best binary zero-error labeling.
pub fn zero_helper_entropy(joint: &JointDistribution) -> Result<f64, SearchError> {
    Ok(brute_force_constrained(joint, 0.0)?.objective_value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;

    #[test]
    fn block_crossover_at_grid_minimum() {
        let grid = default_lambda_grid();
        let s = lambda_max_estimate(&examples::block(), &grid).unwrap();
        assert_eq!(s.crossover, Some(grid[0]));
    }

    #[test]
    fn delta_and_independent_have_finite_crossover() {
        for j in [examples::delta(0.1), examples::independent_uniform()] {
            let s = lambda_max_estimate(&j, &default_lambda_grid()).unwrap();
            let c = s.crossover.expect("crossover exists");
            assert!(c > default_lambda_grid()[0], "{c}");
            for p in s.points.iter().filter(|p| p.lambda >= c) {
                assert_eq!(p.p_err, 0.0);
                assert_eq!(p.h_phi_x, s.h_k);
            }
        }
    }

    #[test]
    fn block_frontier_is_flat() {
        let grid = SweepGrid::Epsilon(vec![0.0, 0.1, 0.5, 1.0]);
        let f = tradeoff_sweep(&examples::block(), &grid, Method::BruteForce).unwrap();
        for p in f {
            assert!((p.h_phi_x - 1.0).abs() < 1e-12);
            assert_eq!(p.helper_rate, 0.0);
        }
    }

    #[test]
    fn delta_frontier_steps() {
        let grid = SweepGrid::Epsilon((0..=20).map(|k| k as f64 * 0.01).collect());
        let j = examples::delta(0.1);
        let f = tradeoff_sweep(&j, &grid, Method::BruteForce).unwrap();
        assert_eq!((f[0].h_phi_x, f[0].helper_rate), (0.0, 0.0));
        let last = f.last().unwrap();
        assert!((last.h_phi_x - 1.0).abs() < 1e-12 && last.helper_rate > 0.0);
        let spectral = tradeoff_sweep(&j, &grid, Method::Spectral).unwrap();
        for (s, b) in spectral.iter().zip(&f) {
            assert!(s.objective_value <= b.objective_value + 1e-9);
        }
    }

    #[test]
    fn lambda_frontier_is_monotone() {
        let grid = SweepGrid::Lambda(default_lambda_grid());
        for j in [examples::delta(0.2), examples::epsilon(0.3)] {
            tradeoff_sweep(&j, &grid, Method::BruteForce).unwrap();
        }
    }

    #[test]
    fn conductance_agreement_runs() {
        let j = examples::delta(0.1);
        let a = conductance_agreement(&j, &default_lambda_grid()).unwrap();
        assert!(a.conductance_optimum.objective_value >= 40.0 - 1e-9);
        assert_eq!(zero_helper_entropy(&examples::block()).unwrap(), 1.0);
    }
}
