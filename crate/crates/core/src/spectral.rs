//! The normalized matrix Q = D_X^{-1/2} P D_Y^{-1/2}, its singular value
//! decomposition, and the normalized Laplacian of the bipartite support
//! graph.
//!
//! Singular values are reported in descending order, so the first one is
//! always 1 and the maximal correlation is the second, sigma_2. Identities
//! are expressed in terms of sigma_2 itself; the squared variant
//! 1 - sigma_2^2 is reported alongside for comparison.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::dist::JointDistribution;

/// |sigma - 1| at or below this counts as a unit singular value.
pub const UNIT_TOLERANCE: f64 = 1e-8;

/// Two singular values this close make the sigma_2 pair non-unique.
pub const DEGENERACY_TOLERANCE: f64 = 1e-12;

const MAX_ITERATIONS: usize = 10_000;

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("singular value decomposition did not converge")]
    SvdNoConvergence,
    #[error("symmetric eigendecomposition did not converge")]
    EigenNoConvergence,
}

#[derive(Debug, Clone)]
pub struct SpectralSummary {
    /// Descending, length min(n_X, n_Y).
    pub singular_values: Vec<f64>,
    /// Column k pairs with `singular_values[k]`; n_X x d.
    pub left_vectors: DMatrix<f64>,
    /// n_Y x d.
    pub right_vectors: DMatrix<f64>,
    /// sigma_2, or 0 when min(n_X, n_Y) = 1.
    pub maximal_correlation: f64,
    pub multiplicity_of_one: usize,
    /// Ascending, length n_X + n_Y.
    pub laplacian_eigenvalues: Vec<f64>,
    /// Set when sigma_2 and sigma_3 coincide, so the second singular pair
    /// is not unique.
    pub degenerate_second: bool,
}

impl SpectralSummary {
    /// Left and right singular vectors of sigma_2, if d >= 2.
    pub fn second_pair(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        (self.singular_values.len() >= 2).then(|| {
            (
                self.left_vectors.column(1).iter().copied().collect(),
                self.right_vectors.column(1).iter().copied().collect(),
            )
        })
    }
}

/// Q(i, j) = P(i, j) / sqrt(p_X(i) p_Y(j)).
pub fn build_q_matrix(joint: &JointDistribution) -> DMatrix<f64> {
    let rows = joint.row_sums();
    let cols = joint.col_sums();
    DMatrix::from_fn(joint.n_x(), joint.n_y(), |i, j| {
        joint.get(i, j) / (rows[i] * cols[j]).sqrt()
    })
}

/// D^{-1/2} A D^{-1/2} for A = [[0, P], [P^T, 0]], assembled entrywise from
/// P and its marginals.
pub fn normalized_adjacency(joint: &JointDistribution) -> DMatrix<f64> {
    let (n_x, n_y) = (joint.n_x(), joint.n_y());
    let n = n_x + n_y;
    let mut degree = joint.row_sums();
    degree.extend(joint.col_sums());
    let mut adjacency = DMatrix::zeros(n, n);
    for i in 0..n_x {
        for j in 0..n_y {
            let w = joint.get(i, j);
            adjacency[(i, n_x + j)] = w;
            adjacency[(n_x + j, i)] = w;
        }
    }
    let scale = DVector::from_iterator(n, degree.iter().map(|d| 1.0 / d.sqrt()));
    DMatrix::from_fn(n, n, |a, b| scale[a] * adjacency[(a, b)] * scale[b])
}

/// N = I - D^{-1/2} A D^{-1/2}.
pub fn normalized_laplacian(joint: &JointDistribution) -> DMatrix<f64> {
    let b = normalized_adjacency(joint);
    DMatrix::identity(b.nrows(), b.ncols()) - b
}

fn symmetric_eigenvalues(m: DMatrix<f64>) -> Result<Vec<f64>, SpectralError> {
    let eigen = m
        .try_symmetric_eigen(f64::EPSILON, MAX_ITERATIONS)
        .ok_or(SpectralError::EigenNoConvergence)?;
    let mut values: Vec<f64> = eigen.eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

pub fn spectral_summary(joint: &JointDistribution) -> Result<SpectralSummary, SpectralError> {
    let q = build_q_matrix(joint);
    let svd = q
        .clone()
        .try_svd(true, true, f64::EPSILON, MAX_ITERATIONS)
        .ok_or(SpectralError::SvdNoConvergence)?;
    let u = svd.u.expect("u requested");
    let v = svd.v_t.expect("v_t requested").transpose();
    let d = svd.singular_values.len();

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let singular_values: Vec<f64> = order.iter().map(|&k| svd.singular_values[k]).collect();
    let mut left_vectors = DMatrix::zeros(joint.n_x(), d);
    let mut right_vectors = DMatrix::zeros(joint.n_y(), d);
    for (dst, &src) in order.iter().enumerate() {
        let mut lu = u.column(src).clone_owned();
        let mut rv = v.column(src).clone_owned();
        // deterministic sign: the largest-magnitude left entry is positive
        let pivot = lu
            .iter()
            .enumerate()
            .fold((0, 0.0f64), |best, (i, x)| if x.abs() > best.1.abs() + 1e-12 { (i, *x) } else { best });
        if pivot.1 < 0.0 {
            lu = -lu;
            rv = -rv;
        }
        left_vectors.set_column(dst, &lu);
        right_vectors.set_column(dst, &rv);
    }

    let maximal_correlation = singular_values.get(1).copied().unwrap_or(0.0);
    let multiplicity_of_one = singular_values
        .iter()
        .filter(|s| (*s - 1.0).abs() <= UNIT_TOLERANCE)
        .count();
    if multiplicity_of_one >= 2 {
        separate_trivial_pair(joint, &q, multiplicity_of_one, &mut left_vectors, &mut right_vectors);
    }
    let degenerate_second =
        d >= 3 && (singular_values[1] - singular_values[2]).abs() <= DEGENERACY_TOLERANCE;

    Ok(SpectralSummary {
        singular_values,
        left_vectors,
        right_vectors,
        maximal_correlation,
        multiplicity_of_one,
        laplacian_eigenvalues: symmetric_eigenvalues(normalized_laplacian(joint))?,
        degenerate_second,
    })
}

/// Within a repeated unit singular value the SVD basis is arbitrary. Puts
/// the trivial pair (sqrt p_X, sqrt p_Y) first and, second, the unit pair
/// orthogonal to it, so that the second left vector is constant in sign on
/// each connected component.
fn separate_trivial_pair(
    joint: &JointDistribution,
    q: &DMatrix<f64>,
    multiplicity: usize,
    left: &mut DMatrix<f64>,
    right: &mut DMatrix<f64>,
) {
    let trivial_x = DVector::from_iterator(joint.n_x(), joint.row_sums().into_iter().map(f64::sqrt));
    let trivial_y = DVector::from_iterator(joint.n_y(), joint.col_sums().into_iter().map(f64::sqrt));
    let second = (0..multiplicity)
        .map(|k| {
            let c = left.column(k).clone_owned();
            let d = trivial_x.dot(&c);
            c - &trivial_x * d
        })
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .expect("multiplicity is at least two");
    let mut lu = second.normalize();
    let mut rv = q.transpose() * &lu;
    rv /= rv.norm();
    if lu.iter().fold(0.0f64, |m, &x| if x.abs() > m.abs() + 1e-12 { x } else { m }) < 0.0 {
        lu = -lu;
        rv = -rv;
    }
    left.set_column(0, &trivial_x);
    right.set_column(0, &trivial_y);
    left.set_column(1, &lu);
    right.set_column(1, &rv);
}

/// Comparison of the second-smallest Laplacian eigenvalue with 1 - sigma_2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplacianCheck {
    pub nu: f64,
    pub sigma2: f64,
    /// |nu - (1 - sigma_2)|
    pub residual: f64,
    /// |nu - (1 - sigma_2^2)|, the squared-correlation reading.
    pub residual_squared: f64,
    pub pass: bool,
}

/// Checks nu = 1 - sigma_2. The Laplacian eigenvalues and the singular
/// values come from two separate decompositions.
///
/// The identity needs at least three nodes: for a single support edge the
/// Laplacian spectrum is {0, 2} and the check fails.
pub fn verify_laplacian_identity(
    joint: &JointDistribution,
    tol: f64,
) -> Result<LaplacianCheck, SpectralError> {
    let s = spectral_summary(joint)?;
    let nu = s.laplacian_eigenvalues[1];
    let sigma2 = s.maximal_correlation;
    let residual = (nu - (1.0 - sigma2)).abs();
    Ok(LaplacianCheck {
        nu,
        sigma2,
        residual,
        residual_squared: (nu - (1.0 - sigma2 * sigma2)).abs(),
        pass: residual <= tol,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProofCheck {
    /// Largest deviation between the two sorted multisets.
    pub max_deviation: f64,
    pub pass: bool,
}

/// Checks that the eigenvalues of D^{-1/2} A D^{-1/2} are exactly
/// {+sigma_i} and {-sigma_i}, padded with |n_X - n_Y| zeros.
pub fn proof_identity_check(joint: &JointDistribution) -> Result<ProofCheck, SpectralError> {
    let s = spectral_summary(joint)?;
    let eigen = symmetric_eigenvalues(normalized_adjacency(joint))?;
    let mut expected: Vec<f64> = s
        .singular_values
        .iter()
        .flat_map(|&x| [x, -x])
        .chain(std::iter::repeat_n(0.0, joint.n_x().abs_diff(joint.n_y())))
        .collect();
    expected.sort_by(f64::total_cmp);
    let max_deviation = eigen
        .iter()
        .zip(&expected)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(ProofCheck {
        max_deviation,
        pass: eigen.len() == expected.len() && max_deviation <= UNIT_TOLERANCE,
    })
}
