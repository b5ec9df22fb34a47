use super::{
    helper_rate_binary, helper_rate_general, helper_rate_general_y, label_entropy_x,
    label_entropy_y, residual_entropy_x, residual_entropy_y, LabelError, LabelingPair,
};
use crate::dist::JointDistribution;

/// One achievable (R_X, R_Y, R_H) triple in bits per symbol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePoint {
    /// Time-sharing weight; `None` for corner points not on an alpha sweep.
    pub alpha: Option<f64>,
    pub r_x: f64,
    pub r_y: f64,
    pub r_h: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateRegion {
    pub corner_points: Vec<RatePoint>,
    /// Points on the sum-rate-tight boundary, one per alpha.
    pub dominant_face: Vec<RatePoint>,
    pub alpha_grid: Vec<f64>,
    /// Lower bounds (R_X, R_Y) and the sum-rate bound as an affine function
    /// of alpha: sum_bound(alpha) = sum_base + alpha H(phi_X) + (1-alpha) H(phi_Y).
    pub min_r_x: f64,
    pub min_r_y: f64,
    pub h_phi_x: f64,
    pub h_phi_y: f64,
}

impl RateRegion {
    /// H(X|phi_X) + H(Y|phi_Y) + alpha H(phi_X) + (1 - alpha) H(phi_Y).
    pub fn sum_rate_bound(&self, alpha: f64) -> f64 {
        self.min_r_x + self.min_r_y + alpha * self.h_phi_x + (1.0 - alpha) * self.h_phi_y
    }

    /// dR_Y / dR_X along the dominant face; `None` when the face is a point.
    pub fn dominant_face_slope(&self) -> Option<f64> {
        (self.h_phi_x > 0.0).then(|| -self.h_phi_y / self.h_phi_x)
    }

    /// Whether a point meets the individual bounds and the sum bound for
    /// some alpha in [0, 1], with `tol` slack.
    pub fn contains(&self, r_x: f64, r_y: f64, tol: f64) -> bool {
        let best_sum = self.sum_rate_bound(0.0).min(self.sum_rate_bound(1.0));
        r_x + tol >= self.min_r_x && r_y + tol >= self.min_r_y && r_x + r_y + tol >= best_sum
    }
}

/// 101 evenly spaced points on [0, 1].
pub fn default_alpha_grid() -> Vec<f64> {
    (0..=100).map(|k| k as f64 / 100.0).collect()
}

/// Region of the binary-function scheme: time sharing between the corners
/// (H(X|phi_X), H(Y)) at alpha = 0 and (H(X), H(Y|phi_Y)) at alpha = 1, with
/// a helper of rate h(P_err) throughout.
pub fn rate_region_binary(
    joint: &JointDistribution,
    labels: &LabelingPair,
    alpha_grid: &[f64],
) -> Result<RateRegion, LabelError> {
    let r_h = helper_rate_binary(joint, labels).ok_or(LabelError::NotBinary(labels.num_labels()))?;
    let min_r_x = residual_entropy_x(joint, labels);
    let min_r_y = residual_entropy_y(joint, labels);
    let h_phi_x = label_entropy_x(joint, labels);
    let h_phi_y = label_entropy_y(joint, labels);
    let at = |alpha: f64| RatePoint {
        alpha: Some(alpha),
        r_x: min_r_x + alpha * h_phi_x,
        r_y: min_r_y + (1.0 - alpha) * h_phi_y,
        r_h,
    };
    Ok(RateRegion {
        corner_points: vec![at(0.0), at(1.0)],
        dominant_face: alpha_grid.iter().map(|&a| at(a)).collect(),
        alpha_grid: alpha_grid.to_vec(),
        min_r_x,
        min_r_y,
        h_phi_x,
        h_phi_y,
    })
}

/// Corner point (H(X|phi_X), H(Y), H(phi_X|phi_Y)) and its mirror
/// (H(X), H(Y|phi_Y), H(phi_Y|phi_X)). No interior points are produced.
pub fn rate_region_general(joint: &JointDistribution, labels: &LabelingPair) -> RateRegion {
    let min_r_x = residual_entropy_x(joint, labels);
    let min_r_y = residual_entropy_y(joint, labels);
    let h_phi_x = label_entropy_x(joint, labels);
    let h_phi_y = label_entropy_y(joint, labels);
    RateRegion {
        corner_points: vec![
            RatePoint {
                alpha: None,
                r_x: min_r_x,
                r_y: min_r_y + h_phi_y,
                r_h: helper_rate_general(joint, labels),
            },
            RatePoint {
                alpha: None,
                r_x: min_r_x + h_phi_x,
                r_y: min_r_y,
                r_h: helper_rate_general_y(joint, labels),
            },
        ],
        dominant_face: Vec::new(),
        alpha_grid: Vec::new(),
        min_r_x,
        min_r_y,
        h_phi_x,
        h_phi_y,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::components::gk_labelings;
    use crate::dist::{conditional_entropy, marginals, entropy, Conditioning};
    use crate::examples;

    #[test]
    fn block_gk_region_is_three_bits() {
        let j = examples::block();
        let region = rate_region_binary(&j, &gk_labelings(&j), &default_alpha_grid()).unwrap();
        for p in &region.dominant_face {
            assert!((p.r_x + p.r_y - 3.0).abs() < 1e-12);
            assert_eq!(p.r_h, 0.0);
        }
        // H(X|K) + H(Y|K) + H(K), with each term evaluated independently
        let hk = 1.0;
        let hx_k = conditional_entropy(&j, Conditioning::XGivenY);
        assert!((region.sum_rate_bound(0.5) - (2.0 * hx_k + hk)).abs() < 1e-12);
        assert_eq!(region.dominant_face_slope(), Some(-1.0));
    }

    #[test]
    fn epsilon_region_is_not_symmetric() {
        let j = examples::epsilon(0.2);
        let l = examples::epsilon_labeling();
        let region = rate_region_binary(&j, &l, &default_alpha_grid()).unwrap();
        assert!((region.min_r_x - 0.550_978).abs() < 1e-5);
        let (_, py) = marginals(&j);
        let corner = region.corner_points[0];
        assert!((corner.r_y - entropy(&py)).abs() < 1e-12);
        let slope = region.dominant_face_slope().unwrap();
        assert!((slope + 1.0).abs() > 1e-3, "slope {slope}");
        let ends = (region.sum_rate_bound(0.0), region.sum_rate_bound(1.0));
        assert!((ends.0 - ends.1).abs() > 1e-3);
        for p in &region.corner_points {
            assert!(region.contains(p.r_x, p.r_y, 1e-9));
        }
        assert!((corner.r_h - 0.468_996).abs() < 1e-5);
    }

    #[test]
    fn general_corners() {
        let j = examples::block();
        let r = rate_region_general(&j, &gk_labelings(&j));
        let c = r.corner_points[0];
        assert!((c.r_x - 1.0).abs() < 1e-12);
        assert!((c.r_y - 2.0).abs() < 1e-12);
        assert_eq!(c.r_h, 0.0);

        let p = examples::point_mass();
        let r = rate_region_general(&p, &gk_labelings(&p));
        assert_eq!((r.corner_points[0].r_x, r.corner_points[0].r_y, r.corner_points[0].r_h), (0.0, 0.0, 0.0));

        let j = examples::epsilon(0.2);
        let l = examples::epsilon_labeling();
        let r = rate_region_general(&j, &l);
        let c = r.corner_points[0];
        assert!((c.r_x - 0.550_978).abs() < 1e-5);
        assert!((c.r_y - 1.0).abs() < 1e-12);
        assert!((c.r_h - helper_rate_general(&j, &l)).abs() < 1e-15);
    }

    #[test]
    fn sum_bound_is_affine_in_alpha() {
        let j = examples::epsilon(0.3);
        let l = examples::epsilon_labeling();
        let r = rate_region_binary(&j, &l, &default_alpha_grid()).unwrap();
        let slope = r.h_phi_x - r.h_phi_y;
        for w in r.alpha_grid.windows(2) {
            let d = r.sum_rate_bound(w[1]) - r.sum_rate_bound(w[0]);
            assert!((d - slope * (w[1] - w[0])).abs() < 1e-12);
        }
    }

    #[test]
    fn binary_region_rejects_three_labels() {
        let j = examples::three_blocks();
        assert!(rate_region_binary(&j, &gk_labelings(&j), &[0.0]).is_err());
    }
}
