//! Brick classification from appearance and state residuals.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::features::DescriptorMode;
use crate::subspace::SubspaceModel;

/// Residuals of one descriptor against a location model.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualPair {
    /// Appearance residual `v − C z′`, length m.
    pub omega: Vec<f64>,
    /// State residual `B⁺ (z′ − A z)`, length d_ε (empty when d_ε = 0).
    pub epsilon: Vec<f64>,
    /// Projected state `Cᵀ v`, length d.
    pub z_prime: Vec<f64>,
}

pub fn compute_residuals(model: &SubspaceModel, v: &[f64]) -> Result<ResidualPair> {
    if v.len() != model.m() {
        return Err(Error::DimensionMismatch {
            expected: model.m(),
            actual: v.len(),
        });
    }
    let c = model.c();
    let z_prime = c.tr_mul_vec(v)?;
    let recon = c.mul_vec(&z_prime)?;
    let omega: Vec<f64> = v.iter().zip(&recon).map(|(a, b)| a - b).collect();
    let epsilon = if model.d_eps() == 0 {
        Vec::new()
    } else {
        let predicted = model.a().mul_vec(model.z_latest())?;
        let innovation: Vec<f64> = z_prime.iter().zip(&predicted).map(|(a, b)| a - b).collect();
        model.b_pinv().mul_vec(&innovation)?
    };
    Ok(ResidualPair {
        omega,
        epsilon,
        z_prime,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    pub t_eps: f64,
    pub t_omega: f64,
}

/// How descriptor entries map onto brick voxels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VoxelLayout {
    pub mode: DescriptorMode,
    pub voxels: usize,
    pub channels: usize,
}

/// Background flag plus per-voxel foreground mask in (t, y, x) order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BrickLabel {
    pub is_background: bool,
    pub voxel_mask: Vec<bool>,
}

impl BrickLabel {
    pub fn background(voxels: usize) -> Self {
        BrickLabel {
            is_background: true,
            voxel_mask: vec![false; voxels],
        }
    }

    pub fn foreground_voxels(&self) -> usize {
        self.voxel_mask.iter().filter(|&&b| b).count()
    }
}

#[inline]
fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Background iff every `|ε_k| < T_ε`; with no state residual the appearance
/// residual decides (`‖ω‖∞ < T_ω`). Non-background RGB bricks are labelled
/// per voxel (any channel with `|ω| > T_ω`); CS-STLTP bricks are labelled as
/// a whole and left for pixel refinement.
pub fn classify(residuals: &ResidualPair, thresholds: Thresholds, layout: VoxelLayout) -> BrickLabel {
    let background = if residuals.epsilon.is_empty() {
        max_abs(&residuals.omega) < thresholds.t_omega
    } else {
        max_abs(&residuals.epsilon) < thresholds.t_eps
    };
    if background {
        return BrickLabel::background(layout.voxels);
    }
    let voxel_mask = match layout.mode {
        DescriptorMode::Rgb => residuals
            .omega
            .chunks(layout.channels)
            .map(|ch| ch.iter().any(|w| w.abs() > thresholds.t_omega))
            .collect(),
        DescriptorMode::CsStltp => vec![true; layout.voxels],
    };
    BrickLabel {
        is_background: false,
        voxel_mask,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Matrix;

    fn e1_model(m: usize) -> SubspaceModel {
        let c = Matrix::from_fn(m, 1, |r, _| if r == 0 { 1.0 } else { 0.0 });
        SubspaceModel::from_parts(
            c,
            vec![1.0],
            Matrix::identity(1),
            Matrix::identity(1),
            vec![1.0],
            60,
        )
        .unwrap()
    }

    fn rgb_layout(voxels: usize) -> VoxelLayout {
        VoxelLayout {
            mode: DescriptorMode::Rgb,
            voxels,
            channels: 1,
        }
    }

    #[test]
    fn worked_two_dimensional_case() {
        let model = e1_model(2);
        let r = compute_residuals(&model, &[2.0, 3.0]).unwrap();
        assert_eq!(r.z_prime, vec![2.0]);
        assert_eq!(r.omega, vec![0.0, 3.0]);
        assert_eq!(r.epsilon, vec![1.0]);
    }

    #[test]
    fn perfect_prediction_has_zero_residuals() {
        let model = e1_model(3);
        let r = compute_residuals(&model, &[1.0, 0.0, 0.0]).unwrap();
        assert_eq!(r.omega, vec![0.0; 3]);
        assert_eq!(r.epsilon, vec![0.0]);
    }

    #[test]
    fn orthogonal_input_is_all_residual() {
        let model = e1_model(3);
        let r = compute_residuals(&model, &[0.0, -4.0, 2.5]).unwrap();
        assert_eq!(r.omega, vec![0.0, -4.0, 2.5]);
    }

    #[test]
    fn length_mismatch_rejected() {
        let model = e1_model(3);
        assert!(compute_residuals(&model, &[1.0]).is_err());
    }

    #[test]
    fn small_state_residual_is_background() {
        let r = ResidualPair {
            omega: vec![100.0; 4],
            epsilon: vec![0.1, -0.2],
            z_prime: vec![0.0],
        };
        let t = Thresholds { t_eps: 3.0, t_omega: 5.0 };
        let label = classify(&r, t, rgb_layout(4));
        assert!(label.is_background);
        assert_eq!(label.foreground_voxels(), 0);
    }

    #[test]
    fn rgb_voxels_split_by_appearance_residual() {
        let r = ResidualPair {
            omega: vec![0.0, 9.0, -1.0, 2.0],
            epsilon: vec![5.0],
            z_prime: vec![0.0],
        };
        let t = Thresholds { t_eps: 3.0, t_omega: 5.0 };
        let label = classify(&r, t, rgb_layout(4));
        assert!(!label.is_background);
        assert_eq!(label.voxel_mask, vec![false, true, false, false]);

        let quiet = ResidualPair {
            omega: vec![1.0; 4],
            ..r
        };
        let label = classify(&quiet, t, rgb_layout(4));
        assert!(!label.is_background);
        assert_eq!(label.foreground_voxels(), 0);
    }

    #[test]
    fn rgb_channels_grouped_per_voxel() {
        let r = ResidualPair {
            omega: vec![0.0, 0.0, 6.0, 0.0, 0.0, 0.0],
            epsilon: vec![9.0],
            z_prime: vec![],
        };
        let layout = VoxelLayout {
            mode: DescriptorMode::Rgb,
            voxels: 2,
            channels: 3,
        };
        let label = classify(&r, Thresholds { t_eps: 4.0, t_omega: 5.0 }, layout);
        assert_eq!(label.voxel_mask, vec![true, false]);
    }

    #[test]
    fn empty_state_residual_falls_back_to_appearance() {
        let t = Thresholds { t_eps: 3.0, t_omega: 3.0 };
        let layout = VoxelLayout {
            mode: DescriptorMode::CsStltp,
            voxels: 80,
            channels: 1,
        };
        let quiet = ResidualPair {
            omega: vec![1.0, -2.0],
            epsilon: vec![],
            z_prime: vec![],
        };
        assert!(classify(&quiet, t, layout).is_background);
        let loud = ResidualPair {
            omega: vec![1.0, -8.0],
            ..quiet
        };
        let label = classify(&loud, t, layout);
        assert!(!label.is_background);
        assert_eq!(label.foreground_voxels(), 80);
    }
}
