//! Online model maintenance.
//!
//! Each new brick goes through: synthesis of a noise-free prediction,
//! replacement of foreground entries by that prediction, robust per-entry
//! down-weighting, an incremental eigenbasis update of the approximate
//! covariance `(1−α)·CΛCᵀ + α·ṽṽᵀ`, and a least-squares re-fit of the
//! dynamics on the most recent states.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::features::DescriptorMode;
use crate::float::sqrt;
use crate::numerics::{complete_orthonormal, dot, eig_sym, norm, Matrix, RANK_EPS};
use crate::segmentation::{BrickLabel, VoxelLayout};
use crate::subspace::{fit_dynamics, DimRule, SubspaceModel};

/// Lower bound on the robust scale `ρ_k`.
pub const RHO_FLOOR: f64 = 1e-9;

/// Intermediate vectors of one maintenance step.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthesizedObservation {
    /// Model prediction `C A z`.
    pub v_hat: Vec<f64>,
    /// Observation with foreground entries replaced by the prediction.
    pub v_bar: Vec<f64>,
    /// Robustly reweighted observation fed to the eigenbasis update.
    pub v_tilde: Vec<f64>,
    /// Per-entry weights in (0, 1].
    pub weights: Vec<f64>,
}

/// Noise-free brick `v̂ = C · (A · z_latest)`.
pub fn synthesize(model: &SubspaceModel) -> Result<Vec<f64>> {
    let z_hat = model.a().mul_vec(model.z_latest())?;
    model.c().mul_vec(&z_hat)
}

/// Replaces foreground entries of `v_new` by `v_hat`.
///
/// RGB descriptors are replaced voxel by voxel. Histogram entries cannot be
/// attributed to voxels, so a non-background CS-STLTP brick is replaced as a
/// whole.
pub fn compose(v_new: &[f64], label: &BrickLabel, v_hat: &[f64], layout: VoxelLayout) -> Result<Vec<f64>> {
    if v_new.len() != v_hat.len() {
        return Err(Error::DimensionMismatch {
            expected: v_new.len(),
            actual: v_hat.len(),
        });
    }
    match layout.mode {
        DescriptorMode::CsStltp => Ok(if label.is_background {
            v_new.to_vec()
        } else {
            v_hat.to_vec()
        }),
        DescriptorMode::Rgb => {
            let ch = layout.channels;
            if label.voxel_mask.len() * ch != v_new.len() {
                return Err(Error::DimensionMismatch {
                    expected: v_new.len(),
                    actual: label.voxel_mask.len() * ch,
                });
            }
            let mut out = v_new.to_vec();
            for (i, &fg) in label.voxel_mask.iter().enumerate() {
                if fg {
                    out[i * ch..(i + 1) * ch].copy_from_slice(&v_hat[i * ch..(i + 1) * ch]);
                }
            }
            Ok(out)
        }
    }
}

/// `w(r) = 1 / (1 + (r/ρ)²)`, kept strictly positive.
#[inline]
pub fn robust_weight(r: f64, rho: f64) -> f64 {
    let q = r / rho;
    (1.0 / (1.0 + q * q)).max(f64::MIN_POSITIVE)
}

/// Per-entry scale `ρ_k = max_j β·√λ_j·|C_kj|`, floored at [`RHO_FLOOR`].
pub fn robust_scales(model: &SubspaceModel, beta: f64) -> Vec<f64> {
    let c = model.c();
    let roots: Vec<f64> = model.lambda().iter().map(|&l| sqrt(l.max(0.0))).collect();
    (0..c.rows())
        .map(|k| {
            let rho = c
                .row(k)
                .iter()
                .zip(&roots)
                .fold(0.0f64, |m, (ckj, rl)| m.max(beta * rl * ckj.abs()));
            rho.max(RHO_FLOOR)
        })
        .collect()
}

/// Down-weights entries with large reconstruction error
/// `r = C Cᵀ v̄ − v̄`: `ṽ_k = √w(r_k) · v̄_k`. Returns `(ṽ, w)`.
pub fn robust_reweight(model: &SubspaceModel, v_bar: &[f64], beta: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if v_bar.len() != model.m() {
        return Err(Error::DimensionMismatch {
            expected: model.m(),
            actual: v_bar.len(),
        });
    }
    let c = model.c();
    let recon = c.mul_vec(&c.tr_mul_vec(v_bar)?)?;
    let rho = robust_scales(model, beta);
    let mut v_tilde = Vec::with_capacity(v_bar.len());
    let mut weights = Vec::with_capacity(v_bar.len());
    for k in 0..v_bar.len() {
        let w = robust_weight(recon[k] - v_bar[k], rho[k]);
        weights.push(w);
        v_tilde.push(sqrt(w) * v_bar[k]);
    }
    Ok((v_tilde, weights))
}

/// Incremental eigenbasis update through the small `(d+1)×(d+1)` matrix
/// `YᵀY`, keeping the top `d` eigenpairs.
///
/// New basis vectors are signed to agree with their predecessors, and all
/// buffered states are re-expressed in the new basis (`z ← C′ᵀ C z`) so the
/// dynamics keep seeing one consistent coordinate system.
pub fn update_appearance(model: &mut SubspaceModel, v_tilde: &[f64], alpha: f64) -> Result<()> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::invalid("alpha must lie in [0, 1)"));
    }
    let m = model.m();
    let d = model.d();
    if v_tilde.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            actual: v_tilde.len(),
        });
    }
    let old = model.c().clone();
    let lambda = model.lambda();
    let keep = 1.0 - alpha;
    let sa = sqrt(alpha);
    let y = Matrix::from_fn(m, d + 1, |r, j| {
        if j < d {
            sqrt((keep * lambda[j]).max(0.0)) * old[(r, j)]
        } else {
            sa * v_tilde[r]
        }
    });
    let (vals, vecs) = eig_sym(&y.gram())?;
    let cutoff = RANK_EPS * vals[0].max(0.0);

    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(d);
    let mut new_lambda = Vec::with_capacity(d);
    for (j, &lj) in vals.iter().enumerate().take(d) {
        if lj <= cutoff || lj <= 0.0 {
            break;
        }
        let e = vecs.column(j);
        let s = 1.0 / sqrt(lj);
        let col: Vec<f64> = (0..m).map(|r| dot(y.row(r), &e) * s).collect();
        cols.push(col);
        new_lambda.push(lj);
    }
    if cols.len() < d {
        // Rank-deficient update: fill with what survives of the old basis,
        // then with standard basis vectors.
        for j in 0..d {
            if cols.len() == d {
                break;
            }
            let mut cand = old.column(j);
            for _ in 0..2 {
                for c in &cols {
                    let p = dot(c, &cand);
                    cand.iter_mut().zip(c).for_each(|(x, ci)| *x -= p * ci);
                }
            }
            let n = norm(&cand);
            if n > 1e-6 {
                cand.iter_mut().for_each(|x| *x /= n);
                cols.push(cand);
            }
        }
        complete_orthonormal(&mut cols, m, d);
        new_lambda.resize(d, 0.0);
    }
    for (j, col) in cols.iter_mut().enumerate() {
        let old_col = old.column(j);
        if dot(col, &old_col) < 0.0 {
            col.iter_mut().for_each(|x| *x = -*x);
        }
    }
    let c_new = Matrix::from_columns(m, &cols)?;
    let rotation = c_new.transpose().matmul(&old)?;
    model.set_appearance(c_new, new_lambda);
    model.transform_states(&rotation)
}

/// Appends `z_new` to the state buffer and, with at least two states, re-fits
/// `A` and `B` on the buffer. Returns whether the dynamics were re-fitted.
pub fn update_dynamics(model: &mut SubspaceModel, z_new: Vec<f64>, t_deps: f64, rule: DimRule) -> Result<bool> {
    if z_new.len() != model.d() {
        return Err(Error::DimensionMismatch {
            expected: model.d(),
            actual: z_new.len(),
        });
    }
    model.push_state(z_new);
    if model.states().len() < 2 {
        return Ok(false);
    }
    let dynamics = fit_dynamics(model.states().iter(), model.d(), t_deps, rule)?;
    model.set_dynamics(dynamics);
    Ok(true)
}

/// Rates used by [`maintain`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaintenanceParams {
    pub alpha: f64,
    pub beta: f64,
    pub t_deps: f64,
    pub dim_rule: DimRule,
}

/// Runs one full update of `model` with a freshly labelled brick.
pub fn maintain(
    model: &mut SubspaceModel,
    v_new: &[f64],
    label: &BrickLabel,
    layout: VoxelLayout,
    params: MaintenanceParams,
) -> Result<SynthesizedObservation> {
    let v_hat = synthesize(model)?;
    let v_bar = compose(v_new, label, &v_hat, layout)?;
    let (v_tilde, weights) = robust_reweight(model, &v_bar, params.beta)?;
    update_appearance(model, &v_tilde, params.alpha)?;
    let z_new = model.c().tr_mul_vec(&v_tilde)?;
    update_dynamics(model, z_new, params.t_deps, params.dim_rule)?;
    Ok(SynthesizedObservation {
        v_hat,
        v_bar,
        v_tilde,
        weights,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn model_with(c: Matrix, lambda: Vec<f64>, a: Matrix, z: Vec<f64>) -> SubspaceModel {
        let d = c.cols();
        SubspaceModel::from_parts(c, lambda, a, Matrix::zeros(d, 0), z, 60).unwrap()
    }

    fn axis(m: usize, k: usize) -> Matrix {
        Matrix::from_fn(m, 1, |r, _| if r == k { 1.0 } else { 0.0 })
    }

    fn rgb(voxels: usize, channels: usize) -> VoxelLayout {
        VoxelLayout {
            mode: DescriptorMode::Rgb,
            voxels,
            channels,
        }
    }

    #[test]
    fn synthesize_examples() {
        let m = model_with(axis(3, 0), vec![1.0], Matrix::new(1, 1, vec![2.0]).unwrap(), vec![3.0]);
        assert_eq!(synthesize(&m).unwrap(), vec![6.0, 0.0, 0.0]);
        let m = model_with(axis(3, 1), vec![1.0], Matrix::identity(1), vec![0.0]);
        assert_eq!(synthesize(&m).unwrap(), vec![0.0; 3]);
        let m = model_with(axis(2, 1), vec![1.0], Matrix::identity(1), vec![-1.5]);
        assert_eq!(synthesize(&m).unwrap(), vec![0.0, -1.5]);
    }

    #[test]
    fn compose_rgb_partitions() {
        let v_new = vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let v_hat = vec![-1.0, -2.0, -3.0, -4.0, -5.0, -6.0];
        let empty = BrickLabel::background(3);
        assert_eq!(compose(&v_new, &empty, &v_hat, rgb(3, 2)).unwrap(), v_new);
        let full = BrickLabel {
            is_background: false,
            voxel_mask: vec![true; 3],
        };
        assert_eq!(compose(&v_new, &full, &v_hat, rgb(3, 2)).unwrap(), v_hat);
        let half = BrickLabel {
            is_background: false,
            voxel_mask: vec![false, true, false],
        };
        assert_eq!(
            compose(&v_new, &half, &v_hat, rgb(3, 2)).unwrap(),
            vec![1.0, 2.0, -3.0, -4.0, 5.0, 6.0]
        );
    }

    #[test]
    fn compose_histogram_is_all_or_nothing() {
        let layout = VoxelLayout {
            mode: DescriptorMode::CsStltp,
            voxels: 2,
            channels: 1,
        };
        let label = BrickLabel {
            is_background: false,
            voxel_mask: vec![false, false],
        };
        assert_eq!(compose(&[1.0, 2.0], &label, &[7.0, 8.0], layout).unwrap(), vec![7.0, 8.0]);
        let bg = BrickLabel::background(2);
        assert_eq!(compose(&[1.0, 2.0], &bg, &[7.0, 8.0], layout).unwrap(), vec![1.0, 2.0]);
    }

    #[test]
    fn weight_function_values() {
        assert_eq!(robust_weight(0.0, 3.0), 1.0);
        assert!((robust_weight(3.0, 3.0) - 0.5).abs() < 1e-15);
        assert!((robust_weight(-3.0, 3.0) - 0.5).abs() < 1e-15);
        assert!(robust_weight(1e300, 1e-9) > 0.0);
    }

    #[test]
    fn robust_scale_for_single_eigenvector() {
        let m = model_with(axis(3, 0), vec![4.0], Matrix::identity(1), vec![1.0]);
        let rho = robust_scales(&m, 2.3849);
        assert!((rho[0] - 4.7698).abs() < 1e-12);
        assert_eq!(rho[1], RHO_FLOOR);
        assert_eq!(rho[2], RHO_FLOOR);
    }

    #[test]
    fn reweight_keeps_in_span_entries() {
        let m = model_with(axis(3, 0), vec![4.0], Matrix::identity(1), vec![1.0]);
        let (vt, w) = robust_reweight(&m, &[5.0, 0.0, 0.0], 2.3849).unwrap();
        assert_eq!(w, vec![1.0; 3]);
        assert_eq!(vt, vec![5.0, 0.0, 0.0]);
        let (vt, w) = robust_reweight(&m, &[5.0, 1.0, 0.0], 2.3849).unwrap();
        assert!(w[1] < 1e-15);
        assert!(vt[1] < 1e-7);
    }

    #[test]
    fn zero_learning_rate_keeps_basis() {
        let c = Matrix::from_rows(&[&[0.6, 0.0], &[0.8, 0.0], &[0.0, 1.0]]).unwrap();
        let mut m = model_with(c.clone(), vec![9.0, 2.0], Matrix::identity(2), vec![1.0, 1.0]);
        update_appearance(&mut m, &[5.0, -3.0, 7.0], 0.0).unwrap();
        assert!(m.c().sub(&c).unwrap().max_abs() < 1e-12);
        assert!((m.lambda()[0] - 9.0).abs() < 1e-12);
        assert!((m.lambda()[1] - 2.0).abs() < 1e-12);
        assert!((m.z_latest()[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn update_rotates_state_buffer_consistently() {
        // The represented vector C z must survive a basis update.
        let c = Matrix::from_rows(&[&[1.0, 0.0], &[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        let mut m = model_with(c, vec![4.0, 3.9], Matrix::identity(2), vec![2.0, -1.0]);
        let before = m.c().mul_vec(m.z_latest()).unwrap();
        update_appearance(&mut m, &[0.0, 30.0, 0.0], 0.3).unwrap();
        let after = m.c().mul_vec(m.z_latest()).unwrap();
        // Vector lies in the span of both bases here.
        for (a, b) in before.iter().zip(&after) {
            assert!((a - b).abs() < 1e-12, "{before:?} {after:?}");
        }
    }

    #[test]
    fn degenerate_update_stays_orthonormal() {
        let mut m = model_with(axis(4, 2), vec![0.0], Matrix::identity(1), vec![0.0]);
        update_appearance(&mut m, &[0.0; 4], 0.05).unwrap();
        assert_eq!(m.lambda(), &[0.0]);
        assert!((norm(&m.c().column(0)) - 1.0).abs() < 1e-15);
        assert_eq!(m.c().column(0), vec![0.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn two_states_give_one_pair_map() {
        let mut m = model_with(Matrix::identity(2), vec![1.0, 1.0], Matrix::identity(2), vec![1.0, 0.0]);
        let refit = update_dynamics(&mut m, vec![0.0, 2.0], 0.5, DimRule::Relative).unwrap();
        assert!(refit);
        let a = m.a();
        let mapped = a.mul_vec(&[1.0, 0.0]).unwrap();
        assert!((mapped[0]).abs() < 1e-12 && (mapped[1] - 2.0).abs() < 1e-12);
        // Minimum norm: nothing acts on the orthogonal direction.
        assert!(a.mul_vec(&[0.0, 1.0]).unwrap().iter().all(|v| v.abs() < 1e-12));
        assert_eq!(m.d_eps(), 0);
    }

    #[test]
    fn maintain_skips_update_for_rejected_dimension() {
        let mut m = model_with(axis(3, 0), vec![1.0], Matrix::identity(1), vec![1.0]);
        assert!(maintain(
            &mut m,
            &[1.0, 2.0],
            &BrickLabel::background(2),
            rgb(2, 1),
            MaintenanceParams {
                alpha: 0.05,
                beta: 2.3849,
                t_deps: 0.5,
                dim_rule: DimRule::Relative,
            }
        )
        .is_err());
    }
}
