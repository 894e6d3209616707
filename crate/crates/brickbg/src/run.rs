//! Streaming driver: learn from the leading frames, then label the rest in
//! stride-sized batches while reading from disk.

use std::path::PathBuf;

use brickbg_core::pipeline::{CellExecutor, Probe};
use brickbg_core::{Frame, MaskFrame, Params, Scene};

use crate::error::{AppError, Result};
use crate::io::{check_shape, read_frame, read_frames};

/// Reads frames from `paths` lazily and hands every mask to `sink` in frame
/// order. Returns the number of labelled frames.
pub fn segment_paths<E, P, S>(paths: &[PathBuf], params: Params, exec: &E, probe: &mut P, mut sink: S) -> Result<usize>
where
    E: CellExecutor,
    P: Probe,
    S: FnMut(MaskFrame) -> Result<()>,
{
    let n_init = params.init_frames.min(paths.len());
    let init = read_frames(&paths[..n_init])?;
    let mut scene = Scene::initialize_with(&init, params, exec)?;
    let stride = scene.params().stride;
    let mut labelled = 0;
    let mut emit = |masks: Vec<MaskFrame>| -> Result<()> {
        labelled += masks.len();
        masks.into_iter().try_for_each(&mut sink)
    };
    for chunk in paths[n_init..].chunks(stride) {
        let mut batch: Vec<Frame> = Vec::with_capacity(chunk.len());
        for p in chunk {
            let f = read_frame(p)?;
            check_shape(init.first(), &f, p)?;
            batch.push(f);
        }
        emit(scene.push_with(&batch, exec, probe)?)?;
    }
    emit(scene.finish_with(exec, probe)?)?;
    Ok(labelled)
}

/// In-memory variant of [`segment_paths`].
pub fn segment_frames<E: CellExecutor, P: Probe>(
    frames: &[Frame],
    params: Params,
    exec: &E,
    probe: &mut P,
) -> Result<Vec<MaskFrame>> {
    let n_init = params.init_frames.min(frames.len());
    let mut scene = Scene::initialize_with(&frames[..n_init], params, exec)?;
    let mut masks = scene.push_with(&frames[n_init..], exec, probe)?;
    masks.extend(scene.finish_with(exec, probe)?);
    Ok(masks)
}

/// Applies `value` to the parameter a sweep varies.
pub fn set_sweep_param(params: &mut Params, name: &str, value: f64) -> Result<()> {
    match name {
        "t_omega" => params.t_omega = value,
        "t_eps" => params.t_eps = value,
        "t_rgb" => params.t_rgb = value,
        "tau" => params.tau = value,
        "rgb_sigma_k" => params.rgb_sigma_k = value,
        _ => {
            return Err(AppError::Usage(format!(
                "cannot sweep `{name}`; choose t_omega, t_eps, t_rgb, tau or rgb_sigma_k"
            )))
        }
    }
    params
        .validate()
        .map_err(|e| AppError::Usage(format!("{name} = {value}: {e}")))
}
