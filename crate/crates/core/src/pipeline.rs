//! Scene-level orchestration: grid decomposition, model initialization,
//! batch stepping, mask assembly and post-processing.
//!
//! Frames arrive in batches of `stride` frames. For every grid cell the brick
//! ending at the newest frame is described, segmented against the cell's
//! model and then fed back into the model. Cells never share state, so the
//! per-cell work of each pass can be spread over threads by a
//! [`CellExecutor`]; passes are separated by barriers and results are
//! identical for any executor.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::features::{brick_descriptor, DescriptorMode, FrameStack, VideoBrick, Volume};
use crate::frame::{Frame, MaskFrame};
use crate::maintenance::{maintain, MaintenanceParams};
use crate::float::sqrt;
use crate::params::{BrickDims, Params};
use crate::segmentation::{classify, compute_residuals, BrickLabel, Thresholds, VoxelLayout};
use crate::subspace::{learn_initial, LearnParams, SubspaceModel};

/// One grid location and its model.
#[derive(Debug, Clone)]
pub struct Cell {
    pub grid_x: usize,
    pub grid_y: usize,
    /// Top-left pixel of the brick. Edge bricks are pulled inwards so every
    /// brick has the full size.
    pub x0: usize,
    pub y0: usize,
    pub model: SubspaceModel,
}

/// Runs per-cell closures, returning results in cell (or index) order.
pub trait CellExecutor {
    fn map_index<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send;

    fn map_cells<T, F>(&self, cells: &mut [Cell], f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize, &mut Cell) -> T + Sync + Send;
}

/// Runs cells one after another on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl CellExecutor for Sequential {
    fn map_index<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..n).map(f).collect()
    }

    fn map_cells<T, F>(&self, cells: &mut [Cell], f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize, &mut Cell) -> T + Sync + Send,
    {
        cells.iter_mut().enumerate().map(|(i, c)| f(i, c)).collect()
    }
}

/// Passes of a batch, reported to a [`Probe`] as they start.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stage {
    Describe,
    Segment,
    Maintain,
    Assemble,
    Done,
}

/// Observer for stage boundaries (timing, tracing).
pub trait Probe {
    fn enter(&mut self, stage: Stage);
}

impl Probe for () {
    fn enter(&mut self, _: Stage) {}
}

/// Streaming background subtraction state for one video.
#[derive(Debug, Clone)]
pub struct Scene {
    params: Params,
    width: usize,
    height: usize,
    channels: usize,
    grid_cols: usize,
    grid_rows: usize,
    cells: Vec<Cell>,
    aux: Option<BackgroundStats>,
    /// The last `depth` frames already processed.
    history: VecDeque<Frame>,
    /// Frames received but not yet part of a full batch.
    pending: VecDeque<Frame>,
    /// Global index of the first pending frame.
    next_index: usize,
}

impl Scene {
    pub fn initialize(frames: &[Frame], params: Params) -> Result<Scene> {
        Self::initialize_with(frames, params, &Sequential)
    }

    /// Learns one model per grid location from the leading frames. Every
    /// frame after the last complete training brick is queued for streaming.
    pub fn initialize_with<E: CellExecutor>(frames: &[Frame], params: Params, exec: &E) -> Result<Scene> {
        params.validate()?;
        let dims = params.brick;
        let n_frames = frames.len();
        let bricks = if n_frames >= dims.depth {
            (n_frames - dims.depth) / params.stride + 1
        } else {
            0
        };
        if bricks < 2 {
            return Err(Error::InsufficientData {
                needed: dims.depth + params.stride,
                actual: n_frames,
            });
        }
        let first = &frames[0];
        if frames.iter().any(|f| !f.same_shape(first)) {
            return Err(Error::invalid("all frames must share one size and channel count"));
        }
        let (width, height, channels) = (first.width(), first.height(), first.channels());
        if width < dims.width || height < dims.height {
            return Err(Error::invalid("frame is smaller than one brick"));
        }
        let grid_cols = width.div_ceil(dims.width);
        let grid_rows = height.div_ceil(dims.height);
        let origins: Vec<(usize, usize, usize, usize)> = (0..grid_rows)
            .flat_map(|gy| (0..grid_cols).map(move |gx| (gx, gy)))
            .map(|(gx, gy)| {
                (
                    gx,
                    gy,
                    (gx * dims.width).min(width - dims.width),
                    (gy * dims.height).min(height - dims.height),
                )
            })
            .collect();

        let stack = FrameStack::new(frames.iter().collect())?;
        let learn = LearnParams {
            t_d: params.t_d,
            t_deps: params.t_deps,
            rule: params.dim_rule,
            span: params.span,
        };
        let (mode, tau, stride) = (params.mode, params.tau, params.stride);
        let models = exec.map_index(origins.len(), |i| -> Result<SubspaceModel> {
            let (gx, gy, x0, y0) = origins[i];
            let mut descs = Vec::with_capacity(bricks);
            for b in 0..bricks {
                let brick = VideoBrick::new(&stack, (gx, gy), (x0, y0), b * stride, dims.width, dims.height, dims.depth)?;
                descs.push(brick_descriptor(&brick, mode, tau).values);
            }
            learn_initial(&descs, learn)
        });
        let cells: Vec<Cell> = origins
            .iter()
            .zip(models)
            .map(|(&(grid_x, grid_y, x0, y0), model)| {
                Ok(Cell {
                    grid_x,
                    grid_y,
                    x0,
                    y0,
                    model: model?,
                })
            })
            .collect::<Result<_>>()?;

        let aux = (params.mode == DescriptorMode::CsStltp).then(|| BackgroundStats::from_frames(frames));

        let consumed = (bricks - 1) * stride + dims.depth;
        Ok(Scene {
            params,
            width,
            height,
            channels,
            grid_cols,
            grid_rows,
            cells,
            aux,
            history: frames[consumed - dims.depth..consumed].iter().cloned().collect(),
            pending: frames[consumed..].iter().cloned().collect(),
            next_index: consumed,
        })
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    /// Grid size as (columns, rows).
    pub fn grid(&self) -> (usize, usize) {
        (self.grid_cols, self.grid_rows)
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn cell(&self, grid_x: usize, grid_y: usize) -> &Cell {
        &self.cells[grid_y * self.grid_cols + grid_x]
    }

    /// Per-pixel, per-channel running background mean (CS-STLTP mode only).
    pub fn aux_bg_mean(&self) -> Option<&[f64]> {
        self.aux.as_ref().map(|a| a.mean.as_slice())
    }

    /// Per-pixel background statistics used to refine CS-STLTP labels.
    pub fn aux_stats(&self) -> Option<&BackgroundStats> {
        self.aux.as_ref()
    }

    /// Frames queued but not yet processed.
    pub fn pending(&self) -> usize {
        self.pending.len()
    }

    /// Global index of the next frame to be labelled.
    pub fn next_frame_index(&self) -> usize {
        self.next_index
    }

    /// Processes exactly one batch of `stride` frames.
    pub fn step(&mut self, frames: &[Frame]) -> Result<Vec<MaskFrame>> {
        self.step_with(frames, &Sequential, &mut ())
    }

    pub fn step_with<E: CellExecutor, P: Probe>(
        &mut self,
        frames: &[Frame],
        exec: &E,
        probe: &mut P,
    ) -> Result<Vec<MaskFrame>> {
        if !self.pending.is_empty() {
            return Err(Error::invalid("frames are queued; use push"));
        }
        if frames.len() != self.params.stride {
            return Err(Error::DimensionMismatch {
                expected: self.params.stride,
                actual: frames.len(),
            });
        }
        self.check_shapes(frames)?;
        self.run_batch(frames.to_vec(), exec, probe)
    }

    /// Queues frames and processes every complete batch.
    pub fn push(&mut self, frames: &[Frame]) -> Result<Vec<MaskFrame>> {
        self.push_with(frames, &Sequential, &mut ())
    }

    pub fn push_with<E: CellExecutor, P: Probe>(
        &mut self,
        frames: &[Frame],
        exec: &E,
        probe: &mut P,
    ) -> Result<Vec<MaskFrame>> {
        self.check_shapes(frames)?;
        self.pending.extend(frames.iter().cloned());
        let mut out = Vec::new();
        while self.pending.len() >= self.params.stride {
            let batch: Vec<Frame> = self.pending.drain(..self.params.stride).collect();
            out.extend(self.run_batch(batch, exec, probe)?);
        }
        Ok(out)
    }

    /// Labels any queued frames that do not fill a batch. Their brick reaches
    /// back into already processed frames.
    pub fn finish(&mut self) -> Result<Vec<MaskFrame>> {
        self.finish_with(&Sequential, &mut ())
    }

    pub fn finish_with<E: CellExecutor, P: Probe>(&mut self, exec: &E, probe: &mut P) -> Result<Vec<MaskFrame>> {
        if self.pending.is_empty() {
            return Ok(Vec::new());
        }
        let batch: Vec<Frame> = self.pending.drain(..).collect();
        self.run_batch(batch, exec, probe)
    }

    fn check_shapes(&self, frames: &[Frame]) -> Result<()> {
        for f in frames {
            if f.width() != self.width || f.height() != self.height || f.channels() != self.channels {
                return Err(Error::invalid("frame size or channel count differs from the scene"));
            }
        }
        Ok(())
    }

    fn layout(&self) -> VoxelLayout {
        VoxelLayout {
            mode: self.params.mode,
            voxels: self.params.brick.voxels(),
            channels: self.channels,
        }
    }

    fn run_batch<E: CellExecutor, P: Probe>(
        &mut self,
        batch: Vec<Frame>,
        exec: &E,
        probe: &mut P,
    ) -> Result<Vec<MaskFrame>> {
        let dims = self.params.brick;
        let fresh = batch.len();
        let mut frames: Vec<Frame> = self.history.iter().cloned().collect();
        frames.extend(batch);
        let total = frames.len();
        debug_assert!(total >= dims.depth);
        let brick_start = total - dims.depth;
        let stack = FrameStack::new(frames.iter().collect())?;

        let params = &self.params;
        let layout = self.layout();
        let thresholds = Thresholds {
            t_eps: params.t_eps,
            t_omega: params.t_omega,
        };

        probe.enter(Stage::Describe);
        let descriptors: Vec<Result<Vec<f64>>> = exec.map_cells(&mut self.cells, |_, cell| {
            let brick = cell_brick(&stack, cell, brick_start, params)?;
            Ok(brick_descriptor(&brick, params.mode, params.tau).values)
        });
        let descriptors: Vec<Vec<f64>> = descriptors.into_iter().collect::<Result<_>>()?;

        probe.enter(Stage::Segment);
        let labels: Vec<Result<BrickLabel>> = exec.map_cells(&mut self.cells, |i, cell| {
            let residuals = compute_residuals(&cell.model, &descriptors[i])?;
            Ok(classify(&residuals, thresholds, layout))
        });
        let mut labels: Vec<BrickLabel> = labels.into_iter().collect::<Result<_>>()?;
        // Gains of the brick's frames relative to the stored background,
        // measured on the cells the models accept as background.
        let mut gains = vec![1.0; dims.depth];
        if let Some(aux) = self.aux.as_ref() {
            if params.gain_compensation {
                let mut accepted = vec![false; self.width * self.height];
                for (cell, label) in self.cells.iter().zip(&labels) {
                    if label.is_background {
                        for y in cell_rows(cell, dims, self.height) {
                            accepted[y * self.width..(y + 1) * self.width][cell_cols(cell, dims, self.width)]
                                .fill(true);
                        }
                    }
                }
                for (t, g) in gains.iter_mut().enumerate() {
                    *g = aux.gain(stack.frame(brick_start + t), &accepted);
                }
            }
            let refine = RefineParams {
                t_rgb: params.t_rgb,
                sigma_k: params.rgb_sigma_k,
            };
            let gains = &gains;
            let refined: Vec<Result<Option<Vec<bool>>>> = exec.map_cells(&mut self.cells, |i, cell| {
                if labels[i].is_background {
                    return Ok(None);
                }
                let brick = cell_brick(&stack, cell, brick_start, params)?;
                Ok(Some(refine_pixels(&brick, aux, gains, refine)))
            });
            for (label, r) in labels.iter_mut().zip(refined) {
                if let Some(mask) = r? {
                    label.voxel_mask = mask;
                }
            }
        }

        probe.enter(Stage::Maintain);
        let mp = MaintenanceParams {
            alpha: params.alpha,
            beta: params.beta,
            t_deps: params.t_deps,
            dim_rule: params.dim_rule,
        };
        let updates: Vec<Result<()>> = exec.map_cells(&mut self.cells, |i, cell| {
            maintain(&mut cell.model, &descriptors[i], &labels[i], layout, mp).map(|_| ())
        });
        updates.into_iter().collect::<Result<()>>()?;

        probe.enter(Stage::Assemble);
        let mut masks = Vec::with_capacity(fresh);
        for k in 0..fresh {
            let t_local = dims.depth - fresh + k;
            let mut raw = MaskFrame::empty(self.next_index + k, self.width, self.height);
            for (cell, label) in self.cells.iter().zip(&labels) {
                if label.is_background {
                    continue;
                }
                for y in cell_rows(cell, dims, self.height) {
                    for x in cell_cols(cell, dims, self.width) {
                        let v = (t_local * dims.height + (y - cell.y0)) * dims.width + (x - cell.x0);
                        if label.voxel_mask[v] {
                            raw.set(x, y, true);
                        }
                    }
                }
            }
            if let Some(aux) = self.aux.as_mut() {
                let frame = stack.frame(brick_start + t_local);
                aux.update(frame, &raw, gains[t_local], params.alpha);
            }
            masks.push(postprocess(&raw, params.min_area));
        }

        self.next_index += fresh;
        let keep_from = total - dims.depth;
        self.history = frames.drain(keep_from..).collect();
        probe.enter(Stage::Done);
        Ok(masks)
    }
}

fn cell_brick<'a>(
    stack: &'a FrameStack<'a>,
    cell: &Cell,
    brick_start: usize,
    params: &Params,
) -> Result<VideoBrick<'a, FrameStack<'a>>> {
    let dims = params.brick;
    VideoBrick::new(
        stack,
        (cell.grid_x, cell.grid_y),
        (cell.x0, cell.y0),
        brick_start,
        dims.width,
        dims.height,
        dims.depth,
    )
}

/// Pixels a cell is responsible for: its nominal grid region, which may be
/// narrower than the brick for edge cells anchored inward.
fn cell_cols(cell: &Cell, dims: BrickDims, width: usize) -> core::ops::Range<usize> {
    cell.grid_x * dims.width..((cell.grid_x + 1) * dims.width).min(width)
}

fn cell_rows(cell: &Cell, dims: BrickDims, height: usize) -> core::ops::Range<usize> {
    cell.grid_y * dims.height..((cell.grid_y + 1) * dims.height).min(height)
}

/// Running per-pixel, per-channel background mean and variance, laid out
/// like the frames (row-major, interleaved channels).
#[derive(Debug, Clone, PartialEq)]
pub struct BackgroundStats {
    pub mean: Vec<f64>,
    pub var: Vec<f64>,
}

impl BackgroundStats {
    /// Sample statistics of equally shaped frames.
    pub fn from_frames(frames: &[Frame]) -> Self {
        let len = frames.first().map_or(0, |f| f.data().len());
        let mut mean = vec![0.0; len];
        let mut sq = vec![0.0; len];
        for f in frames {
            for ((m, s), &v) in mean.iter_mut().zip(sq.iter_mut()).zip(f.data()) {
                let v = f64::from(v);
                *m += v;
                *s += v * v;
            }
        }
        let inv = 1.0 / frames.len().max(1) as f64;
        let var = mean
            .iter_mut()
            .zip(&sq)
            .map(|(m, s)| {
                *m *= inv;
                (s * inv - *m * *m).max(0.0)
            })
            .collect();
        BackgroundStats { mean, var }
    }

    /// Uniform statistics, mainly for tests.
    pub fn constant(len: usize, mean: f64, var: f64) -> Self {
        BackgroundStats {
            mean: vec![mean; len],
            var: vec![var; len],
        }
    }

    /// Ratio of summed intensities to summed background means over the
    /// pixels marked in `include`; 1 when nothing usable is marked.
    pub fn gain(&self, frame: &Frame, include: &[bool]) -> f64 {
        let ch = frame.channels();
        let (mut num, mut den) = (0.0, 0.0);
        for (p, _) in include.iter().enumerate().filter(|(_, &b)| b) {
            for c in 0..ch {
                num += f64::from(frame.data()[p * ch + c]);
                den += self.mean[p * ch + c];
            }
        }
        if den > 1e-9 && num > 0.0 {
            num / den
        } else {
            1.0
        }
    }

    /// Exponential update over pixels labelled background, on samples
    /// divided by the frame's `gain`.
    pub fn update(&mut self, frame: &Frame, labels: &MaskFrame, gain: f64, rate: f64) {
        let ch = frame.channels();
        let inv = 1.0 / gain;
        for (p, &fg) in labels.labels().iter().enumerate() {
            if fg {
                continue;
            }
            for c in 0..ch {
                let i = p * ch + c;
                let diff = f64::from(frame.data()[i]) * inv - self.mean[i];
                self.mean[i] += rate * diff;
                self.var[i] = (1.0 - rate) * (self.var[i] + rate * diff * diff);
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefineParams {
    pub t_rgb: f64,
    pub sigma_k: f64,
}

/// Per-voxel foreground decision against the background statistics: a voxel
/// is foreground iff some channel deviates from `g·mean` by more than
/// `max(t_rgb, sigma_k·g·std)`, with `g = gains[t]` for brick frame `t`.
pub fn refine_pixels<V: Volume + ?Sized>(
    brick: &VideoBrick<'_, V>,
    stats: &BackgroundStats,
    gains: &[f64],
    params: RefineParams,
) -> Vec<bool> {
    let vol = brick.volume();
    let ch = vol.channels();
    let w = vol.width();
    let mut mask = Vec::with_capacity(brick.voxel_count());
    for t in 0..brick.depth {
        let g = gains.get(t).copied().unwrap_or(1.0);
        for y in 0..brick.height {
            for x in 0..brick.width {
                let (px, py) = (brick.x0 + x, brick.y0 + y);
                let base = (py * w + px) * ch;
                let fg = (0..ch).any(|c| {
                    let dev = (vol.sample(px, py, brick.frame_start + t, c) - g * stats.mean[base + c]).abs();
                    let noise = params.sigma_k * g * sqrt(stats.var[base + c]);
                    dev > params.t_rgb.max(noise)
                });
                mask.push(fg);
            }
        }
    }
    mask
}

/// Removes 8-connected foreground components with fewer than `min_area`
/// pixels.
pub fn postprocess(mask: &MaskFrame, min_area: usize) -> MaskFrame {
    let mut out = mask.clone();
    if min_area <= 1 {
        return out;
    }
    let (w, h) = (mask.width(), mask.height());
    let mut seen = vec![false; w * h];
    let mut stack = Vec::new();
    let mut component = Vec::new();
    for start in 0..w * h {
        if seen[start] || !mask.labels()[start] {
            continue;
        }
        seen[start] = true;
        stack.push(start);
        component.clear();
        while let Some(p) = stack.pop() {
            component.push(p);
            let (x, y) = ((p % w) as isize, (p / w) as isize);
            for dy in -1..=1isize {
                for dx in -1..=1isize {
                    let (nx, ny) = (x + dx, y + dy);
                    if nx < 0 || ny < 0 || nx >= w as isize || ny >= h as isize {
                        continue;
                    }
                    let q = ny as usize * w + nx as usize;
                    if !seen[q] && mask.labels()[q] {
                        seen[q] = true;
                        stack.push(q);
                    }
                }
            }
        }
        if component.len() < min_area {
            for &p in &component {
                out.labels_mut()[p] = false;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::DenseVolume;

    const LITERAL: RefineParams = RefineParams { t_rgb: 5.0, sigma_k: 0.0 };

    fn blob(w: usize, h: usize, pixels: &[(usize, usize)]) -> MaskFrame {
        let mut m = MaskFrame::empty(0, w, h);
        for &(x, y) in pixels {
            m.set(x, y, true);
        }
        m
    }

    #[test]
    fn postprocess_threshold_is_strict() {
        let p19: Vec<(usize, usize)> = (0..19).map(|i| (i % 10, i / 10)).collect();
        let m = blob(12, 4, &p19);
        assert_eq!(postprocess(&m, 20).foreground_count(), 0);
        let p20: Vec<(usize, usize)> = (0..20).map(|i| (i % 10, i / 10)).collect();
        let m = blob(12, 4, &p20);
        assert_eq!(postprocess(&m, 20).foreground_count(), 20);
        let empty = MaskFrame::empty(0, 5, 5);
        assert_eq!(postprocess(&empty, 20), empty);
    }

    #[test]
    fn postprocess_uses_eight_connectivity() {
        // A diagonal line of 20 pixels is one component.
        let diag: Vec<(usize, usize)> = (0..20).map(|i| (i, i)).collect();
        let m = blob(20, 20, &diag);
        assert_eq!(postprocess(&m, 20).foreground_count(), 20);
        // Two separate 10-pixel runs are both removed.
        let mut two: Vec<(usize, usize)> = (0..10).map(|i| (i, 0)).collect();
        two.extend((0..10).map(|i| (i, 2)));
        assert_eq!(postprocess(&blob(12, 3, &two), 20).foreground_count(), 0);
    }

    #[test]
    fn refine_pixels_examples() {
        // 4x4x1 grayscale brick, background mean 100 everywhere.
        let mut data = vec![100.0; 16];
        data[5] = 150.0;
        data[6] = 103.0;
        let vol = DenseVolume::new(4, 4, 1, 1, data).unwrap();
        let brick = VideoBrick::new(&vol, (0, 0), (0, 0), 0, 4, 4, 1).unwrap();
        let mask = refine_pixels(&brick, &BackgroundStats::constant(16, 100.0, 0.0), &[1.0], LITERAL);
        let fg: Vec<usize> = mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect();
        assert_eq!(fg, vec![5]);
    }

    #[test]
    fn refine_splits_half_covered_brick() {
        // Object covers the left two columns in every frame.
        let (w, h, t) = (4, 4, 2);
        let mut data = Vec::new();
        for _ in 0..t {
            for _ in 0..h {
                for x in 0..w {
                    data.push(if x < 2 { 220.0 } else { 98.0 });
                }
            }
        }
        let vol = DenseVolume::new(w, h, t, 1, data).unwrap();
        let brick = VideoBrick::new(&vol, (0, 0), (0, 0), 0, w, h, t).unwrap();
        let mask = refine_pixels(&brick, &BackgroundStats::constant(16, 100.0, 0.0), &[1.0], LITERAL);
        for (i, &m) in mask.iter().enumerate() {
            assert_eq!(m, i % w < 2);
        }
    }

    #[test]
    fn background_stats_skip_foreground() {
        let frame = Frame::new(2, 1, 1, vec![200, 50]).unwrap();
        let mut stats = BackgroundStats::constant(2, 100.0, 0.0);
        let labels = blob(2, 1, &[(0, 0)]);
        stats.update(&frame, &labels, 1.0, 0.5);
        assert_eq!(stats.mean, vec![100.0, 75.0]);
        assert_eq!(stats.var, vec![0.0, 0.5 * 0.5 * 2500.0]);
    }

    #[test]
    fn stats_from_frames() {
        let a = Frame::new(1, 1, 1, vec![10]).unwrap();
        let b = Frame::new(1, 1, 1, vec![20]).unwrap();
        let s = BackgroundStats::from_frames(&[a, b]);
        assert_eq!(s.mean, vec![15.0]);
        assert_eq!(s.var, vec![25.0]);
    }

    #[test]
    fn noisy_pixels_need_larger_deviation() {
        let mut data = vec![100.0; 16];
        data[0] = 108.0;
        data[1] = 140.0;
        let vol = DenseVolume::new(4, 4, 1, 1, data).unwrap();
        let brick = VideoBrick::new(&vol, (0, 0), (0, 0), 0, 4, 4, 1).unwrap();
        let stats = BackgroundStats::constant(16, 100.0, 25.0);
        let params = RefineParams { t_rgb: 5.0, sigma_k: 2.5 };
        let mask = refine_pixels(&brick, &stats, &[1.0], params);
        assert!(!mask[0] && mask[1]);
        assert!(refine_pixels(&brick, &stats, &[1.0], LITERAL)[0]);
    }

    #[test]
    fn global_gain_is_compensated() {
        let frame = Frame::new(4, 1, 1, vec![150, 150, 150, 250]).unwrap();
        let stats = BackgroundStats::constant(4, 100.0, 0.0);
        let g = stats.gain(&frame, &[true, true, true, false]);
        assert!((g - 1.5).abs() < 1e-12);
        assert_eq!(stats.gain(&frame, &[false; 4]), 1.0);

        let vol = DenseVolume::new(4, 1, 1, 1, vec![150.0, 150.0, 150.0, 250.0]).unwrap();
        let brick = VideoBrick::new(&vol, (0, 0), (0, 0), 0, 4, 1, 1).unwrap();
        let mask = refine_pixels(&brick, &stats, &[g], LITERAL);
        assert_eq!(mask, vec![false, false, false, true]);
    }
}
