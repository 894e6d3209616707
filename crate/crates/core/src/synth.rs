//! Synthetic videos with exact ground truth.

use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::float;
use crate::frame::{Frame, MaskFrame};
use crate::numerics::{dot, Matrix};
use crate::params::BrickDims;

/// Seeded standard normal source (Box–Muller).
#[derive(Debug, Clone)]
pub struct GaussianRng {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl GaussianRng {
    pub fn new(seed: u64) -> Self {
        GaussianRng {
            rng: ChaCha8Rng::seed_from_u64(seed),
            spare: None,
        }
    }

    /// Uniform in [0, 1).
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn normal(&mut self) -> f64 {
        if let Some(s) = self.spare.take() {
            return s;
        }
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        let r = float::sqrt(-2.0 * float::ln(u1));
        let theta = 2.0 * core::f64::consts::PI * u2;
        self.spare = Some(r * float::sin(theta));
        r * float::cos(theta)
    }
}

/// A planted dynamic texture: brick `i` of every location is
/// `offset + C·z_i` with `z_{i+1} = A·z_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantedArma {
    /// `m × d` with orthonormal columns, `m = w·h·depth·channels`.
    pub basis: Matrix,
    pub dynamics: Matrix,
    pub brick: BrickDims,
    pub offset: f64,
    /// Scale of the random initial state of each location.
    pub amplitude: f64,
    /// Additive per-pixel Gaussian noise.
    pub noise_sigma: f64,
}

impl PlantedArma {
    /// Random orthonormal basis and a stable block-rotation transition with
    /// spectral radius `radius`.
    pub fn random(m: usize, d: usize, radius: f64, seed: u64) -> Result<(Matrix, Matrix)> {
        if d == 0 || d > m {
            return Err(Error::invalid("planted dimension must be in 1..=m"));
        }
        let mut g = GaussianRng::new(seed);
        let mut cols: Vec<Vec<f64>> = Vec::with_capacity(d);
        while cols.len() < d {
            let mut v: Vec<f64> = (0..m).map(|_| g.normal()).collect();
            for _ in 0..2 {
                for c in &cols {
                    let p = dot(&v, c);
                    v.iter_mut().zip(c).for_each(|(x, y)| *x -= p * y);
                }
            }
            let n = float::sqrt(dot(&v, &v));
            if n > 1e-8 {
                v.iter_mut().for_each(|x| *x /= n);
                cols.push(v);
            }
        }
        let basis = Matrix::from_columns(m, &cols)?;
        let mut a = Matrix::zeros(d, d);
        let mut k = 0;
        while k < d {
            if k + 1 < d {
                let theta = 0.2 + 1.2 * g.uniform();
                let (c, s) = (radius * float::cos(theta), radius * float::sin(theta));
                a[(k, k)] = c;
                a[(k, k + 1)] = -s;
                a[(k + 1, k)] = s;
                a[(k + 1, k + 1)] = c;
                k += 2;
            } else {
                a[(k, k)] = radius;
                k += 1;
            }
        }
        Ok((basis, a))
    }

    /// Noise-free brick vectors `C·z_0, C·A·z_0, …`.
    pub fn brick_vectors(&self, z0: &[f64], n: usize) -> Result<Vec<Vec<f64>>> {
        let mut z = z0.to_vec();
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            out.push(self.basis.mul_vec(&z)?);
            z = self.dynamics.mul_vec(&z)?;
        }
        Ok(out)
    }

    fn check(&self, channels: usize) -> Result<()> {
        let d = self.basis.cols();
        if self.dynamics.rows() != d || self.dynamics.cols() != d {
            return Err(Error::invalid("planted dynamics must be d × d"));
        }
        let m = self.brick.voxels() * channels;
        if self.basis.rows() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                actual: self.basis.rows(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Background {
    Constant { level: [u8; 3] },
    GaussianNoise { mean: [f64; 3], sigma: f64 },
    PlantedArma(PlantedArma),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Illumination {
    /// Intensities multiplied by `gain` from `frame` onward.
    Step { frame: usize, gain: f64 },
    /// Gain grows linearly by `rate` per frame from `start`.
    Ramp { start: usize, rate: f64 },
}

impl Illumination {
    pub fn gain_at(&self, f: usize) -> f64 {
        match *self {
            Illumination::Step { frame, gain } => {
                if f >= frame {
                    gain
                } else {
                    1.0
                }
            }
            Illumination::Ramp { start, rate } => {
                if f >= start {
                    1.0 + rate * (f - start) as f64
                } else {
                    1.0
                }
            }
        }
    }
}

/// Solid rectangle moving on a straight line, visible in `[enter, exit)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectSpec {
    pub width: usize,
    pub height: usize,
    pub color: [u8; 3],
    /// Gaussian noise added on top of the flat color.
    pub noise_sigma: f64,
    pub start: (f64, f64),
    /// Pixels per frame.
    pub velocity: (f64, f64),
    pub enter: usize,
    pub exit: usize,
}

impl ObjectSpec {
    /// Top-left corner at frame `f`, if visible.
    pub fn position(&self, f: usize) -> Option<(i64, i64)> {
        if f < self.enter || f >= self.exit {
            return None;
        }
        let dt = (f - self.enter) as f64;
        Some((
            float::round(self.start.0 + self.velocity.0 * dt) as i64,
            float::round(self.start.1 + self.velocity.1 * dt) as i64,
        ))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SceneScript {
    pub width: usize,
    pub height: usize,
    pub channels: usize,
    pub frame_count: usize,
    pub background: Background,
    pub illumination: Option<Illumination>,
    pub objects: Vec<ObjectSpec>,
    pub seed: u64,
}

impl SceneScript {
    pub fn new(width: usize, height: usize, channels: usize, frame_count: usize, background: Background) -> Self {
        SceneScript {
            width,
            height,
            channels,
            frame_count,
            background,
            illumination: None,
            objects: Vec::new(),
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.width == 0 || self.height == 0 {
            return Err(Error::invalid("scene must have non-zero size"));
        }
        if self.channels != 1 && self.channels != 3 {
            return Err(Error::invalid("scene channels must be 1 or 3"));
        }
        match &self.background {
            Background::GaussianNoise { sigma, .. } if !(*sigma >= 0.0) => {
                return Err(Error::invalid("noise sigma must be non-negative"));
            }
            Background::PlantedArma(p) => {
                p.check(self.channels)?;
                if !(p.noise_sigma >= 0.0) {
                    return Err(Error::invalid("noise sigma must be non-negative"));
                }
            }
            _ => {}
        }
        match self.illumination {
            Some(Illumination::Step { gain, .. }) if !(gain > 0.0) => {
                return Err(Error::invalid("illumination gain must be positive"));
            }
            Some(Illumination::Ramp { rate, .. }) if !rate.is_finite() => {
                return Err(Error::invalid("illumination rate must be finite"));
            }
            _ => {}
        }
        for (i, o) in self.objects.iter().enumerate() {
            if o.width == 0 || o.height == 0 {
                return Err(Error::invalid(alloc::format!("object {i} has zero size")));
            }
            if !(o.noise_sigma >= 0.0) {
                return Err(Error::invalid(alloc::format!("object {i} has a negative noise sigma")));
            }
            for f in o.enter..o.exit.min(self.frame_count) {
                let (x, y) = o.position(f).unwrap_or((0, 0));
                if x < 0
                    || y < 0
                    || x as usize + o.width > self.width
                    || y as usize + o.height > self.height
                {
                    return Err(Error::invalid(alloc::format!(
                        "object {i} leaves the frame at frame {f}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Planted-texture state of every brick location, advanced one brick at a time.
struct PlantedState<'a> {
    spec: &'a PlantedArma,
    cols: usize,
    states: Vec<Vec<f64>>,
    bricks: Vec<Vec<f64>>,
}

impl<'a> PlantedState<'a> {
    fn new(spec: &'a PlantedArma, width: usize, height: usize, g: &mut GaussianRng) -> Self {
        let cols = width.div_ceil(spec.brick.width);
        let rows = height.div_ceil(spec.brick.height);
        let d = spec.basis.cols();
        let states = (0..cols * rows)
            .map(|_| (0..d).map(|_| spec.amplitude * g.normal()).collect())
            .collect();
        PlantedState {
            spec,
            cols,
            states,
            bricks: Vec::new(),
        }
    }

    fn advance(&mut self) -> Result<()> {
        let mut bricks = Vec::with_capacity(self.states.len());
        for z in &mut self.states {
            bricks.push(self.spec.basis.mul_vec(z)?);
            *z = self.spec.dynamics.mul_vec(z)?;
        }
        self.bricks = bricks;
        Ok(())
    }

    fn value(&self, x: usize, y: usize, t: usize, c: usize, channels: usize) -> f64 {
        let b = self.spec.brick;
        let cell = (y / b.height) * self.cols + x / b.width;
        let idx = ((t * b.height + y % b.height) * b.width + x % b.width) * channels + c;
        self.spec.offset + self.bricks[cell][idx]
    }
}

fn quantize(v: f64) -> u8 {
    float::round(v.clamp(0.0, 255.0)) as u8
}

/// Renders the script into frames and per-frame truth masks (object pixels
/// are foreground). The same script always yields the same bytes.
pub fn render(script: &SceneScript) -> Result<(Vec<Frame>, Vec<MaskFrame>)> {
    script.validate()?;
    let (w, h, ch) = (script.width, script.height, script.channels);
    let mut g = GaussianRng::new(script.seed);
    let mut planted = match &script.background {
        Background::PlantedArma(p) => Some(PlantedState::new(p, w, h, &mut g)),
        _ => None,
    };
    let mut frames = Vec::with_capacity(script.frame_count);
    let mut masks = Vec::with_capacity(script.frame_count);
    let mut values = vec![0.0f64; w * h * ch];
    for f in 0..script.frame_count {
        match &script.background {
            Background::Constant { level } => {
                for px in values.chunks_mut(ch) {
                    for (c, v) in px.iter_mut().enumerate() {
                        *v = level[c] as f64;
                    }
                }
            }
            Background::GaussianNoise { mean, sigma } => {
                for px in values.chunks_mut(ch) {
                    for (c, v) in px.iter_mut().enumerate() {
                        *v = mean[c] + sigma * g.normal();
                    }
                }
            }
            Background::PlantedArma(p) => {
                let state = planted.as_mut().expect("planted state");
                let t = f % p.brick.depth;
                if t == 0 {
                    state.advance()?;
                }
                for y in 0..h {
                    for x in 0..w {
                        for c in 0..ch {
                            values[(y * w + x) * ch + c] =
                                state.value(x, y, t, c, ch) + p.noise_sigma * g.normal();
                        }
                    }
                }
            }
        }
        let mut mask = MaskFrame::empty(f, w, h);
        for o in &script.objects {
            let Some((ox, oy)) = o.position(f) else { continue };
            let (ox, oy) = (ox as usize, oy as usize);
            for y in oy..oy + o.height {
                for x in ox..ox + o.width {
                    mask.set(x, y, true);
                    for c in 0..ch {
                        let n = if o.noise_sigma > 0.0 { o.noise_sigma * g.normal() } else { 0.0 };
                        values[(y * w + x) * ch + c] = o.color[c] as f64 + n;
                    }
                }
            }
        }
        let gain = script.illumination.map_or(1.0, |i| i.gain_at(f));
        let data = values.iter().map(|&v| quantize(v * gain)).collect();
        frames.push(Frame::new(w, h, ch, data)?);
        masks.push(mask);
    }
    Ok((frames, masks))
}

/// Copy of `base` with every intensity multiplied by `gain` from `step_frame`
/// onward.
pub fn illumination_scene(base: &SceneScript, gain: f64, step_frame: usize) -> Result<SceneScript> {
    if !(gain > 0.0) {
        return Err(Error::invalid("illumination gain must be positive"));
    }
    let mut s = base.clone();
    s.illumination = Some(Illumination::Step {
        frame: step_frame,
        gain,
    });
    Ok(s)
}
