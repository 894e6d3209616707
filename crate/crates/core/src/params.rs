use crate::error::{Error, Result};
use crate::features::DescriptorMode;
use crate::subspace::DimRule;

/// Brick extent in voxels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BrickDims {
    pub width: usize,
    pub height: usize,
    pub depth: usize,
}

impl BrickDims {
    pub const fn new(width: usize, height: usize, depth: usize) -> Self {
        BrickDims {
            width,
            height,
            depth,
        }
    }

    pub fn voxels(&self) -> usize {
        self.width * self.height * self.depth
    }
}

impl Default for BrickDims {
    fn default() -> Self {
        BrickDims::new(4, 4, 5)
    }
}

/// Every tunable of the engine.
#[derive(Debug, Clone, PartialEq)]
pub struct Params {
    pub mode: DescriptorMode,
    /// Contrast threshold of the ternary comparison.
    pub tau: f64,
    /// Singular value threshold selecting the appearance dimension.
    pub t_d: f64,
    /// Singular value threshold selecting the state-noise dimension.
    pub t_deps: f64,
    /// How `t_d` and `t_deps` are read against a spectrum.
    pub dim_rule: DimRule,
    /// State residual threshold.
    pub t_eps: f64,
    /// Appearance residual threshold.
    pub t_omega: f64,
    /// Per-pixel intensity threshold used to refine CS-STLTP brick labels.
    pub t_rgb: f64,
    /// Refinement also requires a deviation above `rgb_sigma_k` running
    /// standard deviations of the pixel; 0 disables the noise term.
    pub rgb_sigma_k: f64,
    /// Scale the refinement background by a per-frame global gain.
    pub gain_compensation: bool,
    /// Learning rate of the incremental eigenbasis update.
    pub alpha: f64,
    /// Scale coefficient of the robust weighting function.
    pub beta: f64,
    /// Number of recent states the dynamics are re-fitted on.
    pub span: usize,
    pub brick: BrickDims,
    /// Frames between consecutive bricks; equal to the brick depth for
    /// non-overlapping bricks.
    pub stride: usize,
    pub init_frames: usize,
    /// Connected foreground components smaller than this are removed.
    pub min_area: usize,
}

impl Params {
    /// Defaults for the given descriptor mode.
    pub fn for_mode(mode: DescriptorMode) -> Self {
        let (t_omega, t_eps) = match mode {
            DescriptorMode::CsStltp => (3.0, 3.0),
            DescriptorMode::Rgb => (5.0, 4.0),
        };
        let brick = BrickDims::default();
        Params {
            mode,
            tau: 0.2,
            t_d: 0.5,
            t_deps: 0.5,
            dim_rule: DimRule::Relative,
            t_eps,
            t_omega,
            t_rgb: 5.0,
            rgb_sigma_k: 2.5,
            gain_compensation: true,
            alpha: 0.05,
            beta: 2.3849,
            span: 60,
            brick,
            stride: brick.depth,
            init_frames: 50,
            min_area: 20,
        }
    }

    /// Switches mode and resets the two mode-dependent thresholds.
    pub fn with_mode(mut self, mode: DescriptorMode) -> Self {
        let d = Params::for_mode(mode);
        self.mode = mode;
        self.t_eps = d.t_eps;
        self.t_omega = d.t_omega;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("tau", self.tau),
            ("t_eps", self.t_eps),
            ("t_omega", self.t_omega),
            ("beta", self.beta),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidInput(alloc::format!("{name} must be positive")));
            }
        }
        for (name, v) in [("t_d", self.t_d), ("t_deps", self.t_deps), ("t_rgb", self.t_rgb), ("rgb_sigma_k", self.rgb_sigma_k)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::InvalidInput(alloc::format!("{name} must be non-negative")));
            }
        }
        if !(0.0..1.0).contains(&self.alpha) {
            return Err(Error::invalid("alpha must lie in [0, 1)"));
        }
        if self.brick.width == 0 || self.brick.height == 0 || self.brick.depth == 0 {
            return Err(Error::invalid("brick dimensions must be non-zero"));
        }
        if self.stride == 0 || self.stride > self.brick.depth {
            return Err(Error::invalid("stride must lie in [1, brick depth]"));
        }
        if self.span < 2 {
            return Err(Error::invalid("span must be at least 2"));
        }
        Ok(())
    }
}

impl Default for Params {
    fn default() -> Self {
        Params::for_mode(DescriptorMode::CsStltp)
    }
}
