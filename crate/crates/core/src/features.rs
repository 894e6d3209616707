//! Brick descriptors: the center-symmetric spatio-temporal local ternary
//! pattern (CS-STLTP) histogram, or raw stacked voxel intensities.
//!
//! Every voxel is compared on four planes that all contain the Y axis and sit
//! at 0°, 45°, 90° and 135° in the X–T subspace. On each plane the 3×3 ring of
//! neighbours yields four center-symmetric pairs, giving 16 trits per voxel.
//! A pattern is mapped to one of 48 bins by its transition count and the sign
//! of its trit sum.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::frame::Frame;

/// Number of histogram bins per channel.
pub const BINS: usize = 48;
/// Trits per voxel (4 planes × 4 center-symmetric pairs).
pub const TRITS: usize = 16;
/// Histogram counts each voxel adds (one per plane).
pub const PLANES: usize = 4;

/// Plane directions in (x, t). Each plane also contains the Y axis.
const PLANE_DIRS: [(isize, isize); PLANES] = [(1, 0), (1, 1), (0, 1), (-1, 1)];

/// Ring positions (step along the plane direction, step along Y), ordered
/// so that positions `m` and `m + 4` are center-symmetric.
const RING: [(isize, isize); 8] = [
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
    (-1, 0),
    (-1, -1),
    (0, -1),
    (1, -1),
];

/// Read access to a (t, y, x, channel) intensity volume.
pub trait Volume {
    fn width(&self) -> usize;
    fn height(&self) -> usize;
    fn depth(&self) -> usize;
    fn channels(&self) -> usize;
    fn sample(&self, x: usize, y: usize, t: usize, c: usize) -> f64;
}

/// A run of consecutive frames viewed as a volume.
#[derive(Debug, Clone)]
pub struct FrameStack<'a> {
    frames: Vec<&'a Frame>,
}

impl<'a> FrameStack<'a> {
    pub fn new(frames: Vec<&'a Frame>) -> Result<Self> {
        let first = frames
            .first()
            .ok_or_else(|| Error::invalid("frame stack needs at least one frame"))?;
        if frames.iter().any(|f| !f.same_shape(first)) {
            return Err(Error::invalid("frames in a stack must share one shape"));
        }
        Ok(FrameStack { frames })
    }

    pub fn frame(&self, t: usize) -> &'a Frame {
        self.frames[t]
    }
}

impl Volume for FrameStack<'_> {
    fn width(&self) -> usize {
        self.frames[0].width()
    }
    fn height(&self) -> usize {
        self.frames[0].height()
    }
    fn depth(&self) -> usize {
        self.frames.len()
    }
    fn channels(&self) -> usize {
        self.frames[0].channels()
    }
    #[inline]
    fn sample(&self, x: usize, y: usize, t: usize, c: usize) -> f64 {
        f64::from(self.frames[t].get(x, y, c))
    }
}

/// Real-valued volume, mostly useful for tests and synthetic data.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseVolume {
    width: usize,
    height: usize,
    depth: usize,
    channels: usize,
    data: Vec<f64>,
}

impl DenseVolume {
    pub fn new(width: usize, height: usize, depth: usize, channels: usize, data: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 || depth == 0 || channels == 0 {
            return Err(Error::invalid("volume dimensions must be non-zero"));
        }
        if data.len() != width * height * depth * channels {
            return Err(Error::DimensionMismatch {
                expected: width * height * depth * channels,
                actual: data.len(),
            });
        }
        Ok(DenseVolume {
            width,
            height,
            depth,
            channels,
            data,
        })
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// Every intensity multiplied by `s`.
    pub fn scaled(&self, s: f64) -> DenseVolume {
        DenseVolume {
            data: self.data.iter().map(|v| v * s).collect(),
            ..self.clone()
        }
    }
}

impl Volume for DenseVolume {
    fn width(&self) -> usize {
        self.width
    }
    fn height(&self) -> usize {
        self.height
    }
    fn depth(&self) -> usize {
        self.depth
    }
    fn channels(&self) -> usize {
        self.channels
    }
    #[inline]
    fn sample(&self, x: usize, y: usize, t: usize, c: usize) -> f64 {
        self.data[((t * self.height + y) * self.width + x) * self.channels + c]
    }
}

/// How a brick is turned into a feature vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DescriptorMode {
    /// One 48-bin CS-STLTP histogram per channel, concatenated.
    CsStltp,
    /// Voxel intensities stacked in (t, y, x, channel) order.
    Rgb,
}

impl DescriptorMode {
    /// Descriptor length for a brick of `voxels` voxels with `channels` channels.
    pub fn descriptor_len(self, voxels: usize, channels: usize) -> usize {
        match self {
            DescriptorMode::CsStltp => BINS * channels,
            DescriptorMode::Rgb => voxels * channels,
        }
    }
}

/// Sixteen trits in plane-major order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TernaryPattern(pub [i8; TRITS]);

impl TernaryPattern {
    /// Adjacent unequal trits, 0..=15.
    pub fn transitions(&self) -> usize {
        self.0.windows(2).filter(|w| w[0] != w[1]).count()
    }
}

/// Three-valued comparison of a center-symmetric pair.
#[inline]
pub fn s_tau(p_m: f64, p_s: f64, tau: f64) -> i8 {
    if p_m > (1.0 + tau) * p_s {
        1
    } else if p_m < (1.0 - tau) * p_s {
        -1
    } else {
        0
    }
}

/// Quantizes a pattern to `transitions · 3 + (sign(Σ trits) + 1)`.
pub fn pattern_to_bin(p: &TernaryPattern) -> usize {
    let sum: i32 = p.0.iter().map(|&t| i32::from(t)).sum();
    let sign_class = match sum.signum() {
        -1 => 0,
        0 => 1,
        _ => 2,
    };
    p.transitions() * 3 + sign_class
}

/// CS-STLTP pattern of voxel (x, y, t) in channel `c`. Neighbours outside the
/// volume are clamped to the nearest valid voxel.
pub fn cs_stltp_pixel<V: Volume + ?Sized>(
    volume: &V,
    x: usize,
    y: usize,
    t: usize,
    c: usize,
    tau: f64,
) -> TernaryPattern {
    pattern_clamped(volume, x, y, t, c, tau, volume.depth() - 1)
}

#[inline]
fn clamp(v: isize, hi: usize) -> usize {
    if v < 0 {
        0
    } else if v as usize > hi {
        hi
    } else {
        v as usize
    }
}

/// Like [`cs_stltp_pixel`] but temporal neighbours are clamped to `t_max`.
fn pattern_clamped<V: Volume + ?Sized>(
    volume: &V,
    x: usize,
    y: usize,
    t: usize,
    c: usize,
    tau: f64,
    t_max: usize,
) -> TernaryPattern {
    let x_max = volume.width() - 1;
    let y_max = volume.height() - 1;
    let mut trits = [0i8; TRITS];
    for (j, &(dx, dt)) in PLANE_DIRS.iter().enumerate() {
        let mut ring = [0.0f64; 8];
        for (m, &(a, b)) in RING.iter().enumerate() {
            let nx = clamp(x as isize + a * dx, x_max);
            let ny = clamp(y as isize + b, y_max);
            let nt = clamp(t as isize + a * dt, t_max);
            ring[m] = volume.sample(nx, ny, nt, c);
        }
        for m in 0..4 {
            trits[j * 4 + m] = s_tau(ring[m], ring[m + 4], tau);
        }
    }
    TernaryPattern(trits)
}

/// A w×h×t block of a volume at a fixed grid location.
///
/// Temporal neighbours used by the descriptor come from the surrounding
/// volume but never from frames after the brick's last frame, so a brick can
/// be described as soon as its own frames have arrived.
#[derive(Debug, Clone, Copy)]
pub struct VideoBrick<'a, V: ?Sized> {
    volume: &'a V,
    pub grid_x: usize,
    pub grid_y: usize,
    pub x0: usize,
    pub y0: usize,
    pub frame_start: usize,
    pub width: usize,
    pub height: usize,
    pub depth: usize,
}

impl<'a, V: Volume + ?Sized> VideoBrick<'a, V> {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        volume: &'a V,
        grid: (usize, usize),
        origin: (usize, usize),
        frame_start: usize,
        width: usize,
        height: usize,
        depth: usize,
    ) -> Result<Self> {
        let (x0, y0) = origin;
        if width == 0 || height == 0 || depth == 0 {
            return Err(Error::invalid("brick dimensions must be non-zero"));
        }
        if x0 + width > volume.width()
            || y0 + height > volume.height()
            || frame_start + depth > volume.depth()
        {
            return Err(Error::invalid("brick extends outside the volume"));
        }
        Ok(VideoBrick {
            volume,
            grid_x: grid.0,
            grid_y: grid.1,
            x0,
            y0,
            frame_start,
            width,
            height,
            depth,
        })
    }

    pub fn volume(&self) -> &'a V {
        self.volume
    }

    pub fn channels(&self) -> usize {
        self.volume.channels()
    }

    pub fn voxel_count(&self) -> usize {
        self.width * self.height * self.depth
    }

    /// Intensities in (t, y, x, channel) order.
    pub fn voxels(&self) -> Vec<f64> {
        let ch = self.channels();
        let mut out = Vec::with_capacity(self.voxel_count() * ch);
        for t in 0..self.depth {
            for y in 0..self.height {
                for x in 0..self.width {
                    for c in 0..ch {
                        out.push(self.volume.sample(
                            self.x0 + x,
                            self.y0 + y,
                            self.frame_start + t,
                            c,
                        ));
                    }
                }
            }
        }
        out
    }

    /// CS-STLTP pattern of brick-local voxel (x, y, t) in channel `c`.
    pub fn pattern(&self, x: usize, y: usize, t: usize, c: usize, tau: f64) -> TernaryPattern {
        pattern_clamped(
            self.volume,
            self.x0 + x,
            self.y0 + y,
            self.frame_start + t,
            c,
            tau,
            self.frame_start + self.depth - 1,
        )
    }
}

/// Feature vector of one brick.
#[derive(Debug, Clone, PartialEq)]
pub struct BrickDescriptor {
    pub values: Vec<f64>,
    pub mode: DescriptorMode,
}

impl BrickDescriptor {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl AsRef<[f64]> for BrickDescriptor {
    fn as_ref(&self) -> &[f64] {
        &self.values
    }
}

/// Describes a brick. CS-STLTP histograms hold raw (unnormalized) counts.
pub fn brick_descriptor<V: Volume + ?Sized>(
    brick: &VideoBrick<'_, V>,
    mode: DescriptorMode,
    tau: f64,
) -> BrickDescriptor {
    let values = match mode {
        DescriptorMode::Rgb => brick.voxels(),
        DescriptorMode::CsStltp => {
            let ch = brick.channels();
            let mut hist = vec![0.0; BINS * ch];
            for c in 0..ch {
                for t in 0..brick.depth {
                    for y in 0..brick.height {
                        for x in 0..brick.width {
                            let bin = pattern_to_bin(&brick.pattern(x, y, t, c, tau));
                            hist[c * BINS + bin] += PLANES as f64;
                        }
                    }
                }
            }
            hist
        }
    };
    BrickDescriptor { values, mode }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant_volume(v: f64, w: usize, h: usize, t: usize, c: usize) -> DenseVolume {
        DenseVolume::new(w, h, t, c, vec![v; w * h * t * c]).unwrap()
    }

    #[test]
    fn trit_examples() {
        assert_eq!(s_tau(130.0, 100.0, 0.2), 1);
        assert_eq!(s_tau(75.0, 100.0, 0.2), -1);
        assert_eq!(s_tau(110.0, 100.0, 0.2), 0);
        assert_eq!(s_tau(0.0, 0.0, 0.2), 0);
    }

    #[test]
    fn constant_volume_gives_zero_pattern() {
        let vol = constant_volume(90.0, 5, 5, 3, 1);
        for (x, y, t) in [(0, 0, 0), (2, 2, 1), (4, 4, 2)] {
            assert_eq!(cs_stltp_pixel(&vol, x, y, t, 0, 0.2).0, [0; TRITS]);
        }
    }

    #[test]
    fn bins_for_named_patterns() {
        assert_eq!(pattern_to_bin(&TernaryPattern([0; TRITS])), 1);
        assert_eq!(pattern_to_bin(&TernaryPattern([1; TRITS])), 2);
        assert_eq!(pattern_to_bin(&TernaryPattern([-1; TRITS])), 0);
        let mut p = [0i8; TRITS];
        p[0] = 1;
        assert_eq!(pattern_to_bin(&TernaryPattern(p)), 5);
        let alternating: [i8; TRITS] = core::array::from_fn(|i| if i % 2 == 0 { 1 } else { -1 });
        assert_eq!(pattern_to_bin(&TernaryPattern(alternating)), 15 * 3 + 1);
    }

    #[test]
    fn spatial_plane_sees_horizontal_edge() {
        // Left half dark, right half bright: the 0° plane pair (x+1, x-1)
        // straddles the edge at x = 2.
        let (w, h, t) = (4, 3, 1);
        let data: Vec<f64> = (0..w * h * t)
            .map(|i| if i % w >= 2 { 200.0 } else { 50.0 })
            .collect();
        let vol = DenseVolume::new(w, h, t, 1, data).unwrap();
        let p = cs_stltp_pixel(&vol, 1, 1, 0, 0, 0.2);
        // Plane 0, m = 0 compares (x+1, y) with (x-1, y).
        assert_eq!(p.0[0], 1);
        // The 90° plane only moves in t and y, both constant here.
        assert_eq!(&p.0[8..12], &[0, 0, 0, 0]);
    }

    #[test]
    fn temporal_plane_sees_change() {
        let (w, h, t) = (3, 3, 3);
        let data: Vec<f64> = (0..w * h * t)
            .map(|i| if i / (w * h) == 2 { 150.0 } else { 100.0 })
            .collect();
        let vol = DenseVolume::new(w, h, t, 1, data).unwrap();
        let p = cs_stltp_pixel(&vol, 1, 1, 1, 0, 0.2);
        // 90° plane, m = 0 compares (t+1) with (t-1).
        assert_eq!(p.0[8], 1);
        assert_eq!(&p.0[0..4], &[0, 0, 0, 0]);
    }

    #[test]
    fn constant_brick_histogram() {
        let vol = constant_volume(77.0, 8, 8, 5, 1);
        let brick = VideoBrick::new(&vol, (0, 0), (4, 4), 0, 4, 4, 5).unwrap();
        let d = brick_descriptor(&brick, DescriptorMode::CsStltp, 0.2);
        assert_eq!(d.len(), BINS);
        assert_eq!(d.values[1], 320.0);
        assert_eq!(d.values.iter().sum::<f64>(), 320.0);
    }

    #[test]
    fn rgb_descriptor_order() {
        let data: Vec<f64> = (0..2 * 2 * 2 * 3).map(|i| i as f64).collect();
        let vol = DenseVolume::new(2, 2, 2, 3, data.clone()).unwrap();
        let brick = VideoBrick::new(&vol, (0, 0), (0, 0), 0, 2, 2, 2).unwrap();
        let d = brick_descriptor(&brick, DescriptorMode::Rgb, 0.2);
        assert_eq!(d.values, data);
    }

    #[test]
    fn multichannel_histograms_concatenate() {
        let vol = constant_volume(10.0, 4, 4, 5, 3);
        let brick = VideoBrick::new(&vol, (0, 0), (0, 0), 0, 4, 4, 5).unwrap();
        let d = brick_descriptor(&brick, DescriptorMode::CsStltp, 0.2);
        assert_eq!(d.len(), 3 * BINS);
        for c in 0..3 {
            assert_eq!(d.values[c * BINS + 1], 320.0);
        }
    }

    #[test]
    fn brick_bounds_checked() {
        let vol = constant_volume(1.0, 4, 4, 5, 1);
        assert!(VideoBrick::new(&vol, (0, 0), (1, 0), 0, 4, 4, 5).is_err());
        assert!(VideoBrick::new(&vol, (0, 0), (0, 0), 1, 4, 4, 5).is_err());
    }

    #[test]
    fn brick_does_not_read_future_frames() {
        // Frame 5 differs; a brick covering frames 0..5 must not see it.
        let (w, h, t) = (4, 4, 6);
        let data: Vec<f64> = (0..w * h * t)
            .map(|i| if i / (w * h) == 5 { 250.0 } else { 60.0 })
            .collect();
        let vol = DenseVolume::new(w, h, t, 1, data).unwrap();
        let brick = VideoBrick::new(&vol, (0, 0), (0, 0), 0, 4, 4, 5).unwrap();
        let d = brick_descriptor(&brick, DescriptorMode::CsStltp, 0.2);
        assert_eq!(d.values[1], 320.0);
    }
}
