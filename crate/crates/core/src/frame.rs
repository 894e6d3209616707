use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// An 8-bit frame with interleaved channels, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    width: usize,
    height: usize,
    channels: usize,
    data: Vec<u8>,
}

impl Frame {
    pub fn new(width: usize, height: usize, channels: usize, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::invalid("frame dimensions must be non-zero"));
        }
        if channels != 1 && channels != 3 {
            return Err(Error::invalid("frames must have 1 or 3 channels"));
        }
        if data.len() != width * height * channels {
            return Err(Error::DimensionMismatch {
                expected: width * height * channels,
                actual: data.len(),
            });
        }
        Ok(Frame {
            width,
            height,
            channels,
            data,
        })
    }

    pub fn filled(width: usize, height: usize, channels: usize, value: u8) -> Result<Self> {
        Self::new(width, height, channels, vec![value; width * height * channels])
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn channels(&self) -> usize {
        self.channels
    }

    #[inline]
    pub fn data(&self) -> &[u8] {
        &self.data
    }

    #[inline]
    pub fn data_mut(&mut self) -> &mut [u8] {
        &mut self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, c: usize) -> u8 {
        self.data[(y * self.width + x) * self.channels + c]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, c: usize, v: u8) {
        self.data[(y * self.width + x) * self.channels + c] = v;
    }

    /// Same width, height and channel count.
    pub fn same_shape(&self, other: &Frame) -> bool {
        self.width == other.width && self.height == other.height && self.channels == other.channels
    }
}

/// Per-pixel foreground labels for one frame (`true` = foreground).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaskFrame {
    pub frame_index: usize,
    width: usize,
    height: usize,
    labels: Vec<bool>,
}

impl MaskFrame {
    pub fn empty(frame_index: usize, width: usize, height: usize) -> Self {
        MaskFrame {
            frame_index,
            width,
            height,
            labels: vec![false; width * height],
        }
    }

    pub fn from_labels(
        frame_index: usize,
        width: usize,
        height: usize,
        labels: Vec<bool>,
    ) -> Result<Self> {
        if labels.len() != width * height {
            return Err(Error::DimensionMismatch {
                expected: width * height,
                actual: labels.len(),
            });
        }
        Ok(MaskFrame {
            frame_index,
            width,
            height,
            labels,
        })
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn labels(&self) -> &[bool] {
        &self.labels
    }

    #[inline]
    pub fn labels_mut(&mut self) -> &mut [bool] {
        &mut self.labels
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        self.labels[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: bool) {
        self.labels[y * self.width + x] = v;
    }

    pub fn foreground_count(&self) -> usize {
        self.labels.iter().filter(|&&b| b).count()
    }
}
