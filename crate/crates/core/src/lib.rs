//! Brick-wise dynamic subspace background subtraction.
//!
//! Every spatial location of a video is modelled as a small linear dynamic
//! system over "video bricks" (w×h×t voxel volumes). A location's model holds
//! an orthonormal appearance basis, a state transition matrix and a basis of
//! the state innovation noise. New bricks are segmented by thresholding their
//! appearance and state residuals, and the model is kept current with an
//! occlusion-compensated robust incremental PCA.
//!
//! This crate is `no_std` (it needs `alloc`). File formats, configuration
//! files, the command line and multi-threaded execution live in the `brickbg`
//! companion crate.

#![no_std]
#![forbid(unsafe_code)]
// `!(x >= 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;
mod float;

pub mod features;
pub mod frame;
pub mod maintenance;
pub mod metrics;
pub mod numerics;
pub mod params;
pub mod pipeline;
pub mod segmentation;
pub mod subspace;
pub mod synth;

pub use crate::error::{Error, Result};
pub use crate::features::{BrickDescriptor, DescriptorMode, VideoBrick};
pub use crate::frame::{Frame, MaskFrame};
pub use crate::metrics::{EvalReport, Tally};
pub use crate::numerics::Matrix;
pub use crate::params::Params;
pub use crate::pipeline::{Scene, Sequential};
pub use crate::subspace::SubspaceModel;
