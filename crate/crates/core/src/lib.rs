//! Stereo rangefinding toolkit.
//!
//! Converts integer pixel disparities between a rectified image pair into
//! distances, sizes a stereo rig for a required maximum range, and models
//! the three dominant error sources: disparity quantization, optical-axis
//! yaw misalignment, and target size (boundary localization). A small
//! synthetic renderer and SAD block matcher close the loop from images to
//! range estimates, and a closing-rate monitor turns range sequences into
//! time-to-collision warnings.
//!
//! Focal length follows the convention `f = H / tan(fov)` throughout, where
//! `H` is the horizontal resolution and `fov` the horizontal field of view.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod geometry;
pub mod matcher;
pub mod misalignment;
pub mod pipeline;
pub mod ranging;
pub mod report;
pub mod scene_file;

pub use error::{Result, StereoError};
pub use geometry::{focal_pixels, project_pair, quantize_coord, CameraModel, ProjectionPair, StereoRig, WorldPoint};
pub use matcher::{block_match, render_pair, texture_value, BoundingBox, Image, RenderedPair, Scene, TargetSpec};
pub use misalignment::{fig2_curve, misalignment_range_error, MisalignmentResult};
pub use pipeline::{closing_warnings, run_sequence, FrameEstimate, FrameSpec, SequenceReport, WarningEvent};
pub use ranging::{
    design_baseline, disparity_for_range, fig1_curve, fig3_curve, min_reliable_disparity, quantization_error,
    range_eq1, range_from_disparity, size_dependent_error, Disparity, ErrorSample, RangeEstimate, SampleValue,
};
