//! Synthetic stereo pairs and integer-disparity block matching.
//!
//! [`render_pair`] paints textured fronto-parallel rectangles into both
//! views of a rig; the texture is anchored in world coordinates so the two
//! images are consistent samples of the same surface. [`block_match`]
//! recovers the integer disparity of a ground-truth box by minimizing the
//! mean absolute difference along the epipolar rows.

mod block;
mod image;
mod render;

pub use block::block_match;
pub use image::Image;
pub use render::{render_pair, texture_value, BoundingBox, RenderedPair, Scene, TargetSpec, TEXTURE_SIZE};
