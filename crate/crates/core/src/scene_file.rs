//! JSON scene description consumed by `simulate` and `track`.

use crate::error::{Result, StereoError};
use crate::geometry::{CameraModel, StereoRig};
use crate::matcher::{Scene, TargetSpec};
use crate::pipeline::{validate_frames, FrameSpec};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneFile {
    pub camera: CameraSection,
    pub rig: RigSection,
    #[serde(default = "default_background")]
    pub background_intensity: i64,
    pub targets: Vec<TargetSection>,
    #[serde(default = "default_frames")]
    pub frames: Vec<FrameSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CameraSection {
    pub h_resolution: i64,
    pub v_resolution: i64,
    pub fov_deg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RigSection {
    pub baseline_m: f64,
    #[serde(default)]
    pub right_yaw_deg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetSection {
    pub range_m: f64,
    pub lateral_m: f64,
    pub width_m: f64,
    pub height_m: f64,
    pub texture_seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameSection {
    pub t_s: f64,
    pub ego_advance_m: f64,
}

fn default_background() -> i64 {
    Scene::DEFAULT_BACKGROUND as i64
}

fn default_frames() -> Vec<FrameSection> {
    vec![FrameSection { t_s: 0.0, ego_advance_m: 0.0 }]
}

fn resolution(name: &str, v: i64) -> Result<u32> {
    u32::try_from(v).map_err(|_| StereoError::invalid(format!("{name} out of range (got {v})")))
}

impl SceneFile {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| StereoError::invalid(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Validated scene and frame list.
    pub fn build(&self) -> Result<(Scene, Vec<FrameSpec>)> {
        let camera = CameraModel::from_degrees(
            resolution("h_resolution", self.camera.h_resolution)?,
            resolution("v_resolution", self.camera.v_resolution)?,
            self.camera.fov_deg,
        )?;
        let rig = StereoRig::new(camera, self.rig.baseline_m, self.rig.right_yaw_deg.to_radians())?;
        let background = u8::try_from(self.background_intensity).map_err(|_| {
            StereoError::invalid(format!(
                "background_intensity must lie in 0..=255 (got {})",
                self.background_intensity
            ))
        })?;
        let targets = self
            .targets
            .iter()
            .map(|t| TargetSpec {
                range_m: t.range_m,
                lateral_m: t.lateral_m,
                width_m: t.width_m,
                height_m: t.height_m,
                texture_seed: t.texture_seed,
            })
            .collect();
        let scene = Scene::new(rig, background, targets)?;
        if self.frames.is_empty() {
            return Err(StereoError::invalid("at least one frame is required"));
        }
        let frames: Vec<FrameSpec> =
            self.frames.iter().map(|f| FrameSpec { t_s: f.t_s, ego_advance_m: f.ego_advance_m }).collect();
        validate_frames(&scene, &frames)?;
        Ok((scene, frames))
    }
}
