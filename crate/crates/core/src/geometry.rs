//! Pinhole projection for a two-camera rig with optional yaw misalignment.
//!
//! The rig frame has its origin midway between the optical centers, `x` to
//! the right, `y` up and `z` forward. The left camera sits at `(-d/2, 0, 0)`
//! looking down `+z`; the right camera sits at `(+d/2, 0, 0)` and may be
//! yawed about the vertical axis. With zero yaw the pair is rectified: a
//! point lands on the same image row in both views.

use crate::error::{Result, StereoError};
use std::f64::consts::FRAC_PI_2;

/// Sensor resolution and horizontal field of view.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CameraModel {
    h_resolution: u32,
    v_resolution: u32,
    fov_rad: f64,
}

impl CameraModel {
    pub fn new(h_resolution: u32, v_resolution: u32, fov_rad: f64) -> Result<Self> {
        if h_resolution < 2 || v_resolution < 2 {
            return Err(StereoError::invalid(format!(
                "resolution must be at least 2x2 (got {h_resolution}x{v_resolution})"
            )));
        }
        if !(fov_rad > 0.0 && fov_rad < FRAC_PI_2) {
            return Err(StereoError::invalid(format!(
                "field of view must lie in (0°, 90°) (got {:.6}°)",
                fov_rad.to_degrees()
            )));
        }
        Ok(Self { h_resolution, v_resolution, fov_rad })
    }

    pub fn from_degrees(h_resolution: u32, v_resolution: u32, fov_deg: f64) -> Result<Self> {
        Self::new(h_resolution, v_resolution, fov_deg.to_radians())
    }

    pub fn h_resolution(&self) -> u32 {
        self.h_resolution
    }

    pub fn v_resolution(&self) -> u32 {
        self.v_resolution
    }

    pub fn fov_rad(&self) -> f64 {
        self.fov_rad
    }

    /// Focal length in pixels, `H / tan(fov)`.
    pub fn focal_pixels(&self) -> f64 {
        focal_pixels(self)
    }
}

/// Two identical cameras separated by `baseline_m`, the right one yawed by
/// `right_yaw_rad`. Negative yaw reduces the measured disparity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StereoRig {
    camera: CameraModel,
    baseline_m: f64,
    right_yaw_rad: f64,
}

impl StereoRig {
    pub fn new(camera: CameraModel, baseline_m: f64, right_yaw_rad: f64) -> Result<Self> {
        if !(baseline_m > 0.0 && baseline_m.is_finite()) {
            return Err(StereoError::invalid(format!("baseline must be > 0 m (got {baseline_m})")));
        }
        if !(right_yaw_rad.abs() < camera.fov_rad()) {
            return Err(StereoError::invalid(format!(
                "yaw misalignment must be smaller than the field of view (got {:.6}°)",
                right_yaw_rad.to_degrees()
            )));
        }
        Ok(Self { camera, baseline_m, right_yaw_rad })
    }

    /// Ideal rig with parallel optical axes.
    pub fn aligned(camera: CameraModel, baseline_m: f64) -> Result<Self> {
        Self::new(camera, baseline_m, 0.0)
    }

    pub fn camera(&self) -> &CameraModel {
        &self.camera
    }

    pub fn baseline_m(&self) -> f64 {
        self.baseline_m
    }

    pub fn right_yaw_rad(&self) -> f64 {
        self.right_yaw_rad
    }

    /// Same rig with a different yaw.
    pub fn with_yaw(&self, right_yaw_rad: f64) -> Result<Self> {
        Self::new(self.camera, self.baseline_m, right_yaw_rad)
    }

    pub(crate) fn left_center_x(&self) -> f64 {
        -self.baseline_m / 2.0
    }

    pub(crate) fn right_center_x(&self) -> f64 {
        self.baseline_m / 2.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorldPoint {
    pub x_m: f64,
    pub y_m: f64,
    pub z_m: f64,
}

impl WorldPoint {
    pub fn new(x_m: f64, y_m: f64, z_m: f64) -> Self {
        Self { x_m, y_m, z_m }
    }

    pub fn on_axis(z_m: f64) -> Self {
        Self::new(0.0, 0.0, z_m)
    }
}

/// Continuous image coordinates of one world point in both views.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionPair {
    pub u_left: f64,
    pub u_right: f64,
    pub v: f64,
}

impl ProjectionPair {
    /// Continuous disparity `u_left - u_right`.
    pub fn disparity(&self) -> f64 {
        self.u_left - self.u_right
    }

    /// Integer disparity after flooring both coordinates.
    pub fn quantized_disparity(&self) -> i64 {
        quantize_coord(self.u_left) - quantize_coord(self.u_right)
    }
}

pub fn focal_pixels(camera: &CameraModel) -> f64 {
    camera.h_resolution as f64 / camera.fov_rad.tan()
}

/// Projects a world point through both cameras of the rig.
pub fn project_pair(rig: &StereoRig, p: &WorldPoint) -> Result<ProjectionPair> {
    if !(p.z_m > 0.0) {
        return Err(StereoError::ProjectionUndefined);
    }
    let f = rig.camera.focal_pixels();
    let cu = rig.camera.h_resolution as f64 / 2.0;
    let cv = rig.camera.v_resolution as f64 / 2.0;

    let u_left = cu + f * (p.x_m - rig.left_center_x()) / p.z_m;

    let (sin_d, cos_d) = rig.right_yaw_rad.sin_cos();
    let dx = p.x_m - rig.right_center_x();
    let x_c = cos_d * dx - sin_d * p.z_m;
    let z_c = sin_d * dx + cos_d * p.z_m;
    if !(z_c > 0.0) {
        return Err(StereoError::ProjectionUndefined);
    }
    let u_right = cu + f * x_c / z_c;

    let v = cv + f * p.y_m / p.z_m;
    Ok(ProjectionPair { u_left, u_right, v })
}

/// Pixel index containing a continuous coordinate (floor).
pub fn quantize_coord(u: f64) -> i64 {
    u.floor() as i64
}
