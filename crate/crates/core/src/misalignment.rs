//! Range error caused by a yawed right camera.
//!
//! The measured disparity comes from exact projection through the yawed
//! rig, then goes through the aligned-rig range formula unquantized, so the
//! result isolates the misalignment effect.

use crate::error::{Result, StereoError};
use crate::geometry::{project_pair, CameraModel, StereoRig, WorldPoint};
use crate::ranging::{sweep, ErrorSample, SampleValue};
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MisalignmentResult {
    pub delta_rad: f64,
    pub baseline_m: f64,
    pub true_range_m: f64,
    /// Continuous disparity measured through the yawed rig.
    pub measured_disparity_px: f64,
    /// `None` when the perturbed disparity is not positive.
    pub measured_range_m: Option<f64>,
    pub rel_error: Option<f64>,
}

impl MisalignmentResult {
    pub fn is_divergent(&self) -> bool {
        self.rel_error.is_none()
    }
}

/// Relative range error for an on-axis point at `r_true` seen through `rig`.
pub fn misalignment_range_error(rig: &StereoRig, r_true: f64) -> Result<MisalignmentResult> {
    if !(r_true > 0.0 && r_true.is_finite()) {
        return Err(StereoError::invalid(format!("true range must be > 0 (got {r_true})")));
    }
    let mut result = MisalignmentResult {
        delta_rad: rig.right_yaw_rad(),
        baseline_m: rig.baseline_m(),
        true_range_m: r_true,
        measured_disparity_px: f64::NAN,
        measured_range_m: None,
        rel_error: None,
    };
    let pair = match project_pair(rig, &WorldPoint::on_axis(r_true)) {
        Ok(p) => p,
        Err(StereoError::ProjectionUndefined) => return Ok(result),
        Err(e) => return Err(e),
    };
    let measured = pair.disparity();
    result.measured_disparity_px = measured;
    if measured > 0.0 {
        // the aligned rig through the same projection path; the range
        // formula is r = C / D, so r_measured = r_true · D_true / D'
        let aligned = rig.with_yaw(0.0)?;
        let true_disparity = project_pair(&aligned, &WorldPoint::on_axis(r_true))?.disparity();
        let ratio = true_disparity / measured;
        result.measured_range_m = Some(r_true * ratio);
        result.rel_error = Some(ratio - 1.0);
    }
    Ok(result)
}

/// Misalignment error on a yaw grid for each baseline. The grid runs from
/// `delta_range_deg.0` toward `delta_range_deg.1` in steps of
/// `delta_step_deg`; rows are ordered by baseline, then yaw. Abscissae are
/// signed yaw in degrees.
pub fn fig2_curve(
    camera: &CameraModel,
    baselines: &[f64],
    r: f64,
    delta_range_deg: (f64, f64),
    delta_step_deg: f64,
) -> Result<Vec<ErrorSample>> {
    if baselines.is_empty() {
        return Err(StereoError::invalid("at least one baseline is required"));
    }
    let grid = sweep(delta_range_deg.0, delta_range_deg.1, delta_step_deg)?;
    let cells: Vec<(f64, f64)> = baselines.iter().flat_map(|&d| grid.iter().map(move |&deg| (d, deg))).collect();
    cells
        .par_iter()
        .map(|&(d, deg)| {
            let rig = StereoRig::new(*camera, d, deg.to_radians())?;
            let res = misalignment_range_error(&rig, r)?;
            let value = match res.rel_error {
                Some(e) => SampleValue::Value(e),
                None => SampleValue::Divergent,
            };
            Ok(ErrorSample { abscissa: deg, group_key: d, value })
        })
        .collect()
}
