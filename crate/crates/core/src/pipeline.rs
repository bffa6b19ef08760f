//! Frame-sequence ranging and closing-rate warnings.
//!
//! Each frame advances the ego vehicle toward every target, renders the
//! stereo pair, matches each target's ground-truth box and converts the
//! disparity to a range. Consecutive estimates of the same target give a
//! closing speed and time to collision.

use crate::error::{Result, StereoError};
use crate::matcher::{block_match, render_pair, RenderedPair, Scene};
use crate::ranging::{range_from_disparity, Disparity};
use rayon::prelude::*;

pub const DEFAULT_TTC_THRESHOLD_S: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameSpec {
    pub t_s: f64,
    /// Distance subtracted from every target's range at this frame.
    pub ego_advance_m: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameEstimate {
    pub t_s: f64,
    pub target_index: usize,
    pub disparity_px: i64,
    pub range_m: f64,
    pub true_range_m: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SkipReason {
    OutOfView,
    NoOverlap,
    NonPositiveDisparity,
}

/// A target that produced no estimate in some frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkippedTarget {
    pub frame_index: usize,
    pub t_s: f64,
    pub target_index: usize,
    pub reason: SkipReason,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrameResult {
    pub frame_index: usize,
    pub t_s: f64,
    pub images: RenderedPair,
    pub estimates: Vec<FrameEstimate>,
    pub skipped: Vec<SkippedTarget>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SequenceReport {
    /// Frame order, then target order.
    pub estimates: Vec<FrameEstimate>,
    pub skipped: Vec<SkippedTarget>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WarningEvent {
    pub t_s: f64,
    pub target_index: usize,
    pub closing_speed_mps: f64,
    pub ttc_s: f64,
}

/// Checks frame timestamps and that every target stays in front of the rig.
pub fn validate_frames(scene: &Scene, frames: &[FrameSpec]) -> Result<()> {
    for f in frames {
        if !f.t_s.is_finite() || !f.ego_advance_m.is_finite() {
            return Err(StereoError::invalid("frame time and advance must be finite"));
        }
        for (i, t) in scene.targets().iter().enumerate() {
            if t.range_m - f.ego_advance_m <= 0.0 {
                return Err(StereoError::invalid(format!("target {i} range becomes non-positive at t = {} s", f.t_s)));
            }
        }
    }
    if frames.windows(2).any(|w| w[1].t_s <= w[0].t_s) {
        return Err(StereoError::invalid("frame timestamps must be strictly increasing"));
    }
    Ok(())
}

/// Renders and ranges every target of one frame.
pub fn process_frame(scene: &Scene, frame_index: usize, frame: &FrameSpec) -> Result<FrameResult> {
    let advanced = scene.advanced(frame.ego_advance_m)?;
    let images = render_pair(&advanced);
    let cam = advanced.camera();
    let d_max = cam.h_resolution() as usize / 4;

    let mut estimates = Vec::new();
    let mut skipped = Vec::new();
    for (target_index, target) in advanced.targets().iter().enumerate() {
        let skip = |reason| SkippedTarget { frame_index, t_s: frame.t_s, target_index, reason };
        let Some(region) = images.left_boxes[target_index] else {
            skipped.push(skip(SkipReason::OutOfView));
            continue;
        };
        let disparity_px = match block_match(&images.left, &images.right, &region, d_max) {
            Ok(k) => k,
            Err(StereoError::NoOverlap) => {
                skipped.push(skip(SkipReason::NoOverlap));
                continue;
            }
            Err(e) => return Err(e),
        };
        if disparity_px < 1 {
            skipped.push(skip(SkipReason::NonPositiveDisparity));
            continue;
        }
        let est = range_from_disparity(
            advanced.rig().baseline_m(),
            cam.h_resolution(),
            cam.fov_rad(),
            Disparity(disparity_px),
        )?;
        estimates.push(FrameEstimate {
            t_s: frame.t_s,
            target_index,
            disparity_px,
            range_m: est.range_m,
            true_range_m: target.range_m,
        });
    }
    Ok(FrameResult { frame_index, t_s: frame.t_s, images, estimates, skipped })
}

/// Processes every frame; frames run in parallel, results keep frame order.
pub fn run_sequence(scene: &Scene, frames: &[FrameSpec]) -> Result<SequenceReport> {
    validate_frames(scene, frames)?;
    let results: Vec<FrameResult> =
        frames.par_iter().enumerate().map(|(i, f)| process_frame(scene, i, f)).collect::<Result<_>>()?;
    let mut report = SequenceReport::default();
    for r in results {
        report.estimates.extend(r.estimates);
        report.skipped.extend(r.skipped);
    }
    Ok(report)
}

/// Closing-rate warnings from per-target range sequences.
///
/// For each pair of consecutive estimates of a target, closing speed is
/// `(r_prev - r_cur) / (t_cur - t_prev)` and time to collision `r_cur / v`.
/// An event fires when the target approaches (`v > 0`) with TTC below the
/// threshold. Events are ordered by time, then target index.
pub fn closing_warnings(estimates: &[FrameEstimate], ttc_threshold_s: f64) -> Result<Vec<WarningEvent>> {
    if !(ttc_threshold_s > 0.0) {
        return Err(StereoError::invalid(format!("TTC threshold must be > 0 (got {ttc_threshold_s})")));
    }
    let mut last: std::collections::BTreeMap<usize, &FrameEstimate> = Default::default();
    let mut events = Vec::new();
    for cur in estimates {
        if let Some(prev) = last.insert(cur.target_index, cur) {
            let dt = cur.t_s - prev.t_s;
            if !(dt > 0.0) {
                return Err(StereoError::NonIncreasingTime);
            }
            let v = (prev.range_m - cur.range_m) / dt;
            if v > 0.0 {
                let ttc = cur.range_m / v;
                if ttc < ttc_threshold_s {
                    events.push(WarningEvent {
                        t_s: cur.t_s,
                        target_index: cur.target_index,
                        closing_speed_mps: v,
                        ttc_s: ttc,
                    });
                }
            }
        }
    }
    events.sort_by(|a, b| a.t_s.total_cmp(&b.t_s).then(a.target_index.cmp(&b.target_index)));
    Ok(events)
}
