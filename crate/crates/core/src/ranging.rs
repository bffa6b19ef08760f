//! Closed-form distance and error formulas.
//!
//! Range follows a hyperbola in disparity, `r(n) = C / n` with
//! `C = d·H / tan(fov)`. Everything here is a pure function of its inputs.

use crate::error::{Result, StereoError};
use crate::geometry::CameraModel;
use std::f64::consts::FRAC_PI_2;

/// Default boundary-localization constant for [`size_dependent_error`], in px².
pub const DEFAULT_KAPPA: f64 = 32.0;

/// Integer pixel difference `x_left - x_right`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Disparity(pub i64);

impl Disparity {
    /// Checked constructor; rejects disparities below one pixel.
    pub fn new(px: i64) -> Result<Self> {
        let dx = Disparity(px);
        dx.check()?;
        Ok(dx)
    }

    pub fn px(self) -> i64 {
        self.0
    }

    fn check(self) -> Result<()> {
        if self.0 < 1 {
            Err(StereoError::NonPositiveDisparity(self.0))
        } else {
            Ok(())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RangeEstimate {
    pub range_m: f64,
    /// Relative gap to the next representable range at this disparity.
    pub eps_quantization: f64,
}

/// Value carried by one curve sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SampleValue {
    Value(f64),
    /// Perturbed disparity is non-positive; the measurement has no finite range.
    Divergent,
    /// Boundary uncertainty swallows the whole disparity.
    Unmeasurable,
}

impl SampleValue {
    pub fn value(self) -> Option<f64> {
        match self {
            SampleValue::Value(v) => Some(v),
            _ => None,
        }
    }
}

/// One point of a plotted curve. `abscissa` is a disparity, an angle in
/// degrees, or a range in meters depending on the curve; `group_key` is the
/// baseline or target width for curve families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorSample {
    pub abscissa: f64,
    pub group_key: f64,
    pub value: SampleValue,
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(StereoError::invalid(format!("{name} must be > 0 (got {v})")))
    }
}

fn check_fov(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < FRAC_PI_2 {
        Ok(())
    } else {
        Err(StereoError::invalid(format!("field of view must lie in (0°, 90°) (got {:.6}°)", alpha.to_degrees())))
    }
}

fn range_constant(d: f64, h_resolution: u32, alpha: f64) -> Result<f64> {
    check_positive("baseline", d)?;
    if h_resolution < 2 {
        return Err(StereoError::invalid(format!("horizontal resolution must be ≥ 2 (got {h_resolution})")));
    }
    check_fov(alpha)?;
    Ok(d * h_resolution as f64 / alpha.tan())
}

/// Range for an integer disparity: `d·H / (tan(alpha)·dx)`.
pub fn range_from_disparity(d: f64, h_resolution: u32, alpha: f64, dx: Disparity) -> Result<RangeEstimate> {
    dx.check()?;
    let c = range_constant(d, h_resolution, alpha)?;
    Ok(RangeEstimate { range_m: c / dx.0 as f64, eps_quantization: quantization_error(dx)? })
}

/// Range from focal length in pixels and baseline: `f·d / dx`.
pub fn range_eq1(f_px: f64, d: f64, dx: Disparity) -> Result<f64> {
    dx.check()?;
    check_positive("focal length", f_px)?;
    check_positive("baseline", d)?;
    Ok(f_px * d / dx.0 as f64)
}

/// Continuous disparity a point at range `r` produces on an aligned rig.
pub fn disparity_for_range(d: f64, h_resolution: u32, alpha: f64, r: f64) -> Result<f64> {
    check_positive("range", r)?;
    Ok(range_constant(d, h_resolution, alpha)? / r)
}

/// Relative gap between the ranges at disparities `n` and `n + 1`,
/// `(r(n) - r(n+1)) / r(n) = 1 / (n + 1)`. Independent of the rig.
pub fn quantization_error(dx: Disparity) -> Result<f64> {
    dx.check()?;
    Ok(1.0 / (dx.0 as f64 + 1.0))
}

/// Smallest disparity whose quantization error does not exceed `sensitivity`.
pub fn min_reliable_disparity(sensitivity: f64) -> Result<i64> {
    if !(sensitivity > 0.0 && sensitivity < 1.0) {
        return Err(StereoError::invalid(format!("sensitivity must lie in (0, 1) (got {sensitivity})")));
    }
    let eps = |n: i64| 1.0 / (n as f64 + 1.0);
    // closed form ceil(1/s - 1), then nudged against rounding in 1/s
    let mut n = ((1.0 / sensitivity) - 1.0).ceil().max(1.0) as i64;
    while eps(n) > sensitivity {
        n += 1;
    }
    while n > 1 && eps(n - 1) <= sensitivity {
        n -= 1;
    }
    Ok(n)
}

/// Baseline needed so that a target at `r_max` still produces `dx_min`
/// pixels of disparity: `r_max·tan(alpha)·dx_min / H`.
pub fn design_baseline(r_max: f64, alpha: f64, h_resolution: u32, dx_min: i64) -> Result<f64> {
    check_positive("maximum range", r_max)?;
    check_fov(alpha)?;
    if h_resolution < 1 {
        return Err(StereoError::invalid("horizontal resolution must be positive"));
    }
    if dx_min < 0 {
        return Err(StereoError::invalid(format!("minimum disparity must be ≥ 0 (got {dx_min})")));
    }
    Ok(r_max * alpha.tan() * dx_min as f64 / h_resolution as f64)
}

/// Worst-case relative range error caused by imprecise target boundaries.
///
/// A target of width `w` at range `r` spans `s = f·w/r` pixels. Its
/// boundaries can be localized only to `p = max(1, ceil(kappa/s))` pixels,
/// which biases the disparity low by up to `p`. The returned error is the
/// resulting range overestimate `p / (D - p)`, where `D` is the true
/// continuous disparity. `None` means the target is unmeasurable (`D ≤ p`).
pub fn size_dependent_error(
    camera: &CameraModel,
    d: f64,
    target_width_m: f64,
    r: f64,
    kappa: f64,
) -> Result<Option<f64>> {
    check_positive("target width", target_width_m)?;
    check_positive("range", r)?;
    check_positive("kappa", kappa)?;
    let apparent_px = camera.focal_pixels() * target_width_m / r;
    let p = (kappa / apparent_px).ceil().max(1.0);
    let true_disparity = disparity_for_range(d, camera.h_resolution(), camera.fov_rad(), r)?;
    if true_disparity - p <= 0.0 {
        Ok(None)
    } else {
        Ok(Some(p / (true_disparity - p)))
    }
}

/// Range against integer disparity for `dx_lo..=dx_hi`.
pub fn fig1_curve(d: f64, h_resolution: u32, alpha: f64, dx_range: (i64, i64)) -> Result<Vec<ErrorSample>> {
    let (lo, hi) = dx_range;
    if lo < 1 || hi < lo {
        return Err(StereoError::invalid(format!("disparity range must satisfy 1 ≤ lo ≤ hi (got [{lo}, {hi}])")));
    }
    (lo..=hi)
        .map(|n| {
            let est = range_from_disparity(d, h_resolution, alpha, Disparity(n))?;
            Ok(ErrorSample { abscissa: n as f64, group_key: d, value: SampleValue::Value(est.range_m) })
        })
        .collect()
}

/// Size-dependent error against range, one curve per target width.
/// Rows are ordered by width, then by range.
pub fn fig3_curve(
    camera: &CameraModel,
    d: f64,
    widths: &[f64],
    r_range: (f64, f64),
    r_step: f64,
    kappa: f64,
) -> Result<Vec<ErrorSample>> {
    if widths.is_empty() {
        return Err(StereoError::invalid("at least one target width is required"));
    }
    let (lo, hi) = r_range;
    check_positive("range lower bound", lo)?;
    if !(hi >= lo) {
        return Err(StereoError::invalid(format!("range upper bound must be ≥ lower bound (got [{lo}, {hi}])")));
    }
    let grid = sweep(lo, hi, r_step)?;
    let mut out = Vec::with_capacity(widths.len() * grid.len());
    for &w in widths {
        for &r in &grid {
            let value = match size_dependent_error(camera, d, w, r, kappa)? {
                Some(e) => SampleValue::Value(e),
                None => SampleValue::Unmeasurable,
            };
            out.push(ErrorSample { abscissa: r, group_key: w, value });
        }
    }
    Ok(out)
}

/// Evenly spaced points from `from` toward `to` (inclusive), `step > 0`.
/// Points are computed as `from ± i·step` so no error accumulates.
pub(crate) fn sweep(from: f64, to: f64, step: f64) -> Result<Vec<f64>> {
    check_positive("step", step)?;
    if !from.is_finite() || !to.is_finite() {
        return Err(StereoError::invalid("sweep bounds must be finite"));
    }
    let span = (to - from).abs();
    let sign = if to >= from { 1.0 } else { -1.0 };
    let n = (span / step + 1e-9).floor() as usize;
    if n > 10_000_000 {
        return Err(StereoError::invalid("sweep has too many points"));
    }
    Ok((0..=n).map(|i| from + sign * i as f64 * step).collect())
}
