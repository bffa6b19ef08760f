use super::Image;
use crate::error::{Result, StereoError};
use crate::geometry::{CameraModel, StereoRig};
use rayon::prelude::*;

/// Side length of the square texture grid painted on every target.
pub const TEXTURE_SIZE: u64 = 64;

const ZERO_SEED_REMAP: u64 = 0x9E37_79B9_7F4A_7C15;

/// Deterministic texel intensity: one xorshift64* step over the seed mixed
/// with the texel index, top 8 bits of the product.
pub fn texture_value(seed: u64, i: u64, j: u64) -> u8 {
    let seed = if seed == 0 { ZERO_SEED_REMAP } else { seed };
    let mut x = seed ^ ((i % TEXTURE_SIZE) * TEXTURE_SIZE + (j % TEXTURE_SIZE) + 1);
    x ^= x >> 12;
    x ^= x << 25;
    x ^= x >> 27;
    (x.wrapping_mul(0x2545_F491_4F6C_DD1D) >> 56) as u8
}

/// Fronto-parallel textured rectangle, vertically centered on the optical
/// axis height.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetSpec {
    pub range_m: f64,
    pub lateral_m: f64,
    pub width_m: f64,
    pub height_m: f64,
    pub texture_seed: u64,
}

impl TargetSpec {
    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| v > 0.0 && v.is_finite();
        if !ok(self.range_m) {
            return Err(StereoError::invalid(format!("target range must be > 0 (got {})", self.range_m)));
        }
        if !ok(self.width_m) || !ok(self.height_m) {
            return Err(StereoError::invalid(format!(
                "target size must be > 0 (got {} x {})",
                self.width_m, self.height_m
            )));
        }
        if !self.lateral_m.is_finite() {
            return Err(StereoError::invalid("target lateral offset must be finite"));
        }
        Ok(())
    }

    /// Same target moved `advance_m` closer.
    pub fn advanced(&self, advance_m: f64) -> Self {
        Self { range_m: self.range_m - advance_m, ..*self }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    rig: StereoRig,
    background_intensity: u8,
    targets: Vec<TargetSpec>,
}

impl Scene {
    pub const DEFAULT_BACKGROUND: u8 = 64;

    pub fn new(rig: StereoRig, background_intensity: u8, targets: Vec<TargetSpec>) -> Result<Self> {
        for t in &targets {
            t.validate()?;
        }
        Ok(Self { rig, background_intensity, targets })
    }

    pub fn rig(&self) -> &StereoRig {
        &self.rig
    }

    pub fn camera(&self) -> &CameraModel {
        self.rig.camera()
    }

    pub fn background_intensity(&self) -> u8 {
        self.background_intensity
    }

    pub fn targets(&self) -> &[TargetSpec] {
        &self.targets
    }

    /// Scene with every target advanced by `advance_m`.
    pub fn advanced(&self, advance_m: f64) -> Result<Self> {
        let targets = self.targets.iter().map(|t| t.advanced(advance_m)).collect();
        Self::new(self.rig, self.background_intensity, targets)
    }

    /// Target indices ordered far to near; equal ranges keep input order.
    fn paint_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.targets.len()).collect();
        order.sort_by(|&a, &b| self.targets[b].range_m.total_cmp(&self.targets[a].range_m));
        order
    }
}

/// Pixel bounds `[u_min, u_max) x [v_min, v_max)`, never empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BoundingBox {
    pub u_min: usize,
    pub u_max: usize,
    pub v_min: usize,
    pub v_max: usize,
}

impl BoundingBox {
    pub fn width(&self) -> usize {
        self.u_max - self.u_min
    }

    pub fn height(&self) -> usize {
        self.v_max - self.v_min
    }

    pub fn is_empty(&self) -> bool {
        self.u_max <= self.u_min || self.v_max <= self.v_min
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenderedPair {
    pub left: Image,
    pub right: Image,
    /// Per target, in scene order; `None` when the target is out of view.
    pub left_boxes: Vec<Option<BoundingBox>>,
    pub right_boxes: Vec<Option<BoundingBox>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Left,
    Right,
}

/// Pinhole view of one camera of the rig.
struct View {
    f: f64,
    cu: f64,
    cv: f64,
    center_x: f64,
    sin_yaw: f64,
    cos_yaw: f64,
}

impl View {
    fn new(rig: &StereoRig, side: Side) -> Self {
        let cam = rig.camera();
        let (center_x, yaw) = match side {
            Side::Left => (-rig.baseline_m() / 2.0, 0.0),
            Side::Right => (rig.baseline_m() / 2.0, rig.right_yaw_rad()),
        };
        let (sin_yaw, cos_yaw) = f64::sin_cos(yaw);
        Self {
            f: cam.focal_pixels(),
            cu: cam.h_resolution() as f64 / 2.0,
            cv: cam.v_resolution() as f64 / 2.0,
            center_x,
            sin_yaw,
            cos_yaw,
        }
    }

    /// Intersection of the ray through continuous image point `(u, v)` with
    /// the plane `z = depth`, as world `(x, y)`.
    fn back_project(&self, u: f64, v: f64, depth: f64) -> Option<(f64, f64)> {
        let xn = (u - self.cu) / self.f;
        let yn = (v - self.cv) / self.f;
        let dir_x = self.cos_yaw * xn + self.sin_yaw;
        let dir_z = -self.sin_yaw * xn + self.cos_yaw;
        if dir_z <= 0.0 {
            return None;
        }
        let t = depth / dir_z;
        Some((self.center_x + t * dir_x, t * yn))
    }

    /// Sub-samples per pixel along each axis needed to cover every texel
    /// under the pixel footprint; `(1, 1)` when texels are at least a pixel.
    fn texel_samples(&self, t: &TargetSpec) -> (usize, usize) {
        let px_m = t.range_m / self.f;
        let n = TEXTURE_SIZE as f64;
        let per_axis = |extent_m: f64| {
            let texels_per_px = n * px_m / extent_m;
            if texels_per_px <= 1.0 {
                1
            } else {
                (texels_per_px.ceil() as usize).min(TEXTURE_SIZE as usize)
            }
        };
        (per_axis(t.width_m), per_axis(t.height_m))
    }

    /// Continuous image point of world `(x, y, z)`.
    fn project(&self, x: f64, y: f64, z: f64) -> Option<(f64, f64)> {
        let dx = x - self.center_x;
        let x_c = self.cos_yaw * dx - self.sin_yaw * z;
        let z_c = self.sin_yaw * dx + self.cos_yaw * z;
        if z_c <= 0.0 {
            return None;
        }
        Some((self.cu + self.f * x_c / z_c, self.cv + self.f * y / z_c))
    }
}

/// Extents of the pixels whose centers fall on the target, clipped to the image.
fn target_box(view: &View, t: &TargetSpec, width: usize, height: usize) -> Option<BoundingBox> {
    let x0 = t.lateral_m - t.width_m / 2.0;
    let x1 = t.lateral_m + t.width_m / 2.0;
    let y0 = -t.height_m / 2.0;
    let y1 = t.height_m / 2.0;
    let corners = [(x0, y0), (x1, y0), (x0, y1), (x1, y1)];
    let mut u_lo = f64::INFINITY;
    let mut u_hi = f64::NEG_INFINITY;
    let mut v_lo = f64::INFINITY;
    let mut v_hi = f64::NEG_INFINITY;
    for (x, y) in corners {
        let (u, v) = view.project(x, y, t.range_m)?;
        u_lo = u_lo.min(u);
        u_hi = u_hi.max(u);
        v_lo = v_lo.min(v);
        v_hi = v_hi.max(v);
    }
    // pixel n is covered when its center n + 0.5 lies in [lo, hi)
    let to_index = |c: f64, limit: usize| (c - 0.5).ceil().clamp(0.0, limit as f64) as usize;
    let b = BoundingBox {
        u_min: to_index(u_lo, width),
        u_max: to_index(u_hi, width),
        v_min: to_index(v_lo, height),
        v_max: to_index(v_hi, height),
    };
    (!b.is_empty()).then_some(b)
}

fn texel_at(t: &TargetSpec, x: f64, y: f64) -> Option<u8> {
    let tx = (x - (t.lateral_m - t.width_m / 2.0)) / t.width_m;
    let ty = (y + t.height_m / 2.0) / t.height_m;
    if !(0.0..1.0).contains(&tx) || !(0.0..1.0).contains(&ty) {
        return None;
    }
    let n = TEXTURE_SIZE as f64;
    let col = ((tx * n).floor() as u64).min(TEXTURE_SIZE - 1);
    let row = ((ty * n).floor() as u64).min(TEXTURE_SIZE - 1);
    Some(texture_value(t.texture_seed, row, col))
}

/// Box-filtered intensity of pixel `(u, v)` from an `nx` x `ny` grid of
/// sub-samples; samples falling off the target are ignored.
fn minified(view: &View, t: &TargetSpec, u: usize, v: usize, nx: usize, ny: usize, center: u8) -> u8 {
    let mut sum = 0u32;
    let mut count = 0u32;
    for b in 0..ny {
        let sv = v as f64 + (b as f64 + 0.5) / ny as f64;
        for a in 0..nx {
            let su = u as f64 + (a as f64 + 0.5) / nx as f64;
            if let Some(value) = view.back_project(su, sv, t.range_m).and_then(|(x, y)| texel_at(t, x, y)) {
                sum += value as u32;
                count += 1;
            }
        }
    }
    (sum + count / 2).checked_div(count).map_or(center, |v| v as u8)
}

fn render_side(scene: &Scene, side: Side) -> (Image, Vec<Option<BoundingBox>>) {
    let cam = scene.camera();
    let (width, height) = (cam.h_resolution() as usize, cam.v_resolution() as usize);
    let view = View::new(scene.rig(), side);
    let boxes: Vec<Option<BoundingBox>> = scene.targets().iter().map(|t| target_box(&view, t, width, height)).collect();

    // paint regions: boxes grown by one pixel so the per-pixel hit test
    // stays authoritative at the edges
    let regions: Vec<(usize, BoundingBox)> = scene
        .paint_order()
        .into_iter()
        .filter_map(|i| {
            boxes[i].map(|b| {
                let grown = BoundingBox {
                    u_min: b.u_min.saturating_sub(1),
                    u_max: (b.u_max + 1).min(width),
                    v_min: b.v_min.saturating_sub(1),
                    v_max: (b.v_max + 1).min(height),
                };
                (i, grown)
            })
        })
        .collect();

    let mut img = Image::filled(width, height, scene.background_intensity());
    img.pixels_mut().par_chunks_mut(width).enumerate().for_each(|(v, row)| {
        for (i, region) in &regions {
            if v < region.v_min || v >= region.v_max {
                continue;
            }
            let t = &scene.targets()[*i];
            let (nx, ny) = view.texel_samples(t);
            for (u, px) in row.iter_mut().enumerate().take(region.u_max).skip(region.u_min) {
                let hit =
                    view.back_project(u as f64 + 0.5, v as f64 + 0.5, t.range_m).and_then(|(x, y)| texel_at(t, x, y));
                if let Some(center) = hit {
                    *px = if nx == 1 && ny == 1 { center } else { minified(&view, t, u, v, nx, ny, center) };
                }
            }
        }
    });
    (img, boxes)
}

/// Renders both views of the scene along with per-target ground-truth boxes.
pub fn render_pair(scene: &Scene) -> RenderedPair {
    let ((left, left_boxes), (right, right_boxes)) =
        rayon::join(|| render_side(scene, Side::Left), || render_side(scene, Side::Right));
    RenderedPair { left, right, left_boxes, right_boxes }
}
