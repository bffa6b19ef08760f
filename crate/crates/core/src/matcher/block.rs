use super::{BoundingBox, Image};
use crate::error::{Result, StereoError};
use rayon::prelude::*;

/// Integer disparity of the left-image `region` found by SAD search along
/// the same rows of `right`.
///
/// For each candidate `k` in `0..=d_max` the cost is the mean of
/// `|L(u, v) - R(u - k, v)|` over box pixels with `u - k >= 0`. The lowest
/// mean wins; ties go to the smaller `k`.
pub fn block_match(left: &Image, right: &Image, region: &BoundingBox, d_max: usize) -> Result<i64> {
    if left.width() != right.width() || left.height() != right.height() {
        return Err(StereoError::invalid("left and right images differ in size"));
    }
    if region.is_empty() || region.u_max > left.width() || region.v_max > left.height() {
        return Err(StereoError::invalid(format!("bounding box {region:?} is empty or outside the image")));
    }

    let costs: Vec<Option<(u64, u64)>> = (0..=d_max)
        .into_par_iter()
        .map(|k| {
            let u_start = region.u_min.max(k);
            if u_start >= region.u_max {
                return None;
            }
            let mut sum = 0u64;
            for v in region.v_min..region.v_max {
                let l = &left.row(v)[u_start..region.u_max];
                let r = &right.row(v)[u_start - k..region.u_max - k];
                sum += l.iter().zip(r).map(|(&a, &b)| a.abs_diff(b) as u64).sum::<u64>();
            }
            let count = ((region.u_max - u_start) * region.height()) as u64;
            Some((sum, count))
        })
        .collect();

    let mut best: Option<(usize, u64, u64)> = None;
    for (k, cost) in costs.into_iter().enumerate() {
        let Some((sum, count)) = cost else { continue };
        // sum/count < best_sum/best_count, compared exactly
        let better = match best {
            None => true,
            Some((_, bs, bc)) => (sum as u128) * (bc as u128) < (bs as u128) * (count as u128),
        };
        if better {
            best = Some((k, sum, count));
        }
    }
    best.map(|(k, _, _)| k as i64).ok_or(StereoError::NoOverlap)
}
