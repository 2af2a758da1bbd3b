use super::{resolve, OpsError};
use crate::format::{PointRef, Pose};
use crate::tensor::Affine;

/// The two reference points whose distance becomes the unit length, for example
/// the left and right shoulders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizationInfo {
    pub left: PointRef,
    pub right: PointRef,
}

impl NormalizationInfo {
    pub fn new(left: PointRef, right: PointRef) -> Self {
        Self { left, right }
    }
}

/// Scales and translates the pose so that the mean distance between the two
/// reference points is 1 and their mean midpoint sits at the origin.
///
/// Statistics pool every `(frame, person)` slot where both references are
/// present; a single global transform is applied to the whole sequence.
pub fn normalize(pose: &Pose, info: &NormalizationInfo) -> Result<Pose, OpsError> {
    let left = resolve(&pose.header, &info.left)?;
    let right = resolve(&pose.header, &info.right)?;
    if left == right {
        return Err(OpsError::SameReference(info.left.clone(), info.right.clone()));
    }

    let t = pose.tensor();
    let dims = t.dims();
    let mut distance_sum = 0.0f64;
    let mut midpoint_sum = vec![0.0f64; dims];
    let mut count = 0usize;
    for frame in 0..t.frames() {
        for person in 0..t.people() {
            if !(t.is_valid(frame, person, left) && t.is_valid(frame, person, right)) {
                continue;
            }
            let a = t.coords(frame, person, left);
            let b = t.coords(frame, person, right);
            let mut sq = 0.0f64;
            for d in 0..dims {
                let (a, b) = (a[d] as f64, b[d] as f64);
                sq += (a - b) * (a - b);
                midpoint_sum[d] += (a + b) / 2.0;
            }
            distance_sum += sq.sqrt();
            count += 1;
        }
    }
    if count == 0 {
        return Err(OpsError::NoReferenceData);
    }

    let mean_distance = distance_sum / count as f64;
    if !(mean_distance > 0.0 && mean_distance.is_finite()) {
        return Err(OpsError::DegenerateSkeleton);
    }
    let scale = 1.0 / mean_distance;
    let offset: Vec<f64> = midpoint_sum.iter().map(|m| -scale * m / count as f64).collect();
    let transform = Affine::scale_translate(dims, scale, &offset)?;
    Ok(pose.with_tensor(t.apply_affine(&transform)?)?)
}
