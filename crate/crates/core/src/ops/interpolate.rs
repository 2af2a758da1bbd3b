use super::OpsError;
use crate::format::{Pose, PoseBody};
use crate::tensor::{MaskedFrameTensor, Shape};

/// Source sampling position for an output frame, as `(frame, fraction)`.
fn source_time(j: usize, fps: usize, new_fps: usize) -> (usize, f64) {
    let num = j * fps;
    (num / new_fps, (num % new_fps) as f64 / new_fps as f64)
}

/// Linear interpolation of `values` over the sorted `support` frames, holding the
/// end values outside the support.
fn sample_on_support(support: &[usize], value_at: impl Fn(usize) -> f64, frame: usize, frac: f64) -> f64 {
    let t = frame as f64 + frac;
    let first = support[0];
    let last = *support.last().unwrap();
    if t <= first as f64 {
        return value_at(first);
    }
    if t >= last as f64 {
        return value_at(last);
    }
    // first support frame strictly after t
    let hi = support.partition_point(|&s| (s as f64) <= t);
    let (a, b) = (support[hi - 1], support[hi]);
    let w = (t - a as f64) / (b - a) as f64;
    value_at(a) * (1.0 - w) + value_at(b) * w
}

/// Resamples a pose to a new frame rate.
///
/// Output frame `j` samples source time `j·fps/new_fps`. Coordinates are
/// interpolated across the frames where each point is present, holding the
/// nearest value beyond them; confidences are interpolated over the raw signal,
/// so they dip across gaps. Slots whose interpolated confidence is 0 are masked.
pub fn interpolate_fps(pose: &Pose, new_fps: u16) -> Result<Pose, OpsError> {
    if pose.body.fps == 0 {
        return Err(OpsError::ZeroFps);
    }
    if new_fps == 0 {
        return Err(OpsError::InvalidArgument("target fps must be at least 1".into()));
    }
    let t = pose.tensor();
    if t.frames() == 0 {
        return Err(OpsError::EmptyPose);
    }
    let (fps, target) = (pose.body.fps as usize, new_fps as usize);
    let out_frames = (t.frames() - 1) * target / fps + 1;
    let shape = Shape::new(out_frames, t.people(), t.points(), t.dims())?;
    let dims = t.dims();
    let mut data = vec![0.0f32; shape.cells()];
    let mut confidence = vec![0.0f32; shape.slots()];

    let times: Vec<(usize, f64)> = (0..out_frames).map(|j| source_time(j, fps, target)).collect();
    let mut support = Vec::with_capacity(t.frames());
    for person in 0..t.people() {
        for point in 0..t.points() {
            support.clear();
            support.extend((0..t.frames()).filter(|&f| t.is_valid(f, person, point)));
            for (j, &(frame, frac)) in times.iter().enumerate() {
                let slot = shape.slot(j, person, point);
                let c0 = t.conf(frame, person, point) as f64;
                let c = if frac > 0.0 {
                    c0 * (1.0 - frac) + t.conf(frame + 1, person, point) as f64 * frac
                } else {
                    c0
                };
                confidence[slot] = c as f32;
                if support.is_empty() {
                    continue;
                }
                for d in 0..dims {
                    let v = sample_on_support(&support, |f| t.coords(f, person, point)[d] as f64, frame, frac);
                    data[slot * dims + d] = v as f32;
                }
            }
        }
    }

    let tensor = MaskedFrameTensor::from_parts(shape, data, confidence)?;
    Ok(Pose::new(pose.header.clone(), PoseBody::new(new_fps, tensor))?)
}
