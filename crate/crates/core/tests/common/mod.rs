#![allow(dead_code)]

use pose_core::ingest::{openpose_header, OpenPoseVariant};
use pose_core::{MaskedFrameTensor, Pose, PoseBody, PoseComponent, PoseHeader, Shape};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn format_for(dims: usize) -> &'static str {
    if dims == 2 {
        "XYC"
    } else {
        "XYZC"
    }
}

/// Header with `points` split over one to three components, random limbs and colors.
pub fn random_header(rng: &mut impl Rng, points: usize, dims: usize) -> PoseHeader {
    let parts = rng.random_range(1..=3.min(points.max(1)));
    let mut cuts: Vec<usize> = (0..parts - 1).map(|_| rng.random_range(0..=points)).collect();
    cuts.push(0);
    cuts.push(points);
    cuts.sort();
    let components = cuts
        .windows(2)
        .enumerate()
        .map(|(i, w)| {
            let n = w[1] - w[0];
            let names = (0..n).map(|k| format!("c{i}_p{k}")).collect();
            let limbs = if n == 0 {
                vec![]
            } else {
                (0..rng.random_range(0..n.min(10) + 1))
                    .map(|_| (rng.random_range(0..n) as u16, rng.random_range(0..n) as u16))
                    .collect()
            };
            let colors = (0..rng.random_range(0..4))
                .map(|_| [rng.random(), rng.random(), rng.random()])
                .collect();
            PoseComponent::new(format!("COMPONENT_{i}"), format_for(dims), names, limbs, colors).unwrap()
        })
        .collect();
    PoseHeader::new(
        rng.random(),
        rng.random(),
        if dims == 3 { rng.random() } else { 0 },
        components,
    )
    .unwrap()
}

/// Random tensor with roughly `mask_rate` of the slots missing.
pub fn random_tensor(
    rng: &mut impl Rng,
    shape: (usize, usize, usize, usize),
    range: f32,
    mask_rate: f64,
) -> MaskedFrameTensor {
    let shape = Shape::new(shape.0, shape.1, shape.2, shape.3).unwrap();
    let data = (0..shape.cells()).map(|_| rng.random_range(-range..range)).collect();
    let confidence = (0..shape.slots())
        .map(|_| {
            if rng.random_bool(mask_rate) {
                0.0
            } else {
                rng.random_range(0.01f32..=1.0)
            }
        })
        .collect();
    MaskedFrameTensor::from_parts(shape, data, confidence).unwrap()
}

pub fn random_pose(rng: &mut impl Rng, frames: usize, people: usize, points: usize, dims: usize, range: f32) -> Pose {
    let header = random_header(rng, points, dims);
    let tensor = random_tensor(rng, (frames, people, points, dims), range, 0.2);
    Pose::new(header, PoseBody::new(rng.random_range(1..=60), tensor)).unwrap()
}

pub const LEFT_SHOULDER: usize = 5;
pub const RIGHT_SHOULDER: usize = 2;

/// Person-like OpenPose pose: each person has a body center and shoulder
/// half-width, every point lies within 250 px of the center, shoulders are
/// present in frame 0 and other slots are masked at random.
pub fn person_like_pose(rng: &mut impl Rng, frames: usize, people: usize) -> Pose {
    let header = openpose_header(OpenPoseVariant::Keypoints137, 1280, 720);
    let shape = Shape::new(frames, people, 137, 2).unwrap();
    let mut data = vec![0.0f32; shape.cells()];
    let mut conf = vec![0.0f32; shape.slots()];
    for person in 0..people {
        let (cx, cy) = (rng.random_range(200.0..1000.0f32), rng.random_range(200.0..500.0f32));
        let half = rng.random_range(30.0..100.0f32);
        for f in 0..frames {
            let (dx, dy) = (rng.random_range(-20.0..20.0f32), rng.random_range(-20.0..20.0f32));
            for k in 0..137 {
                let s = shape.slot(f, person, k);
                let (x, y) = match k {
                    LEFT_SHOULDER => (cx + dx + half, cy + dy),
                    RIGHT_SHOULDER => (cx + dx - half, cy + dy + rng.random_range(-5.0..5.0f32)),
                    _ => (
                        cx + dx + rng.random_range(-250.0..250.0f32),
                        cy + dy + rng.random_range(-250.0..250.0f32),
                    ),
                };
                data[s * 2] = x;
                data[s * 2 + 1] = y;
                let shoulder = k == LEFT_SHOULDER || k == RIGHT_SHOULDER;
                conf[s] = if (shoulder && f == 0) || !rng.random_bool(0.2) {
                    rng.random_range(0.05f32..=1.0)
                } else {
                    0.0
                };
            }
        }
    }
    let tensor = MaskedFrameTensor::from_parts(shape, data, conf).unwrap();
    Pose::new(header, PoseBody::new(25, tensor)).unwrap()
}

/// Brute-force mean distance and mean midpoint over slots where both points are present.
pub fn reference_stats(pose: &Pose, a: usize, b: usize) -> (f64, Vec<f64>) {
    let t = pose.tensor();
    let mut dist = 0.0;
    let mut mid = vec![0.0; t.dims()];
    let mut n = 0.0;
    for f in 0..t.frames() {
        for p in 0..t.people() {
            if t.conf(f, p, a) > 0.0 && t.conf(f, p, b) > 0.0 {
                let (pa, pb) = (t.coords(f, p, a), t.coords(f, p, b));
                let mut sq = 0.0;
                for d in 0..t.dims() {
                    sq += ((pa[d] - pb[d]) as f64).powi(2);
                    mid[d] += (pa[d] as f64 + pb[d] as f64) / 2.0;
                }
                dist += f64::sqrt(sq);
                n += 1.0;
            }
        }
    }
    (dist / n, mid.into_iter().map(|m| m / n).collect())
}

pub fn max_abs_diff(a: &[f32], b: &[f32]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (*x as f64 - *y as f64).abs())
        .fold(0.0, f64::max)
}
