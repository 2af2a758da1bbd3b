use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::{interpolate_fps, OpsError};
use crate::format::Pose;
use crate::tensor::Affine;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    fn index(self) -> usize {
        self as usize
    }
}

/// One augmentation step. Serialized with an `"op"` tag, e.g.
/// `{"op": "rotate", "angle": 0.3}`. Angles are in radians.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum AugmentStep {
    Affine {
        matrix: Vec<Vec<f64>>,
        offset: Vec<f64>,
    },
    /// About the origin in 2D, about the z-axis in 3D.
    Rotate {
        angle: f64,
    },
    Scale {
        sx: f64,
        sy: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        sz: Option<f64>,
    },
    Translate {
        offset: Vec<f64>,
    },
    /// `[[1, kx], [ky, 1]]` in the xy-plane.
    Shear {
        kx: f64,
        ky: f64,
    },
    Reflect {
        axis: Axis,
    },
    Noise {
        stddev: f64,
        seed: u64,
    },
    FrameDropout {
        probability: f64,
        seed: u64,
    },
    Interpolate {
        fps: u16,
    },
}

/// An ordered chain of augmentation steps.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AugmentationSpec {
    pub steps: Vec<AugmentStep>,
}

impl AugmentationSpec {
    pub fn new(steps: Vec<AugmentStep>) -> Self {
        Self { steps }
    }

    pub fn validate(&self) -> Result<(), OpsError> {
        for step in &self.steps {
            match *step {
                AugmentStep::Noise { stddev, .. } if !(stddev >= 0.0 && stddev.is_finite()) => {
                    return Err(OpsError::InvalidArgument(format!("noise stddev {stddev} must be >= 0")));
                }
                AugmentStep::FrameDropout { probability, .. } if !(0.0..=1.0).contains(&probability) => {
                    return Err(OpsError::InvalidArgument(format!(
                        "dropout probability {probability} outside [0, 1]"
                    )));
                }
                AugmentStep::Interpolate { fps: 0 } => {
                    return Err(OpsError::InvalidArgument("interpolation fps must be at least 1".into()));
                }
                _ => {}
            }
        }
        Ok(())
    }
}

fn diagonal(values: &[f64]) -> Vec<Vec<f64>> {
    (0..values.len())
        .map(|r| {
            (0..values.len())
                .map(|c| if r == c { values[r] } else { 0.0 })
                .collect()
        })
        .collect()
}

/// Embeds a 2×2 block into the top-left of a `dims`-dimensional identity.
fn planar(dims: usize, block: [[f64; 2]; 2]) -> Vec<Vec<f64>> {
    let mut m = diagonal(&vec![1.0; dims]);
    for r in 0..2 {
        m[r][..2].copy_from_slice(&block[r]);
    }
    m
}

/// The affine map for a geometric step, or `None` for non-geometric steps.
pub fn step_affine(step: &AugmentStep, dims: usize) -> Result<Option<Affine>, OpsError> {
    let zero = vec![0.0; dims];
    let affine = match step {
        AugmentStep::Affine { matrix, offset } => Affine::new(matrix.clone(), offset.clone())?,
        AugmentStep::Rotate { angle } => {
            let (s, c) = angle.sin_cos();
            Affine::linear(planar(dims, [[c, -s], [s, c]]))?
        }
        AugmentStep::Scale { sx, sy, sz } => {
            let factors = match (dims, sz) {
                (2, None) => vec![*sx, *sy],
                (3, sz) => vec![*sx, *sy, sz.unwrap_or(1.0)],
                _ => {
                    return Err(OpsError::InvalidArgument("sz given for 2D data".into()));
                }
            };
            Affine::new(diagonal(&factors), zero)?
        }
        AugmentStep::Translate { offset } => Affine::translation(offset.clone())?,
        AugmentStep::Shear { kx, ky } => Affine::linear(planar(dims, [[1.0, *kx], [*ky, 1.0]]))?,
        AugmentStep::Reflect { axis } => {
            if axis.index() >= dims {
                return Err(OpsError::InvalidArgument(format!(
                    "cannot reflect {axis:?} in {dims}D data"
                )));
            }
            let mut factors = vec![1.0; dims];
            factors[axis.index()] = -1.0;
            Affine::new(diagonal(&factors), zero)?
        }
        AugmentStep::Noise { .. } | AugmentStep::FrameDropout { .. } | AugmentStep::Interpolate { .. } => {
            return Ok(None)
        }
    };
    Ok(Some(affine))
}

/// Adds independent `N(0, stddev²)` noise to every unmasked coordinate.
pub fn gaussian_noise(pose: &Pose, stddev: f64, seed: u64) -> Result<Pose, OpsError> {
    let normal =
        Normal::new(0.0, stddev).map_err(|e| OpsError::InvalidArgument(format!("noise stddev {stddev}: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tensor = pose.tensor().map_unmasked(|cell| {
        for v in cell {
            *v = (*v as f64 + normal.sample(&mut rng)) as f32;
        }
    });
    Ok(pose.with_tensor(tensor)?)
}

/// Removes each frame independently with probability `probability`. At least one
/// frame is always kept. Returns the pose and the dropped frame indices.
pub fn frame_dropout(pose: &Pose, probability: f64, seed: u64) -> Result<(Pose, Vec<usize>), OpsError> {
    if !(0.0..=1.0).contains(&probability) {
        return Err(OpsError::InvalidArgument(format!(
            "dropout probability {probability} outside [0, 1]"
        )));
    }
    let frames = pose.tensor().frames();
    if frames == 0 {
        return Err(OpsError::EmptyPose);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut dropped: Vec<bool> = (0..frames).map(|_| rng.random::<f64>() < probability).collect();
    if dropped.iter().all(|&d| d) {
        dropped[rng.random_range(0..frames)] = false;
    }
    let kept: Vec<usize> = (0..frames).filter(|&f| !dropped[f]).collect();
    let removed = (0..frames).filter(|&f| dropped[f]).collect();
    let tensor = pose.tensor().select_frames(&kept)?;
    Ok((pose.with_tensor(tensor)?, removed))
}

/// Applies the steps of `spec` left to right.
pub fn augment(pose: &Pose, spec: &AugmentationSpec) -> Result<Pose, OpsError> {
    spec.validate()?;
    let mut current = pose.clone();
    for step in &spec.steps {
        current = match step {
            AugmentStep::Noise { stddev, seed } => gaussian_noise(&current, *stddev, *seed)?,
            AugmentStep::FrameDropout { probability, seed } => frame_dropout(&current, *probability, *seed)?.0,
            AugmentStep::Interpolate { fps } => interpolate_fps(&current, *fps)?,
            geometric => {
                let affine = step_affine(geometric, current.tensor().dims())?.expect("geometric step");
                current.with_tensor(current.tensor().apply_affine(&affine)?)?
            }
        };
    }
    Ok(current)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::{PoseBody, PoseComponent, PoseHeader};
    use crate::tensor::{MaskedFrameTensor, Shape};

    fn pose(frames: usize, dims: usize) -> Pose {
        let format = if dims == 2 { "XYC" } else { "XYZC" };
        let header = PoseHeader::new(
            1,
            1,
            0,
            vec![PoseComponent::new("C", format, vec!["a".into(), "b".into()], vec![], vec![]).unwrap()],
        )
        .unwrap();
        let shape = Shape::new(frames, 1, 2, dims).unwrap();
        let data = (0..shape.cells()).map(|i| 1.0 + i as f32).collect();
        // point b masked in every frame
        let conf = (0..shape.slots()).map(|i| if i % 2 == 0 { 1.0 } else { 0.0 }).collect();
        Pose::new(
            header,
            PoseBody::new(10, MaskedFrameTensor::from_parts(shape, data, conf).unwrap()),
        )
        .unwrap()
    }

    fn unit_x() -> Pose {
        let header = PoseHeader::new(
            1,
            1,
            0,
            vec![PoseComponent::new("C", "XYC", vec!["a".into()], vec![], vec![]).unwrap()],
        )
        .unwrap();
        let t = MaskedFrameTensor::from_parts(Shape::new(1, 1, 1, 2).unwrap(), vec![1.0, 0.0], vec![1.0]).unwrap();
        Pose::new(header, PoseBody::new(1, t)).unwrap()
    }

    #[test]
    fn empty_spec_is_identity() {
        let p = pose(3, 2);
        assert_eq!(augment(&p, &AugmentationSpec::default()).unwrap(), p);
    }

    #[test]
    fn quarter_rotation() {
        let spec = AugmentationSpec::new(vec![AugmentStep::Rotate {
            angle: std::f64::consts::FRAC_PI_2,
        }]);
        let out = augment(&unit_x(), &spec).unwrap();
        let c = out.tensor().coords(0, 0, 0);
        assert!(c[0].abs() < 1e-6 && (c[1] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn rotate_in_3d_keeps_z() {
        let m = step_affine(&AugmentStep::Rotate { angle: 1.0 }, 3).unwrap().unwrap();
        let v = m.apply(&[0.0, 0.0, 2.5]);
        assert!(v[0].abs() < 1e-12 && v[1].abs() < 1e-12 && (v[2] - 2.5).abs() < 1e-12);
    }

    #[test]
    fn step_matrices() {
        let shear = step_affine(&AugmentStep::Shear { kx: 0.5, ky: 2.0 }, 2)
            .unwrap()
            .unwrap();
        assert_eq!(shear.matrix(), &[1.0, 0.5, 2.0, 1.0]);
        let reflect = step_affine(&AugmentStep::Reflect { axis: Axis::Y }, 3)
            .unwrap()
            .unwrap();
        assert_eq!(reflect.matrix(), &[1.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 1.0]);
        let scale = step_affine(
            &AugmentStep::Scale {
                sx: 2.0,
                sy: 3.0,
                sz: None,
            },
            3,
        )
        .unwrap()
        .unwrap();
        assert_eq!(scale.matrix(), &[2.0, 0.0, 0.0, 0.0, 3.0, 0.0, 0.0, 0.0, 1.0]);
        let tr = step_affine(&AugmentStep::Translate { offset: vec![1.0, 2.0] }, 2)
            .unwrap()
            .unwrap();
        assert_eq!(tr.apply(&[1.0, 1.0]), vec![2.0, 3.0]);
        assert!(step_affine(&AugmentStep::Reflect { axis: Axis::Z }, 2).is_err());
        assert!(step_affine(
            &AugmentStep::Scale {
                sx: 1.0,
                sy: 1.0,
                sz: Some(2.0)
            },
            2
        )
        .is_err());
    }

    #[test]
    fn translate_dimension_mismatch() {
        let spec = AugmentationSpec::new(vec![AugmentStep::Translate {
            offset: vec![1.0, 2.0, 3.0],
        }]);
        assert!(matches!(augment(&pose(2, 2), &spec), Err(OpsError::Tensor(_))));
    }

    #[test]
    fn noise_is_deterministic_and_masked() {
        let p = pose(4, 2);
        let spec = AugmentationSpec::new(vec![AugmentStep::Noise { stddev: 0.1, seed: 7 }]);
        let a = augment(&p, &spec).unwrap();
        let b = augment(&p, &spec).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, p);
        assert_eq!(a.tensor().mask_violations(), 0);
        for f in 0..4 {
            assert_eq!(a.tensor().coords(f, 0, 1), &[0.0, 0.0]);
        }
        let other = augment(
            &p,
            &AugmentationSpec::new(vec![AugmentStep::Noise { stddev: 0.1, seed: 8 }]),
        )
        .unwrap();
        assert_ne!(a, other);
    }

    #[test]
    fn dropout_bounds() {
        let p = pose(20, 2);
        let (kept, dropped) = frame_dropout(&p, 0.0, 1).unwrap();
        assert_eq!(kept, p);
        assert!(dropped.is_empty());

        let (kept, dropped) = frame_dropout(&p, 1.0, 1).unwrap();
        assert_eq!(kept.tensor().frames(), 1);
        assert_eq!(dropped.len(), 19);

        let (kept, dropped) = frame_dropout(&p, 0.5, 3).unwrap();
        assert_eq!(kept.tensor().frames() + dropped.len(), 20);
        let retained: Vec<usize> = (0..20).filter(|f| !dropped.contains(f)).collect();
        for (i, &f) in retained.iter().enumerate() {
            assert_eq!(kept.tensor().coords(i, 0, 0), p.tensor().coords(f, 0, 0));
        }

        assert_eq!(frame_dropout(&pose(0, 2), 0.5, 1).unwrap_err(), OpsError::EmptyPose);
    }

    #[test]
    fn spec_validation() {
        for bad in [
            AugmentStep::Noise { stddev: -1.0, seed: 0 },
            AugmentStep::FrameDropout {
                probability: 1.5,
                seed: 0,
            },
            AugmentStep::Interpolate { fps: 0 },
        ] {
            assert!(matches!(
                augment(&pose(2, 2), &AugmentationSpec::new(vec![bad])),
                Err(OpsError::InvalidArgument(_))
            ));
        }
    }

    #[test]
    fn spec_json() {
        let json = r#"{"steps": [
            {"op": "rotate", "angle": 0.5},
            {"op": "scale", "sx": 2, "sy": 2},
            {"op": "reflect", "axis": "x"},
            {"op": "frame_dropout", "probability": 0.1, "seed": 3},
            {"op": "interpolate", "fps": 30}
        ]}"#;
        let spec: AugmentationSpec = serde_json::from_str(json).unwrap();
        assert_eq!(spec.steps.len(), 5);
        assert_eq!(spec.steps[2], AugmentStep::Reflect { axis: Axis::X });
        let back: AugmentationSpec = serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn chained_pipeline() {
        let spec = AugmentationSpec::new(vec![
            AugmentStep::Scale {
                sx: 2.0,
                sy: 2.0,
                sz: None,
            },
            AugmentStep::Translate { offset: vec![1.0, 0.0] },
        ]);
        let out = augment(&unit_x(), &spec).unwrap();
        assert_eq!(out.tensor().coords(0, 0, 0), &[3.0, 0.0]);
    }
}
