//! OpenPose JSON ingestion.
//!
//! Accepts the one-file-per-frame layout (a directory of frame objects) and the
//! monolithic layout (a single document holding all frames, either as a bare
//! array or under a `"frames"` member).

pub mod topology;

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::format::{FormatError, Pose, PoseBody, PoseComponent, PoseHeader};
use crate::tensor::{clamp_confidence, MaskedFrameTensor, Shape};
use topology::*;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("unsupported OpenPose variant {0}, expected 135 or 137")]
    UnsupportedVariant(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Schema(String),
    #[error("frame {frame}, person {person}: {field} has {len} values, not a multiple of 3")]
    NotTriples {
        frame: usize,
        person: usize,
        field: &'static str,
        len: usize,
    },
    #[error("frame {frame}, person {person}: {field} has {actual} keypoints, expected {expected}")]
    WrongPointCount {
        frame: usize,
        person: usize,
        field: &'static str,
        expected: usize,
        actual: usize,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        #[source]
        source: Box<IngestError>,
    },
    #[error("no frames found in {0}")]
    NoFrames(PathBuf),
    #[error(transparent)]
    Format(#[from] FormatError),
}

/// Which OpenPose keypoint layout to describe.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpenPoseVariant {
    /// BODY_25 + face + two hands.
    Keypoints137,
    /// As above without the synthesized Neck and MidHip body points.
    Keypoints135,
}

impl TryFrom<usize> for OpenPoseVariant {
    type Error = IngestError;

    fn try_from(n: usize) -> Result<Self, Self::Error> {
        match n {
            137 => Ok(Self::Keypoints137),
            135 => Ok(Self::Keypoints135),
            other => Err(IngestError::UnsupportedVariant(other)),
        }
    }
}

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

fn body_23() -> PoseComponent {
    let keep: Vec<usize> = (0..BODY_25_POINTS.len())
        .filter(|i| !BODY_23_DROPPED.contains(i))
        .collect();
    let remap = |old: u16| keep.iter().position(|&k| k == old as usize).map(|i| i as u16);
    let points: Vec<String> = keep.iter().map(|&i| BODY_25_POINTS[i].to_string()).collect();
    let mut limbs: Vec<(u16, u16)> = BODY_25_LIMBS
        .iter()
        .filter_map(|&(a, b)| Some((remap(a)?, remap(b)?)))
        .collect();
    let index = |name: &str| points.iter().position(|p| p == name).unwrap() as u16;
    limbs.extend(BODY_23_EXTRA_LIMBS.iter().map(|&(a, b)| (index(a), index(b))));
    let colors = keep.iter().map(|&i| BODY_25_COLORS[i]).collect();
    PoseComponent {
        name: "BODY_23".into(),
        format: "XYC".into(),
        points,
        limbs,
        colors,
    }
}

/// Header for OpenPose output: body, face, left hand, right hand, all `XYC`.
pub fn openpose_header(variant: OpenPoseVariant, width: u16, height: u16) -> PoseHeader {
    let body = match variant {
        OpenPoseVariant::Keypoints137 => PoseComponent {
            name: "BODY_25".into(),
            format: "XYC".into(),
            points: names(&BODY_25_POINTS),
            limbs: BODY_25_LIMBS.to_vec(),
            colors: BODY_25_COLORS.to_vec(),
        },
        OpenPoseVariant::Keypoints135 => body_23(),
    };
    let face = PoseComponent {
        name: "FACE".into(),
        format: "XYC".into(),
        points: (0..FACE_POINTS).map(|i| i.to_string()).collect(),
        limbs: face_limbs(),
        colors: FACE_COLORS.to_vec(),
    };
    let hand = |name: &str| PoseComponent {
        name: name.into(),
        format: "XYC".into(),
        points: names(&HAND_POINTS),
        limbs: hand_limbs(),
        colors: HAND_COLORS.to_vec(),
    };
    PoseHeader::new(
        width,
        height,
        0,
        vec![body, face, hand("HAND_LEFT"), hand("HAND_RIGHT")],
    )
    .expect("embedded OpenPose tables are valid")
}

/// One detected person: flat `(x, y, confidence)` triples per component.
/// Missing or empty arrays mean the component was not detected.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct OpenPosePerson {
    #[serde(default)]
    pub pose_keypoints_2d: Vec<f32>,
    #[serde(default)]
    pub face_keypoints_2d: Vec<f32>,
    #[serde(default)]
    pub hand_left_keypoints_2d: Vec<f32>,
    #[serde(default)]
    pub hand_right_keypoints_2d: Vec<f32>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct OpenPoseFrame {
    #[serde(default)]
    pub people: Vec<OpenPosePerson>,
}

/// Parameters the OpenPose output does not carry itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IngestOptions {
    pub fps: u16,
    pub width: u16,
    pub height: u16,
    /// People slots per frame; extra detections are dropped, missing ones masked.
    pub max_people: usize,
}

impl IngestOptions {
    fn validate(&self) -> Result<(), IngestError> {
        if self.fps == 0 {
            return Err(IngestError::InvalidArgument("fps must be at least 1".into()));
        }
        if self.max_people == 0 {
            return Err(IngestError::InvalidArgument("max-people must be at least 1".into()));
        }
        Ok(())
    }
}

/// Parses one frame object (`{"people": [...]}`).
pub fn parse_frame_json(text: &str) -> Result<OpenPoseFrame, IngestError> {
    Ok(serde_json::from_str(text)?)
}

/// Parses a monolithic document: a top-level array of frames or an object with a
/// `"frames"` array.
pub fn parse_monolithic_json(text: &str) -> Result<Vec<OpenPoseFrame>, IngestError> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let frames = match value {
        serde_json::Value::Array(_) => value,
        serde_json::Value::Object(mut map) => match map.remove("frames") {
            Some(frames @ serde_json::Value::Array(_)) => frames,
            _ => return Err(IngestError::Schema("expected a \"frames\" array".into())),
        },
        _ => {
            return Err(IngestError::Schema(
                "expected an array of frames or an object with \"frames\"".into(),
            ))
        }
    };
    Ok(serde_json::from_value(frames)?)
}

/// Builds a pose from parsed frames using the 137-point layout.
pub fn parse_openpose(frames: &[OpenPoseFrame], opts: &IngestOptions) -> Result<Pose, IngestError> {
    opts.validate()?;
    let header = openpose_header(OpenPoseVariant::Keypoints137, opts.width, opts.height);
    let points = header.total_points();
    let offsets = header.component_offsets();
    let shape = Shape::new(frames.len(), opts.max_people, points, 2).expect("2D");
    let mut data = vec![0.0f32; shape.cells()];
    let mut confidence = vec![0.0f32; shape.slots()];

    for (f, frame) in frames.iter().enumerate() {
        for (p, person) in frame.people.iter().enumerate() {
            let fields: [(&'static str, &[f32]); 4] = [
                ("pose_keypoints_2d", &person.pose_keypoints_2d),
                ("face_keypoints_2d", &person.face_keypoints_2d),
                ("hand_left_keypoints_2d", &person.hand_left_keypoints_2d),
                ("hand_right_keypoints_2d", &person.hand_right_keypoints_2d),
            ];
            for ((field, values), (component, &offset)) in
                fields.into_iter().zip(header.components.iter().zip(&offsets))
            {
                if values.len() % 3 != 0 {
                    return Err(IngestError::NotTriples {
                        frame: f,
                        person: p,
                        field,
                        len: values.len(),
                    });
                }
                if values.is_empty() {
                    continue;
                }
                let expected = component.points.len();
                if values.len() / 3 != expected {
                    return Err(IngestError::WrongPointCount {
                        frame: f,
                        person: p,
                        field,
                        expected,
                        actual: values.len() / 3,
                    });
                }
                // validated before dropping so malformed extra people still error
                if p >= opts.max_people {
                    continue;
                }
                for (k, triple) in values.chunks_exact(3).enumerate() {
                    let slot = shape.slot(f, p, offset + k);
                    let c = clamp_confidence(triple[2]);
                    confidence[slot] = c;
                    if c > 0.0 {
                        data[slot * 2] = triple[0];
                        data[slot * 2 + 1] = triple[1];
                    }
                }
            }
        }
    }

    let tensor = MaskedFrameTensor::from_parts(shape, data, confidence).map_err(FormatError::from)?;
    Ok(Pose::new(header, PoseBody::new(opts.fps, tensor))?)
}

/// Sorted `*.json` files in a directory.
fn frame_files(dir: &Path) -> Result<Vec<PathBuf>, IngestError> {
    let io = |source| IngestError::Io {
        path: dir.to_path_buf(),
        source,
    };
    let mut files = Vec::new();
    for entry in fs::read_dir(dir).map_err(io)? {
        let path = entry.map_err(io)?.path();
        if path.is_file() && path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

/// Reads a directory with one OpenPose JSON file per frame, in file name order.
pub fn parse_openpose_directory(dir: &Path, opts: &IngestOptions) -> Result<Pose, IngestError> {
    opts.validate()?;
    let files = frame_files(dir)?;
    if files.is_empty() {
        return Err(IngestError::NoFrames(dir.to_path_buf()));
    }
    let frames = files
        .iter()
        .map(|path| {
            let text = fs::read_to_string(path).map_err(|source| IngestError::Io {
                path: path.clone(),
                source,
            })?;
            parse_frame_json(&text).map_err(|e| IngestError::File {
                path: path.clone(),
                source: Box::new(e),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    parse_openpose(&frames, opts)
}

/// Reads a monolithic OpenPose JSON file.
pub fn parse_openpose_file(path: &Path, opts: &IngestOptions) -> Result<Pose, IngestError> {
    let text = fs::read_to_string(path).map_err(|source| IngestError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let frames = parse_monolithic_json(&text)?;
    if frames.is_empty() {
        return Err(IngestError::NoFrames(path.to_path_buf()));
    }
    parse_openpose(&frames, opts)
}
