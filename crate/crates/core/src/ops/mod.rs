//! Pose-level manipulations: normalization, plane alignment, frame rate
//! interpolation and augmentation.
//!
//! Every operation takes a pose by reference and returns a new one. Geometry is
//! expressed through [`MaskedFrameTensor::apply_affine`](crate::tensor::MaskedFrameTensor::apply_affine),
//! so masked points stay masked throughout.

mod augment;
mod interpolate;
mod normalize;
mod plane;

use thiserror::Error;

use crate::format::{FormatError, PointRef, PoseHeader};
use crate::tensor::TensorError;

pub use augment::{augment, frame_dropout, gaussian_noise, step_affine, AugmentStep, AugmentationSpec, Axis};
pub use interpolate::interpolate_fps;
pub use normalize::{normalize, NormalizationInfo};
pub use plane::{rotate_to_plane, rotation_between};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OpsError {
    #[error("unknown point {0}")]
    UnknownPoint(PointRef),
    #[error("reference points {0} and {1} resolve to the same point")]
    SameReference(PointRef, PointRef),
    #[error("no frame has all reference points present")]
    NoReferenceData,
    #[error("mean reference distance is zero")]
    DegenerateSkeleton,
    #[error("reference points are collinear or coincide; no plane is defined")]
    DegeneratePlane,
    #[error("{op} requires {expected}D data, pose is {actual}D")]
    UnsupportedDims {
        op: &'static str,
        expected: usize,
        actual: usize,
    },
    #[error("pose has fps 0 (single image); frame rate operations need fps >= 1")]
    ZeroFps,
    #[error("pose has no frames")]
    EmptyPose,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Format(#[from] FormatError),
}

pub(crate) fn resolve(header: &PoseHeader, point: &PointRef) -> Result<usize, OpsError> {
    header
        .point_index(point)
        .ok_or_else(|| OpsError::UnknownPoint(point.clone()))
}
