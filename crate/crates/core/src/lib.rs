//! Reading, writing and manipulating `.pose` keypoint sequence files.
//!
//! The crate is organized around [`Pose`], a header describing the skeleton
//! topology plus a body holding a confidence-masked frame tensor.
//!
//! - [`format`]: domain types and the bit-exact v0.1 codec
//! - [`tensor`]: masked arrays and affine maps
//! - [`ops`]: normalization, plane alignment, frame rate interpolation, augmentation
//! - [`ingest`]: OpenPose JSON input
//! - [`render`]: PNG and GIF output
//! - [`benchmark`]: size and read speed against OpenPose JSON

pub mod benchmark;
pub mod format;
pub mod ingest;
pub mod ops;
pub mod render;
pub mod tensor;

pub use format::{read_pose, write_pose, FormatError, PointRef, Pose, PoseBody, PoseComponent, PoseHeader, Rgb};
pub use ops::{AugmentStep, AugmentationSpec, NormalizationInfo, OpsError};
pub use tensor::{Affine, MaskedFrameTensor, MaskedMean, Shape, TensorError};
