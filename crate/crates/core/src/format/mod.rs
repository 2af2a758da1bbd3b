//! The `.pose` v0.1 container: domain types and the binary codec.
//!
//! A file is a header describing the skeleton topology followed by a body holding
//! the frame rate, the people count and the masked frame tensor. See
//! `docs/format.md` at the repository root for the byte layout.

mod body;
mod header;
mod wire;

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::tensor::{MaskedFrameTensor, TensorError};

pub use body::{body_size, decode_body, encode_body, BODY_PREFIX_LEN};
pub use header::{decode_header, encode_header, header_size};

/// The only format version this crate reads or writes.
pub const FORMAT_VERSION: f32 = 0.1;
const VERSION_TOLERANCE: f32 = 1e-4;

pub type Rgb = [u8; 3];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FormatError {
    #[error("truncated input: needed {needed} bytes at offset {offset}, {available} available")]
    Truncated {
        offset: usize,
        needed: usize,
        available: usize,
    },
    #[error("unsupported format version {0}")]
    UnsupportedVersion(f32),
    #[error("string at offset {offset} is not valid UTF-8")]
    InvalidUtf8 { offset: usize },
    #[error("string of {0} bytes exceeds the 65535-byte limit")]
    StringTooLong(usize),
    #[error("{what} count {count} exceeds 65535")]
    CountOverflow { what: &'static str, count: usize },
    #[error("component {component:?}: limb ({from}, {to}) references a point outside 0..{points}")]
    LimbOutOfRange {
        component: String,
        from: u16,
        to: u16,
        points: usize,
    },
    #[error("component {component:?}: duplicate point name {point:?}")]
    DuplicatePoint { component: String, point: String },
    #[error("duplicate component name {0:?}")]
    DuplicateComponent(String),
    #[error("component {component:?}: invalid point format {format:?}")]
    InvalidPointFormat { component: String, format: String },
    #[error("component {component:?}: color channel {value} exceeds 255")]
    ColorOutOfRange { component: String, value: u16 },
    #[error("components disagree on dimensionality ({first} vs {second})")]
    MixedDims { first: usize, second: usize },
    #[error("header defines no points")]
    EmptyHeader,
    #[error("{what}: header has {expected}, tensor has {actual}")]
    ShapeMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },
    #[error("body payload of {payload} bytes is not a whole number of {per_frame}-byte frames")]
    CorruptLength { payload: usize, per_frame: usize },
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

/// A named group of points with its own limb graph and color table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoseComponent {
    pub name: String,
    /// One character per channel, the last being `C` for confidence (`XYC`, `XYZC`).
    pub format: String,
    pub points: Vec<String>,
    /// Pairs of indices into `points`.
    pub limbs: Vec<(u16, u16)>,
    pub colors: Vec<Rgb>,
}

impl PoseComponent {
    pub fn new(
        name: impl Into<String>,
        format: impl Into<String>,
        points: Vec<String>,
        limbs: Vec<(u16, u16)>,
        colors: Vec<Rgb>,
    ) -> Result<Self, FormatError> {
        let c = Self {
            name: name.into(),
            format: format.into(),
            points,
            limbs,
            colors,
        };
        c.validate()?;
        Ok(c)
    }

    /// Spatial dimensions implied by the format string, if it is well formed.
    pub fn dims(&self) -> Option<usize> {
        let dims = self.format.chars().count().checked_sub(1)?;
        (self.format.ends_with('C') && (2..=3).contains(&dims)).then_some(dims)
    }

    pub fn point_index(&self, name: &str) -> Option<usize> {
        self.points.iter().position(|p| p == name)
    }

    /// Color for point `i`; the table wraps around when shorter than the point list.
    pub fn color_of(&self, point: usize) -> Option<Rgb> {
        (!self.colors.is_empty()).then(|| self.colors[point % self.colors.len()])
    }

    pub fn validate(&self) -> Result<(), FormatError> {
        if self.dims().is_none() {
            return Err(FormatError::InvalidPointFormat {
                component: self.name.clone(),
                format: self.format.clone(),
            });
        }
        let mut seen = HashSet::with_capacity(self.points.len());
        for p in &self.points {
            if !seen.insert(p.as_str()) {
                return Err(FormatError::DuplicatePoint {
                    component: self.name.clone(),
                    point: p.clone(),
                });
            }
        }
        for &(from, to) in &self.limbs {
            if from as usize >= self.points.len() || to as usize >= self.points.len() {
                return Err(FormatError::LimbOutOfRange {
                    component: self.name.clone(),
                    from,
                    to,
                    points: self.points.len(),
                });
            }
        }
        Ok(())
    }
}

/// Named reference to a point: `(component, point)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PointRef {
    pub component: String,
    pub point: String,
}

impl PointRef {
    pub fn new(component: impl Into<String>, point: impl Into<String>) -> Self {
        Self {
            component: component.into(),
            point: point.into(),
        }
    }
}

impl fmt::Display for PointRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.component, self.point)
    }
}

impl std::str::FromStr for PointRef {
    type Err = String;

    /// Parses `COMPONENT:POINT`. The split is on the first colon.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split_once(':') {
            Some((c, p)) if !c.is_empty() && !p.is_empty() => Ok(Self::new(c, p)),
            _ => Err(format!("expected COMPONENT:POINT, got {s:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoseHeader {
    pub version: f32,
    pub width: u16,
    pub height: u16,
    /// Zero for 2D data.
    pub depth: u16,
    pub components: Vec<PoseComponent>,
}

impl PoseHeader {
    pub fn new(width: u16, height: u16, depth: u16, components: Vec<PoseComponent>) -> Result<Self, FormatError> {
        let h = Self {
            version: FORMAT_VERSION,
            width,
            height,
            depth,
            components,
        };
        h.validate()?;
        Ok(h)
    }

    pub fn total_points(&self) -> usize {
        self.components.iter().map(|c| c.points.len()).sum()
    }

    /// Shared dimensionality of all components; `None` without components.
    pub fn dims(&self) -> Option<usize> {
        self.components.first().and_then(PoseComponent::dims)
    }

    /// Flat index of each component's first point.
    pub fn component_offsets(&self) -> Vec<usize> {
        self.components
            .iter()
            .scan(0, |acc, c| {
                let start = *acc;
                *acc += c.points.len();
                Some(start)
            })
            .collect()
    }

    pub fn component(&self, name: &str) -> Option<&PoseComponent> {
        self.components.iter().find(|c| c.name == name)
    }

    /// Flat tensor index of a named point.
    pub fn point_index(&self, point: &PointRef) -> Option<usize> {
        let mut offset = 0;
        for c in &self.components {
            if c.name == point.component {
                return c.point_index(&point.point).map(|i| offset + i);
            }
            offset += c.points.len();
        }
        None
    }

    pub fn validate(&self) -> Result<(), FormatError> {
        if (self.version - FORMAT_VERSION).abs() > VERSION_TOLERANCE || self.version.is_nan() {
            return Err(FormatError::UnsupportedVersion(self.version));
        }
        let mut dims = None;
        for (i, c) in self.components.iter().enumerate() {
            c.validate()?;
            if self.components[..i].iter().any(|o| o.name == c.name) {
                return Err(FormatError::DuplicateComponent(c.name.clone()));
            }
            let d = c.dims().expect("validated format");
            match dims {
                None => dims = Some(d),
                Some(first) if first != d => return Err(FormatError::MixedDims { first, second: d }),
                _ => {}
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoseBody {
    /// Frames per second; zero for single-image poses.
    pub fps: u16,
    pub tensor: MaskedFrameTensor,
}

impl PoseBody {
    pub fn new(fps: u16, tensor: MaskedFrameTensor) -> Self {
        Self { fps, tensor }
    }

    pub fn people(&self) -> usize {
        self.tensor.people()
    }

    pub fn frames(&self) -> usize {
        self.tensor.frames()
    }
}

/// A complete `.pose` document.
#[derive(Debug, Clone, PartialEq)]
pub struct Pose {
    pub header: PoseHeader,
    pub body: PoseBody,
}

impl Pose {
    /// Checks that the tensor matches the header's point count and dimensionality.
    pub fn new(header: PoseHeader, body: PoseBody) -> Result<Self, FormatError> {
        header.validate()?;
        let dims = header.dims().ok_or(FormatError::EmptyHeader)?;
        if body.tensor.points() != header.total_points() {
            return Err(FormatError::ShapeMismatch {
                what: "points",
                expected: header.total_points(),
                actual: body.tensor.points(),
            });
        }
        if body.tensor.dims() != dims {
            return Err(FormatError::ShapeMismatch {
                what: "dims",
                expected: dims,
                actual: body.tensor.dims(),
            });
        }
        Ok(Self { header, body })
    }

    pub fn tensor(&self) -> &MaskedFrameTensor {
        &self.body.tensor
    }

    /// Same header and fps, new tensor.
    pub fn with_tensor(&self, tensor: MaskedFrameTensor) -> Result<Self, FormatError> {
        Self::new(self.header.clone(), PoseBody::new(self.body.fps, tensor))
    }

    pub fn read(bytes: &[u8]) -> Result<Self, FormatError> {
        read_pose(bytes)
    }

    pub fn write(&self) -> Result<Vec<u8>, FormatError> {
        write_pose(self)
    }
}

/// Parses a whole `.pose` file.
pub fn read_pose(bytes: &[u8]) -> Result<Pose, FormatError> {
    let (header, consumed) = decode_header(bytes)?;
    let body = decode_body(&bytes[consumed..], &header)?;
    Pose::new(header, body)
}

/// Serializes a pose as header followed by body.
pub fn write_pose(pose: &Pose) -> Result<Vec<u8>, FormatError> {
    let mut out = encode_header(&pose.header)?;
    let body = encode_body(&pose.body)?;
    out.extend_from_slice(&body);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn component(format: &str) -> PoseComponent {
        PoseComponent {
            name: "A".into(),
            format: format.into(),
            points: vec!["p".into(), "q".into()],
            limbs: vec![(0, 1)],
            colors: vec![[255, 0, 0]],
        }
    }

    #[test]
    fn dims_from_format() {
        assert_eq!(component("XYC").dims(), Some(2));
        assert_eq!(component("XYZC").dims(), Some(3));
        assert_eq!(component("XY").dims(), None);
        assert_eq!(component("XYZWC").dims(), None);
        assert_eq!(component("C").dims(), None);
    }

    #[test]
    fn component_invariants() {
        let mut c = component("XYC");
        c.limbs.push((0, 2));
        assert!(matches!(c.validate(), Err(FormatError::LimbOutOfRange { to: 2, .. })));
        let mut c = component("XYC");
        c.points[1] = "p".into();
        assert!(matches!(c.validate(), Err(FormatError::DuplicatePoint { .. })));
    }

    #[test]
    fn mixed_dims_rejected() {
        let mut b = component("XYZC");
        b.name = "B".into();
        let err = PoseHeader::new(1, 1, 0, vec![component("XYC"), b]).unwrap_err();
        assert_eq!(err, FormatError::MixedDims { first: 2, second: 3 });
    }

    #[test]
    fn duplicate_component_rejected() {
        let err = PoseHeader::new(1, 1, 0, vec![component("XYC"), component("XYC")]).unwrap_err();
        assert!(matches!(err, FormatError::DuplicateComponent(_)));
    }

    #[test]
    fn point_lookup_is_flat() {
        let mut b = component("XYC");
        b.name = "B".into();
        let h = PoseHeader::new(1, 1, 0, vec![component("XYC"), b]).unwrap();
        assert_eq!(h.point_index(&PointRef::new("B", "q")), Some(3));
        assert_eq!(h.point_index(&PointRef::new("B", "zz")), None);
        assert_eq!(h.point_index(&PointRef::new("C", "p")), None);
        assert_eq!(h.component_offsets(), vec![0, 2]);
    }

    #[test]
    fn point_ref_parsing() {
        let r: PointRef = "POSE_LANDMARKS:LEFT_SHOULDER".parse().unwrap();
        assert_eq!(r, PointRef::new("POSE_LANDMARKS", "LEFT_SHOULDER"));
        assert!("nocolon".parse::<PointRef>().is_err());
        assert!(":x".parse::<PointRef>().is_err());
    }

    #[test]
    fn pose_shape_checked() {
        let h = PoseHeader::new(1, 1, 0, vec![component("XYC")]).unwrap();
        let t = MaskedFrameTensor::new_zeroed(1, 1, 3, 2).unwrap();
        assert!(matches!(
            Pose::new(h.clone(), PoseBody::new(1, t)),
            Err(FormatError::ShapeMismatch { what: "points", .. })
        ));
        let t = MaskedFrameTensor::new_zeroed(1, 1, 2, 3).unwrap();
        assert!(matches!(
            Pose::new(h, PoseBody::new(1, t)),
            Err(FormatError::ShapeMismatch { what: "dims", .. })
        ));
    }
}
