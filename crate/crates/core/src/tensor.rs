//! Confidence-masked pose arrays.
//!
//! A [`MaskedFrameTensor`] holds coordinates shaped `frames × people × points × dims`
//! and confidences shaped `frames × people × points`. A confidence of zero marks a
//! missing point, and missing points always carry literal zero coordinates.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TensorError {
    #[error("unsupported dimensionality {0}, expected 2 or 3")]
    UnsupportedDims(usize),
    #[error("{what} has {actual} elements, expected {expected}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },
    #[error("transform is {actual}-dimensional but the tensor has {expected} dims")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("point index {index} out of range for {points} points")]
    PointOutOfRange { index: usize, points: usize },
    #[error("point indices must be strictly increasing (got {previous} then {next})")]
    UnsortedIndices { previous: usize, next: usize },
    #[error("frame index {index} out of range for {frames} frames")]
    FrameOutOfRange { index: usize, frames: usize },
}

/// Extents of a masked tensor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Shape {
    pub frames: usize,
    pub people: usize,
    pub points: usize,
    pub dims: usize,
}

impl Shape {
    pub fn new(frames: usize, people: usize, points: usize, dims: usize) -> Result<Self, TensorError> {
        if !(2..=3).contains(&dims) {
            return Err(TensorError::UnsupportedDims(dims));
        }
        Ok(Self {
            frames,
            people,
            points,
            dims,
        })
    }

    /// Number of confidence cells.
    pub fn slots(&self) -> usize {
        self.frames * self.people * self.points
    }

    /// Number of coordinate cells.
    pub fn cells(&self) -> usize {
        self.slots() * self.dims
    }

    pub fn slots_per_frame(&self) -> usize {
        self.people * self.points
    }

    #[inline]
    pub fn slot(&self, frame: usize, person: usize, point: usize) -> usize {
        (frame * self.people + person) * self.points + point
    }

    fn with_frames(self, frames: usize) -> Self {
        Self { frames, ..self }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaskedFrameTensor {
    shape: Shape,
    data: Vec<f32>,
    confidence: Vec<f32>,
}

/// Clamps a raw confidence into `[0, 1]`; NaN counts as missing.
#[inline]
pub fn clamp_confidence(c: f32) -> f32 {
    if c.is_nan() {
        0.0
    } else {
        c.clamp(0.0, 1.0)
    }
}

impl MaskedFrameTensor {
    /// A fully masked tensor.
    pub fn new_zeroed(frames: usize, people: usize, points: usize, dims: usize) -> Result<Self, TensorError> {
        let shape = Shape::new(frames, people, points, dims)?;
        Ok(Self {
            shape,
            data: vec![0.0; shape.cells()],
            confidence: vec![0.0; shape.slots()],
        })
    }

    /// Builds a tensor from flat buffers in `(frame, person, point[, dim])` order.
    ///
    /// Confidences are clamped to `[0, 1]` and coordinates of masked slots are
    /// zeroed, so the result is always in canonical form.
    pub fn from_parts(shape: Shape, mut data: Vec<f32>, mut confidence: Vec<f32>) -> Result<Self, TensorError> {
        let shape = Shape::new(shape.frames, shape.people, shape.points, shape.dims)?;
        if data.len() != shape.cells() {
            return Err(TensorError::LengthMismatch {
                what: "coordinate buffer",
                expected: shape.cells(),
                actual: data.len(),
            });
        }
        if confidence.len() != shape.slots() {
            return Err(TensorError::LengthMismatch {
                what: "confidence buffer",
                expected: shape.slots(),
                actual: confidence.len(),
            });
        }
        canonicalize(shape.dims, &mut data, &mut confidence);
        Ok(Self {
            shape,
            data,
            confidence,
        })
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn frames(&self) -> usize {
        self.shape.frames
    }

    pub fn people(&self) -> usize {
        self.shape.people
    }

    pub fn points(&self) -> usize {
        self.shape.points
    }

    pub fn dims(&self) -> usize {
        self.shape.dims
    }

    pub fn data(&self) -> &[f32] {
        &self.data
    }

    pub fn confidence(&self) -> &[f32] {
        &self.confidence
    }

    pub fn into_parts(self) -> (Shape, Vec<f32>, Vec<f32>) {
        (self.shape, self.data, self.confidence)
    }

    /// Coordinates of one slot.
    pub fn coords(&self, frame: usize, person: usize, point: usize) -> &[f32] {
        let d = self.shape.dims;
        let s = self.shape.slot(frame, person, point);
        &self.data[s * d..(s + 1) * d]
    }

    pub fn conf(&self, frame: usize, person: usize, point: usize) -> f32 {
        self.confidence[self.shape.slot(frame, person, point)]
    }

    pub fn is_valid(&self, frame: usize, person: usize, point: usize) -> bool {
        self.conf(frame, person, point) > 0.0
    }

    /// Applies `x ↦ M·x + b` to every unmasked coordinate. Masked slots and all
    /// confidences are left untouched.
    pub fn apply_affine(&self, transform: &Affine) -> Result<Self, TensorError> {
        let d = self.shape.dims;
        if transform.dims() != d {
            return Err(TensorError::DimensionMismatch {
                expected: d,
                actual: transform.dims(),
            });
        }
        let mut data = self.data.clone();
        let mut x = [0.0f64; 3];
        for (cell, &c) in data.chunks_exact_mut(d).zip(&self.confidence) {
            if c <= 0.0 {
                continue;
            }
            for (xi, &v) in x.iter_mut().zip(cell.iter()) {
                *xi = v as f64;
            }
            for (row, out) in cell.iter_mut().enumerate() {
                let mut acc = transform.offset[row];
                for (col, xi) in x.iter().take(d).enumerate() {
                    acc += transform.linear[row * d + col] * xi;
                }
                *out = acc as f32;
            }
        }
        Ok(Self {
            shape: self.shape,
            data,
            confidence: self.confidence.clone(),
        })
    }

    /// Mean position of `point` over every `(frame, person)` slot where it is unmasked.
    pub fn unmasked_mean(&self, point: usize) -> Result<MaskedMean, TensorError> {
        if point >= self.shape.points {
            return Err(TensorError::PointOutOfRange {
                index: point,
                points: self.shape.points,
            });
        }
        let d = self.shape.dims;
        let mut sum = vec![0.0f64; d];
        let mut count = 0usize;
        for frame in 0..self.shape.frames {
            for person in 0..self.shape.people {
                if !self.is_valid(frame, person, point) {
                    continue;
                }
                for (acc, &v) in sum.iter_mut().zip(self.coords(frame, person, point)) {
                    *acc += v as f64;
                }
                count += 1;
            }
        }
        if count == 0 {
            return Ok(MaskedMean::NoData);
        }
        for acc in &mut sum {
            *acc /= count as f64;
        }
        Ok(MaskedMean::Valid { mean: sum, count })
    }

    /// Restricts the tensor to the given points, in order.
    pub fn select_points(&self, indices: &[usize]) -> Result<Self, TensorError> {
        for pair in indices.windows(2) {
            if pair[1] <= pair[0] {
                return Err(TensorError::UnsortedIndices {
                    previous: pair[0],
                    next: pair[1],
                });
            }
        }
        if let Some(&last) = indices.last() {
            if last >= self.shape.points {
                return Err(TensorError::PointOutOfRange {
                    index: last,
                    points: self.shape.points,
                });
            }
        }
        let d = self.shape.dims;
        let shape = Shape {
            points: indices.len(),
            ..self.shape
        };
        let mut data = Vec::with_capacity(shape.cells());
        let mut confidence = Vec::with_capacity(shape.slots());
        for frame in 0..shape.frames {
            for person in 0..shape.people {
                for &k in indices {
                    let s = self.shape.slot(frame, person, k);
                    data.extend_from_slice(&self.data[s * d..(s + 1) * d]);
                    confidence.push(self.confidence[s]);
                }
            }
        }
        Ok(Self {
            shape,
            data,
            confidence,
        })
    }

    /// Keeps only the listed frames, in the given order.
    pub fn select_frames(&self, frames: &[usize]) -> Result<Self, TensorError> {
        let per_frame = self.shape.slots_per_frame();
        let d = self.shape.dims;
        let mut data = Vec::with_capacity(frames.len() * per_frame * d);
        let mut confidence = Vec::with_capacity(frames.len() * per_frame);
        for &f in frames {
            if f >= self.shape.frames {
                return Err(TensorError::FrameOutOfRange {
                    index: f,
                    frames: self.shape.frames,
                });
            }
            confidence.extend_from_slice(&self.confidence[f * per_frame..(f + 1) * per_frame]);
            data.extend_from_slice(&self.data[f * per_frame * d..(f + 1) * per_frame * d]);
        }
        Ok(Self {
            shape: self.shape.with_frames(frames.len()),
            data,
            confidence,
        })
    }

    /// Applies `f` to the coordinates of every unmasked slot, in storage order.
    pub fn map_unmasked<F>(&self, mut f: F) -> Self
    where
        F: FnMut(&mut [f32]),
    {
        let mut data = self.data.clone();
        for (cell, &c) in data.chunks_exact_mut(self.shape.dims).zip(&self.confidence) {
            if c > 0.0 {
                f(cell);
            }
        }
        Self {
            shape: self.shape,
            data,
            confidence: self.confidence.clone(),
        }
    }

    /// Number of slots violating the canonical mask (confidence 0 with a non-zero coordinate).
    pub fn mask_violations(&self) -> usize {
        self.data
            .chunks_exact(self.shape.dims)
            .zip(&self.confidence)
            .filter(|(cell, &c)| c == 0.0 && cell.iter().any(|v| v.to_bits() != 0))
            .count()
    }
}

fn canonicalize(dims: usize, data: &mut [f32], confidence: &mut [f32]) {
    for (cell, c) in data.chunks_exact_mut(dims).zip(confidence.iter_mut()) {
        *c = clamp_confidence(*c);
        if *c == 0.0 {
            // also normalizes -0.0 so masked slots are bitwise zero
            *c = 0.0;
            cell.fill(0.0);
        }
    }
}

/// Result of [`MaskedFrameTensor::unmasked_mean`].
#[derive(Debug, Clone, PartialEq)]
pub enum MaskedMean {
    Valid {
        mean: Vec<f64>,
        count: usize,
    },
    /// No unmasked slot contributed.
    NoData,
}

impl MaskedMean {
    pub fn valid(self) -> Option<(Vec<f64>, usize)> {
        match self {
            MaskedMean::Valid { mean, count } => Some((mean, count)),
            MaskedMean::NoData => None,
        }
    }
}

/// An affine map `x ↦ M·x + b` in 2 or 3 dimensions. `M` is row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Affine {
    dims: usize,
    linear: Vec<f64>,
    offset: Vec<f64>,
}

impl Affine {
    pub fn new(linear: Vec<Vec<f64>>, offset: Vec<f64>) -> Result<Self, TensorError> {
        let dims = offset.len();
        if !(2..=3).contains(&dims) {
            return Err(TensorError::UnsupportedDims(dims));
        }
        if linear.len() != dims {
            return Err(TensorError::DimensionMismatch {
                expected: dims,
                actual: linear.len(),
            });
        }
        let mut flat = Vec::with_capacity(dims * dims);
        for row in linear {
            if row.len() != dims {
                return Err(TensorError::DimensionMismatch {
                    expected: dims,
                    actual: row.len(),
                });
            }
            flat.extend(row);
        }
        Ok(Self {
            dims,
            linear: flat,
            offset,
        })
    }

    pub fn identity(dims: usize) -> Result<Self, TensorError> {
        Self::scale_translate(dims, 1.0, &vec![0.0; dims])
    }

    pub fn linear(matrix: Vec<Vec<f64>>) -> Result<Self, TensorError> {
        let dims = matrix.len();
        Self::new(matrix, vec![0.0; dims])
    }

    pub fn translation(offset: Vec<f64>) -> Result<Self, TensorError> {
        let dims = offset.len();
        Self::scale_translate(dims, 1.0, &offset)
    }

    /// `x ↦ s·x + b`.
    pub fn scale_translate(dims: usize, scale: f64, offset: &[f64]) -> Result<Self, TensorError> {
        if offset.len() != dims {
            return Err(TensorError::DimensionMismatch {
                expected: dims,
                actual: offset.len(),
            });
        }
        let linear = (0..dims)
            .map(|r| (0..dims).map(|c| if r == c { scale } else { 0.0 }).collect())
            .collect();
        Self::new(linear, offset.to_vec())
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn matrix(&self) -> &[f64] {
        &self.linear
    }

    pub fn offset(&self) -> &[f64] {
        &self.offset
    }

    /// The map applying `self` first, then `next`.
    pub fn then(&self, next: &Affine) -> Result<Affine, TensorError> {
        if self.dims != next.dims {
            return Err(TensorError::DimensionMismatch {
                expected: self.dims,
                actual: next.dims,
            });
        }
        let d = self.dims;
        let mut linear = vec![0.0; d * d];
        let mut offset = next.offset.clone();
        for r in 0..d {
            for c in 0..d {
                linear[r * d + c] = (0..d).map(|k| next.linear[r * d + k] * self.linear[k * d + c]).sum();
            }
            offset[r] += (0..d).map(|k| next.linear[r * d + k] * self.offset[k]).sum::<f64>();
        }
        Ok(Affine {
            dims: d,
            linear,
            offset,
        })
    }

    pub fn apply(&self, point: &[f64]) -> Vec<f64> {
        let d = self.dims;
        (0..d)
            .map(|r| self.offset[r] + (0..d).map(|c| self.linear[r * d + c] * point[c]).sum::<f64>())
            .collect()
    }
}
