use super::{resolve, OpsError};
use crate::format::{PointRef, Pose};
use crate::tensor::Affine;

type Vec3 = [f64; 3];

fn sub(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm(a: Vec3) -> f64 {
    dot(a, a).sqrt()
}

/// Rotation matrix taking the unit vector `from` onto the unit vector `to`
/// (Rodrigues' formula). Antiparallel inputs get a half turn about an axis
/// perpendicular to `from`, preferring the x-axis.
pub fn rotation_between(from: Vec3, to: Vec3) -> [[f64; 3]; 3] {
    let v = cross(from, to);
    let s = norm(v);
    let c = dot(from, to);
    if s < 1e-12 {
        if c > 0.0 {
            return [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        }
        // half turn about a unit axis k ⟂ from: R = 2kkᵀ − I
        let k = if from[0].abs() < 0.9 {
            let k = sub([1.0, 0.0, 0.0], from.map(|f| f * from[0]));
            let n = norm(k);
            k.map(|x| x / n)
        } else {
            let k = sub([0.0, 1.0, 0.0], from.map(|f| f * from[1]));
            let n = norm(k);
            k.map(|x| x / n)
        };
        let mut r = [[0.0; 3]; 3];
        for (i, row) in r.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = 2.0 * k[i] * k[j] - if i == j { 1.0 } else { 0.0 };
            }
        }
        return r;
    }
    let k = [[0.0, -v[2], v[1]], [v[2], 0.0, -v[0]], [-v[1], v[0], 0.0]];
    let factor = (1.0 - c) / (s * s);
    let mut r = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let k2: f64 = (0..3).map(|m| k[i][m] * k[m][j]).sum();
            r[i][j] = if i == j { 1.0 } else { 0.0 } + k[i][j] + factor * k2;
        }
    }
    r
}

/// Rotates a 3D pose so the plane through the mean positions of three named
/// points becomes parallel to `z = const`.
///
/// One global rotation is applied to every frame.
pub fn rotate_to_plane(pose: &Pose, p1: &PointRef, p2: &PointRef, p3: &PointRef) -> Result<Pose, OpsError> {
    let t = pose.tensor();
    if t.dims() != 3 {
        return Err(OpsError::UnsupportedDims {
            op: "plane alignment",
            expected: 3,
            actual: t.dims(),
        });
    }
    let mut means = [[0.0f64; 3]; 3];
    for (slot, point) in means.iter_mut().zip([p1, p2, p3]) {
        let index = resolve(&pose.header, point)?;
        let (mean, _) = t.unmasked_mean(index)?.valid().ok_or(OpsError::NoReferenceData)?;
        slot.copy_from_slice(&mean);
    }
    let [a, b, c] = means;
    let normal = cross(sub(b, a), sub(c, a));
    let length = norm(normal);
    let scale = norm(sub(b, a)).max(norm(sub(c, a)));
    if length.partial_cmp(&(1e-9 * scale * scale)) != Some(std::cmp::Ordering::Greater) || !length.is_finite() {
        return Err(OpsError::DegeneratePlane);
    }
    let n = normal.map(|x| x / length);
    let r = rotation_between(n, [0.0, 0.0, 1.0]);
    let transform = Affine::linear(r.iter().map(|row| row.to_vec()).collect())?;
    Ok(pose.with_tensor(t.apply_affine(&transform)?)?)
}
