//! OpenPose skeleton tables: point names, limb pairs and render colors.
//!
//! These follow OpenPose's BODY_25, 70-point face and 21-point hand conventions.

use crate::format::Rgb;

pub const BODY_25_POINTS: [&str; 25] = [
    "Nose",
    "Neck",
    "RShoulder",
    "RElbow",
    "RWrist",
    "LShoulder",
    "LElbow",
    "LWrist",
    "MidHip",
    "RHip",
    "RKnee",
    "RAnkle",
    "LHip",
    "LKnee",
    "LAnkle",
    "REye",
    "LEye",
    "REar",
    "LEar",
    "LBigToe",
    "LSmallToe",
    "LHeel",
    "RBigToe",
    "RSmallToe",
    "RHeel",
];

pub const BODY_25_LIMBS: [(u16, u16); 24] = [
    (1, 8),
    (1, 2),
    (1, 5),
    (2, 3),
    (3, 4),
    (5, 6),
    (6, 7),
    (8, 9),
    (9, 10),
    (10, 11),
    (8, 12),
    (12, 13),
    (13, 14),
    (1, 0),
    (0, 15),
    (15, 17),
    (0, 16),
    (16, 18),
    (14, 19),
    (19, 20),
    (14, 21),
    (11, 22),
    (22, 23),
    (11, 24),
];

pub const BODY_25_COLORS: [Rgb; 25] = [
    [255, 0, 85],
    [255, 0, 0],
    [255, 85, 0],
    [255, 170, 0],
    [255, 255, 0],
    [170, 255, 0],
    [85, 255, 0],
    [0, 255, 0],
    [255, 0, 0],
    [0, 255, 85],
    [0, 255, 170],
    [0, 255, 255],
    [0, 170, 255],
    [0, 85, 255],
    [0, 0, 255],
    [255, 0, 170],
    [170, 0, 255],
    [255, 0, 255],
    [85, 0, 255],
    [0, 0, 255],
    [0, 0, 255],
    [0, 0, 255],
    [0, 255, 255],
    [0, 255, 255],
    [0, 255, 255],
];

/// Neck and MidHip are synthesized by OpenPose from the shoulders and hips.
/// The 23-point body drops them.
pub const BODY_23_DROPPED: [usize; 2] = [1, 8];

/// Torso edges that replace limbs through the dropped points.
pub const BODY_23_EXTRA_LIMBS: [(&str, &str); 4] = [
    ("RShoulder", "LShoulder"),
    ("RHip", "LHip"),
    ("RShoulder", "RHip"),
    ("LShoulder", "LHip"),
];

pub const FACE_POINTS: usize = 70;

/// Contour chains of the 68-landmark face; points 68 and 69 are the pupils.
const FACE_CHAINS: [(u16, u16, bool); 9] = [
    (0, 16, false),  // jaw
    (17, 21, false), // right brow
    (22, 26, false), // left brow
    (27, 30, false), // nose bridge
    (31, 35, false), // nostrils
    (36, 41, true),  // right eye
    (42, 47, true),  // left eye
    (48, 59, true),  // outer lips
    (60, 67, true),  // inner lips
];

pub fn face_limbs() -> Vec<(u16, u16)> {
    let mut limbs = Vec::new();
    for (start, end, closed) in FACE_CHAINS {
        limbs.extend((start..end).map(|i| (i, i + 1)));
        if closed {
            limbs.push((end, start));
        }
    }
    limbs
}

pub const FACE_COLORS: [Rgb; 1] = [[255, 255, 255]];

pub const HAND_POINTS: [&str; 21] = [
    "BASE", "T_STFA", "T_FADI", "T_DIPI", "T_TIP", "I_STFA", "I_FADI", "I_DIPI", "I_TIP", "M_STFA", "M_FADI", "M_DIPI",
    "M_TIP", "R_STFA", "R_FADI", "R_DIPI", "R_TIP", "P_STFA", "P_FADI", "P_DIPI", "P_TIP",
];

/// Each finger is a chain of four points hanging off the wrist.
pub fn hand_limbs() -> Vec<(u16, u16)> {
    let mut limbs = Vec::with_capacity(20);
    for finger in 0..5u16 {
        let base = 1 + finger * 4;
        limbs.push((0, base));
        limbs.extend((base..base + 3).map(|i| (i, i + 1)));
    }
    limbs
}

pub const HAND_COLORS: [Rgb; 21] = [
    [100, 100, 100],
    [100, 0, 0],
    [150, 0, 0],
    [200, 0, 0],
    [255, 0, 0],
    [100, 100, 0],
    [150, 150, 0],
    [200, 200, 0],
    [255, 255, 0],
    [0, 100, 50],
    [0, 150, 75],
    [0, 200, 100],
    [0, 255, 125],
    [0, 50, 100],
    [0, 75, 150],
    [0, 100, 200],
    [0, 125, 255],
    [100, 0, 100],
    [150, 0, 150],
    [200, 0, 200],
    [255, 0, 255],
];
