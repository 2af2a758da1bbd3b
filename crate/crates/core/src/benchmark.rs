//! File size and read speed of `.pose` against OpenPose-style monolithic JSON.
//!
//! For each frame count a synthetic 137-point, single-person 2D sequence is
//! serialized both ways. Timings are medians over repeated reads from memory:
//! JSON parsing alone (no tensor construction), a full `.pose` read, and a
//! body-only `.pose` read with the header already known.

use std::fmt::Write as _;
use std::hint::black_box;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::format::{decode_body, decode_header, read_pose, write_pose, FormatError, Pose, PoseBody};
use crate::ingest::{openpose_header, OpenPoseVariant};
use crate::tensor::{MaskedFrameTensor, Shape};

pub const DEFAULT_FRAMES: [usize; 5] = [1, 10, 100, 1_000, 10_000];
pub const DEFAULT_REPS: usize = 20;
const SEED: u64 = 0x5eed;
const WIDTH: u16 = 1280;
const HEIGHT: u16 = 720;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub frames: usize,
    pub json_bytes: usize,
    pub json_parse_secs: f64,
    pub pose_bytes: usize,
    pub pose_read_secs: f64,
    pub pose_body_read_secs: f64,
    /// JSON size over `.pose` size.
    pub size_ratio: f64,
    /// JSON parse time over full `.pose` read time.
    pub speed_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub reps: usize,
    pub rows: Vec<BenchRow>,
}

/// Deterministic 137-point, one-person 2D pose with every point present.
pub fn synthetic_pose(frames: usize, seed: u64) -> Pose {
    let header = openpose_header(OpenPoseVariant::Keypoints137, WIDTH, HEIGHT);
    let shape = Shape::new(frames, 1, header.total_points(), 2).expect("2D");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut data = Vec::with_capacity(shape.cells());
    for _ in 0..shape.slots() {
        data.push(rng.random_range(0.0..WIDTH as f32));
        data.push(rng.random_range(0.0..HEIGHT as f32));
    }
    let confidence = (0..shape.slots()).map(|_| rng.random_range(0.05f32..1.0)).collect();
    let tensor = MaskedFrameTensor::from_parts(shape, data, confidence).expect("sized buffers");
    Pose::new(header, PoseBody::new(25, tensor)).expect("consistent pose")
}

/// Formats like C's `%g` with six significant digits, as OpenPose writes floats.
pub fn format_g6(x: f32) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x.is_finite() { "0".into() } else { x.to_string() };
    }
    let sci = format!("{:.5e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if !(-4..6).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim(mantissa), sign, exp.abs())
    } else {
        let decimals = (5 - exp).max(0) as usize;
        trim(&format!("{:.*}", decimals, x))
    }
}

fn push_keypoints(out: &mut String, key: &str, pose: &Pose, frame: usize, range: std::ops::Range<usize>) {
    let t = pose.tensor();
    let _ = write!(out, "\"{key}\":[");
    for (i, k) in range.enumerate() {
        if i > 0 {
            out.push(',');
        }
        let c = t.coords(frame, 0, k);
        let _ = write!(
            out,
            "{},{},{}",
            format_g6(c[0]),
            format_g6(c[1]),
            format_g6(t.conf(frame, 0, k))
        );
    }
    out.push(']');
}

/// Serializes the first person of each frame as an OpenPose frame object, all
/// frames in one top-level JSON array.
pub fn openpose_json(pose: &Pose) -> String {
    let offsets = pose.header.component_offsets();
    let sizes: Vec<usize> = pose.header.components.iter().map(|c| c.points.len()).collect();
    let keys = [
        "pose_keypoints_2d",
        "face_keypoints_2d",
        "hand_left_keypoints_2d",
        "hand_right_keypoints_2d",
    ];
    let mut out = String::from("[");
    for f in 0..pose.tensor().frames() {
        if f > 0 {
            out.push(',');
        }
        out.push_str("{\"version\":1.3,\"people\":[{\"person_id\":[-1],");
        for (i, key) in keys.iter().enumerate() {
            push_keypoints(&mut out, key, pose, f, offsets[i]..offsets[i] + sizes[i]);
            out.push(',');
        }
        out.push_str(
            "\"pose_keypoints_3d\":[],\"face_keypoints_3d\":[],\"hand_left_keypoints_3d\":[],\"hand_right_keypoints_3d\":[]}]}",
        );
    }
    out.push(']');
    out
}

fn median_secs<T>(reps: usize, mut f: impl FnMut() -> T) -> f64 {
    let mut times: Vec<Duration> = (0..reps.max(1))
        .map(|_| {
            let start = Instant::now();
            black_box(f());
            start.elapsed()
        })
        .collect();
    times.sort();
    let n = times.len();
    let mid = if n % 2 == 1 {
        times[n / 2]
    } else {
        (times[n / 2 - 1] + times[n / 2]) / 2
    };
    mid.as_secs_f64().max(1e-9)
}

/// Benchmarks one frame count.
pub fn bench_frames(frames: usize, reps: usize) -> Result<BenchRow, FormatError> {
    let pose = synthetic_pose(frames, SEED);
    let pose_bytes = write_pose(&pose)?;
    let json = openpose_json(&pose).into_bytes();
    let (header, header_len) = decode_header(&pose_bytes)?;
    let body_bytes = &pose_bytes[header_len..];

    let json_parse_secs = median_secs(reps, || {
        serde_json::from_slice::<serde_json::Value>(black_box(&json)).expect("generated JSON parses")
    });
    let pose_read_secs = median_secs(reps, || {
        read_pose(black_box(&pose_bytes)).expect("generated pose reads")
    });
    let pose_body_read_secs = median_secs(reps, || {
        decode_body(black_box(body_bytes), &header).expect("generated body reads")
    });

    Ok(BenchRow {
        frames,
        json_bytes: json.len(),
        json_parse_secs,
        pose_bytes: pose_bytes.len(),
        pose_read_secs,
        pose_body_read_secs,
        size_ratio: json.len() as f64 / pose_bytes.len() as f64,
        speed_ratio: json_parse_secs / pose_read_secs,
    })
}

pub fn bench_run(frames_list: &[usize], reps: usize) -> Result<BenchReport, FormatError> {
    let rows = frames_list
        .iter()
        .map(|&f| bench_frames(f, reps))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(BenchReport { reps, rows })
}

fn human_bytes(n: usize) -> String {
    const UNITS: [&str; 4] = ["B", "KB", "MB", "GB"];
    let mut v = n as f64;
    let mut unit = 0;
    while v >= 1000.0 && unit < UNITS.len() - 1 {
        v /= 1000.0;
        unit += 1;
    }
    if unit == 0 {
        format!("{n} B")
    } else {
        format!("{v:.1} {}", UNITS[unit])
    }
}

fn human_secs(s: f64) -> String {
    if s >= 1.0 {
        format!("{s:.2} s")
    } else if s >= 1e-3 {
        format!("{:.2} ms", s * 1e3)
    } else {
        format!("{:.1} µs", s * 1e6)
    }
}

impl BenchReport {
    /// Aligned text table: frames, JSON size and speed, `.pose` size, speed and body speed.
    pub fn to_table(&self) -> String {
        let header = [
            "# Frames",
            "JSON Size",
            "JSON Speed",
            "Pose Size",
            "Pose Speed",
            "Speed (Body)",
            "Size ×",
            "Speed ×",
        ];
        let rows: Vec<[String; 8]> = self
            .rows
            .iter()
            .map(|r| {
                [
                    r.frames.to_string(),
                    human_bytes(r.json_bytes),
                    human_secs(r.json_parse_secs),
                    human_bytes(r.pose_bytes),
                    human_secs(r.pose_read_secs),
                    human_secs(r.pose_body_read_secs),
                    format!("{:.2}", r.size_ratio),
                    format!("{:.1}", r.speed_ratio),
                ]
            })
            .collect();
        let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
        for row in &rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let mut out = String::new();
        let line = |out: &mut String, cells: &[&str]| {
            let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, &w)| format!("{c:>w$}")).collect();
            out.push_str(padded.join("  ").trim_end());
            out.push('\n');
        };
        line(&mut out, &header);
        for row in &rows {
            let cells: Vec<&str> = row.iter().map(String::as_str).collect();
            line(&mut out, &cells);
        }
        out
    }
}
