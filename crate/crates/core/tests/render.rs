mod common;

use common::*;
use pose_core::render::{encode_gif, encode_png, render_frame, render_png_sequence, PersonSelection, RenderOptions};
use pose_core::{MaskedFrameTensor, Pose, PoseBody, PoseComponent, PoseHeader, Shape};
use rand::Rng;

fn canvas_pose(rng: &mut impl Rng, frames: usize, fps: u16) -> Pose {
    let mut pose = random_pose(rng, frames, 2, 12, 2, 1.0);
    pose.header.width = 64;
    pose.header.height = 48;
    let t = pose.tensor();
    let data = t.data().iter().map(|v| (v + 1.0) * 30.0).collect();
    let t = MaskedFrameTensor::from_parts(t.shape(), data, t.confidence().to_vec()).unwrap();
    Pose::new(pose.header.clone(), PoseBody::new(fps, t)).unwrap()
}

fn gif_frames(bytes: &[u8]) -> Vec<u16> {
    let mut decoder = gif::DecodeOptions::new().read_info(bytes).unwrap();
    let mut delays = Vec::new();
    while let Some(frame) = decoder.read_next_frame().unwrap() {
        delays.push(frame.delay);
    }
    delays
}

#[test]
fn gif_has_one_image_per_frame() {
    let mut rng = rng(21);
    for _ in 0..10 {
        let frames = rng.random_range(1..50);
        let fps = rng.random_range(1..=60);
        let pose = canvas_pose(&mut rng, frames, fps);
        let delays = gif_frames(&encode_gif(&pose, &RenderOptions::default()).unwrap());
        assert_eq!(delays.len(), frames);
        let want = (100.0 / fps as f64).round() as u16;
        assert!(delays.iter().all(|&d| d == want), "fps {fps}");
    }
}

#[test]
fn ten_frames_at_ten_fps() {
    let pose = canvas_pose(&mut rng(22), 10, 10);
    assert_eq!(
        gif_frames(&encode_gif(&pose, &RenderOptions::default()).unwrap()),
        vec![10; 10]
    );
}

#[test]
fn output_is_deterministic() {
    let pose = canvas_pose(&mut rng(23), 4, 25);
    let opts = RenderOptions::default();
    assert_eq!(encode_gif(&pose, &opts).unwrap(), encode_gif(&pose, &opts).unwrap());
    let dir = tempfile::tempdir().unwrap();
    let paths = render_png_sequence(&pose, dir.path(), &opts).unwrap();
    assert_eq!(paths.len(), 4);
    for (f, path) in paths.iter().enumerate() {
        let expected = encode_png(&render_frame(&pose, f, &opts).unwrap()).unwrap();
        assert_eq!(std::fs::read(path).unwrap(), expected);
    }
}

#[test]
fn fully_masked_frame_is_background() {
    let pose = canvas_pose(&mut rng(24), 3, 25);
    let t = pose.tensor();
    let masked = MaskedFrameTensor::from_parts(t.shape(), t.data().to_vec(), vec![0.0; t.shape().slots()]).unwrap();
    let pose = pose.with_tensor(masked).unwrap();
    let opts = RenderOptions {
        background: [12, 34, 56],
        ..Default::default()
    };
    let image = render_frame(&pose, 1, &opts).unwrap();
    assert!(image.pixels.chunks_exact(3).all(|p| p == [12, 34, 56]));
}

#[test]
fn other_people_are_not_drawn() {
    let pose = canvas_pose(&mut rng(25), 1, 25);
    let t = pose.tensor();
    let mut conf = t.confidence().to_vec();
    for k in 0..t.points() {
        conf[t.shape().slot(0, 1, k)] = 0.0;
    }
    let only_first = pose
        .with_tensor(MaskedFrameTensor::from_parts(t.shape(), t.data().to_vec(), conf).unwrap())
        .unwrap();
    let opts = RenderOptions {
        person: PersonSelection::Only(0),
        ..Default::default()
    };
    assert_eq!(
        render_frame(&pose, 0, &opts).unwrap(),
        render_frame(&only_first, 0, &RenderOptions::default()).unwrap()
    );
}

#[test]
fn limbs_cover_the_segment() {
    let header = PoseHeader::new(
        50,
        50,
        0,
        vec![PoseComponent::new("C", "XYC", vec!["a".into(), "b".into()], vec![(0, 1)], vec![[0, 0, 0]]).unwrap()],
    )
    .unwrap();
    let t = MaskedFrameTensor::from_parts(
        Shape::new(1, 1, 2, 2).unwrap(),
        vec![5.0, 5.0, 44.0, 31.0],
        vec![1.0, 1.0],
    )
    .unwrap();
    let pose = Pose::new(header, PoseBody::new(1, t)).unwrap();
    let image = render_frame(&pose, 0, &RenderOptions::default()).unwrap();
    // every column between the endpoints holds a dark pixel on or next to the ideal line
    for x in 5..=44u32 {
        let y = 5.0 + (x as f64 - 5.0) * 26.0 / 39.0;
        let near = (y.floor() as u32..=y.ceil() as u32).any(|y| image.pixel(x, y) == [0, 0, 0]);
        assert!(near, "gap at x = {x}");
    }
}
