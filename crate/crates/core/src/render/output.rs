use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use color_quant::NeuQuant;

use super::{render_frame, RenderError, RenderOptions, RgbImage};
use crate::format::{Pose, Rgb};

pub fn encode_png(image: &RgbImage) -> Result<Vec<u8>, RenderError> {
    let mut out = Vec::new();
    let mut encoder = png::Encoder::new(&mut out, image.width, image.height);
    encoder.set_color(png::ColorType::Rgb);
    encoder.set_depth(png::BitDepth::Eight);
    let mut writer = encoder.write_header()?;
    writer.write_image_data(&image.pixels)?;
    writer.finish()?;
    Ok(out)
}

/// Writes one PNG per frame as `frame_00000.png`, `frame_00001.png`, ... and
/// returns the paths in frame order.
pub fn render_png_sequence(pose: &Pose, dir: &Path, opts: &RenderOptions) -> Result<Vec<PathBuf>, RenderError> {
    let frames = pose.tensor().frames();
    if frames == 0 {
        return Err(RenderError::NoFrames);
    }
    fs::create_dir_all(dir).map_err(|source| RenderError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let digits = (frames - 1).to_string().len().max(5);
    let mut paths = Vec::with_capacity(frames);
    for f in 0..frames {
        let bytes = encode_png(&render_frame(pose, f, opts)?)?;
        let path = dir.join(format!("frame_{f:0digits$}.png"));
        fs::write(&path, bytes).map_err(|source| RenderError::Io {
            path: path.clone(),
            source,
        })?;
        paths.push(path);
    }
    Ok(paths)
}

/// A global palette of at most 256 colors.
///
/// Built from the first frame: its exact colors when there are few enough,
/// otherwise a NeuQuant reduction. Later frames map to the nearest entry.
pub struct GifPalette {
    colors: Vec<Rgb>,
    lookup: HashMap<Rgb, u8>,
}

impl GifPalette {
    pub fn from_image(image: &RgbImage) -> Self {
        let mut colors = Vec::new();
        let mut lookup = HashMap::new();
        for px in image.pixels.chunks_exact(3) {
            let c = [px[0], px[1], px[2]];
            if let std::collections::hash_map::Entry::Vacant(slot) = lookup.entry(c) {
                if colors.len() == 256 {
                    return Self::quantized(image);
                }
                slot.insert(colors.len() as u8);
                colors.push(c);
            }
        }
        Self { colors, lookup }
    }

    fn quantized(image: &RgbImage) -> Self {
        let rgba: Vec<u8> = image
            .pixels
            .chunks_exact(3)
            .flat_map(|p| [p[0], p[1], p[2], 255])
            .collect();
        let quant = NeuQuant::new(10, 256, &rgba);
        let colors: Vec<Rgb> = quant
            .color_map_rgb()
            .chunks_exact(3)
            .map(|c| [c[0], c[1], c[2]])
            .collect();
        Self {
            colors,
            lookup: HashMap::new(),
        }
    }

    pub fn colors(&self) -> &[Rgb] {
        &self.colors
    }

    fn index_of(&mut self, c: Rgb) -> u8 {
        if let Some(&i) = self.lookup.get(&c) {
            return i;
        }
        let dist = |p: &Rgb| {
            p.iter()
                .zip(&c)
                .map(|(&a, &b)| (a as i32 - b as i32).pow(2))
                .sum::<i32>()
        };
        let (i, _) = self
            .colors
            .iter()
            .enumerate()
            .min_by_key(|(_, p)| dist(p))
            .expect("palette is never empty");
        self.lookup.insert(c, i as u8);
        i as u8
    }

    fn indices(&mut self, image: &RgbImage) -> Vec<u8> {
        image
            .pixels
            .chunks_exact(3)
            .map(|p| self.index_of([p[0], p[1], p[2]]))
            .collect()
    }

    fn flat(&self) -> Vec<u8> {
        self.colors.iter().flatten().copied().collect()
    }
}

/// Encodes the pose as a looping GIF89a with a frame delay of
/// `round(100 / fps)` centiseconds.
pub fn encode_gif(pose: &Pose, opts: &RenderOptions) -> Result<Vec<u8>, RenderError> {
    let frames = pose.tensor().frames();
    if frames == 0 {
        return Err(RenderError::NoFrames);
    }
    if pose.body.fps == 0 {
        return Err(RenderError::ZeroFps);
    }
    let delay = (100.0 / pose.body.fps as f64).round() as u16;
    let (width, height) = (pose.header.width, pose.header.height);

    let first = render_frame(pose, 0, opts)?;
    let mut palette = GifPalette::from_image(&first);
    let mut out = Vec::new();
    {
        let mut encoder = gif::Encoder::new(&mut out, width, height, &palette.flat())?;
        encoder.set_repeat(gif::Repeat::Infinite)?;
        for f in 0..frames {
            let image = if f == 0 {
                first.clone()
            } else {
                render_frame(pose, f, opts)?
            };
            let mut frame = gif::Frame::from_indexed_pixels(width, height, palette.indices(&image), None);
            frame.delay = delay;
            encoder.write_frame(&frame)?;
        }
    }
    Ok(out)
}

pub fn render_gif(pose: &Pose, path: &Path, opts: &RenderOptions) -> Result<(), RenderError> {
    let bytes = encode_gif(pose, opts)?;
    fs::write(path, bytes).map_err(|source| RenderError::Io {
        path: path.to_path_buf(),
        source,
    })
}
