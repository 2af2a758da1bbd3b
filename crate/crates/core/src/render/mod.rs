//! Skeleton rasterization to RGB frames, PNG sequences and animated GIFs.
//!
//! Coordinates are taken as pixels on a canvas the size of the header's width
//! and height. Points are filled circles blended with their confidence as
//! opacity; limbs are one-pixel lines in the color of their start point.

mod output;

use std::path::PathBuf;

use thiserror::Error;

use crate::format::{Pose, Rgb};

pub use output::{encode_gif, encode_png, render_gif, render_png_sequence, GifPalette};

#[derive(Debug, Error)]
pub enum RenderError {
    #[error("frame {index} out of range for {frames} frames")]
    FrameOutOfRange { index: usize, frames: usize },
    #[error("canvas is {width}x{height}; both sides must be positive")]
    EmptyCanvas { width: u16, height: u16 },
    #[error("pose has no frames")]
    NoFrames,
    #[error("pose has fps 0; animation needs fps >= 1")]
    ZeroFps,
    #[error("invalid render options: {0}")]
    InvalidOptions(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("PNG encoding failed: {0}")]
    Png(#[from] png::EncodingError),
    #[error("GIF encoding failed: {0}")]
    Gif(#[from] gif::EncodingError),
}

/// Which people to draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PersonSelection {
    #[default]
    All,
    Only(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenderOptions {
    pub background: Rgb,
    /// Point radius in pixels; `None` picks `max(1, round(min(w, h) / 150))`.
    pub point_radius: Option<u32>,
    /// Output pixels per pose unit.
    pub scale: f64,
    pub person: PersonSelection,
}

impl Default for RenderOptions {
    fn default() -> Self {
        Self {
            background: [255, 255, 255],
            point_radius: None,
            scale: 1.0,
            person: PersonSelection::All,
        }
    }
}

impl RenderOptions {
    fn radius(&self, width: u16, height: u16) -> u32 {
        self.point_radius
            .unwrap_or_else(|| ((width.min(height) as f64 / 150.0).round() as u32).max(1))
    }

    fn validate(&self) -> Result<(), RenderError> {
        if self.point_radius == Some(0) {
            return Err(RenderError::InvalidOptions("point radius must be at least 1".into()));
        }
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return Err(RenderError::InvalidOptions(format!(
                "scale {} must be positive",
                self.scale
            )));
        }
        Ok(())
    }
}

/// Row-major RGB8 image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbImage {
    pub width: u32,
    pub height: u32,
    pub pixels: Vec<u8>,
}

impl RgbImage {
    pub fn filled(width: u32, height: u32, color: Rgb) -> Self {
        let pixels = color
            .iter()
            .copied()
            .cycle()
            .take(width as usize * height as usize * 3)
            .collect();
        Self { width, height, pixels }
    }

    pub fn pixel(&self, x: u32, y: u32) -> Rgb {
        let i = (y as usize * self.width as usize + x as usize) * 3;
        [self.pixels[i], self.pixels[i + 1], self.pixels[i + 2]]
    }

    /// Alpha-blends `color` over the pixel at `(x, y)`; out-of-bounds is a no-op.
    fn blend(&mut self, x: i64, y: i64, color: Rgb, alpha: f32) {
        if x < 0 || y < 0 || x >= self.width as i64 || y >= self.height as i64 {
            return;
        }
        let i = (y as usize * self.width as usize + x as usize) * 3;
        for (dst, &src) in self.pixels[i..i + 3].iter_mut().zip(&color) {
            let v = *dst as f32 * (1.0 - alpha) + src as f32 * alpha;
            *dst = v.round().clamp(0.0, 255.0) as u8;
        }
    }

    fn fill_circle(&mut self, cx: i64, cy: i64, radius: u32, color: Rgb, alpha: f32) {
        let r = radius as i64;
        for dy in -r..=r {
            for dx in -r..=r {
                if dx * dx + dy * dy <= r * r {
                    self.blend(cx + dx, cy + dy, color, alpha);
                }
            }
        }
    }

    /// Bresenham line, each pixel blended once.
    fn line(&mut self, (x0, y0): (i64, i64), (x1, y1): (i64, i64), color: Rgb, alpha: f32) {
        let dx = (x1 - x0).abs();
        let dy = -(y1 - y0).abs();
        let sx = if x0 < x1 { 1 } else { -1 };
        let sy = if y0 < y1 { 1 } else { -1 };
        let (mut x, mut y, mut err) = (x0, y0, dx + dy);
        loop {
            self.blend(x, y, color, alpha);
            if x == x1 && y == y1 {
                break;
            }
            let e2 = 2 * err;
            if e2 >= dy {
                err += dy;
                x += sx;
            }
            if e2 <= dx {
                err += dx;
                y += sy;
            }
        }
    }
}

const FALLBACK_COLOR: Rgb = [0, 0, 0];

/// Rasterizes one frame of a pose.
pub fn render_frame(pose: &Pose, frame: usize, opts: &RenderOptions) -> Result<RgbImage, RenderError> {
    opts.validate()?;
    let (width, height) = (pose.header.width, pose.header.height);
    if width == 0 || height == 0 {
        return Err(RenderError::EmptyCanvas { width, height });
    }
    let t = pose.tensor();
    if frame >= t.frames() {
        return Err(RenderError::FrameOutOfRange {
            index: frame,
            frames: t.frames(),
        });
    }
    let people: Vec<usize> = match opts.person {
        PersonSelection::All => (0..t.people()).collect(),
        PersonSelection::Only(p) if p < t.people() => vec![p],
        PersonSelection::Only(p) => {
            return Err(RenderError::InvalidOptions(format!(
                "person {p} out of range for {} people",
                t.people()
            )))
        }
    };

    let radius = opts.radius(width, height);
    let mut image = RgbImage::filled(width as u32, height as u32, opts.background);
    let pixel = |v: f32| (v as f64 * opts.scale).round() as i64;
    let offsets = pose.header.component_offsets();

    for &person in &people {
        for (component, &offset) in pose.header.components.iter().zip(&offsets) {
            let at = |k: usize| {
                let c = t.coords(frame, person, offset + k);
                (pixel(c[0]), pixel(c[1]))
            };
            let conf = |k: usize| t.conf(frame, person, offset + k);
            for &(from, to) in &component.limbs {
                let (from, to) = (from as usize, to as usize);
                let alpha = conf(from).min(conf(to));
                if alpha <= 0.0 {
                    continue;
                }
                let color = component.color_of(from).unwrap_or(FALLBACK_COLOR);
                image.line(at(from), at(to), color, alpha);
            }
            for k in 0..component.points.len() {
                let alpha = conf(k);
                if alpha <= 0.0 {
                    continue;
                }
                let (x, y) = at(k);
                let color = component.color_of(k).unwrap_or(FALLBACK_COLOR);
                image.fill_circle(x, y, radius, color, alpha);
            }
        }
    }
    Ok(image)
}
