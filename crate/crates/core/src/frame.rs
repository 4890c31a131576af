//! In-memory frame and clip types.
//!
//! RGB frames store interleaved `f32` channels in `[0, 1]`. Masks store one
//! `u8` per pixel with values in `{0, 1}`. Clips are ordered frame sequences
//! sharing one (width, height).

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Interleaved RGB image, values in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RgbFrame {
    width: usize,
    height: usize,
    data: Vec<f32>,
}

/// Single-channel real-valued image.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayFrame {
    width: usize,
    height: usize,
    data: Vec<f32>,
}

/// Binary image, one byte per pixel, values in `{0, 1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct MaskFrame {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl RgbFrame {
    pub fn new(width: usize, height: usize) -> Self {
        RgbFrame {
            width,
            height,
            data: vec![0.0; width * height * 3],
        }
    }

    pub fn filled(width: usize, height: usize, rgb: [f32; 3]) -> Self {
        let mut data = Vec::with_capacity(width * height * 3);
        for _ in 0..width * height {
            data.extend_from_slice(&rgb);
        }
        RgbFrame {
            width,
            height,
            data,
        }
    }

    pub fn from_data(width: usize, height: usize, data: Vec<f32>) -> Result<Self> {
        if data.len() != width * height * 3 {
            return Err(Error::shape(format!(
                "rgb frame payload {} != {}x{}x3",
                data.len(),
                width,
                height
            )));
        }
        Ok(RgbFrame {
            width,
            height,
            data,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[f32] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f32] {
        &mut self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> [f32; 3] {
        let i = (y * self.width + x) * 3;
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, rgb: [f32; 3]) {
        let i = (y * self.width + x) * 3;
        self.data[i] = rgb[0];
        self.data[i + 1] = rgb[1];
        self.data[i + 2] = rgb[2];
    }

    /// Bilinear sample at continuous pixel coordinates, clamped to the edge.
    ///
    /// Uses the lerp form so sampling a constant image returns the constant
    /// bit-exactly.
    pub fn sample_bilinear(&self, x: f32, y: f32) -> [f32; 3] {
        let (x0, y0, x1, y1, fx, fy) = bilinear_taps(x, y, self.width, self.height);
        let c00 = self.get(x0, y0);
        let c10 = self.get(x1, y0);
        let c01 = self.get(x0, y1);
        let c11 = self.get(x1, y1);
        let mut out = [0.0f32; 3];
        for ch in 0..3 {
            let top = lerp(c00[ch], c10[ch], fx);
            let bot = lerp(c01[ch], c11[ch], fx);
            out[ch] = lerp(top, bot, fy);
        }
        out
    }

    /// Bilinear resize to an exact target size.
    pub fn resize_bilinear(&self, out_w: usize, out_h: usize) -> RgbFrame {
        let mut out = RgbFrame::new(out_w, out_h);
        let sx = self.width as f32 / out_w as f32;
        let sy = self.height as f32 / out_h as f32;
        for y in 0..out_h {
            let src_y = (y as f32 + 0.5) * sy - 0.5;
            for x in 0..out_w {
                let src_x = (x as f32 + 0.5) * sx - 0.5;
                out.set(x, y, self.sample_bilinear(src_x, src_y));
            }
        }
        out
    }

    /// Copy of the axis-aligned window with origin `(x, y)`.
    pub fn crop(&self, x: usize, y: usize, w: usize, h: usize) -> Result<RgbFrame> {
        if x + w > self.width || y + h > self.height {
            return Err(Error::shape(format!(
                "crop {}x{}+{}+{} exceeds {}x{}",
                w, h, x, y, self.width, self.height
            )));
        }
        let mut out = RgbFrame::new(w, h);
        for row in 0..h {
            let src = ((y + row) * self.width + x) * 3;
            let dst = row * w * 3;
            out.data[dst..dst + w * 3].copy_from_slice(&self.data[src..src + w * 3]);
        }
        Ok(out)
    }

    /// Rec. 601 luma.
    pub fn to_gray(&self) -> GrayFrame {
        let mut g = GrayFrame::new(self.width, self.height);
        for i in 0..self.width * self.height {
            let r = self.data[i * 3] as f64;
            let gr = self.data[i * 3 + 1] as f64;
            let b = self.data[i * 3 + 2] as f64;
            g.data[i] = (0.299 * r + 0.587 * gr + 0.114 * b) as f32;
        }
        g
    }

    pub fn flip_horizontal(&self) -> RgbFrame {
        let mut out = RgbFrame::new(self.width, self.height);
        for y in 0..self.height {
            for x in 0..self.width {
                out.set(x, y, self.get(self.width - 1 - x, y));
            }
        }
        out
    }

    pub fn flip_vertical(&self) -> RgbFrame {
        let mut out = RgbFrame::new(self.width, self.height);
        for y in 0..self.height {
            for x in 0..self.width {
                out.set(x, y, self.get(x, self.height - 1 - y));
            }
        }
        out
    }
}

impl GrayFrame {
    pub fn new(width: usize, height: usize) -> Self {
        GrayFrame {
            width,
            height,
            data: vec![0.0; width * height],
        }
    }

    pub fn filled(width: usize, height: usize, v: f32) -> Self {
        GrayFrame {
            width,
            height,
            data: vec![v; width * height],
        }
    }

    pub fn from_data(width: usize, height: usize, data: Vec<f32>) -> Result<Self> {
        if data.len() != width * height {
            return Err(Error::shape(format!(
                "gray frame payload {} != {}x{}",
                data.len(),
                width,
                height
            )));
        }
        Ok(GrayFrame {
            width,
            height,
            data,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[f32] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f32] {
        &mut self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f32 {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: f32) {
        self.data[y * self.width + x] = v;
    }

    pub fn sample_bilinear(&self, x: f32, y: f32) -> f32 {
        let (x0, y0, x1, y1, fx, fy) = bilinear_taps(x, y, self.width, self.height);
        let top = lerp(self.get(x0, y0), self.get(x1, y0), fx);
        let bot = lerp(self.get(x0, y1), self.get(x1, y1), fx);
        lerp(top, bot, fy)
    }
}

impl MaskFrame {
    pub fn new(width: usize, height: usize) -> Self {
        MaskFrame {
            width,
            height,
            data: vec![0; width * height],
        }
    }

    pub fn filled(width: usize, height: usize, v: u8) -> Self {
        debug_assert!(v <= 1);
        MaskFrame {
            width,
            height,
            data: vec![v; width * height],
        }
    }

    pub fn from_data(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        if data.len() != width * height {
            return Err(Error::shape(format!(
                "mask frame payload {} != {}x{}",
                data.len(),
                width,
                height
            )));
        }
        if data.iter().any(|&v| v > 1) {
            return Err(Error::domain("mask values must be 0 or 1"));
        }
        Ok(MaskFrame {
            width,
            height,
            data,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [u8] {
        &mut self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: u8) {
        debug_assert!(v <= 1);
        self.data[y * self.width + x] = v;
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().filter(|&&v| v == 1).count()
    }

    /// Tight bounding box `(x, y, w, h)` of the foreground, or None if empty.
    pub fn bounding_box(&self) -> Option<(usize, usize, usize, usize)> {
        let mut min_x = usize::MAX;
        let mut min_y = usize::MAX;
        let mut max_x = 0usize;
        let mut max_y = 0usize;
        let mut any = false;
        for y in 0..self.height {
            for x in 0..self.width {
                if self.get(x, y) == 1 {
                    any = true;
                    min_x = min_x.min(x);
                    min_y = min_y.min(y);
                    max_x = max_x.max(x);
                    max_y = max_y.max(y);
                }
            }
        }
        if any {
            Some((min_x, min_y, max_x - min_x + 1, max_y - min_y + 1))
        } else {
            None
        }
    }
}

#[inline]
fn lerp(a: f32, b: f32, t: f32) -> f32 {
    a + t * (b - a)
}

#[inline]
fn bilinear_taps(
    x: f32,
    y: f32,
    width: usize,
    height: usize,
) -> (usize, usize, usize, usize, f32, f32) {
    let x = x.clamp(0.0, (width - 1) as f32);
    let y = y.clamp(0.0, (height - 1) as f32);
    let x0 = x.floor() as usize;
    let y0 = y.floor() as usize;
    let x1 = (x0 + 1).min(width - 1);
    let y1 = (y0 + 1).min(height - 1);
    (x0, y0, x1, y1, x - x0 as f32, y - y0 as f32)
}

/// Ordered RGB frame sequence with shared dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct VideoClip {
    frames: Vec<RgbFrame>,
    fps: f64,
}

/// Ordered mask sequence with shared dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct MaskClip {
    frames: Vec<MaskFrame>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ClipInfo {
    pub width: usize,
    pub height: usize,
    pub num_frames: usize,
    pub fps: f64,
}

impl VideoClip {
    pub const DEFAULT_FPS: f64 = 16.0;

    pub fn new(frames: Vec<RgbFrame>, fps: f64) -> Result<Self> {
        if frames.is_empty() {
            return Err(Error::domain("clip must contain at least one frame"));
        }
        let (w, h) = (frames[0].width(), frames[0].height());
        if frames.iter().any(|f| f.width() != w || f.height() != h) {
            return Err(Error::shape("clip frames disagree on dimensions"));
        }
        Ok(VideoClip { frames, fps })
    }

    pub fn frames(&self) -> &[RgbFrame] {
        &self.frames
    }

    pub fn frame(&self, i: usize) -> &RgbFrame {
        &self.frames[i]
    }

    pub fn num_frames(&self) -> usize {
        self.frames.len()
    }

    pub fn width(&self) -> usize {
        self.frames[0].width()
    }

    pub fn height(&self) -> usize {
        self.frames[0].height()
    }

    pub fn fps(&self) -> f64 {
        self.fps
    }

    pub fn info(&self) -> ClipInfo {
        ClipInfo {
            width: self.width(),
            height: self.height(),
            num_frames: self.num_frames(),
            fps: self.fps,
        }
    }

    pub fn same_dims(&self, other: &VideoClip) -> bool {
        self.width() == other.width()
            && self.height() == other.height()
            && self.num_frames() == other.num_frames()
    }
}

impl MaskClip {
    pub fn new(frames: Vec<MaskFrame>) -> Result<Self> {
        if frames.is_empty() {
            return Err(Error::domain("mask clip must contain at least one frame"));
        }
        let (w, h) = (frames[0].width(), frames[0].height());
        if frames.iter().any(|f| f.width() != w || f.height() != h) {
            return Err(Error::shape("mask clip frames disagree on dimensions"));
        }
        Ok(MaskClip { frames })
    }

    pub fn frames(&self) -> &[MaskFrame] {
        &self.frames
    }

    pub fn frame(&self, i: usize) -> &MaskFrame {
        &self.frames[i]
    }

    pub fn num_frames(&self) -> usize {
        self.frames.len()
    }

    pub fn width(&self) -> usize {
        self.frames[0].width()
    }

    pub fn height(&self) -> usize {
        self.frames[0].height()
    }

    pub fn matches_video(&self, clip: &VideoClip) -> bool {
        self.width() == clip.width()
            && self.height() == clip.height()
            && self.num_frames() == clip.num_frames()
    }
}
