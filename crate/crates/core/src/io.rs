//! File formats: PNG/PPM images, clip directories, RTK1 tensor files, and
//! embedding files.
//!
//! A clip on disk is a directory of zero-padded frames `f0001.png`, ... plus
//! `clip.json` with `{width, height, num_frames, fps}`. Masks are 8-bit
//! grayscale PNGs with values in {0, 255}.
//!
//! An RTK1 tensor file is: magic `RTK1`, four little-endian u32 dims
//! `{num_frames, height, width, channels}`, then `f32` payload in
//! frame-major, row-major, channel-last order.

use crate::error::{Error, Result};
use crate::frame::{ClipInfo, MaskClip, MaskFrame, RgbFrame, VideoClip};
use crate::mesh::{parse_mesh, Mesh, ParsedMesh};
use std::collections::BTreeMap;
use std::fs;
use std::io::{BufReader, Read, Write};
use std::path::{Path, PathBuf};

pub const TENSOR_MAGIC: &[u8; 4] = b"RTK1";

// ---------------------------------------------------------------------------
// Images
// ---------------------------------------------------------------------------

/// Load an 8-bit RGB image (PNG, or binary PPM `P6`) as `[0, 1]` floats.
pub fn load_rgb(path: &Path) -> Result<RgbFrame> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let (w, h, rgb) = if bytes.starts_with(b"P6") {
        decode_ppm(&bytes, path)?
    } else {
        let img = image::load_from_memory(&bytes)
            .map_err(|e| Error::ImageDecode {
                path: path.into(),
                msg: e.to_string(),
            })?
            .to_rgb8();
        let (w, h) = (img.width() as usize, img.height() as usize);
        (w, h, img.into_raw())
    };
    let data = rgb.iter().map(|&b| b as f32 / 255.0).collect();
    RgbFrame::from_data(w, h, data)
}

/// Save an RGB frame as an 8-bit PNG.
pub fn save_rgb_png(frame: &RgbFrame, path: &Path) -> Result<()> {
    let bytes: Vec<u8> = frame
        .data()
        .iter()
        .map(|&v| (v.clamp(0.0, 1.0) * 255.0).round() as u8)
        .collect();
    let img = image::RgbImage::from_raw(frame.width() as u32, frame.height() as u32, bytes)
        .expect("buffer sized from frame");
    img.save(path).map_err(|e| Error::ImageDecode {
        path: path.into(),
        msg: e.to_string(),
    })
}

/// Load a binary mask from an 8-bit grayscale PNG; values > 127 are foreground.
pub fn load_mask(path: &Path) -> Result<MaskFrame> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let img = image::load_from_memory(&bytes)
        .map_err(|e| Error::ImageDecode {
            path: path.into(),
            msg: e.to_string(),
        })?
        .to_luma8();
    let (w, h) = (img.width() as usize, img.height() as usize);
    let data = img.into_raw().iter().map(|&b| (b > 127) as u8).collect();
    MaskFrame::from_data(w, h, data)
}

/// Save a binary mask as an 8-bit grayscale PNG with values {0, 255}.
pub fn save_mask_png(mask: &MaskFrame, path: &Path) -> Result<()> {
    let bytes: Vec<u8> = mask.data().iter().map(|&v| v * 255).collect();
    let img = image::GrayImage::from_raw(mask.width() as u32, mask.height() as u32, bytes)
        .expect("buffer sized from mask");
    img.save(path).map_err(|e| Error::ImageDecode {
        path: path.into(),
        msg: e.to_string(),
    })
}

fn decode_ppm(bytes: &[u8], path: &Path) -> Result<(usize, usize, Vec<u8>)> {
    let corrupt = |msg: &str| Error::Corrupt {
        path: path.into(),
        msg: msg.into(),
    };
    let mut pos = 0usize;
    let mut fields = Vec::new();
    // Header: P6, width, height, maxval, separated by whitespace/comments.
    while fields.len() < 4 {
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if pos < bytes.len() && bytes[pos] == b'#' {
            while pos < bytes.len() && bytes[pos] != b'\n' {
                pos += 1;
            }
            continue;
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            return Err(corrupt("truncated ppm header"));
        }
        fields.push(&bytes[start..pos]);
    }
    if fields[0] != b"P6" {
        return Err(corrupt("not a binary ppm"));
    }
    let parse = |f: &[u8]| -> Result<usize> {
        std::str::from_utf8(f)
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| corrupt("bad ppm header field"))
    };
    let (w, h, maxval) = (parse(fields[1])?, parse(fields[2])?, parse(fields[3])?);
    if maxval != 255 {
        return Err(corrupt("only 8-bit ppm supported"));
    }
    pos += 1; // single whitespace after maxval
    let need = w * h * 3;
    if bytes.len() < pos + need {
        return Err(corrupt("ppm payload truncated"));
    }
    Ok((w, h, bytes[pos..pos + need].to_vec()))
}

/// Save an RGB frame as binary PPM (P6).
pub fn save_rgb_ppm(frame: &RgbFrame, path: &Path) -> Result<()> {
    let mut out = format!("P6\n{} {}\n255\n", frame.width(), frame.height()).into_bytes();
    out.extend(
        frame
            .data()
            .iter()
            .map(|&v| (v.clamp(0.0, 1.0) * 255.0).round() as u8),
    );
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

// ---------------------------------------------------------------------------
// Clip directories
// ---------------------------------------------------------------------------

fn frame_file(index: usize) -> String {
    format!("f{:04}.png", index + 1)
}

pub fn save_video_clip(clip: &VideoClip, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    for (i, frame) in clip.frames().iter().enumerate() {
        save_rgb_png(frame, &dir.join(frame_file(i)))?;
    }
    let info = serde_json::to_string_pretty(&clip.info()).expect("clip info serializes");
    fs::write(dir.join("clip.json"), info).map_err(|e| Error::io(dir.join("clip.json"), e))
}

pub fn save_mask_clip(clip: &MaskClip, fps: f64, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    for (i, frame) in clip.frames().iter().enumerate() {
        save_mask_png(frame, &dir.join(frame_file(i)))?;
    }
    let info = ClipInfo {
        width: clip.width(),
        height: clip.height(),
        num_frames: clip.num_frames(),
        fps,
    };
    let text = serde_json::to_string_pretty(&info).expect("clip info serializes");
    fs::write(dir.join("clip.json"), text).map_err(|e| Error::io(dir.join("clip.json"), e))
}

pub fn read_clip_info(dir: &Path) -> Result<ClipInfo> {
    let path = dir.join("clip.json");
    let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Corrupt {
        path,
        msg: e.to_string(),
    })
}

pub fn load_video_clip(dir: &Path) -> Result<VideoClip> {
    let info = read_clip_info(dir)?;
    let mut frames = Vec::with_capacity(info.num_frames);
    for i in 0..info.num_frames {
        let frame = load_rgb(&dir.join(frame_file(i)))?;
        if frame.width() != info.width || frame.height() != info.height {
            return Err(Error::Corrupt {
                path: dir.join(frame_file(i)),
                msg: format!(
                    "frame is {}x{}, clip.json says {}x{}",
                    frame.width(),
                    frame.height(),
                    info.width,
                    info.height
                ),
            });
        }
        frames.push(frame);
    }
    VideoClip::new(frames, info.fps)
}

pub fn load_mask_clip(dir: &Path) -> Result<MaskClip> {
    let info = read_clip_info(dir)?;
    let mut frames = Vec::with_capacity(info.num_frames);
    for i in 0..info.num_frames {
        let frame = load_mask(&dir.join(frame_file(i)))?;
        if frame.width() != info.width || frame.height() != info.height {
            return Err(Error::Corrupt {
                path: dir.join(frame_file(i)),
                msg: "mask frame dims disagree with clip.json".into(),
            });
        }
        frames.push(frame);
    }
    MaskClip::new(frames)
}

// ---------------------------------------------------------------------------
// RTK1 tensor files
// ---------------------------------------------------------------------------

/// Write `{num_frames, height, width, channels}` dims and an f32 payload.
pub fn write_tensor(path: &Path, dims: [u32; 4], payload: &[f32]) -> Result<()> {
    let expected = dims.iter().map(|&d| d as usize).product::<usize>();
    if payload.len() != expected {
        return Err(Error::shape(format!(
            "tensor payload {} != product of dims {:?}",
            payload.len(),
            dims
        )));
    }
    let mut file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut header = Vec::with_capacity(4 + 16);
    header.extend_from_slice(TENSOR_MAGIC);
    for d in dims {
        header.extend_from_slice(&d.to_le_bytes());
    }
    file.write_all(&header).map_err(|e| Error::io(path, e))?;
    let mut bytes = Vec::with_capacity(payload.len() * 4);
    for v in payload {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    file.write_all(&bytes).map_err(|e| Error::io(path, e))
}

/// Read an RTK1 tensor file; validates magic, header, and payload length.
pub fn read_tensor(path: &Path) -> Result<([u32; 4], Vec<f32>)> {
    let corrupt = |msg: String| Error::Corrupt {
        path: path.into(),
        msg,
    };
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = BufReader::new(file);
    let mut magic = [0u8; 4];
    reader
        .read_exact(&mut magic)
        .map_err(|_| corrupt("file shorter than magic".into()))?;
    if &magic != TENSOR_MAGIC {
        return Err(corrupt(format!("bad magic {magic:?}")));
    }
    let mut dims = [0u32; 4];
    for d in &mut dims {
        let mut buf = [0u8; 4];
        reader
            .read_exact(&mut buf)
            .map_err(|_| corrupt("truncated header".into()))?;
        *d = u32::from_le_bytes(buf);
    }
    let expected = dims.iter().map(|&d| d as usize).product::<usize>();
    let mut bytes = Vec::new();
    reader
        .read_to_end(&mut bytes)
        .map_err(|e| Error::io(path, e))?;
    if bytes.len() != expected * 4 {
        return Err(corrupt(format!(
            "payload is {} bytes, header dims {:?} require {}",
            bytes.len(),
            dims,
            expected * 4
        )));
    }
    let payload = bytes
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]))
        .collect();
    Ok((dims, payload))
}

// ---------------------------------------------------------------------------
// Embedding files
// ---------------------------------------------------------------------------

/// Load one side of an embedding set.
///
/// A `.json` file is a map `{slot_name: [float, ...]}`. Any other extension
/// is read as an RTK1 tensor holding a single vector whose slot name is the
/// file stem.
pub fn load_embeddings(path: &Path) -> Result<BTreeMap<String, Vec<f64>>> {
    let is_json = path
        .extension()
        .map(|e| e.eq_ignore_ascii_case("json"))
        .unwrap_or(false);
    if is_json {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::Corrupt {
            path: path.into(),
            msg: e.to_string(),
        })
    } else {
        let (_dims, payload) = read_tensor(path)?;
        let stem = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("embedding")
            .to_string();
        let vec = payload.iter().map(|&v| v as f64).collect();
        Ok(BTreeMap::from([(stem, vec)]))
    }
}

// ---------------------------------------------------------------------------
// Mesh files
// ---------------------------------------------------------------------------

/// Load a mesh file, attaching a sibling texture `<stem>.png` or `<stem>.ppm`
/// when present. A mesh with UV-bearing faces must have such a texture.
pub fn load_mesh(path: &Path) -> Result<ParsedMesh> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut parsed = parse_mesh(BufReader::new(file))?;
    if let Some(texture) = sibling_texture(path)? {
        parsed.mesh = parsed.mesh.with_texture(texture);
    }
    parsed.mesh.validate_texturing()?;
    Ok(parsed)
}

fn sibling_texture(mesh_path: &Path) -> Result<Option<RgbFrame>> {
    for ext in ["png", "ppm"] {
        let candidate: PathBuf = mesh_path.with_extension(ext);
        if candidate.is_file() {
            return load_rgb(&candidate).map(Some);
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    #[test]
    fn png_roundtrip_preserves_8bit_values() {
        let dir = tempdir().unwrap();
        let mut img = RgbFrame::new(5, 4);
        for y in 0..4 {
            for x in 0..5 {
                img.set(
                    x,
                    y,
                    [
                        (x * 50) as f32 / 255.0,
                        (y * 60) as f32 / 255.0,
                        ((x + y) * 20) as f32 / 255.0,
                    ],
                );
            }
        }
        let path = dir.path().join("img.png");
        save_rgb_png(&img, &path).unwrap();
        assert_eq!(load_rgb(&path).unwrap(), img);
    }

    #[test]
    fn ppm_roundtrip() {
        let dir = tempdir().unwrap();
        let img = RgbFrame::filled(3, 2, [10.0 / 255.0, 128.0 / 255.0, 1.0]);
        let path = dir.path().join("img.ppm");
        save_rgb_ppm(&img, &path).unwrap();
        assert_eq!(load_rgb(&path).unwrap(), img);
    }

    #[test]
    fn mask_roundtrip_is_binary() {
        let dir = tempdir().unwrap();
        let mut mask = MaskFrame::new(4, 4);
        mask.set(1, 2, 1);
        mask.set(3, 0, 1);
        let path = dir.path().join("mask.png");
        save_mask_png(&mask, &path).unwrap();
        assert_eq!(load_mask(&path).unwrap(), mask);
    }

    #[test]
    fn tensor_roundtrip_and_corruption() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("t.rtk");
        let payload: Vec<f32> = (0..24).map(|i| i as f32 * 0.5).collect();
        write_tensor(&path, [2, 2, 3, 2], &payload).unwrap();
        let (dims, back) = read_tensor(&path).unwrap();
        assert_eq!(dims, [2, 2, 3, 2]);
        assert_eq!(back, payload);

        // Truncate the payload and expect a corrupt-file error.
        let bytes = fs::read(&path).unwrap();
        fs::write(&path, &bytes[..bytes.len() - 5]).unwrap();
        let err = read_tensor(&path).unwrap_err();
        assert!(matches!(err, Error::Corrupt { .. }));
    }

    #[test]
    fn tensor_rejects_dim_payload_mismatch() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("t.rtk");
        assert!(write_tensor(&path, [1, 2, 2, 1], &[0.0; 5]).is_err());
    }

    #[test]
    fn clip_dir_roundtrip() {
        let dir = tempdir().unwrap();
        let frames = vec![
            RgbFrame::filled(4, 3, [0.0, 0.5, 1.0]),
            RgbFrame::filled(4, 3, [1.0, 0.0, 0.0]),
        ];
        let clip = VideoClip::new(frames, 16.0).unwrap();
        let clip_dir = dir.path().join("clip");
        save_video_clip(&clip, &clip_dir).unwrap();
        let back = load_video_clip(&clip_dir).unwrap();
        // 0.5 quantizes through 8-bit; frame count and dims must survive.
        assert_eq!(back.num_frames(), 2);
        assert_eq!((back.width(), back.height()), (4, 3));
        assert_eq!(back.frame(1), clip.frame(1));
    }

    #[test]
    fn embeddings_json() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("emb.json");
        fs::write(&path, r#"{"foreground_clip": [1.0, 2.0], "foreground_dino": [0.5]}"#).unwrap();
        let map = load_embeddings(&path).unwrap();
        assert_eq!(map["foreground_clip"], vec![1.0, 2.0]);
        assert_eq!(map.len(), 2);
    }

    #[test]
    fn embeddings_rtk_uses_stem_as_slot() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("foreground_clip.rtk");
        write_tensor(&path, [1, 1, 1, 3], &[1.0, 0.0, 2.0]).unwrap();
        let map = load_embeddings(&path).unwrap();
        assert_eq!(map["foreground_clip"], vec![1.0, 0.0, 2.0]);
    }

    #[test]
    fn load_mesh_discovers_sibling_texture() {
        let dir = tempdir().unwrap();
        let mesh_path = dir.path().join("tri.obj");
        fs::write(
            &mesh_path,
            "v 0 0 0\nv 1 0 0\nv 0 1 0\nvt 0 0\nvt 1 0\nvt 0 1\nf 1/1 2/2 3/3\n",
        )
        .unwrap();
        // Without a texture the uv-bearing mesh must be rejected.
        assert!(load_mesh(&mesh_path).is_err());
        save_rgb_png(
            &RgbFrame::filled(2, 2, [0.5; 3]),
            &dir.path().join("tri.png"),
        )
        .unwrap();
        let parsed = load_mesh(&mesh_path).unwrap();
        assert!(parsed.mesh.texture().is_some());
    }
}
