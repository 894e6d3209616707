//! Binary PGM/PPM frames and masks.
//!
//! Frames come from a directory of `.pgm`/`.ppm` files, a glob pattern, or a
//! manifest listing one path per line. Files are ordered by the last run of
//! digits in their name, then by name.

use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use brickbg_core::{Frame, MaskFrame};
use image::codecs::pnm::{PnmEncoder, PnmSubtype, SampleEncoding};
use image::{DynamicImage, ExtendedColorType, ImageEncoder, ImageFormat};

use crate::error::{AppError, Result};

const FRAME_EXTENSIONS: [&str; 3] = ["pgm", "ppm", "pnm"];

fn is_frame_file(p: &Path) -> bool {
    p.is_file()
        && p.extension()
            .and_then(|e| e.to_str())
            .is_some_and(|e| FRAME_EXTENSIONS.iter().any(|x| x.eq_ignore_ascii_case(e)))
}

/// Last run of ASCII digits in the file stem, e.g. 12 for `frame_000012.ppm`.
pub fn file_index(path: &Path) -> Option<usize> {
    let stem = path.file_stem()?.to_str()?;
    let end = stem.rfind(|c: char| c.is_ascii_digit())? + 1;
    let start = stem[..end]
        .rfind(|c: char| !c.is_ascii_digit())
        .map_or(0, |i| i + 1);
    stem[start..end].parse().ok()
}

fn sort_paths(paths: &mut [PathBuf]) {
    paths.sort_by(|a, b| (file_index(a), a).cmp(&(file_index(b), b)));
}

/// Resolves a directory, glob pattern or manifest file into ordered frame paths.
pub fn list_frames(input: &Path) -> Result<Vec<PathBuf>> {
    let mut paths = if input.is_dir() {
        fs::read_dir(input)
            .map_err(AppError::io(input))?
            .map(|e| e.map(|e| e.path()).map_err(AppError::io(input)))
            .filter(|p| p.as_ref().map_or(true, |p| is_frame_file(p)))
            .collect::<Result<Vec<_>>>()?
    } else if input.is_file() {
        return read_manifest(input);
    } else {
        let pattern = input.to_string_lossy();
        if !pattern.contains(['*', '?', '[']) {
            return Err(AppError::Io {
                path: input.to_path_buf(),
                source: std::io::Error::new(std::io::ErrorKind::NotFound, "no such file or directory"),
            });
        }
        glob::glob(&pattern)
            .map_err(|e| AppError::Usage(format!("bad frame pattern {pattern}: {e}")))?
            .filter_map(|entry| entry.ok())
            .filter(|p| is_frame_file(p))
            .collect()
    };
    if paths.is_empty() {
        return Err(AppError::format(input, "no .pgm/.ppm frames found"));
    }
    sort_paths(&mut paths);
    Ok(paths)
}

/// One path per line, relative to the manifest's directory; `#` starts a
/// comment. Order is kept as written.
fn read_manifest(path: &Path) -> Result<Vec<PathBuf>> {
    let text = fs::read_to_string(path).map_err(AppError::io(path))?;
    let base = path.parent().unwrap_or(Path::new("."));
    let paths: Vec<PathBuf> = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(|l| base.join(l))
        .collect();
    if paths.is_empty() {
        return Err(AppError::format(path, "manifest lists no frames"));
    }
    Ok(paths)
}

/// Reads an 8-bit PGM (one channel) or PPM (three channels).
pub fn read_frame(path: &Path) -> Result<Frame> {
    let bytes = fs::read(path).map_err(AppError::io(path))?;
    let img = image::load_from_memory_with_format(&bytes, ImageFormat::Pnm)
        .map_err(|e| AppError::format(path, e.to_string()))?;
    let (w, h) = (img.width() as usize, img.height() as usize);
    let frame = match img {
        DynamicImage::ImageLuma8(g) => Frame::new(w, h, 1, g.into_raw()),
        DynamicImage::ImageRgb8(c) => Frame::new(w, h, 3, c.into_raw()),
        _ => return Err(AppError::format(path, "only 8-bit grayscale or RGB images are supported")),
    };
    frame.map_err(|e| AppError::format(path, e.to_string()))
}

/// Reads frames in order, checking that they share one shape.
pub fn read_frames(paths: &[PathBuf]) -> Result<Vec<Frame>> {
    let mut frames: Vec<Frame> = Vec::with_capacity(paths.len());
    for p in paths {
        let f = read_frame(p)?;
        check_shape(frames.first(), &f, p)?;
        frames.push(f);
    }
    Ok(frames)
}

pub(crate) fn check_shape(reference: Option<&Frame>, f: &Frame, path: &Path) -> Result<()> {
    if let Some(r) = reference {
        if !r.same_shape(f) {
            return Err(AppError::format(
                path,
                format!(
                    "frame is {}x{}x{}, expected {}x{}x{}",
                    f.width(),
                    f.height(),
                    f.channels(),
                    r.width(),
                    r.height(),
                    r.channels()
                ),
            ));
        }
    }
    Ok(())
}

/// Resolves `input` and reads every frame.
pub fn load_frames(input: &Path) -> Result<Vec<Frame>> {
    read_frames(&list_frames(input)?)
}

/// Writes a PGM (one channel) or PPM (three channels).
pub fn write_frame(path: &Path, frame: &Frame) -> Result<()> {
    let (subtype, color) = match frame.channels() {
        1 => (PnmSubtype::Graymap(SampleEncoding::Binary), ExtendedColorType::L8),
        _ => (PnmSubtype::Pixmap(SampleEncoding::Binary), ExtendedColorType::Rgb8),
    };
    let file = fs::File::create(path).map_err(AppError::io(path))?;
    PnmEncoder::new(BufWriter::new(file))
        .with_subtype(subtype)
        .write_image(frame.data(), frame.width() as u32, frame.height() as u32, color)
        .map_err(|e| match e {
            image::ImageError::IoError(source) => AppError::Io {
                path: path.to_path_buf(),
                source,
            },
            other => AppError::format(path, other.to_string()),
        })
}

/// `mask_NNNNNN.pgm`, numbered from 1.
pub fn mask_file_name(frame_index: usize) -> String {
    format!("mask_{:06}.pgm", frame_index + 1)
}

/// `frame_NNNNNN.<ext>`, numbered from 1.
pub fn frame_file_name(frame_index: usize, channels: usize) -> String {
    let ext = if channels == 1 { "pgm" } else { "ppm" };
    format!("frame_{:06}.{ext}", frame_index + 1)
}

pub fn mask_to_frame(mask: &MaskFrame) -> Frame {
    let data = mask.labels().iter().map(|&b| if b { 255 } else { 0 }).collect();
    Frame::new(mask.width(), mask.height(), 1, data).expect("mask dimensions are consistent")
}

/// Writes one 0/255 PGM per mask into `dir`, creating it if needed.
pub fn write_masks(masks: &[MaskFrame], dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(AppError::io(dir))?;
    masks
        .iter()
        .map(|m| {
            let path = dir.join(mask_file_name(m.frame_index));
            write_frame(&path, &mask_to_frame(m))?;
            Ok(path)
        })
        .collect()
}

/// Reads a mask; any non-zero sample is foreground.
pub fn read_mask(path: &Path, frame_index: usize) -> Result<MaskFrame> {
    let f = read_frame(path)?;
    let ch = f.channels();
    let labels = f.data().chunks(ch).map(|px| px.iter().any(|&v| v != 0)).collect();
    MaskFrame::from_labels(frame_index, f.width(), f.height(), labels).map_err(|e| AppError::format(path, e.to_string()))
}

/// Reads every mask in `dir`, indexed by the number in its file name
/// (1-based on disk, 0-based in the returned masks).
pub fn read_mask_dir(dir: &Path) -> Result<Vec<MaskFrame>> {
    let paths = list_frames(dir)?;
    paths
        .iter()
        .map(|p| {
            let n = file_index(p).ok_or_else(|| AppError::format(p, "file name carries no frame number"))?;
            if n == 0 {
                return Err(AppError::format(p, "frame numbers start at 1"));
            }
            read_mask(p, n - 1)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indices_from_names() {
        assert_eq!(file_index(Path::new("frame_000012.ppm")), Some(12));
        assert_eq!(file_index(Path::new("in000003.pgm")), Some(3));
        assert_eq!(file_index(Path::new("cam2_007.pgm")), Some(7));
        assert_eq!(file_index(Path::new("frame.pgm")), None);
    }

    #[test]
    fn numeric_order_beats_lexical() {
        let mut v = vec![PathBuf::from("f10.pgm"), PathBuf::from("f9.pgm"), PathBuf::from("f100.pgm")];
        sort_paths(&mut v);
        assert_eq!(v, vec![PathBuf::from("f9.pgm"), PathBuf::from("f10.pgm"), PathBuf::from("f100.pgm")]);
    }

    #[test]
    fn names_are_one_based() {
        assert_eq!(mask_file_name(0), "mask_000001.pgm");
        assert_eq!(frame_file_name(49, 3), "frame_000050.ppm");
        assert_eq!(frame_file_name(0, 1), "frame_000001.pgm");
    }
}
