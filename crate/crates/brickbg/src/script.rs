//! Scene scripts for `brickbg synth`.
//!
//! ```text
//! width = 352
//! height = 288
//! channels = 3
//! frames = 200
//! seed = 1
//! background = noise 90,110,130 5          # mean R,G,B and sigma
//! # background = constant 128,128,128
//! # background = planted d=3 radius=0.95 amplitude=20 offset=128 noise=0 brick=4x4x5 basis_seed=7
//! illumination = step 100 1.5               # or: ramp START RATE
//! object = 24x24 color=220,60,40 noise=5 start=2,132 velocity=1,0 enter=50 exit=200
//! ```
//!
//! `object` may repeat. Omitted object fields default to white, no noise, a
//! static start at 0,0 and visibility over the whole clip.

use std::fs;
use std::path::Path;

use brickbg_core::synth::{Background, Illumination, ObjectSpec, PlantedArma, SceneScript};

use crate::config::parse_brick;
use crate::error::{AppError, Result};

fn bad(line: usize, msg: impl std::fmt::Display) -> AppError {
    AppError::Usage(format!("line {line}: {msg}"))
}

fn num<T: std::str::FromStr>(s: &str, line: usize, what: &str) -> Result<T> {
    s.trim().parse().map_err(|_| bad(line, format!("invalid {what} `{s}`")))
}

fn list<T: std::str::FromStr + Copy, const N: usize>(s: &str, line: usize, what: &str) -> Result<[T; N]> {
    let parts: Vec<T> = s.split(',').map(|p| num(p, line, what)).collect::<Result<_>>()?;
    parts
        .try_into()
        .map_err(|_| bad(line, format!("{what} needs {N} comma-separated values")))
}

fn pair(s: &str, line: usize, what: &str) -> Result<(f64, f64)> {
    let [a, b] = list::<f64, 2>(s, line, what)?;
    Ok((a, b))
}

/// `key=value` words after a leading keyword.
fn options<'a>(words: impl Iterator<Item = &'a str>, line: usize) -> Result<Vec<(&'a str, &'a str)>> {
    words
        .map(|w| w.split_once('=').ok_or_else(|| bad(line, format!("expected key=value, got `{w}`"))))
        .collect()
}

struct Header {
    width: usize,
    height: usize,
    channels: usize,
}

fn parse_background(v: &str, line: usize, hdr: &Header) -> Result<Background> {
    let mut words = v.split_whitespace();
    match words.next() {
        Some("noise") => {
            let mean = list::<f64, 3>(words.next().ok_or_else(|| bad(line, "noise needs a mean"))?, line, "mean")?;
            let sigma = num(words.next().ok_or_else(|| bad(line, "noise needs a sigma"))?, line, "sigma")?;
            Ok(Background::GaussianNoise { mean, sigma })
        }
        Some("constant") => {
            let level = list::<u8, 3>(words.next().ok_or_else(|| bad(line, "constant needs a level"))?, line, "level")?;
            Ok(Background::Constant { level })
        }
        Some("planted") => {
            let (mut d, mut radius, mut amplitude, mut offset, mut noise, mut seed) = (3, 0.95, 20.0, 128.0, 0.0, 0u64);
            let mut brick = parse_brick("4x4x5").expect("literal brick");
            for (k, val) in options(words, line)? {
                match k {
                    "d" => d = num(val, line, k)?,
                    "radius" => radius = num(val, line, k)?,
                    "amplitude" => amplitude = num(val, line, k)?,
                    "offset" => offset = num(val, line, k)?,
                    "noise" => noise = num(val, line, k)?,
                    "basis_seed" => seed = num(val, line, k)?,
                    "brick" => brick = parse_brick(val).ok_or_else(|| bad(line, "brick must look like 4x4x5"))?,
                    _ => return Err(bad(line, format!("unknown planted option `{k}`"))),
                }
            }
            if brick.width == 0 || brick.height == 0 || brick.depth == 0 {
                return Err(bad(line, "brick sizes must be positive"));
            }
            if !hdr.width.is_multiple_of(brick.width) || !hdr.height.is_multiple_of(brick.height) {
                return Err(bad(line, "planted bricks must tile the frame"));
            }
            let m = brick.width * brick.height * brick.depth * hdr.channels;
            let (basis, dynamics) = PlantedArma::random(m, d, radius, seed).map_err(|e| bad(line, e))?;
            Ok(Background::PlantedArma(PlantedArma {
                basis,
                dynamics,
                brick,
                offset,
                amplitude,
                noise_sigma: noise,
            }))
        }
        _ => Err(bad(line, "background is `noise`, `constant` or `planted`")),
    }
}

fn parse_illumination(v: &str, line: usize) -> Result<Illumination> {
    let words: Vec<&str> = v.split_whitespace().collect();
    match words[..] {
        ["step", f, g] => Ok(Illumination::Step {
            frame: num(f, line, "frame")?,
            gain: num(g, line, "gain")?,
        }),
        ["ramp", s, r] => Ok(Illumination::Ramp {
            start: num(s, line, "frame")?,
            rate: num(r, line, "rate")?,
        }),
        _ => Err(bad(line, "illumination is `step FRAME GAIN` or `ramp START RATE`")),
    }
}

fn parse_object(v: &str, line: usize, frames: usize) -> Result<ObjectSpec> {
    let mut words = v.split_whitespace();
    let size = words.next().ok_or_else(|| bad(line, "object needs a size"))?;
    let (width, height) = match size.split(['x', 'X']).collect::<Vec<_>>()[..] {
        [w, h] => (num(w, line, "width")?, num(h, line, "height")?),
        _ => return Err(bad(line, "object size must look like 24x24")),
    };
    let mut o = ObjectSpec {
        width,
        height,
        color: [255; 3],
        noise_sigma: 0.0,
        start: (0.0, 0.0),
        velocity: (0.0, 0.0),
        enter: 0,
        exit: frames,
    };
    for (k, val) in options(words, line)? {
        match k {
            "color" | "colour" => o.color = list(val, line, k)?,
            "noise" => o.noise_sigma = num(val, line, k)?,
            "start" => o.start = pair(val, line, k)?,
            "velocity" => o.velocity = pair(val, line, k)?,
            "enter" => o.enter = num(val, line, k)?,
            "exit" => o.exit = num(val, line, k)?,
            _ => return Err(bad(line, format!("unknown object option `{k}`"))),
        }
    }
    Ok(o)
}

pub fn parse_script(text: &str) -> Result<SceneScript> {
    let mut hdr = Header {
        width: 0,
        height: 0,
        channels: 3,
    };
    let (mut frames, mut seed) = (0usize, 0u64);
    let (mut background, mut illumination) = (None, None);
    let mut objects = Vec::new();
    // Header keys first so later lines can depend on them regardless of order.
    let lines: Vec<(usize, &str, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .map(|(i, l)| {
            l.split_once('=')
                .map(|(k, v)| (i, k.trim(), v.trim()))
                .ok_or_else(|| bad(i, "expected `key = value`"))
        })
        .collect::<Result<_>>()?;
    for &(line, k, v) in &lines {
        match k {
            "width" => hdr.width = num(v, line, k)?,
            "height" => hdr.height = num(v, line, k)?,
            "channels" => hdr.channels = num(v, line, k)?,
            "frames" => frames = num(v, line, k)?,
            "seed" => seed = num(v, line, k)?,
            "background" | "illumination" | "object" => {}
            _ => return Err(bad(line, format!("unknown key `{k}`"))),
        }
    }
    if hdr.width == 0 || hdr.height == 0 || frames == 0 {
        return Err(AppError::Usage("script must set positive width, height and frames".into()));
    }
    for &(line, k, v) in &lines {
        match k {
            "background" if background.is_some() => return Err(bad(line, "background set twice")),
            "background" => background = Some(parse_background(v, line, &hdr)?),
            "illumination" if illumination.is_some() => return Err(bad(line, "illumination set twice")),
            "illumination" => illumination = Some(parse_illumination(v, line)?),
            "object" => objects.push(parse_object(v, line, frames)?),
            _ => {}
        }
    }
    let background = background.ok_or_else(|| AppError::Usage("script must set a background".into()))?;
    let mut script = SceneScript::new(hdr.width, hdr.height, hdr.channels, frames, background);
    script.illumination = illumination;
    script.objects = objects;
    script.seed = seed;
    script.validate().map_err(|e| AppError::Usage(e.to_string()))?;
    Ok(script)
}

pub fn load_script(path: &Path) -> Result<SceneScript> {
    let text = fs::read_to_string(path).map_err(AppError::io(path))?;
    parse_script(&text).map_err(|e| match e {
        AppError::Usage(msg) => AppError::Usage(format!("{}: {msg}", path.display())),
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = "width = 64\nheight = 48\nframes = 20\nseed = 4\n\
        background = noise 90,110,130 5\nillumination = step 10 1.5\n\
        object = 8x6 color=220,60,40 noise=2 start=2,3 velocity=1,0.5 enter=5 exit=15\n";

    #[test]
    fn full_example() {
        let s = parse_script(EXAMPLE).unwrap();
        assert_eq!((s.width, s.height, s.channels, s.frame_count, s.seed), (64, 48, 3, 20, 4));
        assert_eq!(s.background, Background::GaussianNoise { mean: [90.0, 110.0, 130.0], sigma: 5.0 });
        assert_eq!(s.illumination, Some(Illumination::Step { frame: 10, gain: 1.5 }));
        let o = &s.objects[0];
        assert_eq!((o.width, o.height, o.color, o.enter, o.exit), (8, 6, [220, 60, 40], 5, 15));
        assert_eq!((o.start, o.velocity, o.noise_sigma), ((2.0, 3.0), (1.0, 0.5), 2.0));
    }

    #[test]
    fn planted_background_matches_channels() {
        let s = parse_script("width=8\nheight=8\nchannels=1\nframes=10\nbackground = planted d=2 brick=4x4x5\n").unwrap();
        match s.background {
            Background::PlantedArma(p) => assert_eq!((p.basis.rows(), p.basis.cols()), (80, 2)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn errors_are_usage_errors() {
        for text in [
            "width = 8\nheight = 8\nframes = 4\n",
            "width = 8\nheight = 8\nframes = 4\nbackground = fog\n",
            "width = 8\nheight = 8\nframes = 4\nbackground = constant 1,2\n",
            "width = 8\nheight = 8\nframes = 4\nbackground = constant 1,2,3\nobject = 4x4 start=6,6\n",
            "width = 8\nheight = 8\nframes = 4\nbackground = constant 1,2,3\nobject = 4x4 size=2\n",
            "width = 8\nheight = 8\nframes = 4\nbackground = constant 1,2,3\nspeed = 2\n",
        ] {
            assert_eq!(parse_script(text).unwrap_err().exit_code(), 2, "{text}");
        }
    }
}
