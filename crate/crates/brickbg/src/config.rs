//! Flat `key = value` configuration files.
//!
//! ```text
//! # defaults shown
//! mode = cs-stltp
//! tau = 0.2
//! brick = 4x4x5
//! l = 60
//! ```
//!
//! Unset keys keep their defaults; `t_eps` and `t_omega` default per mode.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use brickbg_core::params::BrickDims;
use brickbg_core::subspace::DimRule;
use brickbg_core::{DescriptorMode, Params};

use crate::error::{AppError, Result};

/// Raw entries with the line they came from.
pub type Entries = BTreeMap<String, (String, usize)>;

/// Splits `key = value` lines; `#` starts a comment. Repeated keys are an
/// error.
pub fn parse_entries(text: &str) -> Result<Entries> {
    let mut out = Entries::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| AppError::Usage(format!("line {}: expected `key = value`", i + 1)))?;
        let key = k.trim().to_ascii_lowercase();
        if out.insert(key.clone(), (v.trim().to_string(), i + 1)).is_some() {
            return Err(AppError::Usage(format!("line {}: `{key}` set twice", i + 1)));
        }
    }
    Ok(out)
}

pub fn parse_mode(s: &str) -> Option<DescriptorMode> {
    match s.trim().to_ascii_lowercase().as_str() {
        "rgb" => Some(DescriptorMode::Rgb),
        "cs-stltp" | "cs_stltp" | "csstltp" => Some(DescriptorMode::CsStltp),
        _ => None,
    }
}

pub fn mode_name(mode: DescriptorMode) -> &'static str {
    match mode {
        DescriptorMode::Rgb => "rgb",
        DescriptorMode::CsStltp => "cs-stltp",
    }
}

/// `WxHxT`, e.g. `4x4x5`.
pub fn parse_brick(s: &str) -> Option<BrickDims> {
    let parts: Vec<usize> = s.split(['x', 'X']).map(|p| p.trim().parse().ok()).collect::<Option<_>>()?;
    match parts[..] {
        [width, height, depth] => Some(BrickDims { width, height, depth }),
        _ => None,
    }
}

fn parse_bool(s: &str) -> Option<bool> {
    match s.to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Some(true),
        "false" | "no" | "off" | "0" => Some(false),
        _ => None,
    }
}

fn value<T: FromStr>(key: &str, raw: &str, line: usize) -> Result<T> {
    raw.parse()
        .map_err(|_| AppError::Usage(format!("line {line}: invalid value `{raw}` for `{key}`")))
}

/// Command line values that take precedence over the file.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub mode: Option<DescriptorMode>,
    pub stride: Option<usize>,
}

/// Builds validated parameters from parsed entries.
pub fn params_from_entries(entries: &Entries, overrides: Overrides) -> Result<Params> {
    let file_mode = match entries.get("mode") {
        Some((raw, line)) => {
            Some(parse_mode(raw).ok_or_else(|| AppError::Usage(format!("line {line}: unknown mode `{raw}`")))?)
        }
        None => None,
    };
    let mode = overrides.mode.or(file_mode).unwrap_or(DescriptorMode::CsStltp);
    let mut p = Params::for_mode(mode);
    let mut stride = None;
    for (key, (raw, line)) in entries {
        let line = *line;
        match key.as_str() {
            "mode" => {}
            "tau" => p.tau = value(key, raw, line)?,
            "t_d" => p.t_d = value(key, raw, line)?,
            "t_deps" => p.t_deps = value(key, raw, line)?,
            "dim_rule" => {
                p.dim_rule = match raw.to_ascii_lowercase().as_str() {
                    "absolute" => DimRule::Absolute,
                    "relative" => DimRule::Relative,
                    _ => return Err(AppError::Usage(format!("line {line}: dim_rule is `absolute` or `relative`"))),
                }
            }
            "t_eps" => p.t_eps = value(key, raw, line)?,
            "t_omega" => p.t_omega = value(key, raw, line)?,
            "t_rgb" => p.t_rgb = value(key, raw, line)?,
            "rgb_sigma_k" => p.rgb_sigma_k = value(key, raw, line)?,
            "gain_compensation" => {
                p.gain_compensation = parse_bool(raw)
                    .ok_or_else(|| AppError::Usage(format!("line {line}: `{key}` expects true or false")))?
            }
            "alpha" => p.alpha = value(key, raw, line)?,
            "beta" => p.beta = value(key, raw, line)?,
            "l" | "span" => p.span = value(key, raw, line)?,
            "brick" => {
                p.brick = parse_brick(raw)
                    .ok_or_else(|| AppError::Usage(format!("line {line}: brick must look like 4x4x5")))?
            }
            "stride" => stride = Some(value(key, raw, line)?),
            "init_frames" => p.init_frames = value(key, raw, line)?,
            "min_area" => p.min_area = value(key, raw, line)?,
            other => return Err(AppError::Usage(format!("line {line}: unknown key `{other}`"))),
        }
    }
    p.stride = overrides.stride.or(stride).unwrap_or(p.brick.depth);
    p.validate().map_err(|e| AppError::Usage(format!("invalid configuration: {e}")))?;
    Ok(p)
}

pub fn parse_params(text: &str, overrides: Overrides) -> Result<Params> {
    params_from_entries(&parse_entries(text)?, overrides)
}

pub fn load_params(path: &Path, overrides: Overrides) -> Result<Params> {
    let text = fs::read_to_string(path).map_err(AppError::io(path))?;
    parse_params(&text, overrides).map_err(|e| match e {
        AppError::Usage(msg) => AppError::Usage(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// Every key with its current value, in the file format.
pub fn render_params(p: &Params) -> String {
    let rule = match p.dim_rule {
        DimRule::Absolute => "absolute",
        DimRule::Relative => "relative",
    };
    format!(
        "mode = {}\ntau = {}\nt_d = {}\nt_deps = {}\ndim_rule = {rule}\nt_eps = {}\nt_omega = {}\nt_rgb = {}\n\
         rgb_sigma_k = {}\ngain_compensation = {}\nalpha = {}\nbeta = {}\nl = {}\nbrick = {}x{}x{}\nstride = {}\n\
         init_frames = {}\nmin_area = {}\n",
        mode_name(p.mode),
        p.tau,
        p.t_d,
        p.t_deps,
        p.t_eps,
        p.t_omega,
        p.t_rgb,
        p.rgb_sigma_k,
        p.gain_compensation,
        p.alpha,
        p.beta,
        p.span,
        p.brick.width,
        p.brick.height,
        p.brick.depth,
        p.stride,
        p.init_frames,
        p.min_area,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        assert_eq!(parse_params("", Overrides::default()).unwrap(), Params::default());
    }

    #[test]
    fn mode_sets_its_thresholds() {
        let p = parse_params("mode = rgb\n", Overrides::default()).unwrap();
        assert_eq!((p.t_omega, p.t_eps), (5.0, 4.0));
        let p = parse_params("mode = rgb\nt_omega = 7", Overrides::default()).unwrap();
        assert_eq!((p.t_omega, p.t_eps), (7.0, 4.0));
    }

    #[test]
    fn overrides_win() {
        let o = Overrides {
            mode: Some(DescriptorMode::Rgb),
            stride: Some(2),
        };
        let p = parse_params("mode = cs-stltp\nstride = 5\n", o).unwrap();
        assert_eq!(p.mode, DescriptorMode::Rgb);
        assert_eq!(p.stride, 2);
    }

    #[test]
    fn stride_follows_brick_depth() {
        let p = parse_params("brick = 4x4x3 # small\n", Overrides::default()).unwrap();
        assert_eq!(p.stride, 3);
    }

    #[test]
    fn bad_input_is_a_usage_error() {
        for text in ["tau 0.2", "tau = x", "colour = red", "brick = 4x4", "tau = 0.1\ntau = 0.2", "stride = 9"] {
            let e = parse_params(text, Overrides::default()).unwrap_err();
            assert_eq!(e.exit_code(), 2, "{text}");
        }
    }

    #[test]
    fn rendered_params_parse_back() {
        let mut p = Params::for_mode(DescriptorMode::Rgb);
        p.alpha = 0.1;
        p.dim_rule = DimRule::Absolute;
        p.gain_compensation = false;
        assert_eq!(parse_params(&render_params(&p), Overrides::default()).unwrap(), p);
    }
}
