use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use brickbg::config::{load_params, parse_mode, Overrides};
use brickbg::error::{AppError, Result};
use brickbg::eval::{parse_sweep, score, write_report};
use brickbg::io::{frame_file_name, list_frames, load_frames, mask_file_name, read_frames, read_mask_dir, write_frame};
use brickbg::run::{segment_frames, segment_paths, set_sweep_param};
use brickbg::script::load_script;
use brickbg::{bench, io, Parallel};
use brickbg_core::synth::render;
use brickbg_core::DescriptorMode;
use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

/// Background subtraction with per-location dynamic subspace models.
#[derive(Debug, Parser)]
#[command(name = "brickbg", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Segment a frame sequence and write one mask per streamed frame.
    Run {
        /// Directory, glob pattern or manifest of PGM/PPM frames.
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[arg(long)]
        config: PathBuf,
        /// rgb or cs-stltp; overrides the config file.
        #[arg(long, value_parser = mode_arg)]
        mode: Option<DescriptorMode>,
        /// Frames per update, 1..=brick depth; overrides the config file.
        #[arg(long)]
        stride: Option<usize>,
    },
    /// Score masks against ground truth and write a CSV report.
    Eval {
        #[arg(long)]
        masks: PathBuf,
        #[arg(long)]
        truth: PathBuf,
        /// Comma-separated thresholds for a precision-recall sweep.
        #[arg(long)]
        sweep: Option<String>,
        /// Parameter the sweep varies.
        #[arg(long, default_value = "t_omega")]
        sweep_param: String,
        /// Frames to re-segment for the sweep.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Configuration for the sweep runs.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        report: PathBuf,
    },
    /// Render a synthetic scene script into frames and truth masks.
    Synth {
        #[arg(long)]
        script: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
    /// Measure throughput and per-stage timing.
    Bench {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_parser = mode_arg)]
        mode: Option<DescriptorMode>,
    },
}

fn mode_arg(s: &str) -> std::result::Result<DescriptorMode, String> {
    parse_mode(s).ok_or_else(|| format!("unknown mode `{s}` (expected rgb or cs-stltp)"))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            return ExitCode::from(code);
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Run {
            input,
            output,
            config,
            mode,
            stride,
        } => cmd_run(&input, &output, &config, Overrides { mode, stride }),
        Command::Eval {
            masks,
            truth,
            sweep,
            sweep_param,
            input,
            config,
            report,
        } => cmd_eval(&masks, &truth, sweep.as_deref(), &sweep_param, input.as_deref(), config.as_deref(), &report),
        Command::Synth { script, output } => cmd_synth(&script, &output),
        Command::Bench { input, config, mode } => cmd_bench(&input, &config, Overrides { mode, stride: None }),
    }
}

fn cmd_run(input: &Path, output: &Path, config: &Path, overrides: Overrides) -> Result<()> {
    let params = load_params(config, overrides)?;
    let paths = list_frames(input)?;
    fs::create_dir_all(output).map_err(AppError::io(output))?;
    let n = segment_paths(&paths, params, &Parallel, &mut (), |mask| {
        let path = output.join(mask_file_name(mask.frame_index));
        write_frame(&path, &io::mask_to_frame(&mask))
    })?;
    println!("wrote {n} masks to {}", output.display());
    Ok(())
}

fn cmd_eval(
    masks: &Path,
    truth: &Path,
    sweep: Option<&str>,
    sweep_param: &str,
    input: Option<&Path>,
    config: Option<&Path>,
    report_path: &Path,
) -> Result<()> {
    let thresholds = sweep.map(parse_sweep).transpose()?.unwrap_or_default();
    let sweep_inputs = match (thresholds.is_empty(), input, config) {
        (true, _, _) => None,
        (false, Some(i), Some(c)) => {
            let mut params = load_params(c, Overrides::default())?;
            set_sweep_param(&mut params, sweep_param, thresholds[0])?;
            Some((read_frames(&list_frames(i)?)?, params))
        }
        (false, _, _) => {
            return Err(AppError::Usage(
                "--sweep re-segments the video and needs --input and --config".into(),
            ))
        }
    };
    let masks = read_mask_dir(masks)?;
    let truth = read_mask_dir(truth)?;
    let report = score(&masks, truth, &thresholds, |t| {
        let (frames, base) = sweep_inputs.as_ref().expect("sweep inputs are loaded");
        let mut params = base.clone();
        set_sweep_param(&mut params, sweep_param, t)?;
        segment_frames(frames, params, &Parallel, &mut ())
    })?;
    write_report(report_path, &report, sweep_param)?;
    println!(
        "frames {} precision {:.4} recall {:.4} fscore {:.4}",
        report.frames, report.precision, report.recall, report.f_score
    );
    Ok(())
}

fn cmd_synth(script: &Path, output: &Path) -> Result<()> {
    let script = load_script(script)?;
    let (frames, truth) = render(&script)?;
    let truth_dir = output.join("truth");
    fs::create_dir_all(&truth_dir).map_err(AppError::io(&truth_dir))?;
    for (i, f) in frames.iter().enumerate() {
        write_frame(&output.join(frame_file_name(i, f.channels())), f)?;
    }
    io::write_masks(&truth, &truth_dir)?;
    println!("wrote {} frames to {}", frames.len(), output.display());
    Ok(())
}

fn cmd_bench(input: &Path, config: &Path, overrides: Overrides) -> Result<()> {
    let params = load_params(config, overrides)?;
    let frames = load_frames(input)?;
    let report = bench::run_bench(&frames, params, &Parallel)?;
    print!("{}", report.render());
    Ok(())
}
