use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn brickbg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_brickbg")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

const SCRIPT: &str = "width = 32\nheight = 24\nframes = 40\nseed = 9\n\
    background = noise 90,110,130 4\n\
    object = 8x8 color=230,40,30 noise=4 start=2,8 velocity=1,0 enter=22 exit=40\n";

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn synth_run_eval_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let (script, video, masks, config, report) = (
        dir.path().join("scene.txt"),
        dir.path().join("video"),
        dir.path().join("masks"),
        dir.path().join("bg.conf"),
        dir.path().join("report.csv"),
    );
    fs::write(&script, SCRIPT).unwrap();
    fs::write(&config, "mode = rgb\ninit_frames = 20\n").unwrap();

    let out = brickbg(&["synth", "--script", p(&script), "--output", p(&video)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(video.join("frame_000040.ppm").is_file());
    assert!(video.join("truth/mask_000001.pgm").is_file());

    for mode in ["rgb", "cs-stltp"] {
        let out = brickbg(&[
            "run", "--input", p(&video), "--output", p(&masks), "--config", p(&config), "--mode", mode, "--stride", "5",
        ]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    }
    assert!(!masks.join("mask_000020.pgm").exists());
    assert!(masks.join("mask_000021.pgm").is_file());
    assert!(masks.join("mask_000040.pgm").is_file());

    let truth = video.join("truth");
    let out = brickbg(&[
        "eval", "--masks", p(&masks), "--truth", p(&truth), "--sweep", "2,5,8", "--input", p(&video), "--config",
        p(&config), "--report", p(&report),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(&report).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "tp,fp,fn,precision,recall,fscore");
    assert_eq!(lines[1].split(',').count(), 6);
    assert_eq!(lines[2], "t_omega,recall,precision");
    assert_eq!(lines.len(), 6);
    // a looser appearance threshold cannot find fewer pixels
    let recall: Vec<f64> = lines[3..].iter().map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert!(recall[0] >= recall[2], "{recall:?}");

    let out = brickbg(&["bench", "--input", p(&video), "--config", p(&config)]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("fps: ") && text.contains("stage_segment_seconds"), "{text}");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bg.conf");
    fs::write(&config, "mode = rgb\n").unwrap();
    let missing = dir.path().join("nope");
    let out_dir = dir.path().join("out");

    assert_eq!(code(&brickbg(&["--help"])), 0);
    assert_eq!(code(&brickbg(&[])), 2);
    assert_eq!(code(&brickbg(&["run", "--input", "x"])), 2);
    assert_eq!(code(&brickbg(&["frobnicate"])), 2);
    let run = |cfg: &Path, extra: &[&str]| {
        let mut args = vec!["run", "--input", p(&missing), "--output", p(&out_dir), "--config", p(cfg)];
        args.extend_from_slice(extra);
        code(&brickbg(&args))
    };
    assert_eq!(run(&config, &["--mode", "hsv"]), 2);
    assert_eq!(run(&config, &["--stride", "9"]), 2);
    let bad = dir.path().join("bad.conf");
    fs::write(&bad, "speed = 3\n").unwrap();
    assert_eq!(run(&bad, &[]), 2);
    assert_eq!(run(&config, &[]), 3);
    assert_eq!(run(&missing, &[]), 3);

    let masks = dir.path().join("m");
    fs::create_dir(&masks).unwrap();
    let report = dir.path().join("r.csv");
    let eval = brickbg(&["eval", "--masks", p(&masks), "--truth", p(&masks), "--sweep", "1,2", "--report", p(&report)]);
    assert_eq!(code(&eval), 2);
}
