//! Throughput measurement.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use brickbg_core::pipeline::{CellExecutor, Probe, Stage};
use brickbg_core::{Frame, Params, Scene};

use crate::error::Result;

/// Frames per second the pipeline should sustain at 352×288 in rgb mode.
pub const TARGET_FPS: f64 = 10.0;

const STAGES: [Stage; 4] = [Stage::Describe, Stage::Segment, Stage::Maintain, Stage::Assemble];

/// Accumulates wall time per pipeline stage.
#[derive(Debug, Default)]
pub struct StageTimer {
    current: Option<(Stage, Instant)>,
    totals: [Duration; 4],
}

impl StageTimer {
    pub fn total(&self, stage: Stage) -> Duration {
        STAGES.iter().position(|&s| s == stage).map_or(Duration::ZERO, |i| self.totals[i])
    }
}

impl Probe for StageTimer {
    fn enter(&mut self, stage: Stage) {
        let now = Instant::now();
        if let Some((prev, start)) = self.current.take() {
            if let Some(i) = STAGES.iter().position(|&s| s == prev) {
                self.totals[i] += now - start;
            }
        }
        if stage != Stage::Done {
            self.current = Some((stage, now));
        }
    }
}

#[derive(Debug)]
pub struct BenchReport {
    pub width: usize,
    pub height: usize,
    pub frames: usize,
    /// Model learning from the leading frames.
    pub init: Duration,
    /// Wall time to label the streamed frames.
    pub stream: Duration,
    pub stages: Vec<(Stage, Duration)>,
}

impl BenchReport {
    pub fn fps(&self) -> f64 {
        let s = self.stream.as_secs_f64();
        if s > 0.0 {
            self.frames as f64 / s
        } else {
            f64::INFINITY
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let fps = self.fps();
        let _ = writeln!(out, "resolution: {}x{}", self.width, self.height);
        let _ = writeln!(out, "frames: {}", self.frames);
        let _ = writeln!(out, "init_seconds: {:.3}", self.init.as_secs_f64());
        let _ = writeln!(out, "stream_seconds: {:.3}", self.stream.as_secs_f64());
        let _ = writeln!(out, "fps: {fps:.2}");
        let staged: f64 = self.stages.iter().map(|(_, d)| d.as_secs_f64()).sum();
        for (stage, d) in &self.stages {
            let share = if staged > 0.0 { 100.0 * d.as_secs_f64() / staged } else { 0.0 };
            let name = format!("{stage:?}").to_lowercase();
            let _ = writeln!(out, "stage_{name}_seconds: {:.3} ({share:.1}%)", d.as_secs_f64());
        }
        let verdict = if fps >= TARGET_FPS { "met" } else { "missed" };
        let _ = writeln!(out, "target_fps: {TARGET_FPS} ({verdict})");
        out
    }
}

/// Times the pipeline on frames already in memory, so disk reads do not
/// count against throughput.
pub fn run_bench<E: CellExecutor>(frames: &[Frame], params: Params, exec: &E) -> Result<BenchReport> {
    let n_init = params.init_frames.min(frames.len());
    let t0 = Instant::now();
    let mut scene = Scene::initialize_with(&frames[..n_init], params, exec)?;
    let init = t0.elapsed();
    let mut timer = StageTimer::default();
    let t1 = Instant::now();
    let mut labelled = scene.push_with(&frames[n_init..], exec, &mut timer)?.len();
    labelled += scene.finish_with(exec, &mut timer)?.len();
    let stream = t1.elapsed();
    Ok(BenchReport {
        width: scene.width(),
        height: scene.height(),
        frames: labelled,
        init,
        stream,
        stages: STAGES.iter().map(|&s| (s, timer.total(s))).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn timer_charges_the_open_stage() {
        let mut t = StageTimer::default();
        t.enter(Stage::Describe);
        std::thread::sleep(Duration::from_millis(5));
        t.enter(Stage::Segment);
        t.enter(Stage::Done);
        assert!(t.total(Stage::Describe) >= Duration::from_millis(5));
        assert!(t.total(Stage::Segment) < Duration::from_millis(5));
        assert_eq!(t.total(Stage::Maintain), Duration::ZERO);
    }

    #[test]
    fn report_lists_fps_and_stages() {
        let r = BenchReport {
            width: 352,
            height: 288,
            frames: 20,
            init: Duration::from_secs(1),
            stream: Duration::from_secs(2),
            stages: vec![(Stage::Describe, Duration::from_secs(1)), (Stage::Segment, Duration::from_secs(1))],
        };
        assert_eq!(r.fps(), 10.0);
        let text = r.render();
        assert!(text.contains("fps: 10.00"));
        assert!(text.contains("stage_describe_seconds: 1.000 (50.0%)"));
        assert!(text.contains("(met)"));
    }
}
