//! Scoring masks against ground truth and writing the CSV report.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use brickbg_core::metrics::{evaluate, EvalReport, PrPoint};
use brickbg_core::MaskFrame;

use crate::error::{AppError, Result};

/// Truth for each mask, matched by frame index. Truth frames without a mask
/// (e.g. the training frames) are ignored.
pub fn pair_truth(masks: &[MaskFrame], truth: Vec<MaskFrame>) -> Vec<Option<MaskFrame>> {
    let mut by_index: BTreeMap<usize, MaskFrame> = truth.into_iter().map(|t| (t.frame_index, t)).collect();
    masks.iter().map(|m| by_index.remove(&m.frame_index)).collect()
}

/// Scores `masks`; with `sweep`, `segment` re-runs the pipeline once per
/// threshold to collect the precision–recall points.
pub fn score<F>(masks: &[MaskFrame], truth: Vec<MaskFrame>, sweep: &[f64], mut segment: F) -> Result<EvalReport>
where
    F: FnMut(f64) -> Result<Vec<MaskFrame>>,
{
    let truths = pair_truth(masks, truth);
    if truths.iter().all(Option::is_none) {
        return Err(AppError::Usage("no mask has a matching ground truth frame".into()));
    }
    let mut report = evaluate(masks, &truths)?;
    if !sweep.is_empty() {
        let truth: Vec<MaskFrame> = truths.into_iter().flatten().collect();
        report.pr_points = sweep
            .iter()
            .map(|&t| {
                let run = segment(t)?;
                let r = evaluate(&run, &pair_truth(&run, truth.clone()))?;
                Ok(PrPoint {
                    threshold: t,
                    recall: r.recall,
                    precision: r.precision,
                })
            })
            .collect::<Result<_>>()?;
    }
    Ok(report)
}

/// Parses `"1,2,3.5"`.
pub fn parse_sweep(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|v| {
            let v = v.trim();
            v.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite() && *x > 0.0)
                .ok_or_else(|| AppError::Usage(format!("invalid sweep value `{v}`")))
        })
        .collect()
}

/// Header `tp,fp,fn,precision,recall,fscore` and one row of totals, then, if
/// a sweep ran, a `<param>,recall,precision` header and one row per point.
pub fn report_csv(report: &EvalReport, sweep_param: &str) -> Result<String> {
    let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
    let csv_err = |e: csv::Error| AppError::Usage(format!("cannot format report: {e}"));
    w.write_record(["tp", "fp", "fn", "precision", "recall", "fscore"]).map_err(csv_err)?;
    let t = report.tally;
    w.write_record([
        t.tp.to_string(),
        t.fp.to_string(),
        t.fn_.to_string(),
        format!("{:.6}", report.precision),
        format!("{:.6}", report.recall),
        format!("{:.6}", report.f_score),
    ])
    .map_err(csv_err)?;
    if !report.pr_points.is_empty() {
        w.write_record([sweep_param, "recall", "precision"]).map_err(csv_err)?;
        for p in &report.pr_points {
            w.write_record([p.threshold.to_string(), format!("{:.6}", p.recall), format!("{:.6}", p.precision)])
                .map_err(csv_err)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| AppError::Usage(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

pub fn write_report(path: &Path, report: &EvalReport, sweep_param: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(AppError::io(dir))?;
    }
    fs::write(path, report_csv(report, sweep_param)?).map_err(AppError::io(path))
}
