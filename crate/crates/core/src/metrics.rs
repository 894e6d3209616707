//! Pixel-level segmentation scores.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::frame::MaskFrame;

/// True positive, false positive and false negative pixel counts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Tally {
    pub tp: u64,
    pub fp: u64,
    pub fn_: u64,
}

impl Tally {
    pub fn new(tp: u64, fp: u64, fn_: u64) -> Self {
        Tally { tp, fp, fn_ }
    }

    pub fn from_masks(pred: &MaskFrame, truth: &MaskFrame) -> Result<Self> {
        if pred.width() != truth.width() || pred.height() != truth.height() {
            return Err(Error::invalid("mask and ground truth sizes differ"));
        }
        let mut t = Tally::default();
        for (&p, &g) in pred.labels().iter().zip(truth.labels()) {
            match (p, g) {
                (true, true) => t.tp += 1,
                (true, false) => t.fp += 1,
                (false, true) => t.fn_ += 1,
                (false, false) => {}
            }
        }
        Ok(t)
    }

    pub fn add(&mut self, other: Tally) {
        self.tp += other.tp;
        self.fp += other.fp;
        self.fn_ += other.fn_;
    }

    /// `tp / (tp + fp)`, 1 when nothing was predicted.
    pub fn precision(&self) -> f64 {
        ratio(self.tp, self.tp + self.fp)
    }

    /// `tp / (tp + fn)`, 1 when there was nothing to find.
    pub fn recall(&self) -> f64 {
        ratio(self.tp, self.tp + self.fn_)
    }

    /// `2·tp / (2·tp + fp + fn)`, 1 when both masks are empty.
    pub fn f_score(&self) -> f64 {
        ratio(2 * self.tp, 2 * self.tp + self.fp + self.fn_)
    }
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        1.0
    } else {
        num as f64 / den as f64
    }
}

/// One point of a precision–recall sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrPoint {
    pub threshold: f64,
    pub recall: f64,
    pub precision: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub tally: Tally,
    pub precision: f64,
    pub recall: f64,
    pub f_score: f64,
    /// Frames that had ground truth.
    pub frames: usize,
    pub pr_points: Vec<PrPoint>,
}

impl EvalReport {
    pub fn from_tally(tally: Tally, frames: usize) -> Self {
        EvalReport {
            tally,
            precision: tally.precision(),
            recall: tally.recall(),
            f_score: tally.f_score(),
            frames,
            pr_points: Vec::new(),
        }
    }
}

/// Pools pixel tallies over every frame that has ground truth. `truths[i]`
/// belongs to `masks[i]`; `None` frames are skipped.
pub fn evaluate(masks: &[MaskFrame], truths: &[Option<MaskFrame>]) -> Result<EvalReport> {
    if masks.len() != truths.len() {
        return Err(Error::DimensionMismatch {
            expected: masks.len(),
            actual: truths.len(),
        });
    }
    let mut tally = Tally::default();
    let mut frames = 0;
    for (m, t) in masks.iter().zip(truths) {
        if let Some(t) = t {
            tally.add(Tally::from_masks(m, t)?);
            frames += 1;
        }
    }
    Ok(EvalReport::from_tally(tally, frames))
}

/// F-score of each frame that has ground truth, in order.
pub fn per_frame_f_scores(masks: &[MaskFrame], truths: &[Option<MaskFrame>]) -> Result<Vec<f64>> {
    if masks.len() != truths.len() {
        return Err(Error::DimensionMismatch {
            expected: masks.len(),
            actual: truths.len(),
        });
    }
    masks
        .iter()
        .zip(truths)
        .filter_map(|(m, t)| t.as_ref().map(|t| Tally::from_masks(m, t).map(|x| x.f_score())))
        .collect()
}

/// Precision–recall points, one per threshold. `segment` produces the masks
/// for a given threshold.
pub fn pr_sweep<F>(thresholds: &[f64], truths: &[Option<MaskFrame>], mut segment: F) -> Result<Vec<PrPoint>>
where
    F: FnMut(f64) -> Result<Vec<MaskFrame>>,
{
    thresholds
        .iter()
        .map(|&t| {
            let report = evaluate(&segment(t)?, truths)?;
            Ok(PrPoint {
                threshold: t,
                recall: report.recall,
                precision: report.precision,
            })
        })
        .collect()
}
