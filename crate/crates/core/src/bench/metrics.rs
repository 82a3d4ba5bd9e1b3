use super::BenchError;
use crate::encoding::Tag;

/// Binary confusion counts with respect to a positive tag.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Confusion {
    pub tp: u64,
    pub fp: u64,
    pub fn_: u64,
    pub tn: u64,
}

impl Confusion {
    pub fn record(&mut self, predicted: Tag, actual: Tag, positive: Tag, weight: u64) {
        match (predicted == positive, actual == positive) {
            (true, true) => self.tp += weight,
            (true, false) => self.fp += weight,
            (false, true) => self.fn_ += weight,
            (false, false) => self.tn += weight,
        }
    }

    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.fn_ + self.tn
    }

    /// `2TP / (2TP + FP + FN)`, 0 when the denominator is 0.
    pub fn f1(&self) -> f64 {
        let denom = 2 * self.tp + self.fp + self.fn_;
        if denom == 0 {
            0.0
        } else {
            (2 * self.tp) as f64 / denom as f64
        }
    }
}

pub fn f1_score(predicted: &[Tag], actual: &[Tag], positive: Tag) -> Result<f64, BenchError> {
    if predicted.len() != actual.len() {
        return Err(BenchError::Input(format!(
            "{} predictions for {} labels",
            predicted.len(),
            actual.len()
        )));
    }
    if predicted.is_empty() {
        return Err(BenchError::Input("no predictions".into()));
    }
    let mut c = Confusion::default();
    for (&p, &a) in predicted.iter().zip(actual) {
        c.record(p, a, positive, 1);
    }
    Ok(c.f1())
}
