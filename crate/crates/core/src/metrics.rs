//! Precision, recall and F1 with the gold-count convention for false
//! negatives, plus the half-up integer-percent display rounding.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::MetricsError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum MetricFlag {
    UndefinedPrecision,
    UndefinedRecall,
    #[serde(rename = "NegativeFN")]
    NegativeFn,
}

/// Ratios computed from raw counts.
#[derive(Debug, Clone, PartialEq)]
pub struct Ratios {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub flags: BTreeSet<MetricFlag>,
}

/// `p = tp/(tp+fp)`, `r = tp/(tp+fn)`, `f1 = 2pr/(p+r)`. A zero (or
/// negative) denominator yields 0 and the matching Undefined flag.
pub fn precision_recall_f1(tp: f64, fp: f64, fn_: f64) -> Ratios {
    let mut flags = BTreeSet::new();
    let precision = if tp + fp > 0.0 {
        tp / (tp + fp)
    } else {
        flags.insert(MetricFlag::UndefinedPrecision);
        0.0
    };
    let recall = if tp + fn_ > 0.0 {
        tp / (tp + fn_)
    } else {
        flags.insert(MetricFlag::UndefinedRecall);
        0.0
    };
    if fn_ < 0.0 {
        flags.insert(MetricFlag::NegativeFn);
    }
    let f1 = if precision + recall > 0.0 { 2.0 * precision * recall / (precision + recall) } else { 0.0 };
    Ratios { precision, recall, f1, flags }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EvaluationMetrics {
    pub tp: u64,
    pub fp: u64,
    /// `gold_count - tp`; negative after aggressive expert reclassification.
    #[serde(rename = "fn")]
    pub fn_: i64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub gold_count: u64,
    pub flags: BTreeSet<MetricFlag>,
}

impl EvaluationMetrics {
    pub fn precision_percent(&self) -> i64 {
        round_percent(self.precision)
    }

    pub fn recall_percent(&self) -> i64 {
        round_percent(self.recall)
    }

    pub fn f1_percent(&self) -> i64 {
        round_percent(self.f1)
    }

    pub fn display(&self) -> MetricsDisplay {
        MetricsDisplay {
            precision: format_percent(self.precision),
            recall: format_percent(self.recall),
            f1: format_percent(self.f1),
        }
    }
}

/// Integer-percent strings such as `"40%"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricsDisplay {
    pub precision: String,
    pub recall: String,
    pub f1: String,
}

pub fn compute_metrics(tp: u64, fp: u64, gold_count: i64) -> Result<EvaluationMetrics, MetricsError> {
    if gold_count < 1 {
        return Err(MetricsError::NegativeGold(gold_count));
    }
    let fn_ = gold_count - tp as i64;
    let r = precision_recall_f1(tp as f64, fp as f64, fn_ as f64);
    Ok(EvaluationMetrics {
        tp,
        fp,
        fn_,
        precision: r.precision,
        recall: r.recall,
        f1: r.f1,
        gold_count: gold_count as u64,
        flags: r.flags,
    })
}

/// Half-up rounding of a ratio to an integer percent. The small epsilon
/// keeps exact halves such as 0.125 from falling below .5 in binary.
pub fn round_percent(ratio: f64) -> i64 {
    (ratio * 100.0 + 0.5 + 1e-9).floor() as i64
}

pub fn format_percent(ratio: f64) -> String {
    format!("{}%", round_percent(ratio))
}
