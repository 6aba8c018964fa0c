//! Benchmark orchestration: the 100-combination split protocol, accuracy and
//! combined-metric formulas, the N-sweep over ANN/SVM/KNN, the rank/tangle
//! oracle report, and CSV report emission.

mod metrics;
mod report;
mod splits;
mod sweep;

pub use metrics::{accuracy, combine_metrics, mean, pearson, sample_std};
pub use report::{
    emit_reports, oracle_report, write_oracle_table, OracleReport, OracleRow,
};
pub use splits::{sample_splits, SplitCombo, SplitPlan};
pub use sweep::{run_sweep, RunResult};

use crate::error::{Error, Result};

/// Which classification problem a sweep or model addresses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Problem {
    Slocc,
    Gme,
}

impl Problem {
    pub fn name(self) -> &'static str {
        match self {
            Problem::Slocc => "slocc",
            Problem::Gme => "gme",
        }
    }

    pub fn n_classes(self) -> usize {
        match self {
            Problem::Slocc => 6,
            Problem::Gme => 2,
        }
    }

    pub(crate) fn seed_tag(self) -> u64 {
        match self {
            Problem::Slocc => 0,
            Problem::Gme => 1,
        }
    }

    /// Human-readable label for class index `i` under this problem.
    pub fn label_name(self, i: usize) -> &'static str {
        match self {
            Problem::Slocc => crate::stategen::SloccClass::ALL[i].name(),
            Problem::Gme => {
                if i == 0 {
                    "NonGME"
                } else {
                    "GME"
                }
            }
        }
    }
}

/// True-class × predicted-class counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfusionMatrix {
    k: usize,
    counts: Vec<u64>,
}

impl ConfusionMatrix {
    pub fn new(k: usize) -> Self {
        Self {
            k,
            counts: vec![0; k * k],
        }
    }

    pub fn classes(&self) -> usize {
        self.k
    }

    pub fn record(&mut self, true_class: usize, predicted: usize) {
        assert!(true_class < self.k && predicted < self.k);
        self.counts[true_class * self.k + predicted] += 1;
    }

    pub fn count(&self, true_class: usize, predicted: usize) -> u64 {
        self.counts[true_class * self.k + predicted]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..self.k).map(|i| self.count(i, i)).sum()
    }

    pub fn merge(&mut self, other: &ConfusionMatrix) {
        assert_eq!(self.k, other.k);
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
    }

    pub fn accuracy(&self) -> Result<f64> {
        if self.total() == 0 {
            return Err(Error::EmptyConfusion);
        }
        Ok(self.trace() as f64 / self.total() as f64)
    }
}
