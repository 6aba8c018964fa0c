//! Accuracy and the combined validation/test mean and spread formulas.

use super::ConfusionMatrix;
use crate::error::Result;

/// Fraction of correctly classified states: trace(cm) / total.
pub fn accuracy(cm: &ConfusionMatrix) -> Result<f64> {
    cm.accuracy()
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation (n−1 denominator); 0 for fewer than 2 points.
pub fn sample_std(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    let ss: f64 = xs.iter().map(|x| (x - m) * (x - m)).sum();
    (ss / (xs.len() - 1) as f64).sqrt()
}

/// Pearson correlation; 0 when either side has no variance.
pub fn pearson(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let (mx, my) = (mean(xs), mean(ys));
    let mut sxx = 0.0;
    let mut syy = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
        sxy += (x - mx) * (y - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return 0.0;
    }
    sxy / (sxx * syy).sqrt()
}

/// Project validation/test statistics onto the whole evaluation set:
/// μ(A) = 0.6·μᵥ + 0.4·μₜ and
/// σ(A)² = 0.36·σᵥ² + 0.16·σₜ² + 0.48·δ·σᵥ·σₜ (clamped at 0 before the root).
pub fn combine_metrics(val: (f64, f64), test: (f64, f64), delta: f64) -> (f64, f64) {
    let (mu_v, sd_v) = val;
    let (mu_t, sd_t) = test;
    let mu = 0.6 * mu_v + 0.4 * mu_t;
    let var = 0.36 * sd_v * sd_v + 0.16 * sd_t * sd_t + 0.48 * delta * sd_v * sd_t;
    (mu, var.max(0.0).sqrt())
}
