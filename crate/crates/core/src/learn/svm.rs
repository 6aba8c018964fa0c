//! Linear one-vs-rest SVM on the squared-hinge objective
//! (1/2)‖w‖² + C·Σ max(0, 1 − y·(w·x + b))², the loss used by the standard
//! linear SVC implementations this baseline is compared against.
//!
//! Trained by deterministic full-batch Nesterov gradient descent for a fixed
//! number of passes, with the step size 1/L derived from the data Gram
//! matrix. Everything is exactly reproducible: no randomness enters.

use rayon::prelude::*;

use crate::error::{Error, Result};

const PASSES: usize = 2000;

#[derive(Clone, Debug, PartialEq)]
pub struct SvmModel {
    /// One weight vector per class (one-vs-rest).
    pub weights: Vec<Vec<f64>>,
    pub biases: Vec<f64>,
    pub n_classes: usize,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Largest eigenvalue of Σᵢ x̃ᵢx̃ᵢᵀ (bias-augmented Gram) by power iteration.
fn gram_spectral_bound(x: &[Vec<f64>], dim: usize) -> f64 {
    let aug = dim + 1;
    let mut v = vec![1.0; aug];
    let mut lambda = 0.0;
    for _ in 0..100 {
        let mut av = vec![0.0; aug];
        for xi in x {
            let mut proj = v[dim];
            for (j, &xij) in xi.iter().enumerate() {
                proj += v[j] * xij;
            }
            for (j, &xij) in xi.iter().enumerate() {
                av[j] += proj * xij;
            }
            av[dim] += proj;
        }
        let norm = av.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        lambda = norm;
        for (vi, &ai) in v.iter_mut().zip(&av) {
            *vi = ai / norm;
        }
    }
    lambda
}

/// Full-batch Nesterov descent on
/// F(w, b) = (1/2)‖w‖² + C·Σ max(0, 1 − yᵢ(w·xᵢ + b))².
///
/// The gradient is 1-smooth in the regularizer and 2C·λmax(Gram)-smooth in
/// the loss; the fixed step 1/L with momentum (t−1)/(t+2) converges well
/// within the fixed pass budget.
fn train_binary(x: &[Vec<f64>], y: &[f64], c: f64, dim: usize, lipschitz: f64) -> (Vec<f64>, f64) {
    let step = 1.0 / lipschitz;
    let mut w = vec![0.0; dim + 1]; // bias in the last slot, unregularized
    let mut prev = w.clone();
    let mut look = w.clone();
    let mut grad = vec![0.0; dim + 1];
    for t in 1..=PASSES {
        grad[..dim].copy_from_slice(&look[..dim]);
        grad[dim] = 0.0;
        for (xi, &yi) in x.iter().zip(y) {
            let margin = yi * (dot(&look[..dim], xi) + look[dim]);
            if margin < 1.0 {
                let scale = 2.0 * c * (margin - 1.0) * yi;
                for (g, &xij) in grad.iter_mut().zip(xi) {
                    *g += scale * xij;
                }
                grad[dim] += scale;
            }
        }
        prev.copy_from_slice(&w);
        for ((wi, &li), &gi) in w.iter_mut().zip(&look).zip(&grad) {
            *wi = li - step * gi;
        }
        let beta = (t as f64 - 1.0) / (t as f64 + 2.0);
        for ((li, &wi), &pi) in look.iter_mut().zip(&w).zip(&prev) {
            *li = wi + beta * (wi - pi);
        }
    }
    let bias = w[dim];
    w.truncate(dim);
    (w, bias)
}

/// Train one linear classifier per class against the rest.
pub fn svm_train(x: &[Vec<f64>], y: &[u8], c: f64, n_classes: usize) -> Result<SvmModel> {
    if x.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    assert_eq!(x.len(), y.len());
    assert!(c > 0.0 && n_classes >= 2);
    for class in 0..n_classes {
        if !y.iter().any(|&l| usize::from(l) == class) {
            return Err(Error::MissingClass { class });
        }
    }
    let dim = x[0].len();
    let lipschitz = 1.0 + 2.0 * c * gram_spectral_bound(x, dim).max(1e-12);
    let trained: Vec<(Vec<f64>, f64)> = (0..n_classes)
        .into_par_iter()
        .map(|class| {
            let targets: Vec<f64> = y
                .iter()
                .map(|&l| if usize::from(l) == class { 1.0 } else { -1.0 })
                .collect();
            train_binary(x, &targets, c, dim, lipschitz)
        })
        .collect();
    let mut weights = Vec::with_capacity(n_classes);
    let mut biases = Vec::with_capacity(n_classes);
    for (w, b) in trained {
        weights.push(w);
        biases.push(b);
    }
    Ok(SvmModel {
        weights,
        biases,
        n_classes,
    })
}

/// Argmax of the per-class decision values; ties go to the smallest class.
pub fn svm_predict(model: &SvmModel, x: &[f64]) -> u8 {
    let mut best = 0usize;
    let mut best_score = f64::NEG_INFINITY;
    for class in 0..model.n_classes {
        let score = dot(&model.weights[class], x) + model.biases[class];
        if score > best_score {
            best_score = score;
            best = class;
        }
    }
    best as u8
}
