//! Dense feed-forward networks with a linear hidden layer and a softmax or
//! sigmoid head, trained by Adam with validation-loss early stopping.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::seed;

/// Probabilities are clamped to [1e-12, 1−1e-12] before logarithms.
const PROB_CLAMP: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputActivation {
    Softmax,
    Sigmoid,
}

impl OutputActivation {
    fn tag(self) -> &'static str {
        match self {
            OutputActivation::Softmax => "softmax",
            OutputActivation::Sigmoid => "sigmoid",
        }
    }

    fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "softmax" => Some(OutputActivation::Softmax),
            "sigmoid" => Some(OutputActivation::Sigmoid),
            _ => None,
        }
    }
}

/// A three-layer dense network. The hidden activation is linear; the output
/// head is softmax (multi-class) or sigmoid (binary).
#[derive(Clone, Debug, PartialEq)]
pub struct MlpModel {
    pub n_in: usize,
    pub n_hidden: usize,
    pub n_out: usize,
    /// n_hidden × n_in, row-major.
    pub w1: Vec<f64>,
    pub b1: Vec<f64>,
    /// n_out × n_hidden, row-major.
    pub w2: Vec<f64>,
    pub b2: Vec<f64>,
    pub output: OutputActivation,
}

impl MlpModel {
    pub fn new(n_in: usize, n_hidden: usize, n_out: usize, output: OutputActivation) -> Self {
        Self {
            n_in,
            n_hidden,
            n_out,
            w1: vec![0.0; n_hidden * n_in],
            b1: vec![0.0; n_hidden],
            w2: vec![0.0; n_out * n_hidden],
            b2: vec![0.0; n_out],
            output,
        }
    }

    /// N × 6 × 6 softmax classifier for the six SLOCC classes.
    pub fn slocc(n: usize) -> Self {
        Self::new(n, 6, 6, OutputActivation::Softmax)
    }

    /// N × ⌈N/2⌉ × 1 sigmoid detector for the GME flag.
    pub fn gme(n: usize) -> Self {
        Self::new(n, n.div_ceil(2), 1, OutputActivation::Sigmoid)
    }

    pub fn layer_sizes(&self) -> [usize; 3] {
        [self.n_in, self.n_hidden, self.n_out]
    }

    pub fn topology_label(&self) -> String {
        format!("{}x{}x{}", self.n_in, self.n_hidden, self.n_out)
    }

    /// Adjacent layer-width sums (L1+L2, L2+L3), reported as the P2/P3
    /// columns of the sweep tables.
    pub fn layer_width_sums(&self) -> (usize, usize) {
        (self.n_in + self.n_hidden, self.n_hidden + self.n_out)
    }

    /// True number of trainable weights and biases.
    pub fn trainable_params(&self) -> usize {
        self.w1.len() + self.b1.len() + self.w2.len() + self.b2.len()
    }

    /// Glorot-uniform weights, zero biases.
    pub fn init_weights(&mut self, rng: &mut impl Rng) {
        let mut fill = |w: &mut [f64], fan_in: usize, fan_out: usize| {
            let bound = (6.0 / (fan_in + fan_out) as f64).sqrt();
            for v in w.iter_mut() {
                *v = rng.gen_range(-bound..=bound);
            }
        };
        fill(&mut self.w1, self.n_in, self.n_hidden);
        fill(&mut self.w2, self.n_hidden, self.n_out);
        self.b1.iter_mut().for_each(|v| *v = 0.0);
        self.b2.iter_mut().for_each(|v| *v = 0.0);
    }

    fn hidden(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n_in);
        let mut h = self.b1.clone();
        for (j, hj) in h.iter_mut().enumerate() {
            let row = &self.w1[j * self.n_in..(j + 1) * self.n_in];
            *hj += row.iter().zip(x).map(|(w, xi)| w * xi).sum::<f64>();
        }
        h
    }

    fn logits(&self, hidden: &[f64]) -> Vec<f64> {
        let mut z = self.b2.clone();
        for (o, zo) in z.iter_mut().enumerate() {
            let row = &self.w2[o * self.n_hidden..(o + 1) * self.n_hidden];
            *zo += row.iter().zip(hidden).map(|(w, h)| w * h).sum::<f64>();
        }
        z
    }

    /// Output probabilities: a softmax distribution over classes, or a single
    /// sigmoid probability.
    pub fn forward(&self, x: &[f64]) -> Vec<f64> {
        let z = self.logits(&self.hidden(x));
        match self.output {
            OutputActivation::Softmax => softmax(&z),
            OutputActivation::Sigmoid => vec![sigmoid(z[0])],
        }
    }

    /// Predicted label: argmax class (ties toward the smaller index), or the
    /// 0.5-thresholded flag for the sigmoid head.
    pub fn predict_label(&self, x: &[f64]) -> u8 {
        let probs = self.forward(x);
        match self.output {
            OutputActivation::Softmax => argmax(&probs) as u8,
            OutputActivation::Sigmoid => u8::from(probs[0] >= 0.5),
        }
    }

    /// Text format: versioned header, layer sizes, activation tag, then the
    /// parameter blocks in row-major order. Floats round-trip exactly.
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        writeln!(w, "entclass-mlp v1")?;
        writeln!(w, "layers,{},{},{}", self.n_in, self.n_hidden, self.n_out)?;
        writeln!(w, "output,{}", self.output.tag())?;
        for (name, block) in [("w1", &self.w1), ("b1", &self.b1), ("w2", &self.w2), ("b2", &self.b2)]
        {
            let joined: Vec<String> = block.iter().map(|v| v.to_string()).collect();
            writeln!(w, "{name},{}", joined.join(","))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let fail = |line: usize, msg: &str| Error::ModelFormat {
            path: path.to_path_buf(),
            line,
            msg: msg.to_string(),
        };
        let reader = BufReader::new(File::open(path)?);
        let lines: Vec<String> = reader.lines().collect::<std::io::Result<_>>()?;
        if lines.first().map(String::as_str) != Some("entclass-mlp v1") {
            return Err(fail(1, "bad magic/version line"));
        }
        let sizes: Vec<usize> = lines
            .get(1)
            .and_then(|l| l.strip_prefix("layers,"))
            .ok_or_else(|| fail(2, "missing layers line"))?
            .split(',')
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| fail(2, "non-integer layer size"))?;
        if sizes.len() != 3 {
            return Err(fail(2, "expected three layer sizes"));
        }
        let output = lines
            .get(2)
            .and_then(|l| l.strip_prefix("output,"))
            .and_then(OutputActivation::from_tag)
            .ok_or_else(|| fail(3, "missing or unknown output activation"))?;
        let mut model = Self::new(sizes[0], sizes[1], sizes[2], output);
        let expected: [(&str, usize); 4] = [
            ("w1", sizes[1] * sizes[0]),
            ("b1", sizes[1]),
            ("w2", sizes[2] * sizes[1]),
            ("b2", sizes[2]),
        ];
        for (i, (name, len)) in expected.iter().enumerate() {
            let line_no = 4 + i;
            let line = lines
                .get(3 + i)
                .ok_or_else(|| fail(line_no, "missing parameter block"))?;
            let body = line
                .strip_prefix(&format!("{name},"))
                .ok_or_else(|| fail(line_no, "unexpected block name"))?;
            let values: Vec<f64> = body
                .split(',')
                .map(str::parse)
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| fail(line_no, "non-numeric parameter"))?;
            if values.len() != *len {
                return Err(fail(line_no, "wrong parameter count"));
            }
            match *name {
                "w1" => model.w1 = values,
                "b1" => model.b1 = values,
                "w2" => model.w2 = values,
                _ => model.b2 = values,
            }
        }
        Ok(model)
    }
}

fn softmax(z: &[f64]) -> Vec<f64> {
    let max = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exp: Vec<f64> = z.iter().map(|v| (v - max).exp()).collect();
    let sum: f64 = exp.iter().sum();
    exp.into_iter().map(|e| e / sum).collect()
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate().skip(1) {
        if x > v[best] {
            best = i;
        }
    }
    best
}

fn clamp_prob(p: f64) -> f64 {
    p.clamp(PROB_CLAMP, 1.0 - PROB_CLAMP)
}

/// Categorical cross-entropy −Σᵢ yᵢ ln(pᵢ).
pub fn loss_categorical(probs: &[f64], one_hot: &[f64]) -> f64 {
    probs
        .iter()
        .zip(one_hot)
        .map(|(&p, &y)| -y * clamp_prob(p).ln())
        .sum()
}

/// Binary cross-entropy −[y ln p + (1−y) ln(1−p)].
pub fn loss_binary(prob: f64, flag: f64) -> f64 {
    let p = clamp_prob(prob);
    -(flag * p.ln() + (1.0 - flag) * (1.0 - p).ln())
}

/// A training sample: feature vector and the head-matching target (a one-hot
/// row for softmax, a single flag for sigmoid).
#[derive(Clone, Debug)]
pub struct Sample {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

fn sample_loss(model: &MlpModel, probs: &[f64], y: &[f64]) -> f64 {
    match model.output {
        OutputActivation::Softmax => loss_categorical(probs, y),
        OutputActivation::Sigmoid => loss_binary(probs[0], y[0]),
    }
}

fn sample_correct(model: &MlpModel, probs: &[f64], y: &[f64]) -> bool {
    match model.output {
        OutputActivation::Softmax => argmax(probs) == argmax(y),
        OutputActivation::Sigmoid => u8::from(probs[0] >= 0.5) == (y[0] as u8),
    }
}

/// Mean loss and accuracy over a sample set.
pub fn evaluate(model: &MlpModel, set: &[Sample]) -> (f64, f64) {
    let mut loss = 0.0;
    let mut correct = 0usize;
    for s in set {
        let probs = model.forward(&s.x);
        loss += sample_loss(model, &probs, &s.y);
        correct += usize::from(sample_correct(model, &probs, &s.y));
    }
    let n = set.len() as f64;
    (loss / n, correct as f64 / n)
}

/// Parameter-shaped container for gradients and Adam moments.
#[derive(Clone, Debug)]
pub struct ParamGrads {
    pub w1: Vec<f64>,
    pub b1: Vec<f64>,
    pub w2: Vec<f64>,
    pub b2: Vec<f64>,
}

impl ParamGrads {
    pub fn zeros_like(model: &MlpModel) -> Self {
        Self {
            w1: vec![0.0; model.w1.len()],
            b1: vec![0.0; model.b1.len()],
            w2: vec![0.0; model.w2.len()],
            b2: vec![0.0; model.b2.len()],
        }
    }
}

/// Gradients of the mean batch loss with respect to every weight and bias.
///
/// For both heads the loss derivative at the output logits is (p − y), the
/// hidden activation is the identity, and the chain rule does the rest.
pub fn backward(model: &MlpModel, batch: &[&Sample]) -> ParamGrads {
    assert!(!batch.is_empty(), "batch must be non-empty");
    let mut g = ParamGrads::zeros_like(model);
    for s in batch {
        let h = model.hidden(&s.x);
        let z = model.logits(&h);
        let dz2: Vec<f64> = match model.output {
            OutputActivation::Softmax => softmax(&z)
                .iter()
                .zip(&s.y)
                .map(|(p, y)| p - y)
                .collect(),
            OutputActivation::Sigmoid => vec![sigmoid(z[0]) - s.y[0]],
        };
        for (o, &d2) in dz2.iter().enumerate() {
            g.b2[o] += d2;
            for (j, &hj) in h.iter().enumerate() {
                g.w2[o * model.n_hidden + j] += d2 * hj;
            }
        }
        for j in 0..model.n_hidden {
            let dz1: f64 = dz2
                .iter()
                .enumerate()
                .map(|(o, &d2)| d2 * model.w2[o * model.n_hidden + j])
                .sum();
            g.b1[j] += dz1;
            for (i, &xi) in s.x.iter().enumerate() {
                g.w1[j * model.n_in + i] += dz1 * xi;
            }
        }
    }
    let inv = 1.0 / batch.len() as f64;
    for block in [&mut g.w1, &mut g.b1, &mut g.w2, &mut g.b2] {
        block.iter_mut().for_each(|v| *v *= inv);
    }
    g
}

/// First and second moment accumulators.
#[derive(Clone, Debug)]
pub struct AdamState {
    pub m: ParamGrads,
    pub v: ParamGrads,
}

impl AdamState {
    pub fn new(model: &MlpModel) -> Self {
        Self {
            m: ParamGrads::zeros_like(model),
            v: ParamGrads::zeros_like(model),
        }
    }
}

/// Training hyperparameters; the two problem presets differ only in batch
/// size.
#[derive(Clone, Debug)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub min_delta: f64,
    pub patience: usize,
    pub seed: u64,
    pub adam_beta1: f64,
    pub adam_beta2: f64,
    pub adam_eps: f64,
}

impl TrainConfig {
    fn base(batch_size: usize, seed: u64) -> Self {
        Self {
            learning_rate: 0.001,
            epochs: 100,
            batch_size,
            min_delta: 0.01,
            patience: 20,
            seed,
            adam_beta1: 0.9,
            adam_beta2: 0.999,
            adam_eps: 1e-8,
        }
    }

    pub fn slocc(seed: u64) -> Self {
        Self::base(1000, seed)
    }

    pub fn gme(seed: u64) -> Self {
        Self::base(500, seed)
    }
}

/// One Adam update with bias correction, step index `t` starting at 1.
pub fn adam_step(
    model: &mut MlpModel,
    grads: &ParamGrads,
    state: &mut AdamState,
    t: usize,
    cfg: &TrainConfig,
) {
    assert!(t >= 1);
    let bc1 = 1.0 - cfg.adam_beta1.powi(t as i32);
    let bc2 = 1.0 - cfg.adam_beta2.powi(t as i32);
    let update = |p: &mut [f64], g: &[f64], m: &mut [f64], v: &mut [f64]| {
        for i in 0..p.len() {
            m[i] = cfg.adam_beta1 * m[i] + (1.0 - cfg.adam_beta1) * g[i];
            v[i] = cfg.adam_beta2 * v[i] + (1.0 - cfg.adam_beta2) * g[i] * g[i];
            let m_hat = m[i] / bc1;
            let v_hat = v[i] / bc2;
            p[i] -= cfg.learning_rate * m_hat / (v_hat.sqrt() + cfg.adam_eps);
        }
    };
    update(&mut model.w1, &grads.w1, &mut state.m.w1, &mut state.v.w1);
    update(&mut model.b1, &grads.b1, &mut state.m.b1, &mut state.v.b1);
    update(&mut model.w2, &grads.w2, &mut state.m.w2, &mut state.v.w2);
    update(&mut model.b2, &grads.b2, &mut state.m.b2, &mut state.v.b2);
}

/// Per-epoch metrics plus the restored-best epoch index.
#[derive(Clone, Debug, Default)]
pub struct TrainHistory {
    pub train_loss: Vec<f64>,
    pub train_accuracy: Vec<f64>,
    pub val_loss: Vec<f64>,
    pub val_accuracy: Vec<f64>,
    /// Epoch with minimum validation loss (ties: higher validation accuracy,
    /// then the earlier epoch).
    pub best_epoch: usize,
}

/// Train with Adam over seeded epoch shuffles; stop early once validation
/// loss has not improved by `min_delta` for `patience` consecutive epochs,
/// and return the parameters from the best epoch.
///
/// Weights are (re)initialized from `config.seed`, so a given
/// (topology, data, config) triple always trains identically.
pub fn train(
    mut model: MlpModel,
    train_set: &[Sample],
    val_set: &[Sample],
    cfg: &TrainConfig,
) -> Result<(MlpModel, TrainHistory)> {
    if train_set.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    if val_set.is_empty() {
        return Err(Error::EmptyValidationSet);
    }
    model.init_weights(&mut seed::rng_from(cfg.seed, &[0]));
    let mut state = AdamState::new(&model);
    let mut history = TrainHistory::default();
    let mut t = 0usize;

    let mut best_model = model.clone();
    let mut best_epoch = 0usize;
    let mut best_val_loss = f64::INFINITY;
    let mut best_val_acc = f64::NEG_INFINITY;

    let mut monitor_best = f64::INFINITY;
    let mut wait = 0usize;

    let mut indices: Vec<usize> = (0..train_set.len()).collect();
    for epoch in 0..cfg.epochs {
        indices.shuffle(&mut seed::rng_from(cfg.seed, &[1, epoch as u64]));
        for chunk in indices.chunks(cfg.batch_size) {
            let batch: Vec<&Sample> = chunk.iter().map(|&i| &train_set[i]).collect();
            let grads = backward(&model, &batch);
            t += 1;
            adam_step(&mut model, &grads, &mut state, t, cfg);
        }
        let (train_loss, train_acc) = evaluate(&model, train_set);
        let (val_loss, val_acc) = evaluate(&model, val_set);
        history.train_loss.push(train_loss);
        history.train_accuracy.push(train_acc);
        history.val_loss.push(val_loss);
        history.val_accuracy.push(val_acc);

        if val_loss < best_val_loss || (val_loss == best_val_loss && val_acc > best_val_acc) {
            best_val_loss = val_loss;
            best_val_acc = val_acc;
            best_epoch = epoch;
            best_model = model.clone();
        }

        if val_loss < monitor_best - cfg.min_delta {
            monitor_best = val_loss;
            wait = 0;
        } else {
            wait += 1;
            if wait >= cfg.patience {
                break;
            }
        }
    }
    history.best_epoch = best_epoch;
    Ok((best_model, history))
}
