//! The N-sweep: for each feature count, train one ANN per split combination,
//! aggregate the 100 runs, and attach SVM/KNN baselines evaluated on the full
//! evaluation set.

use std::ops::RangeInclusive;

use rayon::prelude::*;

use super::{metrics, ConfusionMatrix, Problem, SplitPlan};
use crate::error::Result;
use crate::features::{extract_features18, features18_from_row, select_top_n, FeatureRanking};
use crate::learn::{knn_predict, svm_predict, svm_train, KnnWeighting};
use crate::learn::{train, MlpModel, Sample, TrainConfig};
use crate::seed;
use crate::stategen::{DatasetRow, EvalState};

const SVM_C: f64 = 0.1;

/// Aggregated outcome of one (problem, N) sweep row.
#[derive(Clone, Debug)]
pub struct RunResult {
    pub problem: Problem,
    pub n: usize,
    pub topology: [usize; 3],
    /// Adjacent layer-width sums, the P2/P3 report columns.
    pub p2: usize,
    pub p3: usize,
    pub trainable_params: usize,
    /// Per-combo metrics, in plan order.
    pub val_acc: Vec<f64>,
    pub val_loss: Vec<f64>,
    pub test_acc: Vec<f64>,
    pub test_loss: Vec<f64>,
    pub mu_val_acc: f64,
    pub sd_val_acc: f64,
    pub mu_val_loss: f64,
    pub sd_val_loss: f64,
    pub mu_test_acc: f64,
    pub sd_test_acc: f64,
    pub mu_test_loss: f64,
    pub sd_test_loss: f64,
    /// Pearson correlation of per-combo validation and test accuracies.
    pub delta: f64,
    /// Combined accuracy over the whole evaluation set (0.6/0.4 weighting).
    pub a_total: f64,
    pub sd_total: f64,
    pub svm_accuracy: f64,
    pub knn_accuracy: f64,
    /// Test-set confusion counts aggregated over all combos.
    pub confusion: ConfusionMatrix,
}

fn target_vector(problem: Problem, row_label: &crate::stategen::LabelVector) -> Vec<f64> {
    match problem {
        Problem::Slocc => row_label.one_hot.iter().map(|&h| f64::from(h)).collect(),
        Problem::Gme => vec![f64::from(row_label.gme_flag)],
    }
}

fn int_label(problem: Problem, class: crate::stategen::SloccClass) -> u8 {
    match problem {
        Problem::Slocc => class.code(),
        Problem::Gme => u8::from(class.is_gme()),
    }
}

fn model_for(problem: Problem, n: usize) -> MlpModel {
    match problem {
        Problem::Slocc => MlpModel::slocc(n),
        Problem::Gme => MlpModel::gme(n),
    }
}

fn config_for(problem: Problem, seed_value: u64) -> TrainConfig {
    match problem {
        Problem::Slocc => TrainConfig::slocc(seed_value),
        Problem::Gme => TrainConfig::gme(seed_value),
    }
}

struct ComboOutcome {
    val_acc: f64,
    val_loss: f64,
    test_acc: f64,
    test_loss: f64,
    confusion: ConfusionMatrix,
}

/// Run the sweep over `n_range`. Per N: one training run per split combo on
/// the fixed synthetic training set (validation states steer early stopping),
/// test metrics from the held-out states, then SVM (linear, C = 0.1) and KNN
/// (GME: k=18 uniform p=1; SLOCC: k=20 distance p=2) baselines on all 30
/// noisy states. ANN inputs are raw selected features of the noisy matrices.
pub fn run_sweep(
    problem: Problem,
    train_rows: &[DatasetRow],
    eval_set: &[EvalState],
    ranking: &FeatureRanking,
    n_range: RangeInclusive<usize>,
    plan: &SplitPlan,
    master_seed: u64,
) -> Result<Vec<RunResult>> {
    let train_feats: Vec<_> = train_rows.iter().map(features18_from_row).collect();
    let train_targets: Vec<Vec<f64>> = train_rows
        .iter()
        .map(|r| target_vector(problem, &r.label))
        .collect();
    let train_int: Vec<u8> = train_rows
        .iter()
        .map(|r| match problem {
            Problem::Slocc => r.label.code,
            Problem::Gme => r.label.gme_flag,
        })
        .collect();
    let eval_feats: Vec<_> = eval_set
        .iter()
        .map(|st| extract_features18(&st.noisy))
        .collect();
    let eval_int: Vec<u8> = eval_set
        .iter()
        .map(|st| int_label(problem, st.class))
        .collect();

    let k_classes = problem.n_classes();
    let mut results = Vec::new();
    for n in n_range {
        let train_x: Vec<Vec<f64>> = train_feats
            .iter()
            .map(|f| select_top_n(f, ranking, n))
            .collect::<Result<_>>()?;
        let eval_x: Vec<Vec<f64>> = eval_feats
            .iter()
            .map(|f| select_top_n(f, ranking, n))
            .collect::<Result<_>>()?;
        let train_samples: Vec<Sample> = train_x
            .iter()
            .zip(&train_targets)
            .map(|(x, y)| Sample {
                x: x.clone(),
                y: y.clone(),
            })
            .collect();
        let eval_samples: Vec<Sample> = eval_x
            .iter()
            .zip(eval_set)
            .map(|(x, st)| Sample {
                x: x.clone(),
                y: target_vector(problem, &crate::stategen::encode_labels(st.class)),
            })
            .collect();

        let outcomes: Vec<ComboOutcome> = plan
            .combos
            .par_iter()
            .enumerate()
            .map(|(combo_idx, combo)| {
                let cfg = config_for(
                    problem,
                    seed::derive_seed(
                        master_seed,
                        &[problem.seed_tag(), n as u64, combo_idx as u64],
                    ),
                );
                let val_samples: Vec<Sample> = combo
                    .validation
                    .iter()
                    .map(|&i| eval_samples[i].clone())
                    .collect();
                let (best, history) =
                    train(model_for(problem, n), &train_samples, &val_samples, &cfg)?;
                let mut test_loss = 0.0;
                let mut confusion = ConfusionMatrix::new(k_classes);
                for &i in &combo.test {
                    let probs = best.forward(&eval_samples[i].x);
                    test_loss += match problem {
                        Problem::Slocc => {
                            crate::learn::loss_categorical(&probs, &eval_samples[i].y)
                        }
                        Problem::Gme => crate::learn::loss_binary(probs[0], eval_samples[i].y[0]),
                    };
                    confusion.record(usize::from(eval_int[i]), usize::from(best.predict_label(&eval_samples[i].x)));
                }
                test_loss /= combo.test.len() as f64;
                Ok(ComboOutcome {
                    val_acc: history.val_accuracy[history.best_epoch],
                    val_loss: history.val_loss[history.best_epoch],
                    test_acc: confusion.accuracy()?,
                    test_loss,
                    confusion,
                })
            })
            .collect::<Result<_>>()?;

        let val_acc: Vec<f64> = outcomes.iter().map(|o| o.val_acc).collect();
        let val_loss: Vec<f64> = outcomes.iter().map(|o| o.val_loss).collect();
        let test_acc: Vec<f64> = outcomes.iter().map(|o| o.test_acc).collect();
        let test_loss: Vec<f64> = outcomes.iter().map(|o| o.test_loss).collect();
        let mut confusion = ConfusionMatrix::new(k_classes);
        for o in &outcomes {
            confusion.merge(&o.confusion);
        }

        let delta = metrics::pearson(&val_acc, &test_acc);
        let (mu_val_acc, sd_val_acc) = (metrics::mean(&val_acc), metrics::sample_std(&val_acc));
        let (mu_test_acc, sd_test_acc) = (metrics::mean(&test_acc), metrics::sample_std(&test_acc));
        let (a_total, sd_total) = metrics::combine_metrics(
            (mu_val_acc, sd_val_acc),
            (mu_test_acc, sd_test_acc),
            delta,
        );

        let svm_accuracy = {
            let model = svm_train(&train_x, &train_int, SVM_C, k_classes)?;
            let correct = eval_x
                .iter()
                .zip(&eval_int)
                .filter(|(x, &y)| svm_predict(&model, x) == y)
                .count();
            correct as f64 / eval_x.len() as f64
        };
        let knn_accuracy = {
            let (k, weighting, p) = match problem {
                Problem::Gme => (18, KnnWeighting::Uniform, 1),
                Problem::Slocc => (20, KnnWeighting::Distance, 2),
            };
            let correct = eval_x
                .iter()
                .zip(&eval_int)
                .filter(|(x, &y)| knn_predict(&train_x, &train_int, x, k, weighting, p).map(|p| p == y).unwrap_or(false))
                .count();
            correct as f64 / eval_x.len() as f64
        };

        let model = model_for(problem, n);
        let (p2, p3) = model.layer_width_sums();
        results.push(RunResult {
            problem,
            n,
            topology: model.layer_sizes(),
            p2,
            p3,
            trainable_params: model.trainable_params(),
            mu_val_acc,
            sd_val_acc,
            mu_val_loss: metrics::mean(&val_loss),
            sd_val_loss: metrics::sample_std(&val_loss),
            mu_test_acc,
            sd_test_acc,
            mu_test_loss: metrics::mean(&test_loss),
            sd_test_loss: metrics::sample_std(&test_loss),
            delta,
            a_total,
            sd_total,
            svm_accuracy,
            knn_accuracy,
            confusion,
            val_acc,
            val_loss,
            test_acc,
            test_loss,
        });
    }
    Ok(results)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::sample_splits;
    use crate::features::{anova_f_scores, rank_features};
    use crate::stategen::{build_eval_set, build_training_dataset};

    #[test]
    fn small_sweep_is_consistent_and_deterministic() {
        let rows = build_training_dataset(40, 5);
        let eval = build_eval_set(5, 6).unwrap();
        let feats: Vec<_> = rows.iter().map(features18_from_row).collect();
        let flags: Vec<u8> = rows.iter().map(|r| r.label.gme_flag).collect();
        let ranking = rank_features(&anova_f_scores(&feats, &flags).unwrap());
        let plan = sample_splits(&eval, 4, 1).unwrap();
        let run = || {
            run_sweep(
                Problem::Gme,
                &rows,
                &eval,
                &ranking,
                4..=4,
                &plan,
                99,
            )
            .unwrap()
        };
        let results = run();
        assert_eq!(results.len(), 1);
        let r = &results[0];
        assert_eq!(r.topology, [4, 2, 1]);
        assert_eq!(r.val_acc.len(), 4);
        for list in [&r.val_acc, &r.test_acc] {
            for &a in list.iter() {
                assert!((0.0..=1.0).contains(&a));
            }
        }
        assert!((r.mu_test_acc - metrics::mean(&r.test_acc)).abs() < 1e-9);
        assert!((r.sd_test_acc - metrics::sample_std(&r.test_acc)).abs() < 1e-9);
        let (mu, sd) = metrics::combine_metrics(
            (r.mu_val_acc, r.sd_val_acc),
            (r.mu_test_acc, r.sd_test_acc),
            r.delta,
        );
        assert!((r.a_total - mu).abs() < 1e-9);
        assert!((r.sd_total - sd).abs() < 1e-9);
        assert_eq!(r.confusion.total(), 4 * 12);

        let again = run();
        assert_eq!(r.val_acc, again[0].val_acc);
        assert_eq!(r.test_acc, again[0].test_acc);
        assert_eq!(r.svm_accuracy, again[0].svm_accuracy);
        assert_eq!(r.knn_accuracy, again[0].knn_accuracy);
    }
}
