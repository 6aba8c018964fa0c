//! Benchmark CLI: dataset generation, ANOVA feature ranking, the N-sweep over
//! ANN/SVM/KNN, and the rank/tangle oracle report.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use entclass_core::bench::{
    emit_reports, oracle_report, run_sweep, sample_splits, write_oracle_table, Problem,
};
use entclass_core::features::{
    anova_f_scores, feature_name, features18_from_row, rank_features, read_ranking_csv,
    write_ranking_csv,
};
use entclass_core::stategen::{
    build_eval_set, build_training_dataset, read_dataset, read_eval_set, write_dataset,
    write_eval_set,
};

#[derive(Parser)]
#[command(
    name = "entclass",
    about = "Three-qubit SLOCC/GME entanglement classification benchmark",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Target {
    Gme,
    Slocc,
}

impl Target {
    fn problem(self) -> Problem {
        match self {
            Target::Gme => Problem::Gme,
            Target::Slocc => Problem::Slocc,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate the labeled synthetic training dataset.
    GenTrain {
        /// States per SLOCC class.
        #[arg(long, default_value_t = 2000)]
        per_class: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate the noisy evaluation set (clean and noisy matrices).
    GenEval {
        /// States per SLOCC class.
        #[arg(long, default_value_t = 5)]
        per_class: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Compute ANOVA-F scores on a dataset and write the feature ranking.
    Anova {
        /// Training dataset CSV.
        #[arg(long)]
        train: PathBuf,
        /// Which labels group the samples.
        #[arg(long, value_enum)]
        target: Target,
        /// Accepted for interface uniformity; scoring is deterministic.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output ranking CSV path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the N-sweep: per feature count, train one ANN per split combo and
    /// attach SVM/KNN baselines; write the report CSVs.
    Sweep {
        #[arg(long, value_enum)]
        problem: Target,
        /// Training dataset CSV.
        #[arg(long)]
        train: PathBuf,
        /// Evaluation set CSV.
        #[arg(long)]
        eval: PathBuf,
        /// Feature-ranking CSV.
        #[arg(long)]
        ranking: PathBuf,
        /// Number of validation/test combinations.
        #[arg(long, default_value_t = 100)]
        combos: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output directory for the report files.
        #[arg(long)]
        out: PathBuf,
        /// Smallest feature count in the sweep.
        #[arg(long, default_value_t = 1)]
        n_min: usize,
        /// Largest feature count in the sweep.
        #[arg(long, default_value_t = 18)]
        n_max: usize,
    },
    /// Classify every evaluation state with the rank/tangle oracle and write
    /// the per-state table.
    Oracle {
        /// Evaluation set CSV.
        #[arg(long)]
        eval: PathBuf,
        /// Singular-value threshold for noisy states.
        #[arg(long, default_value_t = 0.25)]
        tol_noisy: f64,
        /// Singular-value threshold for the clean references.
        #[arg(long, default_value_t = 1e-10)]
        tol_clean: f64,
        /// Accepted for interface uniformity; the oracle is deterministic.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
}

fn run() -> entclass_core::Result<()> {
    match Cli::parse().command {
        Command::GenTrain {
            per_class,
            seed,
            out,
        } => {
            let rows = build_training_dataset(per_class, seed);
            write_dataset(&rows, &out)?;
            println!("wrote {} rows to {}", rows.len(), out.display());
        }
        Command::GenEval {
            per_class,
            seed,
            out,
        } => {
            let states = build_eval_set(per_class, seed)?;
            write_eval_set(&states, &out)?;
            println!("wrote {} states to {}", states.len(), out.display());
        }
        Command::Anova {
            train,
            target,
            seed: _,
            out,
        } => {
            let rows = read_dataset(&train)?;
            let feats: Vec<_> = rows.iter().map(features18_from_row).collect();
            let targets: Vec<u8> = rows
                .iter()
                .map(|r| match target {
                    Target::Gme => r.label.gme_flag,
                    Target::Slocc => r.label.code,
                })
                .collect();
            let scores = anova_f_scores(&feats, &targets)?;
            let ranking = rank_features(&scores);
            write_ranking_csv(&ranking, &out)?;
            let top: Vec<String> = ranking.order[..6].iter().map(|&i| feature_name(i)).collect();
            println!(
                "ranked 18 features from {} samples; top 6: {}",
                rows.len(),
                top.join(", ")
            );
            println!("wrote {}", out.display());
        }
        Command::Sweep {
            problem,
            train,
            eval,
            ranking,
            combos,
            seed,
            out,
            n_min,
            n_max,
        } => {
            let rows = read_dataset(&train)?;
            let eval_set = read_eval_set(&eval)?;
            let rank = read_ranking_csv(&ranking)?;
            let plan = sample_splits(&eval_set, combos, seed)?;
            let results = run_sweep(
                problem.problem(),
                &rows,
                &eval_set,
                &rank,
                n_min..=n_max,
                &plan,
                seed,
            )?;
            for r in &results {
                println!(
                    "{} N={:2} {}x{}x{}: A_T {:.3}±{:.3} (val {:.3}±{:.3}, test {:.3}±{:.3}, SVM {:.3}, KNN {:.3})",
                    r.problem.name(),
                    r.n,
                    r.topology[0],
                    r.topology[1],
                    r.topology[2],
                    r.a_total,
                    r.sd_total,
                    r.mu_val_acc,
                    r.sd_val_acc,
                    r.mu_test_acc,
                    r.sd_test_acc,
                    r.svm_accuracy,
                    r.knn_accuracy,
                );
            }
            let written = emit_reports(&results, None, &out)?;
            for path in written {
                println!("wrote {}", path.display());
            }
        }
        Command::Oracle {
            eval,
            tol_noisy,
            tol_clean,
            seed: _,
            out,
        } => {
            let eval_set = read_eval_set(&eval)?;
            let report = oracle_report(&eval_set, tol_noisy, tol_clean)?;
            std::fs::create_dir_all(&out)?;
            let path = out.join("oracle_table.csv");
            write_oracle_table(&report, &path)?;
            println!(
                "oracle accuracies: GME clean {:.3} noisy {:.3}; SLOCC clean {:.3} noisy {:.3}",
                report.gme_accuracy_clean,
                report.gme_accuracy_noisy,
                report.slocc_accuracy_clean,
                report.slocc_accuracy_noisy,
            );
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
