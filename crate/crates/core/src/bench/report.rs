//! The rank/tangle oracle table and CSV report emission.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use super::{Problem, RunResult};
use crate::entangle::{
    correlation_tensors, rank_triple, slocc_oracle, three_tangle, RankTriple, TANGLE_TOL_CLEAN,
    TANGLE_TOL_NOISY,
};
use crate::error::{Error, Result};
use crate::stategen::{EvalState, SloccClass};

/// Per-state oracle outcome on the clean reference and its noisy counterpart.
#[derive(Clone, Debug)]
pub struct OracleRow {
    pub state_id: String,
    pub class: SloccClass,
    pub fidelity: f64,
    pub clean_ranks: RankTriple,
    pub noisy_ranks: RankTriple,
    pub clean_tangle: f64,
    pub noisy_tangle: f64,
    pub gme_true: bool,
    pub clean_gme: bool,
    pub noisy_gme: bool,
    pub gme_correct: bool,
    pub clean_slocc: Option<SloccClass>,
    pub noisy_slocc: Option<SloccClass>,
    pub slocc_correct: bool,
}

#[derive(Clone, Debug)]
pub struct OracleReport {
    pub rows: Vec<OracleRow>,
    pub rank_tol_clean: f64,
    pub rank_tol_noisy: f64,
    pub gme_accuracy_clean: f64,
    pub gme_accuracy_noisy: f64,
    pub slocc_accuracy_clean: f64,
    pub slocc_accuracy_noisy: f64,
}

/// GME flag from the rank pattern: every unfolding rank 2 or 3.
fn gme_from_ranks(r: RankTriple) -> bool {
    r.r1 >= 2 && r.r2 >= 2 && r.r3 >= 2
}

/// Classify every evaluation state with the correlation-tensor ranks and the
/// 3-tangle, clean and noisy, and aggregate GME and SLOCC accuracies over the
/// noisy states.
pub fn oracle_report(
    eval_set: &[EvalState],
    rank_tol_noisy: f64,
    rank_tol_clean: f64,
) -> Result<OracleReport> {
    let mut rows = Vec::with_capacity(eval_set.len());
    for st in eval_set {
        let clean_t = correlation_tensors(&st.clean)?;
        let noisy_t = correlation_tensors(&st.noisy)?;
        let clean_ranks = rank_triple(&clean_t, rank_tol_clean);
        let noisy_ranks = rank_triple(&noisy_t, rank_tol_noisy);
        let clean_gme = gme_from_ranks(clean_ranks);
        let noisy_gme = gme_from_ranks(noisy_ranks);
        let gme_true = st.class.is_gme();
        let clean_slocc = slocc_oracle(&st.clean, rank_tol_clean, TANGLE_TOL_CLEAN)?;
        let noisy_slocc = slocc_oracle(&st.noisy, rank_tol_noisy, TANGLE_TOL_NOISY)?;
        rows.push(OracleRow {
            state_id: st.state_id.clone(),
            class: st.class,
            fidelity: st.fidelity,
            clean_ranks,
            noisy_ranks,
            clean_tangle: three_tangle(&st.clean),
            noisy_tangle: three_tangle(&st.noisy),
            gme_true,
            clean_gme,
            noisy_gme,
            gme_correct: noisy_gme == gme_true,
            clean_slocc,
            noisy_slocc,
            slocc_correct: noisy_slocc == Some(st.class),
        });
    }
    let frac = |f: &dyn Fn(&OracleRow) -> bool| {
        rows.iter().filter(|r| f(r)).count() as f64 / rows.len() as f64
    };
    Ok(OracleReport {
        gme_accuracy_clean: frac(&|r| r.clean_gme == r.gme_true),
        gme_accuracy_noisy: frac(&|r| r.gme_correct),
        slocc_accuracy_clean: frac(&|r| r.clean_slocc == Some(r.class)),
        slocc_accuracy_noisy: frac(&|r| r.slocc_correct),
        rank_tol_clean,
        rank_tol_noisy,
        rows,
    })
}

fn slocc_name(c: Option<SloccClass>) -> &'static str {
    c.map_or("UNKNOWN", SloccClass::name)
}

pub fn write_oracle_table(report: &OracleReport, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(
        w,
        "state_id,class,fidelity,r1_clean,r2_clean,r3_clean,r1_noisy,r2_noisy,r3_noisy,\
         tangle_clean,tangle_noisy,gme_true,gme_clean,gme_noisy,gme_correct,\
         slocc_clean,slocc_noisy,slocc_correct"
    )?;
    for r in &report.rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.state_id,
            r.class.name(),
            r.fidelity,
            r.clean_ranks.r1,
            r.clean_ranks.r2,
            r.clean_ranks.r3,
            r.noisy_ranks.r1,
            r.noisy_ranks.r2,
            r.noisy_ranks.r3,
            r.clean_tangle,
            r.noisy_tangle,
            u8::from(r.gme_true),
            u8::from(r.clean_gme),
            u8::from(r.noisy_gme),
            u8::from(r.gme_correct),
            slocc_name(r.clean_slocc),
            slocc_name(r.noisy_slocc),
            u8::from(r.slocc_correct),
        )?;
    }
    w.flush()?;
    Ok(())
}

fn write_sweep_csv(results: &[&RunResult], path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(
        w,
        "n,topology,p2,p3,true_params,mu_val_acc,sd_val_acc,mu_val_loss,sd_val_loss,\
         mu_test_acc,sd_test_acc,mu_test_loss,sd_test_loss,a_total,sd_total,delta,a_svm,a_knn"
    )?;
    for r in results {
        writeln!(
            w,
            "{},{}x{}x{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.n,
            r.topology[0],
            r.topology[1],
            r.topology[2],
            r.p2,
            r.p3,
            r.trainable_params,
            r.mu_val_acc,
            r.sd_val_acc,
            r.mu_val_loss,
            r.sd_val_loss,
            r.mu_test_acc,
            r.sd_test_acc,
            r.mu_test_loss,
            r.sd_test_loss,
            r.a_total,
            r.sd_total,
            r.delta,
            r.svm_accuracy,
            r.knn_accuracy,
        )?;
    }
    w.flush()?;
    Ok(())
}

fn write_confusion_csv(problem: Problem, results: &[&RunResult], path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "n,true_class,pred_class,count")?;
    for r in results {
        let k = r.confusion.classes();
        for t in 0..k {
            for p in 0..k {
                writeln!(
                    w,
                    "{},{},{},{}",
                    r.n,
                    problem.label_name(t),
                    problem.label_name(p),
                    r.confusion.count(t, p)
                )?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

fn write_summary(
    results: &[RunResult],
    oracle: Option<&OracleReport>,
    path: &Path,
) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "sweep summary")?;
    writeln!(
        w,
        "delta is the Pearson correlation of per-combination validation and test accuracies;"
    )?;
    writeln!(
        w,
        "spreads are sample standard deviations over the split combinations."
    )?;
    writeln!(w)?;
    for r in results {
        writeln!(
            w,
            "{} N={:2} {:>8}: A_v={:.3}±{:.3} A_t={:.3}±{:.3} A_T={:.3}±{:.3} SVM={:.3} KNN={:.3}",
            r.problem.name(),
            r.n,
            format!("{}x{}x{}", r.topology[0], r.topology[1], r.topology[2]),
            r.mu_val_acc,
            r.sd_val_acc,
            r.mu_test_acc,
            r.sd_test_acc,
            r.a_total,
            r.sd_total,
            r.svm_accuracy,
            r.knn_accuracy,
        )?;
    }
    if let Some(rep) = oracle {
        writeln!(w)?;
        writeln!(
            w,
            "oracle (rank tol clean {:.1e}, noisy {:.2}): GME accuracy clean {:.3} noisy {:.3}; \
             SLOCC accuracy clean {:.3} noisy {:.3}",
            rep.rank_tol_clean,
            rep.rank_tol_noisy,
            rep.gme_accuracy_clean,
            rep.gme_accuracy_noisy,
            rep.slocc_accuracy_clean,
            rep.slocc_accuracy_noisy,
        )?;
    }
    w.flush()?;
    Ok(())
}

/// Write `{problem}_sweep.csv` and `confusion_{problem}.csv` per problem
/// present in `results`, `oracle_table.csv` when an oracle report is given,
/// and a plain-text `summary.txt`. Nothing is written for empty results.
pub fn emit_reports(
    results: &[RunResult],
    oracle: Option<&OracleReport>,
    out_dir: &Path,
) -> Result<Vec<PathBuf>> {
    if results.is_empty() {
        return Err(Error::EmptyResults);
    }
    fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();
    for problem in [Problem::Slocc, Problem::Gme] {
        let subset: Vec<&RunResult> = results.iter().filter(|r| r.problem == problem).collect();
        if subset.is_empty() {
            continue;
        }
        let sweep_path = out_dir.join(format!("{}_sweep.csv", problem.name()));
        write_sweep_csv(&subset, &sweep_path)?;
        written.push(sweep_path);
        let confusion_path = out_dir.join(format!("confusion_{}.csv", problem.name()));
        write_confusion_csv(problem, &subset, &confusion_path)?;
        written.push(confusion_path);
    }
    if let Some(rep) = oracle {
        let path = out_dir.join("oracle_table.csv");
        write_oracle_table(rep, &path)?;
        written.push(path);
    }
    let summary = out_dir.join("summary.txt");
    write_summary(results, oracle, &summary)?;
    written.push(summary);
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entangle::{RANK_TOL_CLEAN, RANK_TOL_NOISY};
    use crate::stategen::build_eval_set;

    #[test]
    fn clean_oracle_is_perfect_on_eval_set() {
        let eval = build_eval_set(5, 12).unwrap();
        let report = oracle_report(&eval, RANK_TOL_NOISY, RANK_TOL_CLEAN).unwrap();
        assert_eq!(report.rows.len(), 30);
        assert_eq!(report.gme_accuracy_clean, 1.0);
        assert_eq!(report.slocc_accuracy_clean, 1.0);
        for row in &report.rows {
            match row.class {
                SloccClass::Sep => {
                    assert_eq!(row.clean_ranks, RankTriple { r1: 1, r2: 1, r3: 1 });
                    assert!(row.clean_tangle.abs() < 1e-12);
                }
                SloccClass::Ghz => {
                    assert!(gme_from_ranks(row.clean_ranks));
                    assert!(row.clean_tangle > 1e-6);
                }
                SloccClass::W => {
                    assert_eq!(row.clean_ranks, RankTriple { r1: 3, r2: 3, r3: 3 });
                    assert_eq!(row.clean_tangle, 0.0);
                }
                _ => assert!(!gme_from_ranks(row.clean_ranks)),
            }
        }
    }

    #[test]
    fn oracle_table_writes_one_row_per_state() {
        let dir = tempfile::tempdir().unwrap();
        let eval = build_eval_set(2, 4).unwrap();
        let report = oracle_report(&eval, RANK_TOL_NOISY, RANK_TOL_CLEAN).unwrap();
        let path = dir.path().join("oracle_table.csv");
        write_oracle_table(&report, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), 1 + 12);
        assert!(text.lines().nth(1).unwrap().starts_with("SEP_1,SEP,"));
    }

    #[test]
    fn empty_results_do_not_create_files() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("reports");
        assert!(matches!(
            emit_reports(&[], None, &out),
            Err(Error::EmptyResults)
        ));
        assert!(!out.exists());
    }
}
