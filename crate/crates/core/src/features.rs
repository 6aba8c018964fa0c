//! Density-matrix flattening, the 18 canonical-form features, ANOVA-F
//! scoring, and ranked top-N selection.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::quantum::DensityMatrix;
use crate::stategen::DatasetRow;

/// The canonical-form support: rows/columns {0, 4, 5, 6, 7}.
const SUPPORT: [usize; 5] = [0, 4, 5, 6, 7];

/// The 18 retained density-matrix elements, in feature-table order:
/// 14 real parts then 4 imaginary parts.
pub const FEATURE_ELEMENTS: [(Part, usize, usize); 18] = [
    (Part::Re, 0, 0),
    (Part::Re, 0, 4),
    (Part::Re, 0, 5),
    (Part::Re, 0, 6),
    (Part::Re, 0, 7),
    (Part::Re, 4, 4),
    (Part::Re, 4, 5),
    (Part::Re, 4, 6),
    (Part::Re, 4, 7),
    (Part::Re, 5, 5),
    (Part::Re, 5, 6),
    (Part::Re, 5, 7),
    (Part::Re, 6, 6),
    (Part::Re, 6, 7),
    (Part::Im, 0, 4),
    (Part::Im, 4, 5),
    (Part::Im, 4, 6),
    (Part::Im, 4, 7),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Part {
    Re,
    Im,
}

pub fn feature_name(index: usize) -> String {
    let (part, r, c) = FEATURE_ELEMENTS[index];
    let tag = match part {
        Part::Re => "Re",
        Part::Im => "Im",
    };
    format!("{tag}_rho_{r}{c}")
}

/// The 18 named density-matrix elements, feature-table order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FeatureVector18(pub [f64; 18]);

/// First 64 entries row-major Re(ρ), next 64 row-major Im(ρ).
pub fn flatten(rho: &DensityMatrix) -> [f64; 128] {
    let mut out = [0.0; 128];
    for r in 0..8 {
        for c in 0..8 {
            out[8 * r + c] = rho.entry(r, c).re;
            out[64 + 8 * r + c] = rho.entry(r, c).im;
        }
    }
    out
}

pub fn extract_features18(rho: &DensityMatrix) -> FeatureVector18 {
    let mut v = [0.0; 18];
    for (i, &(part, r, c)) in FEATURE_ELEMENTS.iter().enumerate() {
        let e = rho.entry(r, c);
        v[i] = match part {
            Part::Re => e.re,
            Part::Im => e.im,
        };
    }
    FeatureVector18(v)
}

/// Same extraction from a stored dataset row (no matrix reconstruction).
pub fn features18_from_row(row: &DatasetRow) -> FeatureVector18 {
    let mut v = [0.0; 18];
    for (i, &(part, r, c)) in FEATURE_ELEMENTS.iter().enumerate() {
        let flat = 8 * r + c;
        v[i] = match part {
            Part::Re => row.v_re[flat],
            Part::Im => row.v_im[flat],
        };
    }
    FeatureVector18(v)
}

/// Indices of the flattened vector outside the canonical-form support; these
/// are identically zero for clean canonical states.
pub fn off_support_flat_indices() -> Vec<usize> {
    let mut out = Vec::new();
    for r in 0..8 {
        for c in 0..8 {
            if !(SUPPORT.contains(&r) && SUPPORT.contains(&c)) {
                out.push(8 * r + c);
                out.push(64 + 8 * r + c);
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AnovaFlag {
    Normal,
    /// Zero within-group variance with nonzero between-group variance; the
    /// score is pinned to the largest finite value so the ranking stays total.
    PerfectSeparation,
    /// Feature constant across all samples; score 0.
    Constant,
}

#[derive(Clone, Debug)]
pub struct AnovaScores {
    pub scores: [f64; 18],
    pub flags: [AnovaFlag; 18],
}

/// One-way ANOVA F statistic of a single feature column against group labels.
pub fn one_way_f(values: &[f64], targets: &[u8]) -> (f64, AnovaFlag) {
    assert_eq!(values.len(), targets.len());
    let n = values.len() as f64;
    let mut labels: Vec<u8> = targets.to_vec();
    labels.sort_unstable();
    labels.dedup();
    let k = labels.len();

    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if min == max {
        return (0.0, AnovaFlag::Constant);
    }

    let grand_mean = values.iter().sum::<f64>() / n;
    let mut ssb = 0.0;
    let mut ssw = 0.0;
    for &label in &labels {
        let group: Vec<f64> = values
            .iter()
            .zip(targets)
            .filter(|(_, &t)| t == label)
            .map(|(&v, _)| v)
            .collect();
        let ng = group.len() as f64;
        let mean = group.iter().sum::<f64>() / ng;
        ssb += ng * (mean - grand_mean) * (mean - grand_mean);
        ssw += group.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>();
    }
    if ssw == 0.0 {
        return (f64::MAX, AnovaFlag::PerfectSeparation);
    }
    let f = (ssb / (k as f64 - 1.0)) / (ssw / (n - k as f64));
    (f, AnovaFlag::Normal)
}

fn check_groups(targets: &[u8]) -> Result<()> {
    let mut labels: Vec<u8> = targets.to_vec();
    labels.sort_unstable();
    labels.dedup();
    let k = labels.len();
    if k < 2 {
        return Err(Error::AnovaGroups(format!("got {k} group(s)")));
    }
    for &label in &labels {
        let count = targets.iter().filter(|&&t| t == label).count();
        if count < 2 {
            return Err(Error::AnovaGroups(format!(
                "group {label} has {count} sample(s)"
            )));
        }
    }
    if targets.len() <= k {
        return Err(Error::AnovaGroups(format!(
            "n = {} does not exceed k = {k}",
            targets.len()
        )));
    }
    Ok(())
}

/// ANOVA-F score per feature:
/// F = [SSB/(k−1)] / [SSW/(n−k)].
pub fn anova_f_scores(features: &[FeatureVector18], targets: &[u8]) -> Result<AnovaScores> {
    assert_eq!(features.len(), targets.len());
    check_groups(targets)?;
    let mut scores = [0.0; 18];
    let mut flags = [AnovaFlag::Normal; 18];
    let mut column = vec![0.0; features.len()];
    for feat in 0..18 {
        for (slot, fv) in column.iter_mut().zip(features) {
            *slot = fv.0[feat];
        }
        let (f, flag) = one_way_f(&column, targets);
        scores[feat] = f;
        flags[feat] = flag;
    }
    Ok(AnovaScores { scores, flags })
}

/// Feature order by descending score; ties break toward the lower feature
/// index.
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureRanking {
    pub order: [usize; 18],
    pub scores: [f64; 18],
}

impl FeatureRanking {
    fn check(order: &[usize; 18], scores: &[f64; 18]) -> Result<()> {
        let mut seen = [false; 18];
        for &i in order {
            if i >= 18 || seen[i] {
                return Err(Error::InvalidRanking { expected: 18 });
            }
            seen[i] = true;
        }
        for w in order.windows(2) {
            if scores[w[0]] < scores[w[1]] {
                return Err(Error::InvalidRanking { expected: 18 });
            }
        }
        Ok(())
    }

    pub fn new(order: [usize; 18], scores: [f64; 18]) -> Result<Self> {
        Self::check(&order, &scores)?;
        Ok(Self { order, scores })
    }
}

pub fn rank_features(scores: &AnovaScores) -> FeatureRanking {
    let mut order: Vec<usize> = (0..18).collect();
    order.sort_by(|&a, &b| {
        scores.scores[b]
            .total_cmp(&scores.scores[a])
            .then(a.cmp(&b))
    });
    FeatureRanking {
        order: order.try_into().expect("18 indices"),
        scores: scores.scores,
    }
}

/// The feature values at the top N ranked positions, in ranking order.
pub fn select_top_n(fv: &FeatureVector18, ranking: &FeatureRanking, n: usize) -> Result<Vec<f64>> {
    if n == 0 || n > 18 {
        return Err(Error::TopNOutOfRange { n, total: 18 });
    }
    Ok(ranking.order[..n].iter().map(|&i| fv.0[i]).collect())
}

/// CSV layout: `feature_index,feature_name,score,rank`, rows ordered by rank.
pub fn write_ranking_csv(ranking: &FeatureRanking, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "feature_index,feature_name,score,rank")?;
    for (rank, &idx) in ranking.order.iter().enumerate() {
        writeln!(
            w,
            "{idx},{},{},{rank}",
            feature_name(idx),
            ranking.scores[idx]
        )?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_ranking_csv(path: &Path) -> Result<FeatureRanking> {
    let reader = BufReader::new(File::open(path)?);
    let mut lines = reader.lines();
    let first = lines.next().transpose()?;
    if first.as_deref() != Some("feature_index,feature_name,score,rank") {
        return Err(Error::MalformedHeader {
            path: path.to_path_buf(),
            expected_prefix: "feature_index,feature_name".into(),
        });
    }
    let mut order = [usize::MAX; 18];
    let mut scores = [0.0; 18];
    let mut count = 0usize;
    for (i, line) in lines.enumerate() {
        let line_no = i + 2;
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(Error::ColumnCount {
                path: path.to_path_buf(),
                line: line_no,
                expected: 4,
                found: fields.len(),
            });
        }
        let idx: usize = fields[0].parse().map_err(|_| Error::NonNumeric {
            path: path.to_path_buf(),
            line: line_no,
            column: "feature_index".into(),
            token: fields[0].to_string(),
        })?;
        let score = parse_score(fields[2], path, line_no)?;
        let rank: usize = fields[3].parse().map_err(|_| Error::NonNumeric {
            path: path.to_path_buf(),
            line: line_no,
            column: "rank".into(),
            token: fields[3].to_string(),
        })?;
        if idx >= 18 || rank >= 18 {
            return Err(Error::InvalidRanking { expected: 18 });
        }
        order[rank] = idx;
        scores[idx] = score;
        count += 1;
    }
    if count != 18 {
        return Err(Error::InvalidRanking { expected: 18 });
    }
    FeatureRanking::new(order, scores)
}

fn parse_score(token: &str, path: &Path, line: usize) -> Result<f64> {
    token.parse().map_err(|_| Error::NonNumeric {
        path: path.to_path_buf(),
        line,
        column: "score".into(),
        token: token.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{density_from_ket, ket_from_canonical, PureState};
    use crate::seed;
    use crate::stategen::{sample_class_coefficients, CanonicalCoefficients, SloccClass};
    use num_complex::Complex64;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn canonical(l: [f64; 5], phi: f64) -> DensityMatrix {
        density_from_ket(&ket_from_canonical(
            &CanonicalCoefficients::new(l, phi).unwrap(),
        ))
    }

    fn ghz() -> DensityMatrix {
        canonical([FRAC_1_SQRT_2, 0.0, 0.0, 0.0, FRAC_1_SQRT_2], 0.0)
    }

    #[test]
    fn flatten_basis_state() {
        let mut amps = [Complex64::new(0.0, 0.0); 8];
        amps[0] = Complex64::new(1.0, 0.0);
        let rho = density_from_ket(&PureState::new(amps).unwrap());
        let v = flatten(&rho);
        assert_eq!(v[0], 1.0);
        assert!(v[1..].iter().all(|&x| x == 0.0));
    }

    #[test]
    fn flatten_ghz_positions() {
        let v = flatten(&ghz());
        for idx in [0, 7, 56, 63] {
            assert!((v[idx] - 0.5).abs() < 1e-15);
        }
        // Hermiticity echo: imaginary part is antisymmetric
        for r in 0..8 {
            for c in 0..8 {
                assert!((v[64 + 8 * r + c] + v[64 + 8 * c + r]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn features_of_ghz() {
        let f = extract_features18(&ghz());
        for (i, &(part, r, c)) in FEATURE_ELEMENTS.iter().enumerate() {
            let want = match (part, r, c) {
                (Part::Re, 0, 0) | (Part::Re, 0, 7) => 0.5,
                _ => 0.0,
            };
            assert!((f.0[i] - want).abs() < 1e-15, "{}", feature_name(i));
        }
    }

    #[test]
    fn features_of_basis_100() {
        let rho = canonical([0.0, 1.0, 0.0, 0.0, 0.0], 0.0);
        let f = extract_features18(&rho);
        for (i, &(part, r, c)) in FEATURE_ELEMENTS.iter().enumerate() {
            let want = if (part, r, c) == (Part::Re, 4, 4) { 1.0 } else { 0.0 };
            assert_eq!(f.0[i], want, "{}", feature_name(i));
        }
    }

    #[test]
    fn features_of_phase_state() {
        let rho = canonical([FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0, 0.0, 0.0], PI / 2.0);
        let f = extract_features18(&rho);
        let at = |name: &str| {
            let i = (0..18).find(|&i| feature_name(i) == name).unwrap();
            f.0[i]
        };
        assert!((at("Im_rho_04") + 0.5).abs() < 1e-15);
        assert!((at("Re_rho_00") - 0.5).abs() < 1e-15);
        assert!((at("Re_rho_44") - 0.5).abs() < 1e-15);
        assert!(at("Re_rho_04").abs() < 1e-15);
    }

    #[test]
    fn features_agree_with_flatten() {
        let mut rng = seed::rng_from(3, &[]);
        let c = sample_class_coefficients(SloccClass::Ghz, &mut rng);
        let rho = density_from_ket(&ket_from_canonical(&c));
        let flat = flatten(&rho);
        let f = extract_features18(&rho);
        for (i, &(part, r, c)) in FEATURE_ELEMENTS.iter().enumerate() {
            let idx = match part {
                Part::Re => 8 * r + c,
                Part::Im => 64 + 8 * r + c,
            };
            assert_eq!(f.0[i], flat[idx]);
        }
    }

    #[test]
    fn clean_states_vanish_off_support() {
        let mut rng = seed::rng_from(8, &[]);
        let off = off_support_flat_indices();
        assert_eq!(off.len(), 2 * (64 - 25));
        for class in SloccClass::ALL {
            let c = sample_class_coefficients(class, &mut rng);
            let flat = flatten(&density_from_ket(&ket_from_canonical(&c)));
            for &idx in &off {
                assert!(flat[idx].abs() < 1e-12);
            }
        }
    }

    #[test]
    fn hand_computed_f_statistic() {
        // groups {1,2} and {3,4}: F = (4/1)/(1/2) = 8
        let (f, flag) = one_way_f(&[1.0, 2.0, 3.0, 4.0], &[0, 0, 1, 1]);
        assert!((f - 8.0).abs() < 1e-12);
        assert_eq!(flag, AnovaFlag::Normal);
    }

    #[test]
    fn constant_and_separating_features_are_flagged() {
        let (f, flag) = one_way_f(&[2.5; 6], &[0, 0, 0, 1, 1, 1]);
        assert_eq!((f, flag), (0.0, AnovaFlag::Constant));
        let (f, flag) = one_way_f(&[1.0, 1.0, 1.0, 5.0, 5.0, 5.0], &[0, 0, 0, 1, 1, 1]);
        assert_eq!(flag, AnovaFlag::PerfectSeparation);
        assert_eq!(f, f64::MAX);
    }

    #[test]
    fn anova_rejects_degenerate_groupings() {
        let fv = FeatureVector18([0.0; 18]);
        assert!(anova_f_scores(&[fv, fv], &[0, 0]).is_err());
        assert!(anova_f_scores(&[fv, fv, fv], &[0, 0, 1]).is_err());
    }

    #[test]
    fn anova_is_invariant_under_relabeling_and_permutation() {
        let mut rng = seed::rng_from(15, &[]);
        let mut features = Vec::new();
        let mut targets = Vec::new();
        for class in [SloccClass::Sep, SloccClass::Ghz, SloccClass::W] {
            for _ in 0..20 {
                let c = sample_class_coefficients(class, &mut rng);
                features.push(extract_features18(&density_from_ket(&ket_from_canonical(&c))));
                targets.push(class.code());
            }
        }
        let base = anova_f_scores(&features, &targets).unwrap();

        let relabeled: Vec<u8> = targets.iter().map(|&t| (t + 3) * 2).collect();
        let rel = anova_f_scores(&features, &relabeled).unwrap();
        for i in 0..18 {
            assert!((base.scores[i] - rel.scores[i]).abs() < 1e-9 * base.scores[i].abs().max(1.0));
        }

        let mut perm: Vec<usize> = (0..features.len()).collect();
        perm.reverse();
        perm.swap(0, 10);
        let pf: Vec<FeatureVector18> = perm.iter().map(|&i| features[i]).collect();
        let pt: Vec<u8> = perm.iter().map(|&i| targets[i]).collect();
        let per = anova_f_scores(&pf, &pt).unwrap();
        for i in 0..18 {
            assert!((base.scores[i] - per.scores[i]).abs() < 1e-9 * base.scores[i].abs().max(1.0));
        }
    }

    #[test]
    fn f_is_invariant_under_affine_transforms() {
        let values = [0.1, 0.4, 0.3, 0.9, 0.8, 0.7, 0.2, 0.6];
        let targets = [0, 0, 0, 0, 1, 1, 1, 1];
        let (f0, _) = one_way_f(&values, &targets);
        let scaled: Vec<f64> = values.iter().map(|v| -3.7 * v + 11.0).collect();
        let (f1, _) = one_way_f(&scaled, &targets);
        assert!((f0 - f1).abs() < 1e-9 * f0.max(1.0));
    }

    #[test]
    fn equal_scores_rank_by_index() {
        let scores = AnovaScores {
            scores: [1.0; 18],
            flags: [AnovaFlag::Normal; 18],
        };
        let ranking = rank_features(&scores);
        let identity: Vec<usize> = (0..18).collect();
        assert_eq!(ranking.order.to_vec(), identity);
    }

    // Published feature-score tables, shipped as a regression fixture: the
    // ranking of these fixed scores must reproduce the published order.
    const FIXTURE_GME: [f64; 18] = [
        0.08, 0.19, 208.61, 195.36, 391.70, 53.90, 1.20, 0.20, 2.31, 0.12, 286.44, 92.00, 11.17,
        44.76, 0.24, 0.00, 0.03, 2.30,
    ];
    const FIXTURE_SLOCC: [f64; 18] = [
        70.43, 1.27, 291.39, 283.19, 315.85, 25.85, 0.40, 1.48, 2.54, 80.63, 110.98, 98.17, 58.51,
        95.44, 0.38, 1.49, 0.25, 0.34,
    ];

    #[test]
    fn fixture_gme_order_matches_published_list() {
        let ranking = rank_features(&AnovaScores {
            scores: FIXTURE_GME,
            flags: [AnovaFlag::Normal; 18],
        });
        let names: Vec<String> = ranking.order.iter().map(|&i| feature_name(i)).collect();
        assert_eq!(
            &names[..4],
            &["Re_rho_07", "Re_rho_56", "Re_rho_05", "Re_rho_06"]
        );
    }

    #[test]
    fn fixture_slocc_order_matches_published_list() {
        let ranking = rank_features(&AnovaScores {
            scores: FIXTURE_SLOCC,
            flags: [AnovaFlag::Normal; 18],
        });
        let names: Vec<String> = ranking.order.iter().map(|&i| feature_name(i)).collect();
        assert_eq!(
            &names[..6],
            &[
                "Re_rho_07",
                "Re_rho_05",
                "Re_rho_06",
                "Re_rho_56",
                "Re_rho_57",
                "Re_rho_67"
            ]
        );
    }

    #[test]
    fn top_n_selection() {
        let ranking = rank_features(&AnovaScores {
            scores: FIXTURE_GME,
            flags: [AnovaFlag::Normal; 18],
        });
        let mut fv = FeatureVector18([0.0; 18]);
        for (i, v) in fv.0.iter_mut().enumerate() {
            *v = i as f64;
        }
        let top1 = select_top_n(&fv, &ranking, 1).unwrap();
        assert_eq!(top1, vec![4.0]); // Re_rho_07 is feature index 4
        let top2 = select_top_n(&fv, &ranking, 2).unwrap();
        assert_eq!(top2, vec![4.0, 10.0]); // then Re_rho_56
        let full = select_top_n(&fv, &ranking, 18).unwrap();
        let mut sorted = full.clone();
        sorted.sort_by(f64::total_cmp);
        assert_eq!(sorted, (0..18).map(|i| i as f64).collect::<Vec<_>>());
        assert!(select_top_n(&fv, &ranking, 0).is_err());
        assert!(select_top_n(&fv, &ranking, 19).is_err());
    }

    #[test]
    fn ranking_csv_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ranking.csv");
        let ranking = rank_features(&AnovaScores {
            scores: FIXTURE_SLOCC,
            flags: [AnovaFlag::Normal; 18],
        });
        write_ranking_csv(&ranking, &path).unwrap();
        let back = read_ranking_csv(&path).unwrap();
        assert_eq!(ranking, back);
    }

    #[test]
    fn ranking_csv_rejects_non_permutations() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ranking.csv");
        let ranking = rank_features(&AnovaScores {
            scores: FIXTURE_GME,
            flags: [AnovaFlag::Normal; 18],
        });
        write_ranking_csv(&ranking, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let mut lines: Vec<String> = text.lines().map(String::from).collect();
        // duplicate the first feature index onto the second rank
        let first_idx = lines[1].split(',').next().unwrap().to_string();
        let rest: Vec<&str> = lines[2].split(',').skip(1).collect();
        lines[2] = format!("{first_idx},{}", rest.join(","));
        std::fs::write(&path, lines.join("\n")).unwrap();
        assert!(matches!(
            read_ranking_csv(&path),
            Err(crate::error::Error::InvalidRanking { .. })
        ));
    }
}
