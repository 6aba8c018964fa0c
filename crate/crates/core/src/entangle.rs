//! Ground-truth entanglement oracles: correlation tensors, mode unfoldings,
//! numerical ranks, the rank classification table, the 3-tangle, and the
//! combined SLOCC oracle.

use crate::error::Result;
use crate::quantum::{pauli_expectation, DensityMatrix, PauliAxis, PauliIndex};
use crate::stategen::SloccClass;

/// Default singular-value threshold for clean (simulated) states.
pub const RANK_TOL_CLEAN: f64 = 1e-10;
/// Default singular-value threshold for noisy evaluation states.
pub const RANK_TOL_NOISY: f64 = 0.25;
/// GHZ/W tangle split for clean states.
pub const TANGLE_TOL_CLEAN: f64 = 1e-6;
/// GHZ/W tangle split for noisy states, applied only after the ranks
/// establish GME.
pub const TANGLE_TOL_NOISY: f64 = 0.05;

const AXES: [PauliAxis; 3] = [PauliAxis::X, PauliAxis::Y, PauliAxis::Z];

/// The 63 nontrivial Pauli expectation values of a three-qubit state.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationTensors {
    pub t1: [f64; 3],
    pub t2: [f64; 3],
    pub t3: [f64; 3],
    pub t12: [[f64; 3]; 3],
    pub t13: [[f64; 3]; 3],
    pub t23: [[f64; 3]; 3],
    pub t123: [[[f64; 3]; 3]; 3],
}

/// Ranks of the three mode unfoldings of the three-qubit correlation tensor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RankTriple {
    pub r1: usize,
    pub r2: usize,
    pub r3: usize,
}

/// Entanglement verdict of the rank table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RankClass {
    Gme,
    Bs1,
    Bs2,
    Bs3,
    Sep,
    Unknown,
}

/// Compute every single-, two- and three-qubit correlation tensor via
/// tr(ρ σ_i ⊗ σ_j ⊗ σ_k).
pub fn correlation_tensors(rho: &DensityMatrix) -> Result<CorrelationTensors> {
    let e = |a, b, c| pauli_expectation(rho, &PauliIndex([a, b, c]));
    let mut t = CorrelationTensors {
        t1: [0.0; 3],
        t2: [0.0; 3],
        t3: [0.0; 3],
        t12: [[0.0; 3]; 3],
        t13: [[0.0; 3]; 3],
        t23: [[0.0; 3]; 3],
        t123: [[[0.0; 3]; 3]; 3],
    };
    for (i, &a) in AXES.iter().enumerate() {
        t.t1[i] = e(a, PauliAxis::I, PauliAxis::I)?;
        t.t2[i] = e(PauliAxis::I, a, PauliAxis::I)?;
        t.t3[i] = e(PauliAxis::I, PauliAxis::I, a)?;
        for (j, &b) in AXES.iter().enumerate() {
            t.t12[i][j] = e(a, b, PauliAxis::I)?;
            t.t13[i][j] = e(a, PauliAxis::I, b)?;
            t.t23[i][j] = e(PauliAxis::I, a, b)?;
            for (k, &c) in AXES.iter().enumerate() {
                t.t123[i][j][k] = e(a, b, c)?;
            }
        }
    }
    Ok(t)
}

/// Reshape the 3×3×3 tensor into 3×9 with the chosen index as rows:
/// mode 1 → M[i][3j+k], mode 2 → M[j][3i+k], mode 3 → M[k][3i+j].
pub fn mode_unfolding(t123: &[[[f64; 3]; 3]; 3], mode: usize) -> [[f64; 9]; 3] {
    assert!((1..=3).contains(&mode), "mode must be 1, 2 or 3");
    let mut m = [[0.0; 9]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                match mode {
                    1 => m[i][3 * j + k] = t123[i][j][k],
                    2 => m[j][3 * i + k] = t123[i][j][k],
                    _ => m[k][3 * i + j] = t123[i][j][k],
                }
            }
        }
    }
    m
}

/// Count singular values strictly above `tol`.
///
/// The singular values are the square roots of the eigenvalues of the 3×3
/// Gramian M·Mᵀ, diagonalized implicitly: cyclic Jacobi rotations are applied
/// to the rows of M itself (one-sided Jacobi), never forming the Gramian.
/// Forming M·Mᵀ explicitly would square the dynamic range and drown singular
/// values below ~1e-8 in rounding noise, defeating the 1e-10 threshold.
pub fn numerical_rank(m: &[[f64; 9]; 3], tol: f64) -> usize {
    assert!(tol > 0.0, "tolerance must be positive");
    let mut rows = *m;
    let dot = |a: &[f64; 9], b: &[f64; 9]| -> f64 { a.iter().zip(b).map(|(x, y)| x * y).sum() };
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..3 {
            for q in (p + 1)..3 {
                let app = dot(&rows[p], &rows[p]);
                let aqq = dot(&rows[q], &rows[q]);
                let apq = dot(&rows[p], &rows[q]);
                if apq.abs() <= 1e-30 || apq.abs() <= 1e-15 * (app * aqq).sqrt() {
                    continue;
                }
                rotated = true;
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..9 {
                    let rp = rows[p][k];
                    let rq = rows[q][k];
                    rows[p][k] = c * rp - s * rq;
                    rows[q][k] = s * rp + c * rq;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    rows.iter()
        .filter(|row| dot(row, row).sqrt() > tol)
        .count()
}

/// Ranks of all three unfoldings at the given tolerance.
pub fn rank_triple(t: &CorrelationTensors, tol: f64) -> RankTriple {
    RankTriple {
        r1: numerical_rank(&mode_unfolding(&t.t123, 1), tol),
        r2: numerical_rank(&mode_unfolding(&t.t123, 2), tol),
        r3: numerical_rank(&mode_unfolding(&t.t123, 3), tol),
    }
}

/// The rank table: (3,3,3) and (2,2,2) are genuinely entangled, a single
/// rank-1 unfolding marks the separated qubit, (1,1,1) is fully separable.
/// Anything else is unclassified.
pub fn classify_by_ranks(r: RankTriple) -> RankClass {
    match (r.r1, r.r2, r.r3) {
        (3, 3, 3) | (2, 2, 2) => RankClass::Gme,
        (1, 3, 3) => RankClass::Bs1,
        (3, 1, 3) => RankClass::Bs2,
        (3, 3, 1) => RankClass::Bs3,
        (1, 1, 1) => RankClass::Sep,
        _ => RankClass::Unknown,
    }
}

/// τ₁₂₃ = 4·ρ₀₀·ρ₇₇ = 4|λ₀|²|λ₄|² for canonical-form states.
pub fn three_tangle(rho: &DensityMatrix) -> f64 {
    4.0 * rho.entry(0, 0).re * rho.entry(7, 7).re
}

/// Full SLOCC oracle: ranks pick the coarse class, the 3-tangle splits GME
/// into GHZ (τ above `tangle_tol`) and W. `None` means the rank pattern is
/// not in the table.
pub fn slocc_oracle(
    rho: &DensityMatrix,
    rank_tol: f64,
    tangle_tol: f64,
) -> Result<Option<SloccClass>> {
    let t = correlation_tensors(rho)?;
    let ranks = rank_triple(&t, rank_tol);
    Ok(match classify_by_ranks(ranks) {
        RankClass::Gme => Some(if three_tangle(rho) > tangle_tol {
            SloccClass::Ghz
        } else {
            SloccClass::W
        }),
        RankClass::Bs1 => Some(SloccClass::Bs1),
        RankClass::Bs2 => Some(SloccClass::Bs2),
        RankClass::Bs3 => Some(SloccClass::Bs3),
        RankClass::Sep => Some(SloccClass::Sep),
        RankClass::Unknown => None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{density_from_ket, ket_from_canonical};
    use crate::seed;
    use crate::stategen::{sample_class_coefficients, CanonicalCoefficients};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn canonical(l: [f64; 5], phi: f64) -> DensityMatrix {
        density_from_ket(&ket_from_canonical(
            &CanonicalCoefficients::new(l, phi).unwrap(),
        ))
    }

    fn ghz() -> DensityMatrix {
        canonical([FRAC_1_SQRT_2, 0.0, 0.0, 0.0, FRAC_1_SQRT_2], 0.0)
    }

    #[test]
    fn tensors_of_basis_state() {
        let t = correlation_tensors(&canonical([1.0, 0.0, 0.0, 0.0, 0.0], 0.0)).unwrap();
        assert_eq!(t.t1, [0.0, 0.0, 1.0]);
        assert_eq!(t.t2, [0.0, 0.0, 1.0]);
        assert_eq!(t.t3, [0.0, 0.0, 1.0]);
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let want = if (i, j, k) == (2, 2, 2) { 1.0 } else { 0.0 };
                    assert!((t.t123[i][j][k] - want).abs() < 1e-13, "({i},{j},{k})");
                }
            }
        }
    }

    #[test]
    fn tensors_of_ghz() {
        let t = correlation_tensors(&ghz()).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let want = match (i, j, k) {
                        (0, 0, 0) => 1.0,
                        (0, 1, 1) | (1, 0, 1) | (1, 1, 0) => -1.0,
                        _ => 0.0,
                    };
                    assert!((t.t123[i][j][k] - want).abs() < 1e-13, "({i},{j},{k})");
                }
            }
        }
    }

    #[test]
    fn tensors_of_maximally_mixed_vanish() {
        let t = correlation_tensors(&DensityMatrix::maximally_mixed()).unwrap();
        let mut total = 0.0;
        for i in 0..3 {
            total += t.t1[i].abs() + t.t2[i].abs() + t.t3[i].abs();
            for j in 0..3 {
                total += t.t12[i][j].abs() + t.t13[i][j].abs() + t.t23[i][j].abs();
                for k in 0..3 {
                    total += t.t123[i][j][k].abs();
                }
            }
        }
        assert!(total < 1e-12);
    }

    #[test]
    fn unfolding_layout() {
        let mut t = [[[0.0; 3]; 3]; 3];
        t[0][1][2] = 1.0; // t[X][Y][Z]
        let m1 = mode_unfolding(&t, 1);
        assert_eq!(m1[0][5], 1.0);
        assert_eq!(m1.iter().flatten().map(|v| v.abs()).sum::<f64>(), 1.0);
        let m2 = mode_unfolding(&t, 2);
        assert_eq!(m2[1][2], 1.0);
        let m3 = mode_unfolding(&t, 3);
        assert_eq!(m3[2][1], 1.0);
        let zero = mode_unfolding(&[[[0.0; 3]; 3]; 3], 1);
        assert!(zero.iter().flatten().all(|&v| v == 0.0));
    }

    #[test]
    fn unfolding_is_lossless() {
        let t = correlation_tensors(&ghz()).unwrap();
        let full: f64 = t
            .t123
            .iter()
            .flatten()
            .flatten()
            .map(|v| v * v)
            .sum();
        for mode in 1..=3 {
            let m = mode_unfolding(&t.t123, mode);
            let sum: f64 = m.iter().flatten().map(|v| v * v).sum();
            assert!((sum - full).abs() < 1e-12);
        }
    }

    #[test]
    fn rank_of_zero_matrix() {
        assert_eq!(numerical_rank(&[[0.0; 9]; 3], 0.25), 0);
        assert_eq!(numerical_rank(&[[0.0; 9]; 3], 1e-10), 0);
    }

    #[test]
    fn rank_thresholds_on_constructed_singular_values() {
        // M = R · diag(1, 0.2, 1e-12) · Pᵀ with R a rotation and P an
        // orthonormal 9×3 frame, built by hand
        let (c, s) = (0.6, 0.8);
        let r = [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]];
        let sv = [1.0, 0.2, 1e-12];
        let mut p = [[0.0; 9]; 3];
        p[0][0] = 1.0;
        p[1][4] = FRAC_1_SQRT_2;
        p[1][5] = FRAC_1_SQRT_2;
        p[2][8] = 1.0;
        let mut m = [[0.0; 9]; 3];
        for i in 0..3 {
            for k in 0..9 {
                for j in 0..3 {
                    m[i][k] += r[i][j] * sv[j] * p[j][k];
                }
            }
        }
        assert_eq!(numerical_rank(&m, 0.25), 1);
        assert_eq!(numerical_rank(&m, 1e-10), 2);
    }

    #[test]
    fn rank_is_monotone_in_tolerance() {
        let t = correlation_tensors(&ghz()).unwrap();
        let m = mode_unfolding(&t.t123, 1);
        let mut prev = usize::MAX;
        for tol in [1e-12, 1e-6, 0.1, 0.5, 1.1, 2.0] {
            let r = numerical_rank(&m, tol);
            assert!(r <= prev);
            prev = r;
        }
    }

    #[test]
    fn ghz_unfolding_rank_is_two() {
        let t = correlation_tensors(&ghz()).unwrap();
        assert_eq!(numerical_rank(&mode_unfolding(&t.t123, 1), 1e-10), 2);
        assert_eq!(rank_triple(&t, 1e-10), RankTriple { r1: 2, r2: 2, r3: 2 });
    }

    #[test]
    fn rank_table() {
        let rt = |r1, r2, r3| RankTriple { r1, r2, r3 };
        assert_eq!(classify_by_ranks(rt(3, 3, 3)), RankClass::Gme);
        assert_eq!(classify_by_ranks(rt(2, 2, 2)), RankClass::Gme);
        assert_eq!(classify_by_ranks(rt(1, 3, 3)), RankClass::Bs1);
        assert_eq!(classify_by_ranks(rt(3, 1, 3)), RankClass::Bs2);
        assert_eq!(classify_by_ranks(rt(3, 3, 1)), RankClass::Bs3);
        assert_eq!(classify_by_ranks(rt(1, 1, 1)), RankClass::Sep);
        assert_eq!(classify_by_ranks(rt(1, 2, 3)), RankClass::Unknown);
    }

    #[test]
    fn tangle_values() {
        assert!((three_tangle(&ghz()) - 1.0).abs() < 1e-12);
        let w = canonical([0.6, 0.0, 0.5, (1.0f64 - 0.36 - 0.25).sqrt(), 0.0], 0.0);
        assert_eq!(three_tangle(&w), 0.0);
        let skewed = canonical([0.8, 0.0, 0.0, 0.0, 0.6], 0.0);
        assert!((three_tangle(&skewed) - 0.9216).abs() < 1e-12);
    }

    #[test]
    fn oracle_agrees_with_generating_class() {
        for class in SloccClass::ALL {
            let mut rng = seed::rng_from(2024, &[u64::from(class.code())]);
            for i in 0..100 {
                let c = sample_class_coefficients(class, &mut rng);
                let rho = density_from_ket(&ket_from_canonical(&c));
                let got = slocc_oracle(&rho, RANK_TOL_CLEAN, TANGLE_TOL_CLEAN).unwrap();
                assert_eq!(got, Some(class), "state {i} of {class:?}: {:?}", c.lambdas());
            }
        }
    }

    #[test]
    fn sampled_gme_states_have_gme_rank_patterns() {
        let mut rng = seed::rng_from(77, &[]);
        for _ in 0..50 {
            let w = sample_class_coefficients(SloccClass::W, &mut rng);
            let t = correlation_tensors(&density_from_ket(&ket_from_canonical(&w))).unwrap();
            assert_eq!(rank_triple(&t, RANK_TOL_CLEAN), RankTriple { r1: 3, r2: 3, r3: 3 });
        }
        // the exact canonical GHZ sits on the rank-2 row of the table
        let t = correlation_tensors(&ghz()).unwrap();
        let ranks = rank_triple(&t, RANK_TOL_CLEAN);
        assert_eq!(classify_by_ranks(ranks), RankClass::Gme);
    }

    #[test]
    fn tangle_is_zero_exactly_when_lambda4_is_zero() {
        let mut rng = seed::rng_from(13, &[]);
        for class in [SloccClass::W, SloccClass::Bs2, SloccClass::Bs3] {
            for _ in 0..50 {
                let c = sample_class_coefficients(class, &mut rng);
                let rho = density_from_ket(&ket_from_canonical(&c));
                assert_eq!(three_tangle(&rho), 0.0);
            }
        }
    }
}
