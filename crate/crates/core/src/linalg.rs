//! Small symmetric eigenproblems via cyclic Jacobi rotations.
//!
//! The matrices in this crate are tiny (3×3 unfolding Gramians, 16×16 real
//! embeddings of 8×8 Hermitian matrices), so a dependency-free Jacobi solver
//! is entirely adequate.

/// Eigenvalues of a symmetric `n`×`n` matrix stored row-major in `a`.
///
/// Sweeps until the off-diagonal Frobenius norm falls below `tol`.
/// The returned eigenvalues are unsorted.
pub fn symmetric_eigenvalues(a: &[f64], n: usize, tol: f64) -> Vec<f64> {
    assert_eq!(a.len(), n * n, "matrix must be n×n");
    let mut m = a.to_vec();
    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += 2.0 * m[p * n + q] * m[p * n + q];
            }
        }
        if off.sqrt() <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[q * n + q] - m[p * n + p]) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = m[k * n + p];
                    let akq = m[k * n + q];
                    m[k * n + p] = c * akp - s * akq;
                    m[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = m[p * n + k];
                    let aqk = m[q * n + k];
                    m[p * n + k] = c * apk - s * aqk;
                    m[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| m[i * n + i]).collect()
}
