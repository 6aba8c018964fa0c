//! Crate-internal 8×8 complex matrix helpers.

use num_complex::Complex64;

use crate::linalg;

pub(crate) const DIM: usize = 8;

pub(crate) type CMat = [[Complex64; DIM]; DIM];

pub(crate) fn zeros() -> CMat {
    [[Complex64::new(0.0, 0.0); DIM]; DIM]
}

pub(crate) fn identity() -> CMat {
    let mut m = zeros();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Complex64::new(1.0, 0.0);
    }
    m
}

pub(crate) fn mul(a: &CMat, b: &CMat) -> CMat {
    let mut out = zeros();
    for r in 0..DIM {
        for k in 0..DIM {
            let ark = a[r][k];
            if ark == Complex64::new(0.0, 0.0) {
                continue;
            }
            for c in 0..DIM {
                out[r][c] += ark * b[k][c];
            }
        }
    }
    out
}

pub(crate) fn dagger(a: &CMat) -> CMat {
    let mut out = zeros();
    for r in 0..DIM {
        for c in 0..DIM {
            out[r][c] = a[c][r].conj();
        }
    }
    out
}

/// (a + a†)/2, scrubbing rounding asymmetry from products of Hermitian factors.
pub(crate) fn hermitize(a: &CMat) -> CMat {
    let mut out = zeros();
    for r in 0..DIM {
        for c in 0..DIM {
            out[r][c] = (a[r][c] + a[c][r].conj()) * 0.5;
        }
    }
    out
}

fn one_norm(a: &CMat) -> f64 {
    (0..DIM)
        .map(|c| (0..DIM).map(|r| a[r][c].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Matrix exponential by scaling-and-squaring with a Taylor series.
///
/// Accurate to machine precision for the anti-Hermitian generators used by
/// the noise channel (the scaled norm is held below 1/2).
pub(crate) fn expm(a: &CMat) -> CMat {
    let norm = one_norm(a);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scale = 1.0 / (1u64 << squarings) as f64;
    let mut b = *a;
    for row in b.iter_mut() {
        for v in row.iter_mut() {
            *v *= scale;
        }
    }
    let mut sum = identity();
    let mut term = identity();
    for j in 1..=16u32 {
        term = mul(&term, &b);
        let inv = 1.0 / f64::from(j);
        for row in term.iter_mut() {
            for v in row.iter_mut() {
                *v *= inv;
            }
        }
        for r in 0..DIM {
            for c in 0..DIM {
                sum[r][c] += term[r][c];
            }
        }
    }
    for _ in 0..squarings {
        sum = mul(&sum, &sum);
    }
    sum
}

/// Real symmetric 16×16 embedding [[X, -Y], [Y, X]] of a Hermitian X + iY.
/// Its spectrum is the spectrum of the Hermitian matrix, doubled.
fn embed_hermitian(a: &CMat) -> Vec<f64> {
    let n = 2 * DIM;
    let mut m = vec![0.0; n * n];
    for r in 0..DIM {
        for c in 0..DIM {
            let x = a[r][c].re;
            let y = a[r][c].im;
            m[r * n + c] = x;
            m[(r + DIM) * n + (c + DIM)] = x;
            m[r * n + (c + DIM)] = -y;
            m[(r + DIM) * n + c] = y;
        }
    }
    m
}

pub(crate) fn hermitian_eigenvalues(a: &CMat) -> Vec<f64> {
    linalg::symmetric_eigenvalues(&embed_hermitian(a), 2 * DIM, 1e-14)
}

pub(crate) fn min_eigenvalue_hermitian(a: &CMat) -> f64 {
    hermitian_eigenvalues(a).into_iter().fold(f64::INFINITY, f64::min)
}

pub(crate) fn spectral_norm_hermitian(a: &CMat) -> f64 {
    hermitian_eigenvalues(a)
        .into_iter()
        .map(f64::abs)
        .fold(0.0, f64::max)
}
