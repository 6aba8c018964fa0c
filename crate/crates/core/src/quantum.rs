//! Complex linear algebra for three-qubit states: kets, density matrices,
//! Pauli observables, and the normalized-overlap fidelity.
//!
//! Basis convention: computational basis |q₁q₂q₃⟩ with index = 4q₁ + 2q₂ + q₃
//! (qubit 1 most significant), so |100⟩ sits at index 4.

use num_complex::Complex64;

use crate::cmat::{self, CMat, DIM};
use crate::error::{Error, Result};
use crate::stategen::CanonicalCoefficients;

const NORM_TOL: f64 = 1e-12;
const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
const PSD_TOL: f64 = -1e-10;
const IMAG_RESIDUE_TOL: f64 = 1e-8;

/// A normalized three-qubit pure state.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amplitudes: [Complex64; DIM],
}

impl PureState {
    /// Build from amplitudes, checking Σ|aᵢ|² = 1 within 1e-12.
    pub fn new(amplitudes: [Complex64; DIM]) -> Result<Self> {
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        let dev = (norm_sq - 1.0).abs();
        if dev > NORM_TOL {
            return Err(Error::NotNormalized(dev));
        }
        Ok(Self { amplitudes })
    }

    pub fn amplitudes(&self) -> &[Complex64; DIM] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }
}

/// An 8×8 density matrix: Hermitian, trace one, positive semidefinite.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    entries: CMat,
}

impl DensityMatrix {
    /// Build from raw entries, checking all three invariants.
    pub fn new(entries: CMat) -> Result<Self> {
        let dm = Self { entries };
        dm.validate()?;
        Ok(dm)
    }

    /// Construction paths that guarantee validity (outer products, convex
    /// mixtures of valid states) skip the eigenvalue check.
    pub(crate) fn from_raw(entries: CMat) -> Self {
        Self { entries }
    }

    /// Re-check Hermiticity (1e-12), unit trace (1e-12) and positive
    /// semidefiniteness (min eigenvalue ≥ −1e-10).
    pub fn validate(&self) -> Result<()> {
        for r in 0..DIM {
            for c in 0..DIM {
                let dev = (self.entries[r][c] - self.entries[c][r].conj()).norm();
                if dev > HERMITIAN_TOL {
                    return Err(Error::InvalidDensityMatrix(format!(
                        "not Hermitian at ({r},{c}): deviation {dev:.3e}"
                    )));
                }
            }
        }
        let trace: Complex64 = (0..DIM).map(|i| self.entries[i][i]).sum();
        if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "trace is {trace} (expected 1)"
            )));
        }
        let min_eig = cmat::min_eigenvalue_hermitian(&self.entries);
        if min_eig < PSD_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "minimum eigenvalue {min_eig:.3e} below {PSD_TOL:.0e}"
            )));
        }
        Ok(())
    }

    pub fn entry(&self, r: usize, c: usize) -> Complex64 {
        self.entries[r][c]
    }

    pub(crate) fn raw(&self) -> &CMat {
        &self.entries
    }

    /// The maximally mixed state I/8.
    pub fn maximally_mixed() -> Self {
        let mut entries = cmat::zeros();
        for (i, row) in entries.iter_mut().enumerate() {
            row[i] = Complex64::new(0.125, 0.0);
        }
        Self { entries }
    }

    /// Convex mixture α·self + (1−α)·other; PSD by construction.
    pub fn mix(&self, other: &DensityMatrix, alpha: f64) -> DensityMatrix {
        let mut entries = cmat::zeros();
        for r in 0..DIM {
            for c in 0..DIM {
                entries[r][c] = self.entries[r][c] * alpha + other.entries[r][c] * (1.0 - alpha);
            }
        }
        Self { entries }
    }
}

/// Single-qubit Pauli axis; `I` is the 2×2 identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PauliAxis {
    I,
    X,
    Y,
    Z,
}

/// A three-qubit Pauli observable σ_a ⊗ σ_b ⊗ σ_c.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PauliIndex(pub [PauliAxis; 3]);

impl PauliAxis {
    /// Action on a basis bit: σ|b⟩ = phase · |b'⟩.
    fn apply(self, bit: usize) -> (usize, Complex64) {
        match self {
            PauliAxis::I => (bit, Complex64::new(1.0, 0.0)),
            PauliAxis::X => (1 - bit, Complex64::new(1.0, 0.0)),
            PauliAxis::Y => {
                // σ_y|0⟩ = i|1⟩, σ_y|1⟩ = -i|0⟩
                if bit == 0 {
                    (1, Complex64::new(0.0, 1.0))
                } else {
                    (0, Complex64::new(0.0, -1.0))
                }
            }
            PauliAxis::Z => {
                let sign = if bit == 0 { 1.0 } else { -1.0 };
                (bit, Complex64::new(sign, 0.0))
            }
        }
    }
}

/// Ket of the five-term canonical form:
/// λ₀|000⟩ + λ₁e^{iφ}|100⟩ + λ₂|101⟩ + λ₃|110⟩ + λ₄|111⟩.
pub fn ket_from_canonical(c: &CanonicalCoefficients) -> PureState {
    let l = c.lambdas();
    let mut amplitudes = [Complex64::new(0.0, 0.0); DIM];
    amplitudes[0] = Complex64::new(l[0], 0.0);
    amplitudes[4] = Complex64::from_polar(l[1], c.phi());
    amplitudes[5] = Complex64::new(l[2], 0.0);
    amplitudes[6] = Complex64::new(l[3], 0.0);
    amplitudes[7] = Complex64::new(l[4], 0.0);
    PureState { amplitudes }
}

/// Outer product ρ = |ψ⟩⟨ψ|.
pub fn density_from_ket(psi: &PureState) -> DensityMatrix {
    let a = &psi.amplitudes;
    let mut entries = cmat::zeros();
    for r in 0..DIM {
        for c in 0..DIM {
            entries[r][c] = a[r] * a[c].conj();
        }
    }
    DensityMatrix::from_raw(entries)
}

/// tr(ρ · σ_a⊗σ_b⊗σ_c), discarding an imaginary residue below 1e-10.
///
/// A residue of 1e-8 or more signals a non-Hermitian input and is reported
/// as an error.
pub fn pauli_expectation(rho: &DensityMatrix, p: &PauliIndex) -> Result<f64> {
    let mut trace = Complex64::new(0.0, 0.0);
    for col in 0..DIM {
        let bits = [(col >> 2) & 1, (col >> 1) & 1, col & 1];
        let mut row = 0usize;
        let mut phase = Complex64::new(1.0, 0.0);
        for (axis, bit) in p.0.iter().zip(bits) {
            let (nb, ph) = axis.apply(bit);
            row = (row << 1) | nb;
            phase *= ph;
        }
        // tr(ρP) = Σ_c ρ[c][row(c)] · phase(c)
        trace += rho.entries[col][row] * phase;
    }
    if trace.im.abs() >= IMAG_RESIDUE_TOL {
        return Err(Error::NonHermitian {
            residual: trace.im.abs(),
        });
    }
    Ok(trace.re)
}

/// Normalized overlap |Tr(ρₑ ρₜ†)| / √(Tr(ρₑ†ρₑ)·Tr(ρₜ†ρₜ)).
pub fn fidelity(rho_e: &DensityMatrix, rho_t: &DensityMatrix) -> Result<f64> {
    let mut overlap = Complex64::new(0.0, 0.0);
    let mut ee = 0.0;
    let mut tt = 0.0;
    for r in 0..DIM {
        for c in 0..DIM {
            // tr(A·B†) is the Frobenius inner product Σ A_rc · conj(B_rc)
            overlap += rho_e.entries[r][c] * rho_t.entries[r][c].conj();
            ee += rho_e.entries[r][c].norm_sqr();
            tt += rho_t.entries[r][c].norm_sqr();
        }
    }
    let denom = (ee * tt).sqrt();
    if denom == 0.0 {
        return Err(Error::ZeroDensityMatrix);
    }
    Ok(overlap.norm() / denom)
}
