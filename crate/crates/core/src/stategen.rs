//! Labeled canonical-form state sampling, the calibrated noise channel that
//! stands in for hardware decoherence, label encoding, and dataset files.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::cmat::{self, CMat, DIM};
use crate::error::{Error, Result};
use crate::quantum::{density_from_ket, fidelity, ket_from_canonical, DensityMatrix};
use crate::seed;

/// Coefficients the class branch requires to be nonzero are resampled until
/// they reach this value after normalization, so every class stays
/// numerically distinguishable under the oracle's rank and tangle tolerances.
pub const NONZERO_FLOOR: f64 = 1e-3;

/// Target fidelity range of the synthetic noisy evaluation set.
pub const FIDELITY_RANGE: (f64, f64) = (0.87, 0.98);

const COEFF_NORM_TOL: f64 = 1e-12;

/// The five amplitudes λ₀..λ₄ and phase φ of the canonical form.
#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalCoefficients {
    lambdas: [f64; 5],
    phi: f64,
}

impl CanonicalCoefficients {
    /// Checks Σλᵢ² = 1 within 1e-12, λᵢ ≥ 0 and 0 ≤ φ ≤ π.
    pub fn new(lambdas: [f64; 5], phi: f64) -> Result<Self> {
        if lambdas.iter().any(|&l| l < 0.0) {
            return Err(Error::InvalidCoefficients(format!(
                "negative amplitude in {lambdas:?}"
            )));
        }
        let sum_sq: f64 = lambdas.iter().map(|l| l * l).sum();
        if (sum_sq - 1.0).abs() > COEFF_NORM_TOL {
            return Err(Error::InvalidCoefficients(format!(
                "Σλ² = {sum_sq} (expected 1)"
            )));
        }
        if !(0.0..=PI).contains(&phi) {
            return Err(Error::InvalidCoefficients(format!(
                "φ = {phi} outside [0, π]"
            )));
        }
        Ok(Self { lambdas, phi })
    }

    pub fn lambdas(&self) -> &[f64; 5] {
        &self.lambdas
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }
}

/// The six SLOCC-inequivalent classes of three-qubit pure states.
///
/// BS1 separates qubit 1 from an entangled pair (2,3), BS2 separates qubit 2,
/// BS3 separates qubit 3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SloccClass {
    Sep,
    Bs1,
    Bs2,
    Bs3,
    W,
    Ghz,
}

impl SloccClass {
    pub const ALL: [SloccClass; 6] = [
        SloccClass::Sep,
        SloccClass::Bs1,
        SloccClass::Bs2,
        SloccClass::Bs3,
        SloccClass::W,
        SloccClass::Ghz,
    ];

    pub fn code(self) -> u8 {
        match self {
            SloccClass::Sep => 0,
            SloccClass::Bs1 => 1,
            SloccClass::Bs2 => 2,
            SloccClass::Bs3 => 3,
            SloccClass::W => 4,
            SloccClass::Ghz => 5,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        Self::ALL.get(code as usize).copied()
    }

    /// W and GHZ carry genuine multipartite entanglement.
    pub fn is_gme(self) -> bool {
        matches!(self, SloccClass::W | SloccClass::Ghz)
    }

    pub fn name(self) -> &'static str {
        match self {
            SloccClass::Sep => "SEP",
            SloccClass::Bs1 => "BS1",
            SloccClass::Bs2 => "BS2",
            SloccClass::Bs3 => "BS3",
            SloccClass::W => "W",
            SloccClass::Ghz => "GHZ",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == name)
    }
}

/// One-hot, binary-GME and integer encodings of a class label.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LabelVector {
    pub one_hot: [u8; 6],
    pub gme_flag: u8,
    pub code: u8,
}

/// One-hot position equals the integer code; the GME flag is set for W and GHZ.
pub fn encode_labels(class: SloccClass) -> LabelVector {
    let mut one_hot = [0u8; 6];
    one_hot[class.code() as usize] = 1;
    LabelVector {
        one_hot,
        gme_flag: u8::from(class.is_gme()),
        code: class.code(),
    }
}

/// A dataset record: row-major Re(ρ) and Im(ρ) plus the label block.
#[derive(Clone, Debug, PartialEq)]
pub struct DatasetRow {
    pub v_re: [f64; 64],
    pub v_im: [f64; 64],
    pub label: LabelVector,
}

impl DatasetRow {
    pub fn from_density(rho: &DensityMatrix, label: LabelVector) -> Self {
        let mut v_re = [0.0; 64];
        let mut v_im = [0.0; 64];
        for r in 0..DIM {
            for c in 0..DIM {
                v_re[8 * r + c] = rho.entry(r, c).re;
                v_im[8 * r + c] = rho.entry(r, c).im;
            }
        }
        Self { v_re, v_im, label }
    }
}

/// A synthetic "experimental" state: the clean reference, its noisy
/// counterpart, and the achieved fidelity between them.
#[derive(Clone, Debug)]
pub struct EvalState {
    pub state_id: String,
    pub clean: DensityMatrix,
    pub noisy: DensityMatrix,
    pub class: SloccClass,
    pub fidelity: f64,
}

fn normalize(lambdas: &mut [f64; 5]) {
    let norm = lambdas.iter().map(|l| l * l).sum::<f64>().sqrt();
    for l in lambdas.iter_mut() {
        *l /= norm;
    }
}

/// Uniform over the half-open interval (0, 1].
fn u01(rng: &mut impl Rng) -> f64 {
    1.0 - rng.gen::<f64>()
}

fn uniform_phase(rng: &mut impl Rng) -> f64 {
    rng.gen::<f64>() * PI
}

/// Sample coefficients from the class's parameterization branch.
///
/// Branch predicates are enforced with a post-normalization floor of
/// [`NONZERO_FLOOR`] on every quantity the branch requires nonzero, applied to
/// the predicate products themselves (λ₀λ₄ for GHZ, λ₂λ₃ for W, the pair
/// determinant for the biseparable classes), since those products are what
/// the rank and 3-tangle oracles resolve.
pub fn sample_class_coefficients(class: SloccClass, rng: &mut impl Rng) -> CanonicalCoefficients {
    loop {
        let (mut lambdas, phi) = match class {
            SloccClass::Ghz => {
                // λ₀λ₄ ≠ 0, all other coefficients free
                let l = [u01(rng), u01(rng), u01(rng), u01(rng), u01(rng)];
                (l, uniform_phase(rng))
            }
            SloccClass::W => {
                // λ₀ ≠ 0, λ₄ = 0, λ₂λ₃ ≠ 0
                let l = [u01(rng), u01(rng), u01(rng), u01(rng), 0.0];
                (l, uniform_phase(rng))
            }
            SloccClass::Bs2 => {
                // λ₀ ≠ 0, λ₄ = 0, λ₂ ≠ 0, λ₃ = 0: qubit 2 factors out
                let l = [u01(rng), u01(rng), u01(rng), 0.0, 0.0];
                (l, uniform_phase(rng))
            }
            SloccClass::Bs3 => {
                // λ₀ ≠ 0, λ₄ = 0, λ₂ = 0, λ₃ ≠ 0: qubit 3 factors out
                let l = [u01(rng), u01(rng), 0.0, u01(rng), 0.0];
                (l, uniform_phase(rng))
            }
            SloccClass::Bs1 => sample_bs1(rng),
            SloccClass::Sep => sample_sep(rng),
        };
        normalize(&mut lambdas);
        if branch_margin_ok(class, &lambdas, phi) {
            return CanonicalCoefficients::new(lambdas, phi)
                .expect("sampled coefficients are normalized by construction");
        }
    }
}

/// A-BC states have two canonical-form parameterizations, sampled uniformly.
fn sample_bs1(rng: &mut impl Rng) -> ([f64; 5], f64) {
    if rng.gen_range(0..2) == 0 {
        // λ₀ = 0, λ₄ ≠ 0, λ₂λ₃ ≠ λ₁λ₄e^{iφ}
        ([0.0, u01(rng), u01(rng), u01(rng), u01(rng)], uniform_phase(rng))
    } else {
        // λ₀ = λ₄ = 0, λ₂λ₃ ≠ 0
        ([0.0, u01(rng), u01(rng), u01(rng), 0.0], uniform_phase(rng))
    }
}

/// Fully separable states admit several canonical-form parameterizations;
/// the four sub-branches are sampled uniformly to avoid biasing any basis.
fn sample_sep(rng: &mut impl Rng) -> ([f64; 5], f64) {
    match rng.gen_range(0..4) {
        // λ₀ ≠ 0, λ₄ = 0, λ₂ = λ₃ = 0: (λ₀|0⟩ + λ₁e^{iφ}|1⟩) ⊗ |00⟩
        0 => ([u01(rng), u01(rng), 0.0, 0.0, 0.0], uniform_phase(rng)),
        // λ₀ = 0, λ₄ ≠ 0, λ₂λ₃ = λ₁λ₄: |1⟩ ⊗ (x₀|0⟩+x₁|1⟩) ⊗ (y₀|0⟩+y₁|1⟩)
        1 => {
            let (x0, x1) = (u01(rng), u01(rng));
            let (y0, y1) = (u01(rng), u01(rng));
            ([0.0, x0 * y0, x0 * y1, x1 * y0, x1 * y1], 0.0)
        }
        // λ₀ = λ₄ = 0, λ₃ = 0: |10⟩ ⊗ (λ₁e^{iφ}|0⟩ + λ₂|1⟩)
        2 => ([0.0, u01(rng), u01(rng), 0.0, 0.0], uniform_phase(rng)),
        // λ₀ = λ₄ = 0, λ₂ = 0: |1⟩ ⊗ (λ₁e^{iφ}|0⟩ + λ₃|1⟩) ⊗ |0⟩
        _ => ([0.0, u01(rng), 0.0, u01(rng), 0.0], uniform_phase(rng)),
    }
}

fn branch_margin_ok(class: SloccClass, l: &[f64; 5], phi: f64) -> bool {
    match class {
        SloccClass::Ghz => l[0] * l[4] >= NONZERO_FLOOR,
        SloccClass::W => l[0] >= NONZERO_FLOOR && l[2] * l[3] >= NONZERO_FLOOR,
        SloccClass::Bs2 => l[0] * l[2] >= NONZERO_FLOOR,
        SloccClass::Bs3 => l[0] * l[3] >= NONZERO_FLOOR,
        SloccClass::Bs1 => {
            if l[4] > 0.0 {
                // distance of λ₂λ₃ from λ₁λ₄e^{iφ}: the (2,3) pair determinant
                let re = l[2] * l[3] - l[1] * l[4] * phi.cos();
                let im = l[1] * l[4] * phi.sin();
                l[4] >= NONZERO_FLOOR && (re * re + im * im).sqrt() >= NONZERO_FLOOR
            } else {
                l[2] * l[3] >= NONZERO_FLOOR
            }
        }
        // separable at any magnitude; floor only the branch's required-nonzero
        // endpoint amplitude (λ₀ or λ₄ where the branch keeps one)
        SloccClass::Sep => (l[0] == 0.0 && l[4] == 0.0) || l[0].max(l[4]) >= NONZERO_FLOOR,
    }
}

/// Class-balanced training set of 6·`per_class` rows.
///
/// Row (class k, index i) is generated from the sub-seed
/// `hash(master_seed, k, i)`, so the output is a pure function of the master
/// seed and generation can be split across workers.
pub fn build_training_dataset(per_class: usize, master_seed: u64) -> Vec<DatasetRow> {
    assert!(per_class >= 1, "per_class must be at least 1");
    let mut rows = Vec::with_capacity(6 * per_class);
    for class in SloccClass::ALL {
        let label = encode_labels(class);
        for idx in 0..per_class {
            let mut rng = seed::rng_from(master_seed, &[u64::from(class.code()), idx as u64]);
            let c = sample_class_coefficients(class, &mut rng);
            let rho = density_from_ket(&ket_from_canonical(&c));
            rows.push(DatasetRow::from_density(&rho, label));
        }
    }
    rows
}

fn random_unit_hermitian(rng: &mut impl Rng) -> CMat {
    loop {
        let mut g = cmat::zeros();
        for r in 0..DIM {
            g[r][r] = Complex64::new(rng.sample(StandardNormal), 0.0);
            for c in (r + 1)..DIM {
                let z = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
                g[r][c] = z;
                g[c][r] = z.conj();
            }
        }
        let norm = cmat::spectral_norm_hermitian(&g);
        if norm > 0.0 {
            for row in g.iter_mut() {
                for v in row.iter_mut() {
                    *v /= norm;
                }
            }
            return g;
        }
    }
}

/// ρ' = (1−p)·UρU† + p·I/8 with U = exp(−iθG), θ = s, p = s/2.
fn noise_channel(clean: &DensityMatrix, g: &CMat, s: f64) -> DensityMatrix {
    if s == 0.0 {
        return clean.clone();
    }
    let p = s / 2.0;
    let mut m = cmat::zeros();
    for r in 0..DIM {
        for c in 0..DIM {
            m[r][c] = Complex64::new(0.0, -s) * g[r][c];
        }
    }
    let u = cmat::expm(&m);
    let kicked = cmat::mul(&cmat::mul(&u, clean.raw()), &cmat::dagger(&u));
    let mut entries = cmat::hermitize(&kicked);
    for (i, row) in entries.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v *= 1.0 - p;
            if i == j {
                *v += Complex64::new(p / 8.0, 0.0);
            }
        }
    }
    DensityMatrix::from_raw(entries)
}

/// Degrade `clean` to the target fidelity with a random unitary kick plus a
/// depolarizing admixture, jointly calibrated by bisection on one strength
/// parameter (θ = s, p = s/2).
///
/// Depolarizing noise alone barely moves this fidelity measure (p = 0.1 on a
/// pure state still scores ≈ 0.99934), so the unitary kick carries the
/// calibration. At s = 2 the state is fully depolarized (fidelity ≈ 0.354),
/// which brackets every target in [0.87, 0.98].
pub fn apply_noise(
    clean: &DensityMatrix,
    f_target: f64,
    rng: &mut impl Rng,
) -> Result<(DensityMatrix, f64)> {
    assert!(
        (FIDELITY_RANGE.0..=FIDELITY_RANGE.1).contains(&f_target),
        "f_target must lie in [0.87, 0.98]"
    );
    let g = random_unit_hermitian(rng);
    let fid_at = |s: f64| -> Result<f64> { fidelity(&noise_channel(clean, &g, s), clean) };
    let mut lo = 0.0;
    let mut hi = 2.0;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if fid_at(mid)? > f_target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let s = 0.5 * (lo + hi);
    let noisy = noise_channel(clean, &g, s);
    let achieved = fidelity(&noisy, clean)?;
    if (achieved - f_target).abs() > 0.005 {
        return Err(Error::NoiseCalibration {
            target: f_target,
            achieved,
        });
    }
    Ok((noisy, achieved))
}

/// Build the noisy evaluation set: `per_class` states per class with target
/// fidelities drawn uniformly from [0.87, 0.98]. Deterministic in
/// `master_seed`; the per-state stream is domain-separated from the training
/// stream by a trailing tag.
pub fn build_eval_set(per_class: usize, master_seed: u64) -> Result<Vec<EvalState>> {
    assert!(per_class >= 2, "the split protocol needs at least 2 states per class");
    let mut states = Vec::with_capacity(6 * per_class);
    for class in SloccClass::ALL {
        for idx in 0..per_class {
            let mut rng = seed::rng_from(master_seed, &[u64::from(class.code()), idx as u64, 1]);
            let c = sample_class_coefficients(class, &mut rng);
            let clean = density_from_ket(&ket_from_canonical(&c));
            let f_target =
                FIDELITY_RANGE.0 + rng.gen::<f64>() * (FIDELITY_RANGE.1 - FIDELITY_RANGE.0);
            let (noisy, achieved) = apply_noise(&clean, f_target, &mut rng)?;
            states.push(EvalState {
                state_id: format!("{}_{}", class.name(), idx + 1),
                clean,
                noisy,
                class,
                fidelity: achieved,
            });
        }
    }
    Ok(states)
}

// ── dataset files ────────────────────────────────────────────────────

fn train_columns() -> Vec<String> {
    let mut cols = Vec::with_capacity(136);
    for part in ["re", "im"] {
        for r in 0..DIM {
            for c in 0..DIM {
                cols.push(format!("{part}_{r}_{c}"));
            }
        }
    }
    for h in 0..6 {
        cols.push(format!("h{h}"));
    }
    cols.push("b".into());
    cols.push("i".into());
    cols
}

/// Write rows as CSV with the column layout
/// `re_0_0..re_7_7,im_0_0..im_7_7,h0..h5,b,i`.
pub fn write_dataset(rows: &[DatasetRow], path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "{}", train_columns().join(","))?;
    for row in rows {
        let mut fields = Vec::with_capacity(136);
        fields.extend(row.v_re.iter().map(|v| v.to_string()));
        fields.extend(row.v_im.iter().map(|v| v.to_string()));
        fields.extend(row.label.one_hot.iter().map(|v| v.to_string()));
        fields.push(row.label.gme_flag.to_string());
        fields.push(row.label.code.to_string());
        writeln!(w, "{}", fields.join(","))?;
    }
    w.flush()?;
    Ok(())
}

fn parse_f64(token: &str, path: &Path, line: usize, column: &str) -> Result<f64> {
    token.parse().map_err(|_| Error::NonNumeric {
        path: path.to_path_buf(),
        line,
        column: column.to_string(),
        token: token.to_string(),
    })
}

pub fn read_dataset(path: &Path) -> Result<Vec<DatasetRow>> {
    let columns = train_columns();
    let header = columns.join(",");
    let reader = BufReader::new(File::open(path)?);
    let mut lines = reader.lines();
    let first = lines.next().transpose()?;
    if first.as_deref() != Some(header.as_str()) {
        return Err(Error::MalformedHeader {
            path: path.to_path_buf(),
            expected_prefix: "re_0_0,re_0_1".into(),
        });
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let line_no = i + 2;
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != columns.len() {
            return Err(Error::ColumnCount {
                path: path.to_path_buf(),
                line: line_no,
                expected: columns.len(),
                found: fields.len(),
            });
        }
        let mut v_re = [0.0; 64];
        let mut v_im = [0.0; 64];
        for k in 0..64 {
            v_re[k] = parse_f64(fields[k], path, line_no, &columns[k])?;
            v_im[k] = parse_f64(fields[64 + k], path, line_no, &columns[64 + k])?;
        }
        let mut numeric = [0.0f64; 8];
        for k in 0..8 {
            numeric[k] = parse_f64(fields[128 + k], path, line_no, &columns[128 + k])?;
        }
        let code = numeric[7] as u8;
        let label = SloccClass::from_code(code).map(encode_labels).ok_or_else(|| {
            Error::InvalidRecord {
                path: path.to_path_buf(),
                line: line_no,
                msg: format!("unknown class code {}", numeric[7]),
            }
        })?;
        let consistent = label
            .one_hot
            .iter()
            .enumerate()
            .all(|(k, &h)| numeric[k] == f64::from(h))
            && numeric[6] == f64::from(label.gme_flag)
            && numeric[7] == f64::from(label.code);
        if !consistent {
            return Err(Error::InvalidRecord {
                path: path.to_path_buf(),
                line: line_no,
                msg: "label block is inconsistent with the class code".into(),
            });
        }
        rows.push(DatasetRow { v_re, v_im, label });
    }
    Ok(rows)
}

fn eval_columns() -> Vec<String> {
    let mut cols = vec!["state_id".to_string(), "class".to_string(), "fidelity".to_string()];
    for prefix in ["c", "n"] {
        for part in ["re", "im"] {
            for r in 0..DIM {
                for c in 0..DIM {
                    cols.push(format!("{prefix}_{part}_{r}_{c}"));
                }
            }
        }
    }
    cols
}

fn push_matrix_fields(fields: &mut Vec<String>, rho: &DensityMatrix) {
    for r in 0..DIM {
        for c in 0..DIM {
            fields.push(rho.entry(r, c).re.to_string());
        }
    }
    for r in 0..DIM {
        for c in 0..DIM {
            fields.push(rho.entry(r, c).im.to_string());
        }
    }
}

/// Write the evaluation set: id, class, fidelity, then the clean and noisy
/// matrices (prefixes `c_` and `n_`), 128 columns each.
pub fn write_eval_set(states: &[EvalState], path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "{}", eval_columns().join(","))?;
    for st in states {
        let mut fields = Vec::with_capacity(259);
        fields.push(st.state_id.clone());
        fields.push(st.class.name().to_string());
        fields.push(st.fidelity.to_string());
        push_matrix_fields(&mut fields, &st.clean);
        push_matrix_fields(&mut fields, &st.noisy);
        writeln!(w, "{}", fields.join(","))?;
    }
    w.flush()?;
    Ok(())
}

fn matrix_from_fields(
    fields: &[&str],
    offset: usize,
    columns: &[String],
    path: &Path,
    line: usize,
) -> Result<DensityMatrix> {
    let mut entries = cmat::zeros();
    for r in 0..DIM {
        for c in 0..DIM {
            let re_idx = offset + 8 * r + c;
            let im_idx = offset + 64 + 8 * r + c;
            let re = parse_f64(fields[re_idx], path, line, &columns[re_idx])?;
            let im = parse_f64(fields[im_idx], path, line, &columns[im_idx])?;
            entries[r][c] = Complex64::new(re, im);
        }
    }
    DensityMatrix::new(entries).map_err(|e| Error::InvalidRecord {
        path: path.to_path_buf(),
        line,
        msg: e.to_string(),
    })
}

pub fn read_eval_set(path: &Path) -> Result<Vec<EvalState>> {
    let columns = eval_columns();
    let header = columns.join(",");
    let reader = BufReader::new(File::open(path)?);
    let mut lines = reader.lines();
    let first = lines.next().transpose()?;
    if first.as_deref() != Some(header.as_str()) {
        return Err(Error::MalformedHeader {
            path: path.to_path_buf(),
            expected_prefix: "state_id,class,fidelity".into(),
        });
    }
    let mut states = Vec::new();
    for (i, line) in lines.enumerate() {
        let line_no = i + 2;
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != columns.len() {
            return Err(Error::ColumnCount {
                path: path.to_path_buf(),
                line: line_no,
                expected: columns.len(),
                found: fields.len(),
            });
        }
        let class = SloccClass::from_name(fields[1]).ok_or_else(|| Error::InvalidRecord {
            path: path.to_path_buf(),
            line: line_no,
            msg: format!("unknown class `{}`", fields[1]),
        })?;
        let stored_fidelity = parse_f64(fields[2], path, line_no, &columns[2])?;
        let clean = matrix_from_fields(&fields, 3, &columns, path, line_no)?;
        let noisy = matrix_from_fields(&fields, 3 + 128, &columns, path, line_no)?;
        let actual = fidelity(&noisy, &clean).map_err(|e| Error::InvalidRecord {
            path: path.to_path_buf(),
            line: line_no,
            msg: e.to_string(),
        })?;
        if (actual - stored_fidelity).abs() > 1e-9 {
            return Err(Error::InvalidRecord {
                path: path.to_path_buf(),
                line: line_no,
                msg: format!(
                    "stored fidelity {stored_fidelity} disagrees with recomputed {actual}"
                ),
            });
        }
        if !(FIDELITY_RANGE.0..=FIDELITY_RANGE.1).contains(&stored_fidelity) {
            return Err(Error::InvalidRecord {
                path: path.to_path_buf(),
                line: line_no,
                msg: format!("fidelity {stored_fidelity} outside [0.87, 0.98]"),
            });
        }
        states.push(EvalState {
            state_id: fields[0].to_string(),
            clean,
            noisy,
            class,
            fidelity: stored_fidelity,
        });
    }
    Ok(states)
}

/// Class histogram of a row set; the training builder keeps this exactly
/// uniform.
pub fn class_histogram(rows: &[DatasetRow]) -> BTreeMap<u8, usize> {
    let mut hist = BTreeMap::new();
    for row in rows {
        *hist.entry(row.label.code).or_insert(0) += 1;
    }
    hist
}
