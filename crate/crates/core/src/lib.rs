//! Three-qubit SLOCC entanglement classification and GME detection.
//!
//! The crate covers the full pipeline: canonical-form state generation with
//! class labels, a calibrated noise channel producing a synthetic
//! "experimental" evaluation set, correlation-tensor and 3-tangle oracles,
//! ANOVA-F feature reduction of the density matrix to 18 elements,
//! from-scratch dense networks with Adam and early stopping, SVM/KNN
//! baselines, and the 100-split benchmark harness with CSV reports.
//!
//! Everything randomized is seeded and platform-independent: a fixed master
//! seed reproduces datasets, trained models and reports byte for byte.
//!
//! ```
//! use entclass_core::{entangle, features, quantum, seed, stategen};
//!
//! // sample a GHZ-class state, check it, and rank features on a small set
//! let mut rng = seed::rng_from(7, &[]);
//! let coeffs = stategen::sample_class_coefficients(stategen::SloccClass::Ghz, &mut rng);
//! let rho = quantum::density_from_ket(&quantum::ket_from_canonical(&coeffs));
//! let class = entangle::slocc_oracle(&rho, 1e-10, 1e-6)?;
//! assert_eq!(class, Some(stategen::SloccClass::Ghz));
//!
//! let rows = stategen::build_training_dataset(5, 7);
//! let feats: Vec<_> = rows.iter().map(features::features18_from_row).collect();
//! let flags: Vec<u8> = rows.iter().map(|r| r.label.gme_flag).collect();
//! let ranking = features::rank_features(&features::anova_f_scores(&feats, &flags)?);
//! assert_eq!(ranking.order.len(), 18);
//! # Ok::<(), entclass_core::Error>(())
//! ```

mod cmat;
mod linalg;

pub mod bench;
pub mod entangle;
pub mod error;
pub mod features;
pub mod learn;
pub mod quantum;
pub mod seed;
pub mod stategen;

pub use error::{Error, Result};
