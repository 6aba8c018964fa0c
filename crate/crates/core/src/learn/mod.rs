//! From-scratch learning algorithms: dense feed-forward networks trained with
//! Adam and early stopping, k-nearest-neighbor prediction, and a linear
//! one-vs-rest SVM.

mod knn;
mod mlp;
mod svm;

pub use knn::{knn_predict, KnnWeighting};
pub use mlp::{
    adam_step, backward, loss_binary, loss_categorical, train, AdamState, MlpModel,
    OutputActivation, ParamGrads, Sample, TrainConfig, TrainHistory,
};
pub use svm::{svm_predict, svm_train, SvmModel};
