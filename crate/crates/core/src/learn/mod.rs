//! Unsupervised post-processing of the `(mean, variance)` features:
//! standardization, kernels, kernel PCA, k-means, a one-class SVM, F1 and
//! the shot-budget sweep.

mod eigen;
mod kernel;
mod kmeans;
mod kpca;
mod metrics;
mod ocsvm;
mod standardize;
mod sweep;

pub use eigen::{symmetric_eigen, JACOBI_TOLERANCE};
pub use kernel::{
    cross_kernel, kernel_families, kernel_matrix, median_heuristic_gamma, Kernel, KernelFamily,
    KernelSpec, LinearFamily, LinearKernel, RbfFamily, RbfKernel,
};
pub use kmeans::{best_relabel_agreement, kmeans_cluster, KMeansResult, MAX_LLOYD_ITERATIONS};
pub use kpca::{double_center, kpca_project};
pub use metrics::{f1_score, median, quantile};
pub use ocsvm::{ocsvm_train, OcsvmModel, OcsvmParams, DEFAULT_MAX_ITERATIONS, KKT_TOLERANCE};
pub use standardize::{standardize, Standardizer};
pub use sweep::{
    default_sweep_config, feature_matrix, sample_all_features, select_rows, shots_sweep,
    summarize_sweep, Detector, Split, StandardizeScope, SweepConfig, SweepRow, SweepSummary,
    TrainTestSplit,
};
