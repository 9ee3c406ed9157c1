use std::sync::Arc;

use ndarray::{Array2, ArrayView1, ArrayView2};

use super::kernel::{kernel_matrix, Kernel};
use crate::error::{Error, Result};

pub const KKT_TOLERANCE: f64 = 1e-6;
pub const DEFAULT_MAX_ITERATIONS: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OcsvmParams {
    pub nu: f64,
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl OcsvmParams {
    pub fn with_nu(nu: f64) -> Self {
        Self {
            nu,
            tolerance: KKT_TOLERANCE,
            max_iterations: DEFAULT_MAX_ITERATIONS,
        }
    }
}

/// A trained ν one-class SVM. The decision value of `x` is
/// `Σ α_i k(x_i, x) - ρ`. The solver fixes `ρ` only to within its KKT
/// tolerance, so values down to `-tolerance` count as on the boundary and
/// boundary points are inliers.
#[derive(Clone, Debug)]
pub struct OcsvmModel {
    pub alpha: Vec<f64>,
    pub rho: f64,
    pub nu: f64,
    /// Upper bound on each `α_i`, `1/(ν m)`.
    pub upper: f64,
    pub iterations: usize,
    /// Final maximal KKT violation.
    pub gap: f64,
    pub tolerance: f64,
    train: Array2<f64>,
    kernel: Arc<dyn Kernel>,
}

impl OcsvmModel {
    pub fn kernel(&self) -> &Arc<dyn Kernel> {
        &self.kernel
    }

    pub fn train_rows(&self) -> ArrayView2<'_, f64> {
        self.train.view()
    }

    pub fn score(&self, x: ArrayView1<f64>) -> f64 {
        self.alpha
            .iter()
            .zip(self.train.rows())
            .filter(|(a, _)| **a > 0.0)
            .map(|(a, r)| a * self.kernel.eval(r, x))
            .sum::<f64>()
            - self.rho
    }

    pub fn predict_inlier(&self, x: ArrayView1<f64>) -> bool {
        self.is_inlier_score(self.score(x))
    }

    pub fn is_inlier_score(&self, score: f64) -> bool {
        score >= -self.tolerance
    }

    pub fn scores(&self, x: ArrayView2<f64>) -> Vec<f64> {
        x.rows().into_iter().map(|r| self.score(r)).collect()
    }
}

/// Solves `min ½ αᵀKα` subject to `0 <= α_i <= 1/(ν m)` and `Σ α_i = 1` by
/// sequential minimal optimization on the maximal violating pair.
pub fn ocsvm_train(
    x: ArrayView2<f64>,
    kernel: Arc<dyn Kernel>,
    params: OcsvmParams,
) -> Result<OcsvmModel> {
    let m = x.nrows();
    let nu = params.nu;
    if m < 2 {
        return Err(Error::InvalidParameter(format!(
            "one-class SVM needs at least 2 training rows, got {m}"
        )));
    }
    if !(nu > 0.0 && nu <= 1.0) {
        return Err(Error::InvalidParameter(format!("nu must lie in (0, 1], got {nu}")));
    }
    let q = kernel_matrix(x, kernel.as_ref());
    let upper = 1.0 / (nu * m as f64);

    // first floor(ν m) coefficients at the bound, the remainder on the next
    let full = ((nu * m as f64).floor() as usize).min(m);
    let mut alpha = vec![0.0; m];
    for a in alpha.iter_mut().take(full) {
        *a = upper;
    }
    if full < m {
        alpha[full] = (1.0 - full as f64 * upper).max(0.0);
    }
    let mut grad: Vec<f64> = (0..m)
        .map(|i| (0..m).map(|j| q[[i, j]] * alpha[j]).sum())
        .collect();

    let eps = 1e-12 * upper;
    let mut iterations = 0;
    let gap = loop {
        // i: may increase, smallest gradient; j: may decrease, largest gradient
        let mut i = usize::MAX;
        let mut gi = f64::INFINITY;
        let mut j = usize::MAX;
        let mut gj = f64::NEG_INFINITY;
        for t in 0..m {
            if alpha[t] < upper - eps && grad[t] < gi {
                gi = grad[t];
                i = t;
            }
            if alpha[t] > eps && grad[t] > gj {
                gj = grad[t];
                j = t;
            }
        }
        let gap = if i == usize::MAX || j == usize::MAX { 0.0 } else { gj - gi };
        if gap <= params.tolerance {
            break gap.max(0.0);
        }
        if iterations >= params.max_iterations {
            return Err(Error::NonConvergence {
                solver: "ocsvm",
                iterations,
                residual: gap,
            });
        }
        let eta = (q[[i, i]] + q[[j, j]] - 2.0 * q[[i, j]]).max(1e-12);
        let delta = (gap / eta).min(upper - alpha[i]).min(alpha[j]);
        alpha[i] += delta;
        alpha[j] -= delta;
        for t in 0..m {
            grad[t] += delta * (q[[t, i]] - q[[t, j]]);
        }
        iterations += 1;
    };

    // ρ: average gradient over free vectors, else the midpoint of the bounds
    let mut free_sum = 0.0;
    let mut free = 0usize;
    let mut lower_bound = f64::NEG_INFINITY;
    let mut upper_bound = f64::INFINITY;
    for t in 0..m {
        if alpha[t] >= upper - eps {
            lower_bound = lower_bound.max(grad[t]);
        } else if alpha[t] <= eps {
            upper_bound = upper_bound.min(grad[t]);
        } else {
            free_sum += grad[t];
            free += 1;
        }
    }
    let rho = if free > 0 {
        free_sum / free as f64
    } else {
        0.5 * (lower_bound + upper_bound)
    };

    Ok(OcsvmModel {
        alpha,
        rho,
        nu,
        upper,
        iterations,
        gap,
        tolerance: params.tolerance,
        train: x.to_owned(),
        kernel,
    })
}
