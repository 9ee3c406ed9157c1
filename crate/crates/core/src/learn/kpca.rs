use ndarray::{Array2, ArrayView2, Axis};

use super::eigen::symmetric_eigen;
use super::kernel::{kernel_matrix, Kernel};
use crate::error::{Error, Result};

/// Eigenvalues below this fraction of the leading one are treated as zero.
const RELATIVE_EIGEN_FLOOR: f64 = 1e-12;

/// `H K H` with `H = I - 11ᵀ/m`.
pub fn double_center(k: &Array2<f64>) -> Array2<f64> {
    let row_means = k.mean_axis(Axis(1)).expect("nonempty");
    let col_means = k.mean_axis(Axis(0)).expect("nonempty");
    let total = row_means.mean().expect("nonempty");
    Array2::from_shape_fn(k.raw_dim(), |(i, j)| {
        k[[i, j]] - row_means[i] - col_means[j] + total
    })
}

/// Kernel PCA coordinates of the training rows: column `c` is
/// `√λ_c · v_c` for the `c`-th largest eigenpair of the centered Gram
/// matrix. Each column's sign makes its largest-magnitude entry positive.
pub fn kpca_project(x: ArrayView2<f64>, kernel: &dyn Kernel, dims: usize) -> Result<Array2<f64>> {
    let m = x.nrows();
    if dims == 0 || m < dims + 1 {
        return Err(Error::InvalidParameter(format!(
            "kernel PCA needs more rows ({m}) than components ({dims})"
        )));
    }
    let kc = double_center(&kernel_matrix(x, kernel));
    let (values, vectors) = symmetric_eigen(&kc)?;
    let lead = values[0];
    if lead.is_nan() || lead <= 0.0 {
        return Err(Error::DegenerateKernel(lead));
    }
    let mut out = Array2::zeros((m, dims));
    for c in 0..dims {
        let lambda = values[c];
        if lambda <= RELATIVE_EIGEN_FLOOR * lead {
            continue;
        }
        let mut col = vectors.column(c).to_owned() * lambda.sqrt();
        let pivot = col
            .iter()
            .copied()
            .max_by(|a, b| a.abs().total_cmp(&b.abs()))
            .unwrap_or(0.0);
        if pivot < 0.0 {
            col.mapv_inplace(|v| -v);
        }
        out.column_mut(c).assign(&col);
    }
    Ok(out)
}
