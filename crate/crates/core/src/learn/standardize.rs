use ndarray::{Array1, Array2, ArrayView2, Axis};
use serde::Serialize;

/// Per-column shift and scale fitted on one matrix and applied to others.
/// Uses the population standard deviation; a constant column maps to zeros.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Standardizer {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

impl Standardizer {
    pub fn fit(x: ArrayView2<f64>) -> Self {
        assert!(x.nrows() > 0, "standardizer needs at least one row");
        let mean: Array1<f64> = x.mean_axis(Axis(0)).expect("nonempty");
        let std = x.std_axis(Axis(0), 0.0);
        Self {
            mean: mean.to_vec(),
            std: std.to_vec(),
        }
    }

    pub fn transform(&self, x: ArrayView2<f64>) -> Array2<f64> {
        assert_eq!(x.ncols(), self.mean.len(), "column count mismatch");
        let mut out = x.to_owned();
        for (j, mut col) in out.axis_iter_mut(Axis(1)).enumerate() {
            let (m, s) = (self.mean[j], self.std[j]);
            if s > 0.0 {
                col.mapv_inplace(|v| (v - m) / s);
            } else {
                col.fill(0.0);
            }
        }
        out
    }
}

/// Fits on `train` and transforms `apply_to`.
pub fn standardize(train: ArrayView2<f64>, apply_to: ArrayView2<f64>) -> Array2<f64> {
    Standardizer::fit(train).transform(apply_to)
}
