use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use ndarray::{Array2, ArrayView1, ArrayView2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::registry::{Named, Registry};

/// A positive semidefinite similarity on feature rows.
pub trait Kernel: Send + Sync + fmt::Debug {
    fn eval(&self, a: ArrayView1<f64>, b: ArrayView1<f64>) -> f64;

    /// The fully resolved spec, with any data-derived parameter filled in.
    fn spec(&self) -> KernelSpec;
}

/// Builds a concrete kernel, possibly fitting a parameter to data.
pub trait KernelFamily: Named + Send + Sync {
    fn instantiate(&self, param: Option<f64>, data: ArrayView2<f64>) -> Result<Arc<dyn Kernel>>;
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearKernel;

impl Kernel for LinearKernel {
    fn eval(&self, a: ArrayView1<f64>, b: ArrayView1<f64>) -> f64 {
        a.dot(&b)
    }

    fn spec(&self) -> KernelSpec {
        KernelSpec::linear()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RbfKernel {
    gamma: f64,
}

impl RbfKernel {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "rbf gamma must be positive, got {gamma}"
            )));
        }
        Ok(Self { gamma })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

impl Kernel for RbfKernel {
    fn eval(&self, a: ArrayView1<f64>, b: ArrayView1<f64>) -> f64 {
        let d2: f64 = a.iter().zip(b.iter()).map(|(x, y)| (x - y).powi(2)).sum();
        (-self.gamma * d2).exp()
    }

    fn spec(&self) -> KernelSpec {
        KernelSpec {
            family: "rbf".into(),
            param: Some(self.gamma),
        }
    }
}

/// `1 / (2 · median pairwise squared distance)`. Falls back to the mean of
/// the nonzero squared distances when the median is zero, and to 1 when all
/// points coincide.
pub fn median_heuristic_gamma(x: ArrayView2<f64>) -> f64 {
    let m = x.nrows();
    let mut d2 = Vec::with_capacity(m * m.saturating_sub(1) / 2);
    for i in 0..m {
        for j in i + 1..m {
            let r = &x.row(i) - &x.row(j);
            d2.push(r.dot(&r));
        }
    }
    if d2.is_empty() {
        return 1.0;
    }
    d2.sort_by(f64::total_cmp);
    let k = d2.len();
    let median = if k % 2 == 1 {
        d2[k / 2]
    } else {
        0.5 * (d2[k / 2 - 1] + d2[k / 2])
    };
    if median > 0.0 {
        return 1.0 / (2.0 * median);
    }
    let nonzero: Vec<f64> = d2.into_iter().filter(|&v| v > 0.0).collect();
    if nonzero.is_empty() {
        1.0
    } else {
        1.0 / (2.0 * nonzero.iter().sum::<f64>() / nonzero.len() as f64)
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct LinearFamily;

impl Named for LinearFamily {
    fn name(&self) -> &'static str {
        "linear"
    }

    fn description(&self) -> &'static str {
        "k(a, b) = a·b"
    }
}

impl KernelFamily for LinearFamily {
    fn instantiate(&self, param: Option<f64>, _data: ArrayView2<f64>) -> Result<Arc<dyn Kernel>> {
        if param.is_some() {
            return Err(Error::InvalidParameter("linear kernel takes no parameter".into()));
        }
        Ok(Arc::new(LinearKernel))
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct RbfFamily;

impl Named for RbfFamily {
    fn name(&self) -> &'static str {
        "rbf"
    }

    fn description(&self) -> &'static str {
        "k(a, b) = exp(-gamma |a-b|^2); gamma defaults to the median heuristic"
    }
}

impl KernelFamily for RbfFamily {
    fn instantiate(&self, param: Option<f64>, data: ArrayView2<f64>) -> Result<Arc<dyn Kernel>> {
        let gamma = param.unwrap_or_else(|| median_heuristic_gamma(data));
        Ok(Arc::new(RbfKernel::new(gamma)?))
    }
}

pub fn kernel_families() -> Registry<dyn KernelFamily> {
    Registry::<dyn KernelFamily>::new("kernel")
        .with(Arc::new(LinearFamily))
        .with(Arc::new(RbfFamily))
}

/// `family[:param]`, e.g. `linear`, `rbf`, `rbf:0.5`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct KernelSpec {
    pub family: String,
    pub param: Option<f64>,
}

impl KernelSpec {
    pub fn linear() -> Self {
        Self {
            family: "linear".into(),
            param: None,
        }
    }

    pub fn rbf_median() -> Self {
        Self {
            family: "rbf".into(),
            param: None,
        }
    }

    /// Resolves the family by name and fits any free parameter on `data`.
    pub fn build(&self, data: ArrayView2<f64>) -> Result<Arc<dyn Kernel>> {
        kernel_families().get(&self.family)?.instantiate(self.param, data)
    }
}

impl fmt::Display for KernelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.param {
            Some(p) => write!(f, "{}:{p}", self.family),
            None => f.write_str(&self.family),
        }
    }
}

impl FromStr for KernelSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (family, param) = match s.split_once(':') {
            Some((fam, p)) => {
                let v: f64 = p
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidParameter(format!("bad kernel parameter in {s:?}")))?;
                (fam.trim(), Some(v))
            }
            None => (s.trim(), None),
        };
        let registry = kernel_families();
        registry.get(family)?;
        Ok(Self {
            family: family.to_string(),
            param,
        })
    }
}

impl TryFrom<String> for KernelSpec {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<KernelSpec> for String {
    fn from(k: KernelSpec) -> String {
        k.to_string()
    }
}

/// Gram matrix of the rows of `x`.
pub fn kernel_matrix(x: ArrayView2<f64>, kernel: &dyn Kernel) -> Array2<f64> {
    let m = x.nrows();
    let mut k = Array2::zeros((m, m));
    for i in 0..m {
        for j in i..m {
            let v = kernel.eval(x.row(i), x.row(j));
            k[[i, j]] = v;
            k[[j, i]] = v;
        }
    }
    k
}

/// `K[i][j] = k(a_i, b_j)`.
pub fn cross_kernel(a: ArrayView2<f64>, b: ArrayView2<f64>, kernel: &dyn Kernel) -> Array2<f64> {
    Array2::from_shape_fn((a.nrows(), b.nrows()), |(i, j)| kernel.eval(a.row(i), b.row(j)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use ndarray::array;

    #[test]
    fn linear_gram_of_orthonormal_rows() {
        let x = array![[1.0, 0.0], [0.0, 1.0]];
        assert_eq!(kernel_matrix(x.view(), &LinearKernel), Array2::<f64>::eye(2));
    }

    #[test]
    fn rbf_diagonal_and_gamma_validation() {
        let x = array![[1.0, 2.0], [1.0, 2.0], [0.0, 0.0]];
        let k = kernel_matrix(x.view(), &RbfKernel::new(0.3).unwrap());
        assert_eq!(k[[0, 1]], 1.0);
        assert_abs_diff_eq!(k[[0, 2]], (-1.5f64).exp(), epsilon = 1e-15);
        assert!(RbfKernel::new(0.0).is_err());
        assert!(RbfKernel::new(-1.0).is_err());
    }

    #[test]
    fn median_heuristic_example() {
        // squared distances 1, 9, 4
        let x = array![[0.0], [1.0], [3.0]];
        assert_abs_diff_eq!(median_heuristic_gamma(x.view()), 1.0 / 8.0, epsilon = 1e-15);
        let same = array![[2.0], [2.0]];
        assert_eq!(median_heuristic_gamma(same.view()), 1.0);
        // median zero, nonzero mean fallback
        let mostly = array![[0.0], [0.0], [0.0], [0.0], [2.0]];
        assert_abs_diff_eq!(median_heuristic_gamma(mostly.view()), 1.0 / 8.0, epsilon = 1e-15);
    }

    #[test]
    fn spec_parsing_and_resolution() {
        let s: KernelSpec = "rbf:0.5".parse().unwrap();
        assert_eq!(s.param, Some(0.5));
        assert_eq!(s.to_string(), "rbf:0.5");
        let x = array![[0.0], [1.0], [3.0]];
        let k = "rbf".parse::<KernelSpec>().unwrap().build(x.view()).unwrap();
        assert_eq!(k.spec().to_string(), "rbf:0.125");
        assert!("poly".parse::<KernelSpec>().is_err());
        assert!("rbf:x".parse::<KernelSpec>().is_err());
        assert!("linear:1".parse::<KernelSpec>().unwrap().build(x.view()).is_err());
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, "\"rbf:0.5\"");
    }
}
