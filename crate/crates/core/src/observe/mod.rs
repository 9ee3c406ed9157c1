//! The permutation-invariant all-Z observable and the features read from it.
//!
//! `O = Σ_{S ≠ ∅} Π_{i∈S} Z_i = Π_i (1 + Z_i) - 1 = 2^n |0><0| - 1`, so a
//! basis state `|y>` has eigenvalue `2^n - 1` at `y = 0` and `-1` otherwise.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::boolfn::{BitString, BooleanFunction};
use crate::embed::{embed_diagonal, DiagonalDensity};
use crate::error::{Error, Result};
use crate::qsim::{DenseOperator, Sampler};

/// Largest width for which the explicit Z-product sum is built.
pub const MAX_DENSE_OBSERVABLE_WIDTH: usize = 4;

/// Eigenvalue of the observable on basis index `y` of an `n`-qubit register.
#[inline]
pub fn eigenvalue(y: usize, n: usize) -> f64 {
    if y == 0 {
        ((1u64 << n) - 1) as f64
    } else {
        -1.0
    }
}

pub fn observable_value(y: BitString, n: usize) -> f64 {
    assert_eq!(y.width(), n, "width mismatch");
    eigenvalue(y.index(), n)
}

/// The literal sum of all `2^n - 1` nonempty Z products.
pub fn dense_observable(n: usize) -> Result<DenseOperator> {
    if n == 0 || n > MAX_DENSE_OBSERVABLE_WIDTH {
        return Err(Error::InvalidParameter(format!(
            "dense observable supports 1..={MAX_DENSE_OBSERVABLE_WIDTH} qubits, got {n}"
        )));
    }
    let z = DenseOperator::pauli_z();
    let id = DenseOperator::identity(2)?;
    let mut sum = DenseOperator::zeros(1 << n)?;
    for subset in 1usize..1 << n {
        let factors: Vec<&DenseOperator> = (0..n)
            .map(|q| if subset >> q & 1 == 1 { &z } else { &id })
            .collect();
        sum = &sum + &crate::qsim::dense_kron(&factors)?;
    }
    Ok(sum)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Moments {
    pub expectation: f64,
    pub variance: f64,
}

/// `tr(ρO)` and `tr(ρO²) - tr(ρO)²`.
pub fn exact_moments(rho: &DiagonalDensity) -> Moments {
    let n = rho.n();
    let (m1, m2) = rho
        .probs()
        .iter()
        .enumerate()
        .fold((0.0, 0.0), |(a, b), (y, &p)| {
            let v = eigenvalue(y, n);
            (a + p * v, b + p * v * v)
        });
    Moments {
        expectation: m1,
        variance: m2 - m1 * m1,
    }
}

/// Sample mean and unbiased sample variance of `shots` measurements of the
/// observable on `rho`.
pub fn sample_moments<R: Rng + ?Sized>(
    rho: &DiagonalDensity,
    shots: usize,
    rng: &mut R,
) -> Result<Moments> {
    if shots < 2 {
        return Err(Error::InvalidParameter(format!(
            "at least 2 shots are needed for a variance, got {shots}"
        )));
    }
    let n = rho.n();
    let sampler = Sampler::new(rho.probs())?;
    let values: Vec<f64> = (0..shots)
        .map(|_| eigenvalue(sampler.sample_index(rng), n))
        .collect();
    let mean = values.iter().sum::<f64>() / shots as f64;
    let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
    Ok(Moments {
        expectation: mean,
        variance: ss / (shots - 1) as f64,
    })
}

/// The per-function feature vector `(mean, variance)` with its provenance.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FeatureVector {
    pub function_id: usize,
    pub seed: u64,
    pub shots: usize,
    pub mean: f64,
    pub variance: f64,
}

impl FeatureVector {
    pub fn as_array(&self) -> [f64; 2] {
        [self.mean, self.variance]
    }
}

pub fn feature_seed(base_seed: u64, function_id: usize) -> u64 {
    base_seed ^ function_id as u64
}

/// Samples the features of one function from its own seeded stream.
pub fn sample_features(
    rho: &DiagonalDensity,
    shots: usize,
    function_id: usize,
    base_seed: u64,
) -> Result<FeatureVector> {
    let seed = feature_seed(base_seed, function_id);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = sample_moments(rho, shots, &mut rng)?;
    Ok(FeatureVector {
        function_id,
        seed,
        shots,
        mean: m.expectation,
        variance: m.variance,
    })
}

/// `h(f) = tr(ρ(f) O)` with the identity ansatz.
pub fn model_evaluate(f: &BooleanFunction) -> f64 {
    exact_moments(&embed_diagonal(f)).expectation
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::{gen_one_to_one, gen_two_to_one_linear, gen_two_to_one_table};
    use crate::embed::{apply_symmetry, symmetry_generators};
    use approx::assert_abs_diff_eq;

    #[test]
    fn eigenvalue_examples() {
        assert_eq!(observable_value(BitString::parse("0").unwrap(), 1), 1.0);
        assert_eq!(observable_value(BitString::parse("000000").unwrap(), 6), 63.0);
        assert_eq!(observable_value(BitString::parse("000001").unwrap(), 6), -1.0);
    }

    #[test]
    fn eigenvalue_matches_signed_subset_sum() {
        for n in 1..=8 {
            for y in 0..1usize << n {
                let sum: i64 = (1usize..1 << n)
                    .map(|s| if (s & y).count_ones() % 2 == 0 { 1 } else { -1 })
                    .sum();
                assert_eq!(eigenvalue(y, n), sum as f64);
            }
        }
    }

    #[test]
    fn dense_sum_equals_projector_form() {
        for n in 1..=4 {
            let o = dense_observable(n).unwrap();
            let diag: Vec<f64> = (0..1 << n).map(|y| eigenvalue(y, n)).collect();
            assert_eq!(o, DenseOperator::from_real_diagonal(&diag).unwrap());
        }
        let o2 = dense_observable(2).unwrap();
        assert_eq!(o2, DenseOperator::from_real_diagonal(&[3.0, -1.0, -1.0, -1.0]).unwrap());
        assert!(dense_observable(5).is_err());
    }

    #[test]
    fn swap_invariance_and_bitflip_covariance() {
        let n = 2;
        let o = dense_observable(n).unwrap();
        let swap = DenseOperator::swap(0, 1, n).unwrap();
        assert_eq!(swap.matmul(&o).matmul(&swap), o);
        let x0 = crate::embed::SymmetryOp::Bitflip(0).dense(n).unwrap();
        let flipped = x0.matmul(&o).matmul(&x0);
        assert_eq!(flipped, DenseOperator::from_real_diagonal(&[-1.0, 3.0, -1.0, -1.0]).unwrap());
        assert_ne!(flipped, o);
    }

    #[test]
    fn exact_moment_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let m = exact_moments(&embed_diagonal(&gen_one_to_one(6, &mut rng)));
        assert_abs_diff_eq!(m.expectation, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(m.variance, 63.0, epsilon = 1e-12);
        let m = exact_moments(&embed_diagonal(&gen_two_to_one_linear(6, &mut rng)));
        assert_abs_diff_eq!(m.expectation, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(m.variance, 124.0, epsilon = 1e-12);
        let mut point = vec![0.0; 64];
        point[0] = 1.0;
        let m = exact_moments(&DiagonalDensity::new(6, point));
        assert_eq!((m.expectation, m.variance), (63.0, 0.0));
    }

    #[test]
    fn model_values_per_class() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            assert_abs_diff_eq!(model_evaluate(&gen_one_to_one(6, &mut rng)), 0.0, epsilon = 1e-12);
            assert_abs_diff_eq!(model_evaluate(&gen_two_to_one_linear(6, &mut rng)), 1.0, epsilon = 1e-12);
            let t = gen_two_to_one_table(6, &mut rng);
            let expected = if t.truth_table().contains(&0) { 1.0 } else { -1.0 };
            assert_abs_diff_eq!(model_evaluate(&t), expected, epsilon = 1e-12);
        }
    }

    #[test]
    fn bitflips_preserve_absolute_expectation() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for f in [gen_one_to_one(5, &mut rng), gen_two_to_one_linear(5, &mut rng)] {
            let rho = embed_diagonal(&f);
            let e = exact_moments(&rho).expectation.abs();
            for op in symmetry_generators(5) {
                let e2 = exact_moments(&apply_symmetry(&rho, op)).expectation.abs();
                assert_abs_diff_eq!(e, e2, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn sampled_features() {
        let rho = embed_diagonal(&BooleanFunction::identity(6));
        let within = (0..200u64)
            .filter(|&s| {
                let fv = sample_features(&rho, 5000, 0, s).unwrap();
                fv.mean.abs() <= 0.34
            })
            .count();
        assert!(within >= 198, "{within}");

        let mut point = vec![0.0; 64];
        point[0] = 1.0;
        let fv = sample_features(&DiagonalDensity::new(6, point), 100, 3, 9).unwrap();
        assert_eq!(fv.variance, 0.0);
        assert_eq!(fv.seed, 9 ^ 3);

        assert!(sample_features(&rho, 1, 0, 0).is_err());
        assert_eq!(sample_features(&rho, 50, 4, 1).unwrap(), sample_features(&rho, 50, 4, 1).unwrap());
    }

    #[test]
    fn sampled_mean_error_scales_inverse_with_shots() {
        let rho = embed_diagonal(&BooleanFunction::identity(6));
        let exact = exact_moments(&rho);
        let shots_grid = [10usize, 50, 100, 500, 1000, 5000];
        let reps = 400;
        let (xs, ys): (Vec<f64>, Vec<f64>) = shots_grid
            .iter()
            .map(|&shots| {
                let mse = (0..reps)
                    .map(|r| {
                        let mut rng = ChaCha8Rng::seed_from_u64(r as u64 * 7919 + shots as u64);
                        let m = sample_moments(&rho, shots, &mut rng).unwrap();
                        (m.expectation - exact.expectation).powi(2)
                    })
                    .sum::<f64>()
                    / reps as f64;
                ((shots as f64).ln(), mse.ln())
            })
            .unzip();
        let (mx, my) = (xs.iter().sum::<f64>() / 6.0, ys.iter().sum::<f64>() / 6.0);
        let slope = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
            / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
        assert!((slope + 1.0).abs() <= 0.1, "{slope}");
    }
}
