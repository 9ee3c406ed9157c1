use ndarray::{Array2, ArrayView2};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::kernel::KernelSpec;
use super::metrics::{f1_score, median, quantile};
use super::ocsvm::{ocsvm_train, OcsvmModel, OcsvmParams};
use super::standardize::Standardizer;
use crate::boolfn::ClassKind;
use crate::embed::DiagonalDensity;
use crate::error::{Error, Result};
use crate::observe::{sample_features, FeatureVector};

/// Index sets into a dataset, each holding half of every class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrainTestSplit {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

impl TrainTestSplit {
    /// Shuffles each class with `seed` and sends the first half to train.
    pub fn per_class_halves(labels: &[ClassKind], seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (mut train, mut test) = (Vec::new(), Vec::new());
        for kind in [ClassKind::OneToOne, ClassKind::TwoToOne] {
            let mut idx: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == kind).collect();
            idx.shuffle(&mut rng);
            let half = idx.len() / 2;
            train.extend_from_slice(&idx[..half]);
            test.extend_from_slice(&idx[half..]);
        }
        train.sort_unstable();
        test.sort_unstable();
        Self { train, test }
    }
}

/// Rows whose statistics fit the detector's standardizer.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StandardizeScope {
    /// Every training row, labels unused.
    #[default]
    TrainPooled,
    /// Only the 1:1 training rows.
    TrainInliers,
}

/// Standardizer plus one-class SVM trained on the 1:1 training rows.
#[derive(Clone, Debug)]
pub struct Detector {
    pub standardizer: Standardizer,
    pub model: OcsvmModel,
}

impl Detector {
    pub fn fit(
        features: ArrayView2<f64>,
        labels: &[ClassKind],
        train: &[usize],
        kernel: &KernelSpec,
        params: OcsvmParams,
        scope: StandardizeScope,
    ) -> Result<Self> {
        let inliers: Vec<usize> = train
            .iter()
            .copied()
            .filter(|&i| labels[i] == ClassKind::OneToOne)
            .collect();
        let fit_rows = match scope {
            StandardizeScope::TrainPooled => train,
            StandardizeScope::TrainInliers => &inliers[..],
        };
        let standardizer = Standardizer::fit(select_rows(features, fit_rows).view());
        let x = standardizer.transform(select_rows(features, &inliers).view());
        let k = kernel.build(x.view())?;
        let model = ocsvm_train(x.view(), k, params)?;
        Ok(Self { standardizer, model })
    }

    pub fn scores(&self, features: ArrayView2<f64>) -> Vec<f64> {
        self.model.scores(self.standardizer.transform(features).view())
    }

    /// Inliers are predicted 1:1, outliers 2:1.
    pub fn predict(&self, features: ArrayView2<f64>) -> Vec<ClassKind> {
        self.scores(features)
            .into_iter()
            .map(|s| if self.model.is_inlier_score(s) { ClassKind::OneToOne } else { ClassKind::TwoToOne })
            .collect()
    }
}

pub fn select_rows(x: ArrayView2<f64>, rows: &[usize]) -> Array2<f64> {
    x.select(ndarray::Axis(0), rows)
}

pub fn feature_matrix(features: &[FeatureVector]) -> Array2<f64> {
    Array2::from_shape_fn((features.len(), 2), |(i, j)| features[i].as_array()[j])
}

/// Features of every density at one shot budget; function `i` draws from
/// `seed ^ i`.
pub fn sample_all_features(
    densities: &[DiagonalDensity],
    shots: usize,
    seed: u64,
) -> Result<Vec<FeatureVector>> {
    densities
        .par_iter()
        .enumerate()
        .map(|(id, rho)| sample_features(rho, shots, id, seed))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Split {
    Train,
    Test,
}

impl Split {
    pub fn as_str(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Test => "test",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub shots: usize,
    pub seed: u64,
    pub split: Split,
    /// F1 with 1:1 (the trained inlier class) as positive.
    pub f1_inlier: f64,
    /// F1 with 2:1 as positive.
    pub f1_outlier: f64,
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub shots: Vec<usize>,
    pub seeds: Vec<u64>,
    pub kernel: KernelSpec,
    pub params: OcsvmParams,
    pub scope: StandardizeScope,
}

/// One-class SVM F1 on train and test halves for every `(shots, seed)`
/// cell. Features and the split are both drawn from the cell seed. Rows come
/// back ordered by shots, then seed, then split.
pub fn shots_sweep(
    densities: &[DiagonalDensity],
    labels: &[ClassKind],
    config: &SweepConfig,
) -> Result<Vec<SweepRow>> {
    if densities.len() != labels.len() {
        return Err(Error::InvalidParameter("densities and labels differ in length".into()));
    }
    let cells: Vec<(usize, u64)> = config
        .shots
        .iter()
        .flat_map(|&s| config.seeds.iter().map(move |&seed| (s, seed)))
        .collect();
    let rows: Vec<[SweepRow; 2]> = cells
        .par_iter()
        .map(|&(shots, seed)| sweep_cell(densities, labels, config, shots, seed))
        .collect::<Result<_>>()?;
    Ok(rows.into_iter().flatten().collect())
}

fn sweep_cell(
    densities: &[DiagonalDensity],
    labels: &[ClassKind],
    config: &SweepConfig,
    shots: usize,
    seed: u64,
) -> Result<[SweepRow; 2]> {
    let features = feature_matrix(&sample_all_features(densities, shots, seed)?);
    let split = TrainTestSplit::per_class_halves(labels, seed);
    let detector = Detector::fit(
        features.view(),
        labels,
        &split.train,
        &config.kernel,
        config.params,
        config.scope,
    )?;
    let row = |which: Split, idx: &[usize]| {
        let pred = detector.predict(select_rows(features.view(), idx).view());
        let truth: Vec<ClassKind> = idx.iter().map(|&i| labels[i]).collect();
        SweepRow {
            shots,
            seed,
            split: which,
            f1_inlier: f1_score(&pred, &truth, ClassKind::OneToOne),
            f1_outlier: f1_score(&pred, &truth, ClassKind::TwoToOne),
        }
    };
    Ok([row(Split::Train, &split.train), row(Split::Test, &split.test)])
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SweepSummary {
    pub shots: usize,
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
}

/// Median and interquartile range of the inlier F1 for one split, per shot
/// budget in first-seen order.
pub fn summarize_sweep(rows: &[SweepRow], split: Split) -> Vec<SweepSummary> {
    let mut shots: Vec<usize> = Vec::new();
    for r in rows {
        if !shots.contains(&r.shots) {
            shots.push(r.shots);
        }
    }
    shots
        .into_iter()
        .map(|s| {
            let v: Vec<f64> = rows
                .iter()
                .filter(|r| r.shots == s && r.split == split)
                .map(|r| r.f1_inlier)
                .collect();
            SweepSummary {
                shots: s,
                median: median(&v),
                q1: quantile(&v, 0.25),
                q3: quantile(&v, 0.75),
            }
        })
        .collect()
}

/// Convenience used by tests and the pipeline: default detector settings.
pub fn default_sweep_config(shots: Vec<usize>, seeds: Vec<u64>, nu: f64) -> SweepConfig {
    SweepConfig {
        shots,
        seeds,
        kernel: KernelSpec::linear(),
        params: OcsvmParams::with_nu(nu),
        scope: StandardizeScope::TrainPooled,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::{gen_dataset, LinearGenerator};
    use crate::embed::embed_diagonal;

    fn n6_dataset() -> (Vec<DiagonalDensity>, Vec<ClassKind>) {
        let ds = gen_dataset(6, 120, 42, &LinearGenerator).unwrap();
        (
            ds.entries.iter().map(|e| embed_diagonal(&e.function)).collect(),
            ds.labels(),
        )
    }

    #[test]
    fn split_is_balanced_and_disjoint() {
        let (_, labels) = n6_dataset();
        let s = TrainTestSplit::per_class_halves(&labels, 3);
        assert_eq!(s.train.len(), 60);
        assert_eq!(s.test.len(), 60);
        let ones = s.train.iter().filter(|&&i| labels[i] == ClassKind::OneToOne).count();
        assert_eq!(ones, 30);
        assert!(s.train.iter().all(|i| !s.test.contains(i)));
        assert_eq!(s, TrainTestSplit::per_class_halves(&labels, 3));
    }

    #[test]
    fn sweep_is_deterministic_and_ordered() {
        let (rho, labels) = n6_dataset();
        let cfg = default_sweep_config(vec![100, 5000], vec![1, 2], 0.01);
        let a = shots_sweep(&rho, &labels, &cfg).unwrap();
        assert_eq!(a.len(), 8);
        assert_eq!((a[0].shots, a[0].seed, a[0].split), (100, 1, Split::Train));
        assert_eq!((a[7].shots, a[7].seed, a[7].split), (5000, 2, Split::Test));
        assert_eq!(a, shots_sweep(&rho, &labels, &cfg).unwrap());
    }

    #[test]
    fn tiny_budget_is_near_chance() {
        let (rho, labels) = n6_dataset();
        let cfg = default_sweep_config(vec![2], vec![42, 43, 44, 45, 46], 0.01);
        let rows = shots_sweep(&rho, &labels, &cfg).unwrap();
        let s = summarize_sweep(&rows, Split::Test);
        assert!(s[0].median < 0.8, "{:?}", s[0]);
    }
}
