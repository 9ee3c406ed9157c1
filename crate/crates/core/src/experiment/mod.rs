//! Drivers behind the command-line subcommands. Each writes plot-ready CSV
//! (or JSON) into the configured output directory and returns a summary.
//! Work is parallel per function or per cell; files are written afterwards
//! in id order, so outputs depend only on the config.

mod config;
mod output;

use std::path::{Path, PathBuf};

use ndarray::Axis;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

pub use config::ExperimentConfig;
pub use output::{read_csv, write_csv, write_text};

use crate::boolfn::{gen_dataset, generators, ClassKind, Dataset, Manifest};
use crate::embed::{embedders, DiagonalDensity};
use crate::error::{Error, Result};
use crate::graphs::{best_threshold, build_graph, export_dot, Threshold, TopologyReport};
use crate::learn::{
    best_relabel_agreement, f1_score, feature_matrix, kmeans_cluster, kpca_project,
    sample_all_features, shots_sweep, summarize_sweep, Detector, OcsvmParams,
    Split, Standardizer, SweepRow, SweepSummary, TrainTestSplit,
};
use crate::observe::{exact_moments, Moments};
use crate::simon::{query_strategies, QueryStrategy};

/// JSON Schema of `summary.json`.
pub const SUMMARY_SCHEMA: &str = include_str!("../../schemas/summary.schema.json");

pub const MANIFEST_FILE: &str = "manifest.json";
/// Functions per class in the graph-report visualization subset.
pub const VISUALIZATION_PER_CLASS: usize = 32;

fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

pub fn generate_dataset(cfg: &ExperimentConfig) -> Result<Dataset> {
    let generator = generators().get(&cfg.generator)?;
    gen_dataset(cfg.n, cfg.m, cfg.seed, generator.as_ref())
}

/// Writes the manifest of the configured dataset and returns its path.
pub fn cmd_generate(cfg: &ExperimentConfig) -> Result<PathBuf> {
    let ds = generate_dataset(cfg)?;
    let config = serde_json::to_value(cfg)?;
    let path = cfg.out_dir.join(MANIFEST_FILE);
    write_text(&path, &Manifest::from_dataset(&ds, Some(config)).to_json()?)?;
    Ok(path)
}

/// Loads `manifest` if given, otherwise regenerates the dataset from the
/// config. A manifest whose width disagrees with the config is rejected.
pub fn load_dataset(cfg: &ExperimentConfig, manifest: Option<&Path>) -> Result<Dataset> {
    match manifest {
        None => generate_dataset(cfg),
        Some(path) => {
            let ds = Manifest::load(path)?.to_dataset()?;
            if ds.n != cfg.n {
                return Err(Error::Manifest(format!(
                    "manifest has n = {} but the config has n = {}",
                    ds.n, cfg.n
                )));
            }
            if ds.is_empty() {
                return Err(Error::Manifest("manifest has no entries".into()));
            }
            Ok(ds)
        }
    }
}

pub fn embed_dataset(ds: &Dataset, embedder: &str) -> Result<Vec<DiagonalDensity>> {
    let e = embedders().get(embedder)?;
    ds.entries.par_iter().map(|entry| e.embed(&entry.function)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ClassPair {
    pub one_to_one: f64,
    pub two_to_one: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KpcaSummary {
    pub kernel: String,
    /// Gap between the classes along the first component; positive means
    /// the classes do not overlap there.
    pub separation_margin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KmeansSummary {
    pub agreement: f64,
    pub inertia: f64,
    pub iterations: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OcsvmSummary {
    pub nu: f64,
    pub kernel: String,
    pub standardize: crate::learn::StandardizeScope,
    pub support_vectors: usize,
    pub rho: f64,
    pub iterations: usize,
    pub f1_train: f64,
    pub f1_test: f64,
    pub f1_test_outlier: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PipelineSummary {
    pub n: usize,
    pub m: usize,
    pub shots: usize,
    pub seed: u64,
    pub generator: String,
    pub embedder: String,
    pub exact_means: ClassPair,
    pub exact_variances: ClassPair,
    /// Largest `|h(f)|` over 1:1 functions and `||h(f)| - 1|` over 2:1.
    pub max_exact_mean_deviation: f64,
    pub kpca: KpcaSummary,
    pub kmeans: KmeansSummary,
    pub ocsvm: OcsvmSummary,
    pub f1_train: f64,
    pub f1_test: f64,
    pub train_size: usize,
    pub test_size: usize,
}

fn class_means(moments: &[Moments], labels: &[ClassKind], pick: impl Fn(&Moments) -> f64) -> ClassPair {
    let mean_of = |kind| {
        let v: Vec<f64> = moments
            .iter()
            .zip(labels)
            .filter(|(_, &l)| l == kind)
            .map(|(m, _)| pick(m))
            .collect();
        if v.is_empty() {
            f64::NAN
        } else {
            v.iter().sum::<f64>() / v.len() as f64
        }
    };
    ClassPair {
        one_to_one: mean_of(ClassKind::OneToOne),
        two_to_one: mean_of(ClassKind::TwoToOne),
    }
}

fn separation_margin(values: &[f64], labels: &[ClassKind]) -> f64 {
    let range = |kind| {
        values
            .iter()
            .zip(labels)
            .filter(|(_, &l)| l == kind)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (&v, _)| (lo.min(v), hi.max(v)))
    };
    let (a_lo, a_hi) = range(ClassKind::OneToOne);
    let (b_lo, b_hi) = range(ClassKind::TwoToOne);
    (b_lo - a_hi).max(a_lo - b_hi)
}

/// Features at `cfg.shots`, kernel PCA, k-means and the one-class SVM.
pub fn cmd_pipeline(cfg: &ExperimentConfig, ds: &Dataset) -> Result<PipelineSummary> {
    let header = cfg.header_lines();
    let out = &cfg.out_dir;
    let labels = ds.labels();
    let ids: Vec<usize> = ds.entries.iter().map(|e| e.id).collect();
    let densities = embed_dataset(ds, &cfg.embedder)?;
    let moments: Vec<Moments> = densities.iter().map(exact_moments).collect();
    let max_dev = moments
        .iter()
        .zip(&labels)
        .map(|(m, l)| match l {
            ClassKind::OneToOne => m.expectation.abs(),
            ClassKind::TwoToOne => (m.expectation.abs() - 1.0).abs(),
        })
        .fold(0.0, f64::max);

    let features = sample_all_features(&densities, cfg.shots, cfg.seed)?;
    write_csv(
        &out.join("features.csv"),
        &header,
        &["function_id", "label", "shots", "seed", "mean", "variance", "exact_mean", "exact_variance"],
        features.iter().zip(&moments).enumerate().map(|(i, (f, m))| {
            vec![
                ids[i].to_string(),
                labels[i].label().into(),
                f.shots.to_string(),
                f.seed.to_string(),
                fmt_f64(f.mean),
                fmt_f64(f.variance),
                fmt_f64(m.expectation),
                fmt_f64(m.variance),
            ]
        }),
        &[],
    )?;
    let x = feature_matrix(&features);
    let z = Standardizer::fit(x.view()).transform(x.view());

    let kpca_kernel = cfg.kpca_kernel.build(z.view())?;
    let coords = kpca_project(z.view(), kpca_kernel.as_ref(), 2)?;
    write_csv(
        &out.join("kpca.csv"),
        &header,
        &["function_id", "label", "coord1", "coord2"],
        (0..ids.len()).map(|i| {
            vec![
                ids[i].to_string(),
                labels[i].label().into(),
                fmt_f64(coords[[i, 0]]),
                fmt_f64(coords[[i, 1]]),
            ]
        }),
        &[],
    )?;
    let pc1: Vec<f64> = coords.index_axis(Axis(1), 0).to_vec();

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let km = kmeans_cluster(z.view(), 2, cfg.kmeans_restarts, &mut rng)?;
    let truth: Vec<usize> = labels.iter().map(|l| l.as_index()).collect();
    let agreement = best_relabel_agreement(&km.assignments, &truth, 2);
    write_csv(
        &out.join("kmeans.csv"),
        &header,
        &["function_id", "label", "cluster"],
        (0..ids.len()).map(|i| vec![ids[i].to_string(), labels[i].label().into(), km.assignments[i].to_string()]),
        &[format!("best-relabel agreement {agreement}"), format!("inertia {}", km.inertia)],
    )?;

    let split = TrainTestSplit::per_class_halves(&labels, cfg.seed);
    let detector = Detector::fit(
        x.view(),
        &labels,
        &split.train,
        &cfg.ocsvm_kernel,
        OcsvmParams::with_nu(cfg.nu),
        cfg.standardize,
    )?;
    let scores = detector.scores(x.view());
    let predicted: Vec<ClassKind> = scores
        .iter()
        .map(|&s| if detector.model.is_inlier_score(s) { ClassKind::OneToOne } else { ClassKind::TwoToOne })
        .collect();
    let mut split_of = vec![Split::Test; ids.len()];
    for &i in &split.train {
        split_of[i] = Split::Train;
    }
    let f1_on = |idx: &[usize], positive| {
        let p: Vec<ClassKind> = idx.iter().map(|&i| predicted[i]).collect();
        let t: Vec<ClassKind> = idx.iter().map(|&i| labels[i]).collect();
        f1_score(&p, &t, positive)
    };
    let f1_train = f1_on(&split.train, ClassKind::OneToOne);
    let f1_test = f1_on(&split.test, ClassKind::OneToOne);
    let f1_test_outlier = f1_on(&split.test, ClassKind::TwoToOne);
    write_csv(
        &out.join("ocsvm.csv"),
        &header,
        &["function_id", "label", "split", "score", "predicted"],
        (0..ids.len()).map(|i| {
            vec![
                ids[i].to_string(),
                labels[i].label().into(),
                split_of[i].as_str().into(),
                fmt_f64(scores[i]),
                predicted[i].label().into(),
            ]
        }),
        &[format!("f1_train {f1_train}"), format!("f1_test {f1_test}")],
    )?;

    let summary = PipelineSummary {
        n: ds.n,
        m: ds.len(),
        shots: cfg.shots,
        seed: cfg.seed,
        generator: ds.generator.clone(),
        embedder: cfg.embedder.clone(),
        exact_means: class_means(&moments, &labels, |m| m.expectation),
        exact_variances: class_means(&moments, &labels, |m| m.variance),
        max_exact_mean_deviation: max_dev,
        kpca: KpcaSummary {
            kernel: kpca_kernel.spec().to_string(),
            separation_margin: separation_margin(&pc1, &labels),
        },
        kmeans: KmeansSummary {
            agreement,
            inertia: km.inertia,
            iterations: km.iterations,
        },
        ocsvm: OcsvmSummary {
            nu: cfg.nu,
            kernel: detector.model.kernel().spec().to_string(),
            standardize: cfg.standardize,
            support_vectors: detector.model.alpha.iter().filter(|&&a| a > 0.0).count(),
            rho: detector.model.rho,
            iterations: detector.model.iterations,
            f1_train,
            f1_test,
            f1_test_outlier,
        },
        f1_train,
        f1_test,
        train_size: split.train.len(),
        test_size: split.test.len(),
    };
    let mut doc = serde_json::to_value(&summary)?;
    doc["config"] = serde_json::to_value(cfg)?;
    write_text(&out.join("summary.json"), &(serde_json::to_string_pretty(&doc)? + "\n"))?;
    Ok(summary)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    pub test: Vec<SweepSummary>,
    pub train: Vec<SweepSummary>,
}

impl SweepReport {
    /// Whether the median test F1 never drops as the budget grows.
    pub fn test_median_non_decreasing(&self) -> bool {
        self.test.windows(2).all(|w| w[1].median >= w[0].median)
    }
}

/// One-class SVM F1 over `shot_grid × seeds`.
pub fn cmd_sweep(cfg: &ExperimentConfig, ds: &Dataset) -> Result<SweepReport> {
    let densities = embed_dataset(ds, &cfg.embedder)?;
    let rows = shots_sweep(&densities, &ds.labels(), &cfg.sweep_config())?;
    let test = summarize_sweep(&rows, Split::Test);
    let train = summarize_sweep(&rows, Split::Train);
    let footer: Vec<String> = test
        .iter()
        .map(|s| format!("test median f1_inlier shots={} median={} q1={} q3={}", s.shots, s.median, s.q1, s.q3))
        .collect();
    write_csv(
        &cfg.out_dir.join("f1_vs_shots.csv"),
        &cfg.header_lines(),
        &["shots", "seed", "split", "f1_inlier", "f1_outlier"],
        rows.iter().map(|r| {
            vec![
                r.shots.to_string(),
                r.seed.to_string(),
                r.split.as_str().into(),
                fmt_f64(r.f1_inlier),
                fmt_f64(r.f1_outlier),
            ]
        }),
        &footer,
    )?;
    Ok(SweepReport { rows, test, train })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GraphSummary {
    pub reports: Vec<(usize, ClassKind, TopologyReport)>,
    /// Stump on strong β₀ fitted on the visualization subset.
    pub betti0_threshold: Threshold,
    /// The same stump applied to every function.
    pub betti0_accuracy_all: f64,
    /// Stump on the weak component count, visualization subset.
    pub weak_threshold: Threshold,
    /// Best stump on either of `(β₀, periodic points)`, visualization subset.
    pub pair_accuracy: f64,
    pub visualization_ids: Vec<usize>,
}

/// Ids of the first `per_class` functions of each class, 1:1 block first.
pub fn visualization_subset(ds: &Dataset, per_class: usize) -> Vec<usize> {
    let mut ids = Vec::new();
    for kind in [ClassKind::OneToOne, ClassKind::TwoToOne] {
        ids.extend(
            (0..ds.len())
                .filter(|&i| ds.entries[i].class.kind == kind)
                .take(per_class),
        );
    }
    ids
}

fn stump_accuracy(t: &Threshold, values: &[f64], labels: &[ClassKind]) -> f64 {
    let ok = values
        .iter()
        .zip(labels)
        .filter(|(&v, &l)| (v <= t.threshold) == (l == t.below))
        .count();
    ok as f64 / values.len() as f64
}

/// Functional-graph topology per function, 1:1 rows first.
pub fn cmd_graph_report(cfg: &ExperimentConfig, ds: &Dataset) -> Result<GraphSummary> {
    let mut order: Vec<usize> = (0..ds.len()).collect();
    order.sort_by_key(|&i| (ds.entries[i].class.kind.as_index(), ds.entries[i].id));
    let reports: Vec<(usize, ClassKind, TopologyReport)> = order
        .par_iter()
        .map(|&i| {
            let e = &ds.entries[i];
            (e.id, e.class.kind, TopologyReport::of(&build_graph(&e.function)))
        })
        .collect();

    let viz = visualization_subset(ds, VISUALIZATION_PER_CLASS);
    let pick = |f: &dyn Fn(&TopologyReport) -> usize, idx: &[usize]| -> (Vec<f64>, Vec<ClassKind>) {
        idx.iter()
            .map(|&i| {
                let e = &ds.entries[i];
                let r = reports.iter().find(|(id, _, _)| *id == e.id).expect("report per id");
                (f(&r.2) as f64, e.class.kind)
            })
            .unzip()
    };
    let all: Vec<usize> = (0..ds.len()).collect();
    let (b0_viz, l_viz) = pick(&|r| r.betti0, &viz);
    let (b0_all, l_all) = pick(&|r| r.betti0, &all);
    let (weak_viz, _) = pick(&|r| r.weak_components, &viz);
    let (pp_viz, _) = pick(&|r| r.periodic_points, &viz);
    let betti0_threshold = best_threshold(&b0_viz, &l_viz);
    let betti0_accuracy_all = stump_accuracy(&betti0_threshold, &b0_all, &l_all);
    let weak_threshold = best_threshold(&weak_viz, &l_viz);
    let pair_accuracy = betti0_threshold
        .accuracy
        .max(best_threshold(&pp_viz, &l_viz).accuracy);

    let footer = vec![
        format!(
            "betti0 threshold on {} visualization functions: <= {} predicts {}, accuracy {}",
            viz.len(),
            betti0_threshold.threshold,
            betti0_threshold.below.label(),
            betti0_threshold.accuracy
        ),
        format!("betti0 threshold accuracy on all {} functions: {betti0_accuracy_all}", ds.len()),
        format!("weak-component threshold accuracy on visualization functions: {}", weak_threshold.accuracy),
        format!("(betti0, periodic_points) stump accuracy on visualization functions: {pair_accuracy}"),
    ];
    write_csv(
        &cfg.out_dir.join("topology.csv"),
        &cfg.header_lines(),
        &[
            "function_id",
            "label",
            "betti0",
            "weak_components",
            "betti1",
            "periodic_points",
            "cycles",
            "degree_histogram",
        ],
        reports.iter().map(|(id, kind, r)| {
            vec![
                id.to_string(),
                kind.label().into(),
                r.betti0.to_string(),
                r.weak_components.to_string(),
                r.betti1.to_string(),
                r.periodic_points.to_string(),
                r.cycle_count.to_string(),
                r.degree_histogram_json(),
            ]
        }),
        &footer,
    )?;
    if cfg.dot {
        if ds.n > crate::graphs::MAX_DOT_WIDTH {
            return Err(Error::Config(format!(
                "DOT export is limited to n <= {}",
                crate::graphs::MAX_DOT_WIDTH
            )));
        }
        for e in &ds.entries {
            let path = cfg.out_dir.join("dot").join(format!("f{:03}.dot", e.id));
            write_text(&path, &export_dot(&build_graph(&e.function)))?;
        }
    }
    Ok(GraphSummary {
        reports,
        betti0_threshold,
        betti0_accuracy_all,
        weak_threshold,
        pair_accuracy,
        visualization_ids: viz.iter().map(|&i| ds.entries[i].id).collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeparationRow {
    pub n: usize,
    pub trial: usize,
    pub function_id: usize,
    pub class: ClassKind,
    pub method: String,
    pub queries: usize,
    pub verification_queries: usize,
    pub decided: Option<ClassKind>,
    pub correct: bool,
}

fn strategies() -> Vec<std::sync::Arc<dyn QueryStrategy>> {
    query_strategies().iter().cloned().collect()
}

/// Runs every query strategy on one function with a shared trial seed.
fn run_strategies(
    f: &crate::boolfn::BooleanFunction,
    class: crate::boolfn::FunctionClass,
    n: usize,
    trial: usize,
    function_id: usize,
    seed: u64,
    stream: u64,
) -> Result<Vec<SeparationRow>> {
    strategies()
        .iter()
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(stream);
            let o = s.decide(f, &mut rng)?;
            let counted = s.counted_queries(&o);
            Ok(SeparationRow {
                n,
                trial,
                function_id,
                class: class.kind,
                method: s.name().to_string(),
                queries: counted,
                verification_queries: o.total_queries() - counted,
                decided: o.decided_class.map(|c| c.kind),
                correct: o.decided_class == Some(class),
            })
        })
        .collect()
}

fn separation_csv(path: &Path, header: &[String], rows: &[SeparationRow], footer: &[String]) -> Result<()> {
    write_csv(
        path,
        header,
        &["n", "trial", "function_id", "class", "method", "queries", "verification_queries", "decided", "correct"],
        rows.iter().map(|r| {
            vec![
                r.n.to_string(),
                r.trial.to_string(),
                r.function_id.to_string(),
                r.class.label().into(),
                r.method.clone(),
                r.queries.to_string(),
                r.verification_queries.to_string(),
                r.decided.map_or("inconclusive".into(), |k| k.label().to_string()),
                r.correct.to_string(),
            ]
        }),
        footer,
    )
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MethodStats {
    pub method: String,
    pub class: ClassKind,
    pub runs: usize,
    pub mean_queries: f64,
    pub min_queries: usize,
    pub max_queries: usize,
    pub errors: usize,
}

pub fn method_stats(rows: &[SeparationRow]) -> Vec<MethodStats> {
    let mut keys: Vec<(String, ClassKind)> = Vec::new();
    for r in rows {
        if !keys.iter().any(|(m, c)| *m == r.method && *c == r.class) {
            keys.push((r.method.clone(), r.class));
        }
    }
    keys.into_iter()
        .map(|(method, class)| {
            let sel: Vec<&SeparationRow> = rows.iter().filter(|r| r.method == method && r.class == class).collect();
            MethodStats {
                runs: sel.len(),
                mean_queries: sel.iter().map(|r| r.queries as f64).sum::<f64>() / sel.len() as f64,
                min_queries: sel.iter().map(|r| r.queries).min().unwrap_or(0),
                max_queries: sel.iter().map(|r| r.queries).max().unwrap_or(0),
                errors: sel.iter().filter(|r| !r.correct).count(),
                method,
                class,
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeparationReport {
    pub rows: Vec<SeparationRow>,
    pub stats: Vec<MethodStats>,
}

impl SeparationReport {
    pub fn errors(&self) -> usize {
        self.rows.iter().filter(|r| !r.correct).count()
    }
}

/// Every query strategy on every dataset function, once per seed.
pub fn cmd_simon(cfg: &ExperimentConfig, ds: &Dataset) -> Result<SeparationReport> {
    let jobs: Vec<(usize, usize)> = (0..cfg.seeds.len())
        .flat_map(|t| (0..ds.len()).map(move |i| (t, i)))
        .collect();
    let rows: Vec<SeparationRow> = jobs
        .par_iter()
        .map(|&(t, i)| {
            let e = &ds.entries[i];
            run_strategies(&e.function, e.class, ds.n, t, e.id, cfg.seeds[t], e.id as u64)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let stats = method_stats(&rows);
    let footer: Vec<String> = stats
        .iter()
        .map(|s| {
            format!(
                "{} {}: runs {} mean {} min {} max {} errors {}",
                s.method,
                s.class.label(),
                s.runs,
                s.mean_queries,
                s.min_queries,
                s.max_queries,
                s.errors
            )
        })
        .collect();
    separation_csv(&cfg.out_dir.join("separation.csv"), &cfg.header_lines(), &rows, &footer)?;
    Ok(SeparationReport { rows, stats })
}

/// Ordinary least squares `y = a + b x`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    assert_eq!(xs.len(), ys.len(), "length mismatch");
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let b = sxy / sxx;
    (my - b * mx, b)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingPoint {
    pub n: usize,
    pub quantum_mean: f64,
    pub classical_two_to_one_mean: f64,
    pub classical_one_to_one_min: usize,
    pub classical_one_to_one_max: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingReport {
    pub points: Vec<ScalingPoint>,
    /// Fit of mean quantum queries against `n`.
    pub quantum_intercept: f64,
    pub quantum_slope: f64,
    /// Fit of `log2(mean classical 2:1 queries)` against `n`.
    pub classical_log2_slope: f64,
    pub errors: usize,
    pub rows: Vec<SeparationRow>,
}

/// Query counts over `scaling_widths`, with fresh 1:1 and 2:1 functions per
/// trial from the configured generator.
pub fn cmd_simon_scaling(cfg: &ExperimentConfig) -> Result<ScalingReport> {
    let generator = generators().get(&cfg.generator)?;
    let jobs: Vec<(usize, usize)> = cfg
        .scaling_widths
        .iter()
        .flat_map(|&n| (0..cfg.scaling_trials).map(move |t| (n, t)))
        .collect();
    let rows: Vec<SeparationRow> = jobs
        .par_iter()
        .map(|&(n, t)| {
            let stream = (n as u64) << 32 | t as u64;
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(stream);
            let mut out = Vec::new();
            for (k, f) in [generator.one_to_one(n, &mut rng), generator.two_to_one(n, &mut rng)]
                .into_iter()
                .enumerate()
            {
                let class = f.classify_exact()?;
                out.extend(run_strategies(&f, class, n, t, k, cfg.seed ^ 0x5eed, stream)?);
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();

    let points: Vec<ScalingPoint> = cfg
        .scaling_widths
        .iter()
        .map(|&n| {
            let at: Vec<&SeparationRow> = rows.iter().filter(|r| r.n == n).collect();
            let mean = |sel: Vec<usize>| sel.iter().sum::<usize>() as f64 / sel.len().max(1) as f64;
            let quantum: Vec<usize> = at.iter().filter(|r| r.method == "quantum").map(|r| r.queries).collect();
            let c21: Vec<usize> = at
                .iter()
                .filter(|r| r.method == "classical" && r.class == ClassKind::TwoToOne)
                .map(|r| r.queries)
                .collect();
            let c11: Vec<usize> = at
                .iter()
                .filter(|r| r.method == "classical" && r.class == ClassKind::OneToOne)
                .map(|r| r.queries)
                .collect();
            ScalingPoint {
                n,
                quantum_mean: mean(quantum),
                classical_two_to_one_mean: mean(c21),
                classical_one_to_one_min: c11.iter().copied().min().unwrap_or(0),
                classical_one_to_one_max: c11.iter().copied().max().unwrap_or(0),
            }
        })
        .collect();
    let ns: Vec<f64> = points.iter().map(|p| p.n as f64).collect();
    let (quantum_intercept, quantum_slope) =
        linear_fit(&ns, &points.iter().map(|p| p.quantum_mean).collect::<Vec<_>>());
    let (_, classical_log2_slope) = linear_fit(
        &ns,
        &points.iter().map(|p| p.classical_two_to_one_mean.log2()).collect::<Vec<_>>(),
    );
    let mut footer: Vec<String> = points
        .iter()
        .map(|p| {
            format!(
                "n {}: quantum mean {} classical 2:1 mean {} classical 1:1 {}..{}",
                p.n, p.quantum_mean, p.classical_two_to_one_mean, p.classical_one_to_one_min, p.classical_one_to_one_max
            )
        })
        .collect();
    footer.push(format!("quantum fit: {quantum_intercept} + {quantum_slope} n"));
    footer.push(format!("classical 2:1 log2 slope: {classical_log2_slope}"));
    separation_csv(&cfg.out_dir.join("scaling.csv"), &cfg.header_lines(), &rows, &footer)?;
    let errors = rows.iter().filter(|r| !r.correct).count();
    Ok(ScalingReport {
        points,
        quantum_intercept,
        quantum_slope,
        classical_log2_slope,
        errors,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_cfg(dir: &Path) -> ExperimentConfig {
        ExperimentConfig {
            n: 4,
            m: 20,
            shot_grid: vec![50, 500],
            seeds: vec![1, 2],
            scaling_widths: vec![3, 4],
            scaling_trials: 10,
            out_dir: dir.to_path_buf(),
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn linear_fit_exact_line() {
        let (a, b) = linear_fit(&[1.0, 2.0, 3.0], &[3.0, 5.0, 7.0]);
        assert!((a - 1.0).abs() < 1e-12 && (b - 2.0).abs() < 1e-12);
    }

    #[test]
    fn commands_run_and_are_reproducible() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = small_cfg(dir.path());
        let manifest = cmd_generate(&cfg).unwrap();
        let first = std::fs::read(&manifest).unwrap();
        cmd_generate(&cfg).unwrap();
        assert_eq!(first, std::fs::read(&manifest).unwrap());
        let ds = load_dataset(&cfg, Some(&manifest)).unwrap();
        assert_eq!(ds, generate_dataset(&cfg).unwrap());

        let s = cmd_pipeline(&cfg, &ds).unwrap();
        assert!(s.max_exact_mean_deviation < 1e-12);
        let csv1 = std::fs::read(dir.path().join("features.csv")).unwrap();
        cmd_pipeline(&cfg, &ds).unwrap();
        assert_eq!(csv1, std::fs::read(dir.path().join("features.csv")).unwrap());

        let sweep = cmd_sweep(&cfg, &ds).unwrap();
        assert_eq!(sweep.rows.len(), 2 * 2 * 2);
        let g = cmd_graph_report(&cfg, &ds).unwrap();
        assert_eq!(g.reports.len(), 20);
        assert!(g.reports[..10].iter().all(|r| r.1 == ClassKind::OneToOne));
        let sep = cmd_simon(&cfg, &ds).unwrap();
        assert_eq!(sep.errors(), 0);
        let sc = cmd_simon_scaling(&cfg).unwrap();
        assert_eq!(sc.errors, 0);
        assert_eq!(sc.points.len(), 2);
    }

    #[test]
    fn width_mismatch_is_a_manifest_error() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = small_cfg(dir.path());
        let manifest = cmd_generate(&cfg).unwrap();
        let other = ExperimentConfig { n: 5, ..cfg };
        assert!(matches!(load_dataset(&other, Some(&manifest)), Err(Error::Manifest(_))));
    }
}
