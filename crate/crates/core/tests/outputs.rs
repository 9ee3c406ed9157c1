use simon_gqml::experiment::{
    cmd_generate, cmd_graph_report, cmd_pipeline, cmd_simon, cmd_sweep, load_dataset, read_csv,
    ExperimentConfig, SUMMARY_SCHEMA,
};

fn config(dir: &std::path::Path) -> ExperimentConfig {
    ExperimentConfig {
        n: 5,
        m: 40,
        shots: 2000,
        shot_grid: vec![20, 2000],
        seeds: vec![7, 8],
        dot: true,
        out_dir: dir.to_path_buf(),
        ..ExperimentConfig::default()
    }
}

#[test]
fn summary_matches_its_schema() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path());
    let ds = load_dataset(&cfg, None).unwrap();
    cmd_pipeline(&cfg, &ds).unwrap();
    let schema: serde_json::Value = serde_json::from_str(SUMMARY_SCHEMA).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let text = std::fs::read_to_string(dir.path().join("summary.json")).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    let errors: Vec<String> = validator.iter_errors(&doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}");

    let mut broken = doc.clone();
    broken["kmeans"]["agreement"] = serde_json::json!(1.5);
    assert!(!validator.is_valid(&broken));
    let mut extra = doc;
    extra["surprise"] = serde_json::json!(true);
    assert!(!validator.is_valid(&extra));
}

#[test]
fn csv_columns_and_row_counts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path());
    let manifest = cmd_generate(&cfg).unwrap();
    let ds = load_dataset(&cfg, Some(&manifest)).unwrap();
    cmd_pipeline(&cfg, &ds).unwrap();
    cmd_sweep(&cfg, &ds).unwrap();
    cmd_graph_report(&cfg, &ds).unwrap();
    cmd_simon(&cfg, &ds).unwrap();

    let expect = [
        ("features.csv", vec!["function_id", "label", "shots", "seed", "mean", "variance", "exact_mean", "exact_variance"], 40),
        ("kpca.csv", vec!["function_id", "label", "coord1", "coord2"], 40),
        ("kmeans.csv", vec!["function_id", "label", "cluster"], 40),
        ("ocsvm.csv", vec!["function_id", "label", "split", "score", "predicted"], 40),
        ("f1_vs_shots.csv", vec!["shots", "seed", "split", "f1_inlier", "f1_outlier"], 2 * 2 * 2),
        (
            "topology.csv",
            vec!["function_id", "label", "betti0", "weak_components", "betti1", "periodic_points", "cycles", "degree_histogram"],
            40,
        ),
        (
            "separation.csv",
            vec!["n", "trial", "function_id", "class", "method", "queries", "verification_queries", "decided", "correct"],
            2 * 40 * 2,
        ),
    ];
    for (file, columns, rows) in expect {
        let (h, r) = read_csv(&dir.path().join(file)).unwrap();
        assert_eq!(h, columns, "{file}");
        assert_eq!(r.len(), rows, "{file}");
    }
    let text = std::fs::read_to_string(dir.path().join("features.csv")).unwrap();
    assert!(text.starts_with("# n = 5\n"), "config header first");
    assert_eq!(std::fs::read_dir(dir.path().join("dot")).unwrap().count(), 40);
    let (_, sep) = read_csv(&dir.path().join("separation.csv")).unwrap();
    assert!(sep.iter().all(|r| r[8] == "true"));
}
