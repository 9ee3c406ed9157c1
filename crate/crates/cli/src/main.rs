use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use simon_gqml::boolfn::generators;
use simon_gqml::embed::embedders;
use simon_gqml::experiment::{
    cmd_generate, cmd_graph_report, cmd_pipeline, cmd_simon, cmd_simon_scaling, cmd_sweep,
    load_dataset, ExperimentConfig,
};
use simon_gqml::learn::{kernel_families, KernelSpec, StandardizeScope};
use simon_gqml::simon::query_strategies;
use simon_gqml::Result;

/// Simon's problem as an unsupervised learning task: dataset generation,
/// feature pipeline, shot sweeps, graph topology and query counts.
#[derive(Parser, Debug)]
#[command(name = "simon-gqml", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write the dataset manifest.
    Generate,
    /// Features, kernel PCA, k-means and the one-class SVM at one shot budget.
    Pipeline(DataArgs),
    /// One-class SVM F1 over the shot grid and seeds.
    Sweep(DataArgs),
    /// Functional-graph topology per function.
    GraphReport(DataArgs),
    /// Quantum and classical query counts per function.
    Simon {
        #[command(flatten)]
        data: DataArgs,
        /// Also run the width-scaling experiment over `scaling_widths`.
        #[arg(long)]
        scaling: bool,
    },
    /// List registered generators, embedders, kernels and query strategies.
    List,
}

#[derive(Args, Debug)]
struct DataArgs {
    /// Dataset manifest; regenerated from the config when omitted.
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Scope {
    TrainPooled,
    TrainInliers,
}

impl From<Scope> for StandardizeScope {
    fn from(s: Scope) -> Self {
        match s {
            Scope::TrainPooled => StandardizeScope::TrainPooled,
            Scope::TrainInliers => StandardizeScope::TrainInliers,
        }
    }
}

/// Every flag overrides the matching key of `--config`.
#[derive(Args, Debug, Default)]
struct Overrides {
    /// TOML file with any subset of the config keys.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    n: Option<usize>,
    #[arg(long, global = true)]
    m: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    shots: Option<usize>,
    #[arg(long, global = true, value_delimiter = ',')]
    shot_grid: Option<Vec<usize>>,
    #[arg(long, global = true, value_delimiter = ',')]
    seeds: Option<Vec<u64>>,
    #[arg(long, global = true)]
    nu: Option<f64>,
    #[arg(long, global = true)]
    generator: Option<String>,
    #[arg(long, global = true)]
    embedder: Option<String>,
    /// `linear`, `rbf` or `rbf:<gamma>`.
    #[arg(long, global = true)]
    kpca_kernel: Option<KernelSpec>,
    #[arg(long, global = true)]
    ocsvm_kernel: Option<KernelSpec>,
    #[arg(long, global = true, value_enum)]
    standardize: Option<Scope>,
    #[arg(long, global = true)]
    kmeans_restarts: Option<usize>,
    #[arg(long, global = true, value_delimiter = ',')]
    scaling_widths: Option<Vec<usize>>,
    #[arg(long, global = true)]
    scaling_trials: Option<usize>,
    /// Write one DOT file per function in the graph report.
    #[arg(long, global = true)]
    dot: bool,
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
}

impl Overrides {
    fn resolve(self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        macro_rules! set {
            ($($field:ident),*) => {
                $(if let Some(v) = self.$field {
                    cfg.$field = v.into();
                })*
            };
        }
        set!(
            n, m, seed, shots, shot_grid, seeds, nu, generator, embedder, kpca_kernel,
            ocsvm_kernel, standardize, kmeans_restarts, scaling_widths, scaling_trials, out_dir
        );
        cfg.dot |= self.dot;
        cfg.validate()?;
        Ok(cfg)
    }
}

fn list() {
    println!("generators:");
    for g in generators().iter() {
        println!("  {:<10} {}", g.name(), g.description());
    }
    println!("embedders:");
    for e in embedders().iter() {
        println!("  {:<10} {}", e.name(), e.description());
    }
    println!("kernels:");
    for k in kernel_families().iter() {
        println!("  {:<10} {}", k.name(), k.description());
    }
    println!("query strategies:");
    for s in query_strategies().iter() {
        println!("  {:<10} {}", s.name(), s.description());
    }
}

fn run(cli: Cli) -> Result<()> {
    if let Command::List = cli.command {
        list();
        return Ok(());
    }
    let cfg = cli.overrides.resolve()?;
    let out = cfg.out_dir.display().to_string();
    match cli.command {
        Command::List => unreachable!(),
        Command::Generate => {
            let path = cmd_generate(&cfg)?;
            println!("wrote {}", path.display());
        }
        Command::Pipeline(d) => {
            let ds = load_dataset(&cfg, d.manifest.as_deref())?;
            let s = cmd_pipeline(&cfg, &ds)?;
            println!(
                "exact means 1:1 {} 2:1 {}; k-means agreement {}; f1 train {:.4} test {:.4}",
                s.exact_means.one_to_one, s.exact_means.two_to_one, s.kmeans.agreement, s.f1_train, s.f1_test
            );
            println!("wrote features.csv kpca.csv kmeans.csv ocsvm.csv summary.json to {out}");
        }
        Command::Sweep(d) => {
            let ds = load_dataset(&cfg, d.manifest.as_deref())?;
            let r = cmd_sweep(&cfg, &ds)?;
            for s in &r.test {
                println!("shots {:>6}: median test f1 {:.4} (q1 {:.4}, q3 {:.4})", s.shots, s.median, s.q1, s.q3);
            }
            println!("wrote f1_vs_shots.csv to {out}");
        }
        Command::GraphReport(d) => {
            let ds = load_dataset(&cfg, d.manifest.as_deref())?;
            let g = cmd_graph_report(&cfg, &ds)?;
            println!(
                "betti0 <= {} predicts {}: accuracy {:.4} on {} functions, {:.4} on all",
                g.betti0_threshold.threshold,
                g.betti0_threshold.below.label(),
                g.betti0_threshold.accuracy,
                g.visualization_ids.len(),
                g.betti0_accuracy_all
            );
            println!("wrote topology.csv to {out}");
        }
        Command::Simon { data, scaling } => {
            let ds = load_dataset(&cfg, data.manifest.as_deref())?;
            let r = cmd_simon(&cfg, &ds)?;
            for s in &r.stats {
                println!(
                    "{:<9} {}: mean {:.2} min {} max {} errors {}",
                    s.method,
                    s.class.label(),
                    s.mean_queries,
                    s.min_queries,
                    s.max_queries,
                    s.errors
                );
            }
            println!("wrote separation.csv to {out}");
            if scaling {
                let sc = cmd_simon_scaling(&cfg)?;
                println!(
                    "quantum fit {:.3} + {:.3} n; classical 2:1 log2 slope {:.3}",
                    sc.quantum_intercept, sc.quantum_slope, sc.classical_log2_slope
                );
                println!("wrote scaling.csv to {out}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
