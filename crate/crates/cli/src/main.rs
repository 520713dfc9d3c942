//! Command-line front end: run the whole mining pipeline or any single
//! stage, evaluate results, sweep support thresholds, and generate
//! synthetic corpora.

use std::path::PathBuf;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use apicomp_core::eval::{evaluate, EvalConfig};
use apicomp_core::fupmine::{support_sweep, sweep_csv};
use apicomp_core::metrics::WeightConfig;
use apicomp_core::pipeline::{
    self, load_corpus, mine_architecture, pretty_json, run, stage_components, stage_interfaces,
    stage_patterns, stage_transactions, write_outputs, RunConfig,
};
use apicomp_core::synth::{generate, write as write_corpus, SyntheticSpec};
use apicomp_core::usage::transaction_items;

#[derive(Parser)]
#[command(
    name = "apicomp",
    version,
    about = "Reengineer an object-oriented API into layered components by mining client usage"
)]
struct Cli {
    /// Worker threads for parallel stages (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CorpusArgs {
    /// API class model (JSON).
    #[arg(long)]
    api: PathBuf,
    /// Client class model file or directory of them; repeatable.
    #[arg(long = "clients", required = true, num_args = 1..)]
    clients: Vec<PathBuf>,
}

#[derive(Args)]
struct ConfigArgs {
    /// Minimum support threshold in (0, 1].
    #[arg(long, default_value_t = pipeline::DEFAULT_MINSUP)]
    minsup: f64,
    /// Interface-fitness weights, comma-separated.
    #[arg(long, value_parser = parse_triple, default_value = "1,1,1")]
    lambda: [f64; 3],
    /// Component-quality weights, comma-separated.
    #[arg(long, value_parser = parse_triple, default_value = "1,1,1")]
    mu: [f64; 3],
    /// Clustering acceptance threshold.
    #[arg(long, default_value_t = 0.5)]
    tau: f64,
    /// Fold count for the reusability study.
    #[arg(long, default_value_t = pipeline::DEFAULT_KFOLD)]
    k: usize,
    /// Seed for the fold shuffle.
    #[arg(long, default_value_t = pipeline::DEFAULT_SEED)]
    seed: u64,
    /// Cap on greedy growth steps per component (default: unbounded).
    #[arg(long)]
    growth_cap: Option<usize>,
    /// Count untouched components as zero in evaluation means.
    #[arg(long)]
    count_untouched: bool,
}

#[derive(Args)]
struct OutArgs {
    /// Output directory for artifacts.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Run every stage and write all artifacts.
    Pipeline {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[command(flatten)]
        cfg: ConfigArgs,
        #[command(flatten)]
        out: OutArgs,
        /// Also write `sweep.csv`.
        #[arg(long)]
        sweep: bool,
        /// Also write per-stage artifacts.
        #[arg(long)]
        emit_stages: bool,
    },
    /// Extract usage transactions and stop.
    Transactions {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[command(flatten)]
        cfg: ConfigArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Mine frequent usage patterns and stop.
    Mine {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[command(flatten)]
        cfg: ConfigArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Partition patterns into provided interfaces and stop.
    Interfaces {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[command(flatten)]
        cfg: ConfigArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Grow first-layer components and stop.
    Components {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[command(flatten)]
        cfg: ConfigArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Build the full layered architecture.
    Layers {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[command(flatten)]
        cfg: ConfigArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Build the architecture and write the evaluation report.
    Evaluate {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[command(flatten)]
        cfg: ConfigArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Mine at a ladder of support thresholds and write the sweep table.
    Sweep {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[command(flatten)]
        cfg: ConfigArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Generate a synthetic corpus with planted component structure.
    Synth {
        /// Generator seed.
        #[arg(long, default_value_t = pipeline::DEFAULT_SEED)]
        seed: u64,
        /// Number of API classes.
        #[arg(long)]
        classes: usize,
        /// Number of planted class groups.
        #[arg(long)]
        groups: usize,
        /// Number of client applications.
        #[arg(long)]
        client_count: usize,
        /// Fraction of references retargeted at random, in [0, 1].
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        #[command(flatten)]
        out: OutArgs,
    },
}

fn parse_triple(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated numbers, got `{s}`"));
    }
    let mut out = [0.0; 3];
    for (slot, part) in out.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse::<f64>()
            .map_err(|e| format!("`{part}` is not a number: {e}"))?;
    }
    Ok(out)
}

/// Expand each `--clients` entry: directories contribute their `*.json`
/// files in name order.
fn expand_clients(paths: &[PathBuf]) -> anyhow::Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for path in paths {
        if path.is_dir() {
            let mut entries: Vec<PathBuf> = std::fs::read_dir(path)
                .with_context(|| format!("cannot list `{}`", path.display()))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|ext| ext == "json"))
                .collect();
            entries.sort();
            out.extend(entries);
        } else {
            out.push(path.clone());
        }
    }
    Ok(out)
}

fn build_config(corpus: &CorpusArgs, cfg: &ConfigArgs, out: &OutArgs) -> anyhow::Result<RunConfig> {
    let mut config = RunConfig::new(&corpus.api, expand_clients(&corpus.clients)?, &out.out);
    config.minsup = cfg.minsup;
    config.weights = WeightConfig {
        lambda: cfg.lambda,
        mu: cfg.mu,
        tau: cfg.tau,
    };
    config.kfold = cfg.k;
    config.seed = cfg.seed;
    config.growth_cap = cfg.growth_cap;
    config.include_untouched = cfg.count_untouched;
    Ok(config)
}

fn report_written(written: &[PathBuf]) {
    for path in written {
        println!("wrote {}", path.display());
    }
}

fn main() -> anyhow::Result<()> {
    let cli = Cli::parse();
    rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs)
        .build_global()
        .context("cannot configure the thread pool")?;

    match &cli.command {
        Command::Pipeline {
            corpus,
            cfg,
            out,
            sweep,
            emit_stages,
        } => {
            let mut config = build_config(corpus, cfg, out)?;
            config.sweep = *sweep;
            config.emit_stages = *emit_stages;
            let output = run(&config)?;
            report_written(&output.written);
            let arch = &output.architecture;
            println!(
                "layers: {} components: {} residual: {}",
                arch.layers.len(),
                arch.components().count(),
                arch.residual_layer.len()
            );
        }
        Command::Transactions { corpus, cfg, out } => {
            let config = build_config(corpus, cfg, out)?;
            config.validate()?;
            let (api, clients) = load_corpus(&config.api_path, &config.client_paths)?;
            let transactions = stage_transactions(&api, &clients, &config.weights)?;
            let files = [("transactions.json", pretty_json(&transactions))];
            report_written(&write_outputs(&config.out_dir, &files)?);
        }
        Command::Mine { corpus, cfg, out } => {
            let config = build_config(corpus, cfg, out)?;
            config.validate()?;
            let (api, clients) = load_corpus(&config.api_path, &config.client_paths)?;
            let transactions = stage_transactions(&api, &clients, &config.weights)?;
            let fup = stage_patterns(&transaction_items(&transactions), config.minsup)?;
            let files = [("patterns.json", pretty_json(&fup))];
            report_written(&write_outputs(&config.out_dir, &files)?);
        }
        Command::Interfaces { corpus, cfg, out } => {
            let config = build_config(corpus, cfg, out)?;
            config.validate()?;
            let (api, clients) = load_corpus(&config.api_path, &config.client_paths)?;
            let transactions = stage_transactions(&api, &clients, &config.weights)?;
            let baskets = transaction_items(&transactions);
            let fup = stage_patterns(&baskets, config.minsup)?;
            let interfaces = stage_interfaces(&api, &fup, &baskets, &config.weights);
            let files = [("interfaces.json", pretty_json(&interfaces))];
            report_written(&write_outputs(&config.out_dir, &files)?);
        }
        Command::Components { corpus, cfg, out } => {
            let config = build_config(corpus, cfg, out)?;
            config.validate()?;
            let (api, clients) = load_corpus(&config.api_path, &config.client_paths)?;
            let transactions = stage_transactions(&api, &clients, &config.weights)?;
            let baskets = transaction_items(&transactions);
            let fup = stage_patterns(&baskets, config.minsup)?;
            let interfaces = stage_interfaces(&api, &fup, &baskets, &config.weights);
            let components =
                stage_components(&api, &interfaces, &config.weights, config.growth_cap);
            let files = [("components.json", pretty_json(&components))];
            report_written(&write_outputs(&config.out_dir, &files)?);
        }
        Command::Layers { corpus, cfg, out } => {
            let config = build_config(corpus, cfg, out)?;
            config.validate()?;
            let (api, clients) = load_corpus(&config.api_path, &config.client_paths)?;
            let outcome = mine_architecture(
                &api,
                &clients,
                &config.weights,
                config.minsup,
                config.growth_cap,
            )?;
            let files = [
                ("architecture.json", outcome.architecture.to_json()),
                (
                    "architecture.dot",
                    apicomp_core::compbuild::to_dot(&outcome.architecture),
                ),
            ];
            report_written(&write_outputs(&config.out_dir, &files)?);
        }
        Command::Evaluate { corpus, cfg, out } => {
            let config = build_config(corpus, cfg, out)?;
            config.validate()?;
            let (api, clients) = load_corpus(&config.api_path, &config.client_paths)?;
            let outcome = mine_architecture(
                &api,
                &clients,
                &config.weights,
                config.minsup,
                config.growth_cap,
            )?;
            let eval_cfg = EvalConfig {
                ks: vec![config.kfold],
                minsup: config.minsup,
                seed: config.seed,
                growth_cap: config.growth_cap,
                include_untouched: config.include_untouched,
            };
            let report = evaluate(
                &outcome.architecture,
                &api,
                &clients,
                &outcome.transactions,
                &config.weights,
                &eval_cfg,
            )
            .map_err(|e| {
                pipeline::PipelineError::new(apicomp_core::pipeline::Stage::Evaluation, e)
            })?;
            let files = [("report.json", report.to_json())];
            report_written(&write_outputs(&config.out_dir, &files)?);
        }
        Command::Sweep { corpus, cfg, out } => {
            let config = build_config(corpus, cfg, out)?;
            config.validate()?;
            let (api, clients) = load_corpus(&config.api_path, &config.client_paths)?;
            let transactions = stage_transactions(&api, &clients, &config.weights)?;
            let rows = support_sweep(
                &transaction_items(&transactions),
                &pipeline::SWEEP_THRESHOLDS,
            )
            .map_err(|e| {
                pipeline::PipelineError::new(apicomp_core::pipeline::Stage::Mining, e)
            })?;
            let files = [("sweep.csv", sweep_csv(&rows))];
            report_written(&write_outputs(&config.out_dir, &files)?);
        }
        Command::Synth {
            seed,
            classes,
            groups,
            client_count,
            noise,
            out,
        } => {
            let spec = SyntheticSpec {
                seed: *seed,
                api_classes: *classes,
                planted_components: *groups,
                clients: *client_count,
                usage_noise: *noise,
            };
            let corpus = generate(&spec)?;
            let written = write_corpus(&corpus, &out.out)
                .with_context(|| format!("cannot write corpus to `{}`", out.out.display()))?;
            report_written(&written);
        }
    }
    Ok(())
}
