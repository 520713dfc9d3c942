//! End-to-end orchestration: load models, run every stage in order, and
//! write the output artifacts.
//!
//! Stages run strictly in sequence — partition clients, extract
//! transactions, mine patterns, partition interfaces, grow components,
//! organize layers, evaluate — and every failure carries the stage it
//! happened in.  Artifacts are computed first and written last, so a failed
//! run leaves no partial output behind.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

use crate::compbuild::{build_layers, grow_first_layer, to_dot, ApiContext, LayeredArchitecture};
use crate::eval::{evaluate, EvalConfig, EvalReport};
use crate::fupmine::{assign_rare_classes, mine_maximal, support_sweep, sweep_csv, FupResult};
use crate::interfaces::{partition_all, ProvidedInterface};
use crate::metrics::{FitnessContext, WeightConfig};
use crate::model::{
    dependency_graph, load_model, term_vectors, validate, ClassId, ClassModel, DependencyGraph,
    ItemSet, TermVector,
};
use crate::usage::{extract_transactions, transaction_items, Transaction};

/// Support threshold used when none is given.
pub const DEFAULT_MINSUP: f64 = 0.45;
/// Fold count used when none is given.
pub const DEFAULT_KFOLD: usize = 4;
/// Shuffle seed used when none is given.
pub const DEFAULT_SEED: u64 = 42;
/// Thresholds covered by the support sweep, high to low.
pub const SWEEP_THRESHOLDS: [f64; 9] = [0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1];

/// Where in the pipeline an error happened.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Config,
    Load,
    Validation,
    Partition,
    Mining,
    Evaluation,
    Output,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Config => "config",
            Stage::Load => "load",
            Stage::Validation => "validation",
            Stage::Partition => "partition",
            Stage::Mining => "mining",
            Stage::Evaluation => "evaluation",
            Stage::Output => "output",
        })
    }
}

/// A stage failure: which stage, and why.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("stage `{stage}` failed: {message}")]
pub struct PipelineError {
    pub stage: Stage,
    pub message: String,
}

impl PipelineError {
    pub fn new(stage: Stage, message: impl fmt::Display) -> Self {
        Self {
            stage,
            message: message.to_string(),
        }
    }
}

/// Everything a pipeline run needs to know.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub api_path: PathBuf,
    pub client_paths: Vec<PathBuf>,
    pub minsup: f64,
    pub weights: WeightConfig,
    pub kfold: usize,
    pub seed: u64,
    pub growth_cap: Option<usize>,
    pub out_dir: PathBuf,
    /// Also write `sweep.csv`.
    pub sweep: bool,
    /// Also write per-stage artifacts (transactions, patterns, interfaces).
    pub emit_stages: bool,
    /// Count untouched components as zero instead of skipping them.
    pub include_untouched: bool,
}

impl RunConfig {
    pub fn new(
        api_path: impl Into<PathBuf>,
        client_paths: Vec<PathBuf>,
        out_dir: impl Into<PathBuf>,
    ) -> Self {
        Self {
            api_path: api_path.into(),
            client_paths,
            minsup: DEFAULT_MINSUP,
            weights: WeightConfig::default(),
            kfold: DEFAULT_KFOLD,
            seed: DEFAULT_SEED,
            growth_cap: None,
            out_dir: out_dir.into(),
            sweep: false,
            emit_stages: false,
            include_untouched: false,
        }
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        if !(self.minsup.is_finite() && 0.0 < self.minsup && self.minsup <= 1.0) {
            return Err(PipelineError::new(
                Stage::Config,
                format!("minsup must lie in (0, 1], got {}", self.minsup),
            ));
        }
        self.weights
            .validate()
            .map_err(|e| PipelineError::new(Stage::Config, e))?;
        if self.kfold < 2 {
            return Err(PipelineError::new(
                Stage::Config,
                format!("kfold must be at least 2, got {}", self.kfold),
            ));
        }
        Ok(())
    }
}

/// An API model with its derived dependency graph and term vectors.
pub struct ApiData {
    pub model: ClassModel,
    pub graph: DependencyGraph,
    pub vectors: BTreeMap<ClassId, TermVector>,
    pub universe: ItemSet,
}

impl ApiData {
    pub fn new(model: ClassModel) -> Self {
        let graph = dependency_graph(&model);
        let vectors = term_vectors(&model);
        let universe = model.class_ids();
        Self {
            model,
            graph,
            vectors,
            universe,
        }
    }

    pub fn context(&self) -> ApiContext<'_> {
        ApiContext {
            name: &self.model.name,
            graph: &self.graph,
            vectors: &self.vectors,
            universe: &self.universe,
        }
    }
}

/// Intermediate results of the mining chain, kept for stage artifacts.
#[derive(Debug)]
pub struct MiningOutcome {
    pub transactions: Vec<Transaction>,
    pub fup: FupResult,
    pub interfaces: Vec<ProvidedInterface>,
    pub architecture: LayeredArchitecture,
}

/// Partition the clients and extract their usage transactions.
pub fn stage_transactions(
    api: &ApiData,
    clients: &[ClassModel],
    w: &WeightConfig,
) -> Result<Vec<Transaction>, PipelineError> {
    extract_transactions(clients, &api.model, w)
        .map_err(|e| PipelineError::new(Stage::Partition, e))
}

/// Mine maximal frequent usage patterns and attach rare classes.
pub fn stage_patterns(baskets: &[ItemSet], minsup: f64) -> Result<FupResult, PipelineError> {
    mine_maximal(baskets, minsup)
        .and_then(|r| assign_rare_classes(r, baskets))
        .map_err(|e| PipelineError::new(Stage::Mining, e))
}

/// Split every pattern into cohesive provided interfaces.
pub fn stage_interfaces(
    api: &ApiData,
    fup: &FupResult,
    baskets: &[ItemSet],
    w: &WeightConfig,
) -> Vec<ProvidedInterface> {
    let ctx = FitnessContext {
        graph: &api.graph,
        vectors: &api.vectors,
        transactions: baskets,
    };
    partition_all(&fup.patterns, &ctx, w)
}

/// Grow the first-layer components from the provided interfaces.
pub fn stage_components(
    api: &ApiData,
    interfaces: &[ProvidedInterface],
    w: &WeightConfig,
    growth_cap: Option<usize>,
) -> Vec<crate::compbuild::Component> {
    grow_first_layer(interfaces, &api.context(), w, growth_cap)
}

/// Organize grown components into layers and sweep up the residue.
pub fn stage_layers(
    api: &ApiData,
    first_layer: Vec<crate::compbuild::Component>,
    w: &WeightConfig,
    growth_cap: Option<usize>,
) -> LayeredArchitecture {
    build_layers(first_layer, &api.context(), w, growth_cap)
}

/// Run the full mining chain — transactions through layers — on the given
/// clients.  Evaluation and file output are separate.
pub fn mine_architecture(
    api: &ApiData,
    clients: &[ClassModel],
    w: &WeightConfig,
    minsup: f64,
    growth_cap: Option<usize>,
) -> Result<MiningOutcome, PipelineError> {
    let transactions = stage_transactions(api, clients, w)?;
    let baskets = transaction_items(&transactions);
    let fup = stage_patterns(&baskets, minsup)?;
    let interfaces = stage_interfaces(api, &fup, &baskets, w);
    let first_layer = stage_components(api, &interfaces, w, growth_cap);
    let architecture = stage_layers(api, first_layer, w, growth_cap);
    Ok(MiningOutcome {
        transactions,
        fup,
        interfaces,
        architecture,
    })
}

/// What a successful run produced.
#[derive(Debug)]
pub struct PipelineOutput {
    pub architecture: LayeredArchitecture,
    pub report: EvalReport,
    pub written: Vec<PathBuf>,
}

/// Load and validate the API and client models named by the paths.
pub fn load_corpus(
    api_path: &Path,
    client_paths: &[PathBuf],
) -> Result<(ApiData, Vec<ClassModel>), PipelineError> {
    let api_model = load_model(api_path).map_err(|e| {
        PipelineError::new(
            Stage::Load,
            format!("cannot load `{}`: {e}", api_path.display()),
        )
    })?;
    let mut clients = Vec::new();
    for path in client_paths {
        let client = load_model(path).map_err(|e| {
            PipelineError::new(Stage::Load, format!("cannot load `{}`: {e}", path.display()))
        })?;
        clients.push(client);
    }

    // Validate references before doing any work on them.
    check_model(&api_model, None)?;
    for client in &clients {
        check_model(client, Some(&api_model))?;
    }
    Ok((ApiData::new(api_model), clients))
}

/// Execute every stage and write the artifacts into `config.out_dir`.
pub fn run(config: &RunConfig) -> Result<PipelineOutput, PipelineError> {
    config.validate()?;
    let (api, clients) = load_corpus(&config.api_path, &config.client_paths)?;
    let outcome = mine_architecture(&api, &clients, &config.weights, config.minsup, config.growth_cap)?;

    // Evaluate; K-fold only when there are enough clients to fold.
    let ks = if clients.len() >= config.kfold {
        vec![config.kfold]
    } else {
        Vec::new()
    };
    let eval_cfg = EvalConfig {
        ks,
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
    .map_err(|e| PipelineError::new(Stage::Evaluation, e))?;

    // Compute remaining artifacts before touching the filesystem.
    let dot = to_dot(&outcome.architecture);
    let sweep = if config.sweep {
        let rows = support_sweep(&transaction_items(&outcome.transactions), &SWEEP_THRESHOLDS)
            .map_err(|e| PipelineError::new(Stage::Mining, e))?;
        Some(sweep_csv(&rows))
    } else {
        None
    };

    // Output: write everything, and leave nothing behind on failure.
    let mut files: Vec<(&str, String)> = vec![
        ("architecture.json", outcome.architecture.to_json()),
        ("architecture.dot", dot),
        ("report.json", report.to_json()),
    ];
    if let Some(csv) = sweep {
        files.push(("sweep.csv", csv));
    }
    if config.emit_stages {
        files.push(("transactions.json", pretty_json(&outcome.transactions)));
        files.push(("patterns.json", pretty_json(&outcome.fup)));
        files.push(("interfaces.json", pretty_json(&outcome.interfaces)));
    }
    let written = write_outputs(&config.out_dir, &files)?;

    Ok(PipelineOutput {
        architecture: outcome.architecture,
        report,
        written,
    })
}

/// Write named artifacts into `dir`, creating it first; on any failure the
/// files already written are removed so no partial output remains.
pub fn write_outputs(
    dir: &Path,
    files: &[(&str, String)],
) -> Result<Vec<PathBuf>, PipelineError> {
    std::fs::create_dir_all(dir).map_err(|e| {
        PipelineError::new(
            Stage::Output,
            format!("cannot create output directory `{}`: {e}", dir.display()),
        )
    })?;
    let mut written = Vec::new();
    for (name, content) in files {
        if let Err(e) = write_artifact(dir, name, content.as_bytes(), &mut written) {
            for path in &written {
                let _ = std::fs::remove_file(path);
            }
            return Err(e);
        }
    }
    Ok(written)
}

/// Fail the run when a model has unresolved or malformed declarations.
fn check_model(model: &ClassModel, context: Option<&ClassModel>) -> Result<(), PipelineError> {
    let issues = validate(model, context);
    if issues.is_empty() {
        return Ok(());
    }
    let shown: Vec<String> = issues.iter().take(5).map(|i| i.to_string()).collect();
    let suffix = if issues.len() > 5 { "; …" } else { "" };
    Err(PipelineError::new(
        Stage::Validation,
        format!(
            "model `{}` has {} issue(s): {}{}",
            model.name,
            issues.len(),
            shown.join("; "),
            suffix
        ),
    ))
}

/// Canonical pretty-printed JSON with a trailing newline.
pub fn pretty_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("artifact serialization cannot fail");
    s.push('\n');
    s
}

fn write_artifact(
    dir: &Path,
    name: &str,
    bytes: &[u8],
    written: &mut Vec<PathBuf>,
) -> Result<(), PipelineError> {
    let path = dir.join(name);
    std::fs::write(&path, bytes).map_err(|e| {
        PipelineError::new(Stage::Output, format!("cannot write `{}`: {e}", path.display()))
    })?;
    written.push(path);
    Ok(())
}
