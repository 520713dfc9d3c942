//! Evaluation of a recovered architecture: understandability ratios,
//! K-fold reusability, and provided-interface usage density.
//!
//! Understandability compares how many units a client developer faces
//! before and after componentization.  Reusability holds out each fold of
//! clients in turn, rebuilds the architecture from the rest, and measures
//! how much of each touched component the held-out clients actually use.
//! Density measures how much of each provided interface is exercised, both
//! for the mined architecture and for a usage-blind baseline.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cluster::agglomerate;
use crate::compbuild::{ApiContext, Component, LayeredArchitecture};
use crate::metrics::{component_quality, WeightConfig};
use crate::model::{ClassModel, ItemSet};
use crate::pipeline::{mine_architecture, ApiData, PipelineError, Stage};
use crate::usage::{extract_transactions, Transaction};

/// Parameters for a full evaluation.
#[derive(Debug, Clone)]
pub struct EvalConfig {
    /// Fold counts to run; empty skips the K-fold study.
    pub ks: Vec<usize>,
    pub minsup: f64,
    pub seed: u64,
    pub growth_cap: Option<usize>,
    /// Count untouched components as zero instead of leaving them out.
    pub include_untouched: bool,
}

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("k-fold needs between 2 and {clients} folds (the client count), got {k}")]
    InvalidK { k: usize, clients: usize },
    #[error("fold {fold}: {source}")]
    Fold { fold: usize, source: PipelineError },
}

/// The assembled evaluation, serialized as `report.json`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EvalReport {
    pub api_class_count: usize,
    pub component_count: usize,
    pub used_class_count: usize,
    pub used_component_count: usize,
    pub size_ratio: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub usage_ratio: Option<f64>,
    pub kfold: Vec<KfoldEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub density: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub baseline_density: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct KfoldEntry {
    pub k: usize,
    pub mean_reusability: f64,
}

impl EvalReport {
    /// Canonical serialized form.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization cannot fail");
        s.push('\n');
        s
    }
}

/// Size and usage counts behind the understandability ratios.
#[derive(Debug, Clone, PartialEq)]
pub struct Understandability {
    pub api_class_count: usize,
    pub component_count: usize,
    pub used_class_count: usize,
    pub used_component_count: usize,
    pub size_ratio: f64,
    /// Absent when the clients reference no API class at all.
    pub usage_ratio: Option<f64>,
}

/// How much smaller the componentized view is: components per API class,
/// and used components per used class.
pub fn understandability(
    arch: &LayeredArchitecture,
    transactions: &[Transaction],
    universe: &ItemSet,
) -> Understandability {
    let used: ItemSet = transactions
        .iter()
        .flat_map(|t| t.items.iter().cloned())
        .collect();
    let component_count = arch.components().count();
    let used_component_count = arch
        .components()
        .filter(|c| c.interface_classes.intersection(&used).next().is_some())
        .count();
    let api_class_count = universe.len();
    let size_ratio = if api_class_count == 0 {
        0.0
    } else {
        component_count as f64 / api_class_count as f64
    };
    let usage_ratio = if used.is_empty() {
        None
    } else {
        Some(used_component_count as f64 / used.len() as f64)
    };
    Understandability {
        api_class_count,
        component_count,
        used_class_count: used.len(),
        used_component_count,
        size_ratio,
        usage_ratio,
    }
}

/// Mean fraction of each touched component's classes that `used` covers.
/// `None` when nothing is touched and untouched components don't count.
pub fn reusability_score(
    arch: &LayeredArchitecture,
    used: &ItemSet,
    include_untouched: bool,
) -> Option<f64> {
    let mut scores = Vec::new();
    for component in arch.components() {
        let classes = component.classes();
        let touched = classes.intersection(used).count();
        if touched > 0 {
            scores.push(touched as f64 / classes.len() as f64);
        } else if include_untouched && !classes.is_empty() {
            scores.push(0.0);
        }
    }
    mean(&scores)
}

/// One K-fold study: per-fold scores in fold order, plus their mean.
#[derive(Debug, Clone, PartialEq)]
pub struct KfoldResult {
    pub k: usize,
    /// `None` marks a fold whose test clients touched no component.
    pub fold_scores: Vec<Option<f64>>,
    pub mean: f64,
}

/// Hold out each of K client folds in turn, rebuild the architecture from
/// the remaining clients, and score how much of every touched component the
/// held-out clients use.  The fold assignment is a seeded shuffle followed
/// by near-equal contiguous splits, so results are reproducible.
#[allow(clippy::too_many_arguments)]
pub fn reusability_kfold(
    api: &ApiData,
    clients: &[ClassModel],
    k: usize,
    w: &WeightConfig,
    minsup: f64,
    growth_cap: Option<usize>,
    seed: u64,
    include_untouched: bool,
) -> Result<KfoldResult, EvalError> {
    if k < 2 || k > clients.len() {
        return Err(EvalError::InvalidK {
            k,
            clients: clients.len(),
        });
    }
    let mut order: Vec<usize> = (0..clients.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);
    let base = clients.len() / k;
    let remainder = clients.len() % k;
    let mut folds: Vec<Vec<usize>> = Vec::with_capacity(k);
    let mut offset = 0;
    for fold in 0..k {
        let size = base + usize::from(fold < remainder);
        folds.push(order[offset..offset + size].to_vec());
        offset += size;
    }

    let trials: Vec<Result<Option<f64>, PipelineError>> = folds
        .par_iter()
        .map(|test_indices| {
            let test: Vec<ClassModel> = test_indices.iter().map(|&i| clients[i].clone()).collect();
            let train: Vec<ClassModel> = (0..clients.len())
                .filter(|i| !test_indices.contains(i))
                .map(|i| clients[i].clone())
                .collect();
            let outcome = mine_architecture(api, &train, w, minsup, growth_cap)?;
            let test_transactions = extract_transactions(&test, &api.model, w)
                .map_err(|e| PipelineError::new(Stage::Partition, e))?;
            let used: ItemSet = test_transactions
                .iter()
                .flat_map(|t| t.items.iter().cloned())
                .collect();
            Ok(reusability_score(
                &outcome.architecture,
                &used,
                include_untouched,
            ))
        })
        .collect();

    let mut fold_scores = Vec::with_capacity(k);
    for (fold, trial) in trials.into_iter().enumerate() {
        fold_scores.push(trial.map_err(|source| EvalError::Fold { fold, source })?);
    }
    let scored: Vec<f64> = fold_scores.iter().flatten().copied().collect();
    Ok(KfoldResult {
        k,
        fold_scores,
        mean: mean(&scored).unwrap_or(0.0),
    })
}

/// Mean fraction of each used component's provided interface that the
/// transactions exercise.  `None` when no component is used.
pub fn interface_density(
    arch: &LayeredArchitecture,
    transactions: &[Transaction],
    include_untouched: bool,
) -> Option<f64> {
    let used: ItemSet = transactions
        .iter()
        .flat_map(|t| t.items.iter().cloned())
        .collect();
    let mut scores = Vec::new();
    for component in arch.components() {
        let interface = &component.interface_classes;
        if interface.is_empty() {
            continue;
        }
        let touched = interface.intersection(&used).count();
        if touched > 0 {
            scores.push(touched as f64 / interface.len() as f64);
        } else if include_untouched {
            scores.push(0.0);
        }
    }
    mean(&scores)
}

/// Usage-blind reference architecture: cluster the whole API by component
/// quality alone, with no transactions involved.  Each cluster's provided
/// interface is its boundary — the classes with an edge leaving the cluster
/// — or the whole cluster when it has no boundary.
pub fn fup_free_baseline(api: &ApiContext<'_>, w: &WeightConfig) -> LayeredArchitecture {
    let clusters = agglomerate(api.universe, w.tau, |e| {
        component_quality(e, api.graph, api.vectors, w)
    });
    let mut components = Vec::new();
    for (id, cluster) in clusters.into_iter().enumerate() {
        let boundary: ItemSet = cluster
            .iter()
            .filter(|c| api.graph.neighbors(c).any(|n| !cluster.contains(n)))
            .cloned()
            .collect();
        let interface_classes = if boundary.is_empty() {
            cluster.clone()
        } else {
            boundary
        };
        let internal_classes: ItemSet = cluster.difference(&interface_classes).cloned().collect();
        components.push(Component {
            id,
            peak_quality: component_quality(&cluster, api.graph, api.vectors, w),
            interface_classes,
            internal_classes,
            required: ItemSet::new(),
            layer: 1,
            quality_trace: Vec::new(),
        });
    }
    LayeredArchitecture {
        api_name: api.name.to_string(),
        layers: vec![components],
        residual_layer: Vec::new(),
    }
}

/// Assemble the full report for one architecture and client corpus.
pub fn evaluate(
    arch: &LayeredArchitecture,
    api: &ApiData,
    clients: &[ClassModel],
    transactions: &[Transaction],
    w: &WeightConfig,
    cfg: &EvalConfig,
) -> Result<EvalReport, EvalError> {
    let und = understandability(arch, transactions, &api.universe);
    let mut kfold = Vec::new();
    for &k in &cfg.ks {
        let result = reusability_kfold(
            api,
            clients,
            k,
            w,
            cfg.minsup,
            cfg.growth_cap,
            cfg.seed,
            cfg.include_untouched,
        )?;
        kfold.push(KfoldEntry {
            k,
            mean_reusability: result.mean,
        });
    }
    let density = interface_density(arch, transactions, cfg.include_untouched);
    let baseline = fup_free_baseline(&api.context(), w);
    let baseline_density = interface_density(&baseline, transactions, cfg.include_untouched);
    Ok(EvalReport {
        api_class_count: und.api_class_count,
        component_count: und.component_count,
        used_class_count: und.used_class_count,
        used_component_count: und.used_component_count,
        size_ratio: und.size_ratio,
        usage_ratio: und.usage_ratio,
        kfold,
        density,
        baseline_density,
    })
}

fn mean(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        None
    } else {
        Some(values.iter().sum::<f64>() / values.len() as f64)
    }
}
