//! Metric kernel shared by every pipeline stage.
//!
//! Five pure functions over immutable context:
//!
//! * [`support`] — fraction of transactions containing a class set,
//! * [`lcc`] — structural cohesion as the fraction of member pairs connected
//!   (directly or transitively) through intra-group dependency edges,
//! * [`conceptual_coupling`] — mean pairwise cosine of term vectors,
//! * [`interface_fitness`] — normalized weighted sum of the three above,
//! * [`component_quality`] — normalized weighted sum of autonomy,
//!   specificity, and composability of a class group inside an API graph.
//!
//! All weights live in a [`WeightConfig`]; both weighted sums divide by the
//! sum of their weights, so scaling a weight vector by a positive constant
//! does not change any result.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::model::{ClassId, DependencyGraph, ItemSet, TermVector};

/// Weights for interface fitness (`lambda`), component quality (`mu`), and
/// the clustering stop threshold (`tau`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightConfig {
    /// Weights of lcc, conceptual coupling, and support in interface fitness.
    pub lambda: [f64; 3],
    /// Weights of autonomy, specificity, and composability in quality.
    pub mu: [f64; 3],
    /// Clustering keeps merging while the best merged fitness is >= tau.
    pub tau: f64,
}

impl Default for WeightConfig {
    fn default() -> Self {
        WeightConfig {
            lambda: [1.0, 1.0, 1.0],
            mu: [1.0, 1.0, 1.0],
            tau: 0.5,
        }
    }
}

impl WeightConfig {
    /// Check every invariant: all weights and `tau` in `[0,1]`, and neither
    /// weight vector all zero.
    pub fn validate(&self) -> Result<(), MetricsError> {
        let in_unit = |v: f64| v.is_finite() && (0.0..=1.0).contains(&v);
        if !self.lambda.iter().all(|&v| in_unit(v)) {
            return Err(MetricsError::InvalidWeights(
                "lambda weights must lie in [0, 1]".into(),
            ));
        }
        if !self.mu.iter().all(|&v| in_unit(v)) {
            return Err(MetricsError::InvalidWeights(
                "mu weights must lie in [0, 1]".into(),
            ));
        }
        if !in_unit(self.tau) {
            return Err(MetricsError::InvalidWeights("tau must lie in [0, 1]".into()));
        }
        if self.lambda.iter().sum::<f64>() <= 0.0 {
            return Err(MetricsError::InvalidWeights(
                "lambda weights must not all be zero".into(),
            ));
        }
        if self.mu.iter().sum::<f64>() <= 0.0 {
            return Err(MetricsError::InvalidWeights(
                "mu weights must not all be zero".into(),
            ));
        }
        Ok(())
    }

    /// Copy of `self` with a different stop threshold.
    pub fn with_tau(mut self, tau: f64) -> Self {
        self.tau = tau;
        self
    }
}

#[derive(Debug, Error)]
pub enum MetricsError {
    /// Support is a probability over transactions; with no transactions it
    /// is undefined.
    #[error("support is undefined: no transactions")]
    EmptyTransactions,
    #[error("invalid weight configuration: {0}")]
    InvalidWeights(String),
}

/// Fraction of `transactions` that contain every class of `e`.
///
/// The empty set is contained in every transaction, so `support(∅) = 1`.
pub fn support(e: &ItemSet, transactions: &[ItemSet]) -> Result<f64, MetricsError> {
    if transactions.is_empty() {
        return Err(MetricsError::EmptyTransactions);
    }
    let hits = transactions.iter().filter(|t| e.is_subset(t)).count();
    Ok(hits as f64 / transactions.len() as f64)
}

/// Structural cohesion of `e`: connected member pairs over all member pairs.
///
/// Two members count as connected when a path of dependency edges (any kind,
/// ignoring direction) exists between them that stays inside `e`.  A
/// singleton is perfectly cohesive.
pub fn lcc(e: &ItemSet, graph: &DependencyGraph) -> f64 {
    let n = e.len();
    if n <= 1 {
        return 1.0;
    }
    let mut connected_pairs = 0usize;
    let mut seen = ItemSet::new();
    for start in e {
        if seen.contains(start) {
            continue;
        }
        // Flood one induced component and count its internal pairs.
        let mut stack = vec![start.clone()];
        let mut size = 0usize;
        seen.insert(start.clone());
        while let Some(id) = stack.pop() {
            size += 1;
            for next in graph.neighbors(&id) {
                if e.contains(next) && seen.insert(next.clone()) {
                    stack.push(next.clone());
                }
            }
        }
        connected_pairs += size * (size - 1) / 2;
    }
    connected_pairs as f64 / (n * (n - 1) / 2) as f64
}

/// Lexical cohesion of `e`: mean cosine similarity over unordered member
/// pairs.  Classes without a vector count as empty vectors (similarity 0);
/// a singleton is perfectly similar to itself.
pub fn conceptual_coupling(e: &ItemSet, vectors: &BTreeMap<ClassId, TermVector>) -> f64 {
    let n = e.len();
    if n <= 1 {
        return 1.0;
    }
    static EMPTY: TermVector = TermVector {
        terms: BTreeMap::new(),
    };
    let members: Vec<&TermVector> = e.iter().map(|id| vectors.get(id).unwrap_or(&EMPTY)).collect();
    let mut total = 0.0;
    for (i, a) in members.iter().enumerate() {
        for b in &members[i + 1..] {
            total += a.cosine(b);
        }
    }
    total / (n * (n - 1) / 2) as f64
}

/// Everything interface fitness needs besides the candidate set itself.
#[derive(Clone, Copy)]
pub struct FitnessContext<'a> {
    pub graph: &'a DependencyGraph,
    pub vectors: &'a BTreeMap<ClassId, TermVector>,
    pub transactions: &'a [ItemSet],
}

/// Ability of `e` to serve as one provided interface:
/// `(λ1·lcc + λ2·cc + λ3·support) / (λ1+λ2+λ3)`.
pub fn interface_fitness(
    e: &ItemSet,
    ctx: &FitnessContext<'_>,
    w: &WeightConfig,
) -> Result<f64, MetricsError> {
    let [l1, l2, l3] = w.lambda;
    let s = support(e, ctx.transactions)?;
    let sum = l1 * lcc(e, ctx.graph) + l2 * conceptual_coupling(e, ctx.vectors) + l3 * s;
    Ok(sum / (l1 + l2 + l3))
}

/// Quality of `e` as a component body inside `api_graph`:
/// `(μ1·autonomy + μ2·specificity + μ3·composability) / (μ1+μ2+μ3)`.
///
/// * autonomy — weight of edges with both endpoints in `e` over weight of
///   all edges touching `e` (1 when no edge touches `e`),
/// * specificity — [`conceptual_coupling`] of `e`,
/// * composability — `1 − |boundary|/|e|` where the boundary holds members
///   with at least one edge crossing out of (or into) `e`.
pub fn component_quality(
    e: &ItemSet,
    api_graph: &DependencyGraph,
    vectors: &BTreeMap<ClassId, TermVector>,
    w: &WeightConfig,
) -> f64 {
    let mut internal = 0u64;
    let mut incident = 0u64;
    let mut boundary = ItemSet::new();
    for edge in api_graph.edges() {
        let src_in = e.contains(&edge.source);
        let tgt_in = e.contains(&edge.target);
        if !src_in && !tgt_in {
            continue;
        }
        incident += edge.weight as u64;
        if src_in && tgt_in {
            internal += edge.weight as u64;
        } else if src_in {
            boundary.insert(edge.source.clone());
        } else {
            boundary.insert(edge.target.clone());
        }
    }
    let autonomy = if incident == 0 {
        1.0
    } else {
        internal as f64 / incident as f64
    };
    let specificity = conceptual_coupling(e, vectors);
    let composability = 1.0 - boundary.len() as f64 / e.len() as f64;
    let [m1, m2, m3] = w.mu;
    (m1 * autonomy + m2 * specificity + m3 * composability) / (m1 + m2 + m3)
}
