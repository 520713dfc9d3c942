//! Provided-interface identification: split every mined usage pattern into
//! cohesive class groups, each the provided interface of one future
//! component.
//!
//! Clustering reuses the shared agglomerative engine with interface fitness
//! as the merge criterion.  Rare classes attached to a pattern take part
//! exactly like its core items.  Within one pattern the groups partition the
//! pattern's classes; across patterns a class may well surface in several
//! interfaces.

use rayon::prelude::*;
use serde::Serialize;

use crate::cluster::agglomerate;
use crate::fupmine::Pattern;
use crate::metrics::{interface_fitness, FitnessContext, WeightConfig};
use crate::model::ItemSet;

/// One provided interface: a class group carved out of pattern `source_pattern`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ProvidedInterface {
    pub classes: ItemSet,
    /// Index of the pattern this interface was carved from.
    pub source_pattern: usize,
    /// Interface fitness of the final group.
    pub fitness: f64,
}

/// Split one pattern (items plus attached classes) into provided interfaces.
///
/// The transactions in `ctx` must be non-empty — interface fitness is
/// undefined without them.
pub fn partition_pattern(
    pattern: &Pattern,
    pattern_index: usize,
    ctx: &FitnessContext<'_>,
    w: &WeightConfig,
) -> Vec<ProvidedInterface> {
    assert!(
        !ctx.transactions.is_empty(),
        "interface identification needs at least one transaction"
    );
    let universe: ItemSet = pattern.items.union(&pattern.attached).cloned().collect();
    let fitness = |e: &ItemSet| {
        interface_fitness(e, ctx, w).expect("transactions checked non-empty above")
    };
    agglomerate(&universe, w.tau, fitness)
        .into_iter()
        .map(|classes| {
            let fitness = fitness(&classes);
            ProvidedInterface {
                classes,
                source_pattern: pattern_index,
                fitness,
            }
        })
        .collect()
}

/// Partition every pattern, concatenating the interfaces in pattern order.
pub fn partition_all(
    patterns: &[Pattern],
    ctx: &FitnessContext<'_>,
    w: &WeightConfig,
) -> Vec<ProvidedInterface> {
    let per_pattern: Vec<Vec<ProvidedInterface>> = patterns
        .par_iter()
        .enumerate()
        .map(|(i, p)| partition_pattern(p, i, ctx, w))
        .collect();
    per_pattern.into_iter().flatten().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fupmine::Support;
    use crate::model::{item_set, ClassId, DependencyEdge, DependencyGraph, EdgeKind, TermVector};
    use std::collections::BTreeMap;

    fn vectors(entries: &[(&str, &[&str])]) -> BTreeMap<ClassId, TermVector> {
        entries
            .iter()
            .map(|(id, terms)| {
                (
                    ClassId::new(*id),
                    TermVector {
                        terms: terms.iter().map(|t| (t.to_string(), 1)).collect(),
                    },
                )
            })
            .collect()
    }

    fn pattern(items: ItemSet, support: Support) -> Pattern {
        Pattern {
            items,
            support,
            attached: ItemSet::new(),
        }
    }

    #[test]
    fn tight_pair_forms_one_interface() {
        let graph = DependencyGraph::from_edges([DependencyEdge::new(
            "p.A",
            "p.B",
            EdgeKind::Call,
            1,
        )]);
        let vectors = vectors(&[("p.A", &["auth"]), ("p.B", &["auth"])]);
        let txs = vec![item_set(["p.A", "p.B"]), item_set(["p.A", "p.B"])];
        let ctx = FitnessContext {
            graph: &graph,
            vectors: &vectors,
            transactions: &txs,
        };
        let p = pattern(item_set(["p.A", "p.B"]), Support::new(2, 2));
        let got = partition_pattern(&p, 0, &ctx, &WeightConfig::default());
        assert_eq!(got.len(), 1);
        assert_eq!(got[0].classes, item_set(["p.A", "p.B"]));
        assert_eq!(got[0].fitness, 1.0);
        assert_eq!(got[0].source_pattern, 0);
    }

    #[test]
    fn unrelated_pair_stays_split() {
        let graph = DependencyGraph::from_edges([]);
        let vectors = vectors(&[("p.A", &["auth"]), ("p.Z", &["zip"])]);
        let txs = vec![item_set(["p.A"]), item_set(["p.Z"])];
        let ctx = FitnessContext {
            graph: &graph,
            vectors: &vectors,
            transactions: &txs,
        };
        let p = pattern(item_set(["p.A", "p.Z"]), Support::new(1, 2));
        let got = partition_pattern(&p, 0, &ctx, &WeightConfig::default());
        assert_eq!(got.len(), 2);
        assert_eq!(got[0].classes, item_set(["p.A"]));
        assert_eq!(got[1].classes, item_set(["p.Z"]));
    }

    /// Two 2-class services inside one 4-class pattern: cohesive pairs,
    /// nothing across.
    fn two_service_context() -> (
        DependencyGraph,
        BTreeMap<ClassId, TermVector>,
        Vec<ItemSet>,
    ) {
        let graph = DependencyGraph::from_edges([
            DependencyEdge::new("p.A", "p.B", EdgeKind::Call, 1),
            DependencyEdge::new("p.X", "p.Y", EdgeKind::Call, 1),
        ]);
        let vectors = vectors(&[
            ("p.A", &["auth", "login"]),
            ("p.B", &["auth", "token"]),
            ("p.X", &["zip", "pack"]),
            ("p.Y", &["zip", "inflate"]),
        ]);
        let txs = vec![
            item_set(["p.A", "p.B"]),
            item_set(["p.A", "p.B"]),
            item_set(["p.A", "p.B", "p.X", "p.Y"]),
            item_set(["p.X", "p.Y"]),
            item_set(["p.X", "p.Y"]),
        ];
        (graph, vectors, txs)
    }

    #[test]
    fn pattern_of_two_services_splits_into_two_interfaces() {
        let (graph, vectors, txs) = two_service_context();
        let ctx = FitnessContext {
            graph: &graph,
            vectors: &vectors,
            transactions: &txs,
        };
        let w = WeightConfig::default();
        let p = pattern(item_set(["p.A", "p.B", "p.X", "p.Y"]), Support::new(1, 5));
        let got = partition_pattern(&p, 3, &ctx, &w);
        let sets: Vec<&ItemSet> = got.iter().map(|i| &i.classes).collect();
        assert_eq!(sets, vec![&item_set(["p.A", "p.B"]), &item_set(["p.X", "p.Y"])]);

        // Exhaustive cross-check: both service pairs clear the threshold and
        // every mixed group of two or more classes falls below it.
        let universe: Vec<ClassId> = p.items.iter().cloned().collect();
        let services = [item_set(["p.A", "p.B"]), item_set(["p.X", "p.Y"])];
        for service in &services {
            assert!(interface_fitness(service, &ctx, &w).unwrap() >= w.tau);
        }
        for mask in 1u32..(1 << universe.len()) {
            let subset: ItemSet = universe
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, id)| id.clone())
                .collect();
            if subset.len() < 2 || services.iter().any(|s| subset.is_subset(s)) {
                continue;
            }
            let fitness = interface_fitness(&subset, &ctx, &w).unwrap();
            assert!(fitness < w.tau, "mixed group {subset:?} scored {fitness}");
        }

        // Self-consistency: the reported fitness is the recomputed value.
        for interface in &got {
            assert_eq!(
                interface.fitness,
                interface_fitness(&interface.classes, &ctx, &w).unwrap()
            );
            assert_eq!(interface.source_pattern, 3);
        }
    }

    #[test]
    fn interfaces_partition_their_pattern() {
        let (graph, vectors, txs) = two_service_context();
        let ctx = FitnessContext {
            graph: &graph,
            vectors: &vectors,
            transactions: &txs,
        };
        let p = pattern(item_set(["p.A", "p.B", "p.X", "p.Y"]), Support::new(1, 5));
        let got = partition_pattern(&p, 0, &ctx, &WeightConfig::default());
        let mut union = ItemSet::new();
        let mut total = 0;
        for interface in &got {
            assert!(!interface.classes.is_empty());
            total += interface.classes.len();
            union.extend(interface.classes.iter().cloned());
        }
        assert_eq!(union, p.items);
        assert_eq!(total, p.items.len());
    }

    #[test]
    fn attached_classes_cluster_like_items() {
        let graph = DependencyGraph::from_edges([
            DependencyEdge::new("p.A", "p.B", EdgeKind::Call, 1),
            DependencyEdge::new("p.B", "p.R", EdgeKind::Call, 1),
        ]);
        let vectors = vectors(&[
            ("p.A", &["auth"]),
            ("p.B", &["auth"]),
            ("p.R", &["auth"]),
        ]);
        let txs = vec![item_set(["p.A", "p.B", "p.R"]); 2];
        let ctx = FitnessContext {
            graph: &graph,
            vectors: &vectors,
            transactions: &txs,
        };
        let p = Pattern {
            items: item_set(["p.A", "p.B"]),
            support: Support::new(2, 2),
            attached: item_set(["p.R"]),
        };
        let got = partition_pattern(&p, 0, &ctx, &WeightConfig::default());
        assert_eq!(got.len(), 1);
        assert_eq!(got[0].classes, item_set(["p.A", "p.B", "p.R"]));
    }

    #[test]
    fn patterns_may_share_classes_across_interfaces() {
        let graph = DependencyGraph::from_edges([
            DependencyEdge::new("p.A", "p.B", EdgeKind::Call, 1),
            DependencyEdge::new("p.B", "p.C", EdgeKind::Call, 1),
        ]);
        let vectors = vectors(&[
            ("p.A", &["auth"]),
            ("p.B", &["auth", "zip"]),
            ("p.C", &["zip"]),
        ]);
        let txs = vec![
            item_set(["p.A", "p.B"]),
            item_set(["p.A", "p.B"]),
            item_set(["p.B", "p.C"]),
            item_set(["p.B", "p.C"]),
        ];
        let ctx = FitnessContext {
            graph: &graph,
            vectors: &vectors,
            transactions: &txs,
        };
        let patterns = vec![
            pattern(item_set(["p.A", "p.B"]), Support::new(2, 4)),
            pattern(item_set(["p.B", "p.C"]), Support::new(2, 4)),
        ];
        let got = partition_all(&patterns, &ctx, &WeightConfig::default());
        let holding_b: Vec<usize> = got
            .iter()
            .filter(|i| i.classes.contains("p.B"))
            .map(|i| i.source_pattern)
            .collect();
        assert_eq!(holding_b, vec![0, 1]);
    }
}
