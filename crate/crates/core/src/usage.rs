//! Client-side analysis: split each client program into functional
//! components and extract the API classes every component touches.
//!
//! A client component is a group of client classes found by quality-driven
//! agglomerative clustering over the client's own dependency graph.  Each
//! component then contributes at most one usage transaction: the set of API
//! classes its members call, access, extend/implement, or instantiate.
//! Components that never touch the API contribute nothing.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cluster::agglomerate;
use crate::metrics::{component_quality, WeightConfig};
use crate::model::{dependency_graph, term_vectors, ClassModel, ItemSet};

/// One functional component inside a client program.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ClientComponent {
    pub client_name: String,
    /// Index of this component within its client (0-based, stable).
    pub id: usize,
    pub classes: ItemSet,
}

/// The API classes one client component uses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Transaction {
    pub client_name: String,
    pub component_id: usize,
    pub items: ItemSet,
}

#[derive(Debug, Error)]
pub enum UsageError {
    #[error("client model `{0}` declares no classes")]
    EmptyClient(String),
}

/// Partition the classes of `client` into functional components.
///
/// Classes that participate in dependency edges are grouped by the shared
/// clustering engine with component quality over the client's own graph as
/// fitness; classes without any edge always stay singleton components.
/// Components are numbered in lexicographic order of their class sets.
pub fn partition_client(
    client: &ClassModel,
    w: &WeightConfig,
) -> Result<Vec<ClientComponent>, UsageError> {
    if client.classes.is_empty() {
        return Err(UsageError::EmptyClient(client.name.clone()));
    }
    let graph = dependency_graph(client);
    let vectors = term_vectors(client);
    let all = client.class_ids();
    let (linked, isolated): (ItemSet, ItemSet) =
        all.iter().cloned().partition(|id| graph.has_edges(id));

    let mut groups = agglomerate(&linked, w.tau, |e| component_quality(e, &graph, &vectors, w));
    groups.extend(isolated.into_iter().map(|id| ItemSet::from([id])));
    groups.sort();

    Ok(groups
        .into_iter()
        .enumerate()
        .map(|(id, classes)| ClientComponent {
            client_name: client.name.clone(),
            id,
            classes,
        })
        .collect())
}

/// Partition every client and collect the usage transactions of all their
/// components, ordered by `(client_name, component_id)`.
pub fn extract_transactions(
    clients: &[ClassModel],
    api: &ClassModel,
    w: &WeightConfig,
) -> Result<Vec<Transaction>, UsageError> {
    let api_ids = api.class_ids();
    let per_client: Vec<Result<Vec<Transaction>, UsageError>> = clients
        .par_iter()
        .map(|client| {
            let components = partition_client(client, w)?;
            let mut transactions = Vec::new();
            for component in components {
                let mut items = ItemSet::new();
                for class_id in &component.classes {
                    let Some(decl) = client.get(class_id) else {
                        continue;
                    };
                    items.extend(
                        decl.referenced_classes()
                            .filter(|t| api_ids.contains(*t))
                            .cloned(),
                    );
                }
                if !items.is_empty() {
                    transactions.push(Transaction {
                        client_name: component.client_name,
                        component_id: component.id,
                        items,
                    });
                }
            }
            Ok(transactions)
        })
        .collect();

    let mut all = Vec::new();
    for result in per_client {
        all.extend(result?);
    }
    // Include the items in the key so even same-named clients sort the same
    // way on every run.
    all.sort_by(|a, b| {
        (&a.client_name, a.component_id, &a.items).cmp(&(&b.client_name, b.component_id, &b.items))
    });
    Ok(all)
}

/// Item sets of `transactions`, in the same order.
pub fn transaction_items(transactions: &[Transaction]) -> Vec<ItemSet> {
    transactions.iter().map(|t| t.items.clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{item_set, load_model, parse_model, ClassId};

    /// Client with two isolated call cliques of distinct vocabularies:
    /// audio (pairwise cosine 2/3) and net (pairwise cosine 1/2).
    fn two_clique_client() -> ClassModel {
        parse_model(
            r#"{"name": "player", "kind": "client", "classes": [
                {"id": "app.AudioPlayer", "package": "app", "methods": [
                    {"name": "startAudio", "visibility": "public",
                     "calls": [{"class": "app.AudioMixer", "method": "stopAudio"}]}]},
                {"id": "app.AudioMixer", "package": "app", "methods": [
                    {"name": "stopAudio", "visibility": "public",
                     "calls": [{"class": "app.AudioPlayer", "method": "startAudio"}]}]},
                {"id": "app.NetSender", "package": "app", "methods": [
                    {"name": "sendData", "visibility": "public",
                     "calls": [{"class": "app.NetPoller", "method": "pollData"}]}]},
                {"id": "app.NetPoller", "package": "app", "methods": [
                    {"name": "pollData", "visibility": "public",
                     "calls": [{"class": "app.NetSender", "method": "sendData"}]}]}
            ]}"#,
        )
        .unwrap()
    }

    /// All set partitions of `items`.
    fn set_partitions(items: &[ClassId]) -> Vec<Vec<ItemSet>> {
        let Some((first, rest)) = items.split_first() else {
            return vec![vec![]];
        };
        let mut out = Vec::new();
        for sub in set_partitions(rest) {
            // `first` joins each existing block, or opens its own.
            for i in 0..sub.len() {
                let mut copy = sub.clone();
                copy[i].insert(first.clone());
                out.push(copy);
            }
            let mut alone = sub;
            alone.push(ItemSet::from([first.clone()]));
            out.push(alone);
        }
        out
    }

    #[test]
    fn two_cliques_become_two_components() {
        let client = two_clique_client();
        let w = WeightConfig::default().with_tau(0.8);
        let components = partition_client(&client, &w).unwrap();
        let groups: Vec<ItemSet> = components.iter().map(|c| c.classes.clone()).collect();
        assert_eq!(
            groups,
            vec![
                item_set(["app.AudioMixer", "app.AudioPlayer"]),
                item_set(["app.NetPoller", "app.NetSender"]),
            ]
        );
        assert_eq!(components[0].id, 0);
        assert_eq!(components[1].id, 1);

        // Independent check: among all 15 partitions of the four classes,
        // the clique pairing uniquely maximizes the worst per-group quality.
        let graph = dependency_graph(&client);
        let vectors = term_vectors(&client);
        let ids: Vec<ClassId> = client.class_ids().into_iter().collect();
        let mut best = set_partitions(&ids)
            .into_iter()
            .max_by(|a, b| {
                let worst = |p: &Vec<ItemSet>| {
                    p.iter()
                        .map(|e| component_quality(e, &graph, &vectors, &w))
                        .fold(f64::INFINITY, f64::min)
                };
                worst(a).total_cmp(&worst(b))
            })
            .unwrap();
        best.sort();
        assert_eq!(best, groups);
    }

    #[test]
    fn connected_identical_trio_collapses_at_default_tau() {
        // Three same-named classes in distinct packages: identical term
        // vectors, mutually linked with a heavier inner pair.
        let client = parse_model(
            r#"{"name": "jobs", "kind": "client", "classes": [
                {"id": "j1.JobRunner", "package": "j1", "methods": [
                    {"name": "run", "visibility": "public", "calls": [
                        {"class": "j2.JobRunner", "method": "run"},
                        {"class": "j2.JobRunner", "method": "run"},
                        {"class": "j2.JobRunner", "method": "run"},
                        {"class": "j3.JobRunner", "method": "run"}]}]},
                {"id": "j2.JobRunner", "package": "j2", "methods": [
                    {"name": "run", "visibility": "public", "calls": [
                        {"class": "j1.JobRunner", "method": "run"},
                        {"class": "j1.JobRunner", "method": "run"},
                        {"class": "j1.JobRunner", "method": "run"},
                        {"class": "j3.JobRunner", "method": "run"}]}]},
                {"id": "j3.JobRunner", "package": "j3", "methods": [
                    {"name": "run", "visibility": "public"}]}
            ]}"#,
        )
        .unwrap();
        let components = partition_client(&client, &WeightConfig::default()).unwrap();
        assert_eq!(components.len(), 1);
        assert_eq!(components[0].classes.len(), 3);
    }

    #[test]
    fn single_class_client_is_one_singleton() {
        let client = parse_model(
            r#"{"name": "solo", "kind": "client", "classes": [
                {"id": "s.Only", "package": "s"}]}"#,
        )
        .unwrap();
        let components = partition_client(&client, &WeightConfig::default()).unwrap();
        assert_eq!(components.len(), 1);
        assert_eq!(components[0].classes, item_set(["s.Only"]));
    }

    #[test]
    fn edgeless_classes_stay_singletons_despite_similarity() {
        // Identical vocabularies would merge on fitness alone; without any
        // dependency edge each class still keeps its own component.
        let client = parse_model(
            r#"{"name": "flat", "kind": "client", "classes": [
                {"id": "a.LogSink", "package": "a"},
                {"id": "b.LogSink", "package": "b"}
            ]}"#,
        )
        .unwrap();
        let components = partition_client(&client, &WeightConfig::default().with_tau(0.0)).unwrap();
        assert_eq!(components.len(), 2);
    }

    #[test]
    fn empty_client_is_an_error() {
        let client = parse_model(r#"{"name": "void", "kind": "client", "classes": []}"#).unwrap();
        let err = partition_client(&client, &WeightConfig::default()).unwrap_err();
        assert!(err.to_string().contains("void"));
    }

    #[test]
    fn partition_covers_all_classes_disjointly() {
        let client = two_clique_client();
        let components = partition_client(&client, &WeightConfig::default()).unwrap();
        let mut seen = ItemSet::new();
        let mut total = 0;
        for c in &components {
            total += c.classes.len();
            seen.extend(c.classes.iter().cloned());
        }
        assert_eq!(seen, client.class_ids());
        assert_eq!(total, client.classes.len());
    }

    fn api() -> ClassModel {
        load_model(&crate::model::fixture_path("tiny_api.json")).unwrap()
    }

    /// Two-clique client whose audio component reads files via the API and
    /// whose net component stays API-free.
    fn api_using_client() -> ClassModel {
        parse_model(
            r#"{"name": "player", "kind": "client", "classes": [
                {"id": "app.AudioPlayer", "package": "app", "methods": [
                    {"name": "startAudio", "visibility": "public",
                     "calls": [{"class": "app.AudioMixer", "method": "stopAudio"},
                                {"class": "tiny.FileReader", "method": "read"}]}]},
                {"id": "app.AudioMixer", "package": "app",
                 "extends": ["tiny.NetSocket"],
                 "methods": [
                    {"name": "stopAudio", "visibility": "public",
                     "calls": [{"class": "app.AudioPlayer", "method": "startAudio"}]}]},
                {"id": "app.NetSender", "package": "app", "methods": [
                    {"name": "sendData", "visibility": "public",
                     "calls": [{"class": "app.NetPoller", "method": "pollData"}]}]},
                {"id": "app.NetPoller", "package": "app", "methods": [
                    {"name": "pollData", "visibility": "public",
                     "calls": [{"class": "app.NetSender", "method": "sendData"}]}]}
            ]}"#,
        )
        .unwrap()
    }

    #[test]
    fn transactions_union_interaction_kinds_and_skip_api_free_components() {
        let w = WeightConfig::default().with_tau(0.8);
        let transactions = extract_transactions(&[api_using_client()], &api(), &w).unwrap();
        // Only the audio component touches the API: a call and an extends.
        assert_eq!(transactions.len(), 1);
        assert_eq!(transactions[0].client_name, "player");
        assert_eq!(transactions[0].component_id, 0);
        assert_eq!(
            transactions[0].items,
            item_set(["tiny.FileReader", "tiny.NetSocket"])
        );
    }

    #[test]
    fn components_of_one_client_are_not_merged() {
        // Both components use overlapping API sets; they stay separate.
        let client = parse_model(
            r#"{"name": "dual", "kind": "client", "classes": [
                {"id": "d.ReadTask", "package": "d", "methods": [
                    {"name": "readTask", "visibility": "public",
                     "calls": [{"class": "tiny.FileReader", "method": "read"}]}]},
                {"id": "d.CopyTask", "package": "d", "methods": [
                    {"name": "copyTask", "visibility": "public",
                     "calls": [{"class": "tiny.FileReader", "method": "read"},
                                {"class": "tiny.FileWriter", "method": "write"}]}]}
            ]}"#,
        )
        .unwrap();
        // The two classes share no edge, so they form two components.
        let transactions =
            extract_transactions(&[client], &api(), &WeightConfig::default()).unwrap();
        assert_eq!(transactions.len(), 2);
        assert_eq!(transactions[0].items, item_set(["tiny.FileReader", "tiny.FileWriter"]));
        assert_eq!(transactions[1].items, item_set(["tiny.FileReader"]));
    }

    #[test]
    fn transaction_order_ignores_client_file_order() {
        let mut a = api_using_client();
        a.name = "alpha".into();
        let mut b = api_using_client();
        b.name = "beta".into();
        let w = WeightConfig::default().with_tau(0.8);
        let forward = extract_transactions(&[a.clone(), b.clone()], &api(), &w).unwrap();
        let reversed = extract_transactions(&[b, a], &api(), &w).unwrap();
        assert_eq!(forward, reversed);
        assert_eq!(forward[0].client_name, "alpha");
        assert_eq!(forward[1].client_name, "beta");
    }
}
