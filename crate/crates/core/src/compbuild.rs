//! Component construction and usage-driven layering.
//!
//! Each provided interface seeds one component: starting from the interface
//! classes, neighboring API classes are added greedily by component quality,
//! and the component keeps the prefix of additions up to the quality peak.
//! Layer by layer, the classes the previous layer still requires are
//! clustered into the next layer's provided interfaces, until nothing new is
//! required.  API classes that end up in no component are grouped into a
//! trailing residual layer.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::cluster::agglomerate;
use crate::interfaces::ProvidedInterface;
use crate::metrics::{component_quality, interface_fitness, FitnessContext, WeightConfig};
use crate::model::{ClassId, DependencyGraph, ItemSet, TermVector};

/// Immutable API-side context shared by construction and layering.
#[derive(Clone, Copy)]
pub struct ApiContext<'a> {
    /// Name of the API model (becomes the architecture name).
    pub name: &'a str,
    pub graph: &'a DependencyGraph,
    pub vectors: &'a BTreeMap<ClassId, TermVector>,
    /// All API class ids, including classes without any edge.
    pub universe: &'a ItemSet,
}

/// One API component: provided-interface classes plus the internal classes
/// that support them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Component {
    pub id: usize,
    /// Provided-interface classes (the seed this component grew from).
    #[serde(rename = "interface")]
    pub interface_classes: ItemSet,
    /// Classes absorbed before the quality peak; disjoint from the interface.
    #[serde(rename = "internal")]
    pub internal_classes: ItemSet,
    /// Classes this component depends on but does not contain, excluding
    /// classes provided by components identified up to its own layer.
    pub required: ItemSet,
    /// Quality of `interface ∪ internal` — the peak of the growth trace.
    pub peak_quality: f64,
    /// 1-based layer; the residual layer sits after all regular layers.
    #[serde(skip)]
    pub layer: usize,
    /// Every addition the greedy growth tried, with the quality after it.
    #[serde(skip)]
    pub quality_trace: Vec<(ClassId, f64)>,
}

impl Component {
    /// Interface and internal classes together.
    pub fn classes(&self) -> ItemSet {
        self.interface_classes
            .union(&self.internal_classes)
            .cloned()
            .collect()
    }
}

/// The classes a component needs from the rest of the API.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RequiredInterface {
    pub component_id: usize,
    pub classes: ItemSet,
}

/// The finished architecture: N usage-driven layers plus a residual layer.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LayeredArchitecture {
    #[serde(rename = "api")]
    pub api_name: String,
    pub layers: Vec<Vec<Component>>,
    #[serde(rename = "residual")]
    pub residual_layer: Vec<Component>,
}

impl LayeredArchitecture {
    /// All components, layer by layer, residual last.
    pub fn components(&self) -> impl Iterator<Item = &Component> {
        self.layers
            .iter()
            .flatten()
            .chain(self.residual_layer.iter())
    }

    /// Classes of the universe that no component contains.
    pub fn uncovered(&self, universe: &ItemSet) -> ItemSet {
        let mut left = universe.clone();
        for component in self.components() {
            for id in component.classes().iter() {
                left.remove(id);
            }
        }
        left
    }

    /// Canonical serialized form.
    pub fn to_json(&self) -> String {
        let mut s =
            serde_json::to_string_pretty(self).expect("architecture serialization cannot fail");
        s.push('\n');
        s
    }
}

/// Length of the trace prefix to keep: the earliest index (0 = keep
/// nothing) whose quality is the global maximum of baseline and trace.
pub fn peak_prefix(baseline: f64, trace: &[f64]) -> usize {
    let mut best = baseline;
    let mut keep = 0;
    for (i, &q) in trace.iter().enumerate() {
        if q > best {
            best = q;
            keep = i + 1;
        }
    }
    keep
}

/// Grow one component from its provided-interface classes.
///
/// Candidates are API classes with at least one edge (either direction) to
/// the current set; each step adds the candidate with the best resulting
/// quality (ties to the lexicographically smallest id).  Growth records the
/// full trace but the component keeps only the prefix up to the quality
/// peak.  `cap` bounds the number of growth steps.  The caller assigns `id`
/// and `layer`.
pub fn grow_component(
    interface: &ItemSet,
    api: &ApiContext<'_>,
    w: &WeightConfig,
    cap: Option<usize>,
) -> Component {
    let baseline = component_quality(interface, api.graph, api.vectors, w);
    let mut current = interface.clone();
    let mut trace: Vec<(ClassId, f64)> = Vec::new();
    loop {
        if cap.is_some_and(|limit| trace.len() >= limit) {
            break;
        }
        let candidates: ItemSet = current
            .iter()
            .flat_map(|id| api.graph.neighbors(id))
            .filter(|n| !current.contains(*n))
            .cloned()
            .collect();
        let mut best: Option<(ClassId, f64)> = None;
        for candidate in candidates {
            let mut extended = current.clone();
            extended.insert(candidate.clone());
            let q = component_quality(&extended, api.graph, api.vectors, w);
            if best.as_ref().is_none_or(|(_, bq)| q > *bq) {
                best = Some((candidate, q));
            }
        }
        let Some((chosen, q)) = best else {
            break;
        };
        current.insert(chosen.clone());
        trace.push((chosen, q));
    }

    let keep = peak_prefix(baseline, &trace.iter().map(|(_, q)| *q).collect::<Vec<_>>());
    let internal: ItemSet = trace[..keep].iter().map(|(id, _)| id.clone()).collect();
    let peak_quality = if keep == 0 { baseline } else { trace[keep - 1].1 };
    Component {
        id: 0,
        interface_classes: interface.clone(),
        internal_classes: internal,
        required: ItemSet::new(),
        peak_quality,
        layer: 0,
        quality_trace: trace,
    }
}

/// The classes `component` depends on beyond itself, minus everything the
/// identified components already provide.
pub fn required_interfaces(
    component: &Component,
    graph: &DependencyGraph,
    provided: &BTreeMap<ClassId, Vec<usize>>,
) -> RequiredInterface {
    let own = component.classes();
    let classes = graph
        .edges()
        .iter()
        .filter(|e| own.contains(&e.source) && !own.contains(&e.target))
        .map(|e| e.target.clone())
        .filter(|t| !provided.contains_key(t))
        .collect();
    RequiredInterface {
        component_id: component.id,
        classes,
    }
}

/// Grow the first layer: one component per distinct provided-interface
/// class set, numbered in lexicographic order of those sets.
pub fn grow_first_layer(
    interfaces: &[ProvidedInterface],
    api: &ApiContext<'_>,
    w: &WeightConfig,
    cap: Option<usize>,
) -> Vec<Component> {
    let distinct: Vec<ItemSet> = interfaces
        .iter()
        .map(|i| i.classes.clone())
        .collect::<std::collections::BTreeSet<ItemSet>>()
        .into_iter()
        .collect();
    let mut components: Vec<Component> = distinct
        .par_iter()
        .map(|classes| grow_component(classes, api, w, cap))
        .collect();
    for (id, component) in components.iter_mut().enumerate() {
        component.id = id;
        component.layer = 1;
    }
    components
}

/// Organize components into usage-driven layers.
///
/// Each round collects what the newest layer still requires; those classes
/// are clustered by interface fitness, with support computed over
/// pseudo-transactions — the per-component required sets — and every
/// cluster grows into a component of the next layer.  When nothing new is
/// required, classes outside every component are clustered by quality into
/// the residual layer.
pub fn build_layers(
    first_layer: Vec<Component>,
    api: &ApiContext<'_>,
    w: &WeightConfig,
    cap: Option<usize>,
) -> LayeredArchitecture {
    let mut provided: BTreeMap<ClassId, Vec<usize>> = BTreeMap::new();
    let mut next_id = 0;
    for component in &first_layer {
        next_id = next_id.max(component.id + 1);
        for class in &component.interface_classes {
            provided.entry(class.clone()).or_default().push(component.id);
        }
    }
    let mut layers = vec![first_layer];

    loop {
        // What does the newest layer still need?
        let newest = layers.len() - 1;
        let mut pseudo: Vec<ItemSet> = Vec::new();
        for component in layers[newest].iter_mut() {
            let req = required_interfaces(component, api.graph, &provided);
            component.required = req.classes.clone();
            if !req.classes.is_empty() {
                pseudo.push(req.classes);
            }
        }
        let universe: ItemSet = pseudo.iter().flatten().cloned().collect();
        if universe.is_empty() {
            break;
        }
        debug_assert!(layers.len() < api.universe.len(), "layer bound exceeded");

        let ctx = FitnessContext {
            graph: api.graph,
            vectors: api.vectors,
            transactions: &pseudo,
        };
        let clusters = agglomerate(&universe, w.tau, |e| {
            interface_fitness(e, &ctx, w).expect("pseudo-transactions are non-empty")
        });
        let mut layer: Vec<Component> = clusters
            .par_iter()
            .map(|cluster| grow_component(cluster, api, w, cap))
            .collect();
        for component in layer.iter_mut() {
            component.id = next_id;
            component.layer = layers.len() + 1;
            next_id += 1;
            for class in &component.interface_classes {
                provided.entry(class.clone()).or_default().push(component.id);
            }
        }
        layers.push(layer);
    }

    // Classes no component contains form the residual layer.
    let mut covered = ItemSet::new();
    for component in layers.iter().flatten() {
        covered.extend(component.classes());
    }
    let leftover: ItemSet = api.universe.difference(&covered).cloned().collect();
    let mut residual_layer = Vec::new();
    for cluster in agglomerate(&leftover, w.tau, |e| {
        component_quality(e, api.graph, api.vectors, w)
    }) {
        let mut component = Component {
            id: next_id,
            interface_classes: cluster.clone(),
            internal_classes: ItemSet::new(),
            required: ItemSet::new(),
            peak_quality: component_quality(&cluster, api.graph, api.vectors, w),
            layer: layers.len() + 1,
            quality_trace: Vec::new(),
        };
        component.required = required_interfaces(&component, api.graph, &provided).classes;
        next_id += 1;
        residual_layer.push(component);
    }

    LayeredArchitecture {
        api_name: api.name.to_string(),
        layers,
        residual_layer,
    }
}

/// Render the architecture as a DOT digraph: one subgraph cluster per layer,
/// one node per component, edges where one component's required classes are
/// another's provided interface.
pub fn to_dot(arch: &LayeredArchitecture) -> String {
    let mut out = String::from("digraph architecture {\n  rankdir=LR;\n  node [shape=box];\n");
    let emit_layer = |label: &str, components: &[Component], out: &mut String| {
        if components.is_empty() {
            return;
        }
        let _ = writeln!(out, "  subgraph cluster_{label} {{");
        let _ = writeln!(out, "    label=\"{label}\";");
        for c in components {
            let count = c.interface_classes.len() + c.internal_classes.len();
            let noun = if count == 1 { "class" } else { "classes" };
            let _ = writeln!(out, "    c{} [label=\"c{} ({count} {noun})\"];", c.id, c.id);
        }
        let _ = writeln!(out, "  }}");
    };
    for (i, layer) in arch.layers.iter().enumerate() {
        emit_layer(&format!("layer_{}", i + 1), layer, &mut out);
    }
    emit_layer("residual", &arch.residual_layer, &mut out);

    let all: Vec<&Component> = arch.components().collect();
    for a in &all {
        for b in &all {
            if a.id != b.id && a.required.intersection(&b.interface_classes).next().is_some() {
                let _ = writeln!(out, "  c{} -> c{};", a.id, b.id);
            }
        }
    }
    out.push_str("}\n");
    out
}
