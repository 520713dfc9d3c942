//! Language-neutral class models.
//!
//! A model file describes one API or one client program as a flat list of
//! classes with their members and the class-level references those members
//! make (method calls, attribute accesses, inheritance, instantiation).  From
//! a parsed [`ClassModel`] this module derives the two views every later
//! stage works on:
//!
//! * [`dependency_graph`] — aggregated, weighted class-to-class edges, and
//! * [`term_vectors`] — bag-of-words vectors over the identifiers of each
//!   class, used for lexical similarity.
//!
//! Parsing is strict about structure (missing required fields and duplicate
//! class ids are errors) but lenient about vocabulary: type references that
//! do not name a class of the model are treated as primitives or externals
//! and simply ignored when deriving edges.  [`validate`] reports dangling
//! references and invariant violations as data instead of failing, so
//! callers can decide what is fatal.

use std::borrow::Borrow;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Identifier of a class, unique within a model (`package.ClassName`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ClassId(pub String);

impl ClassId {
    pub fn new(id: impl Into<String>) -> Self {
        ClassId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The class name without its package prefix.
    pub fn simple_name(&self) -> &str {
        self.0.rsplit('.').next().unwrap_or(&self.0)
    }
}

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for ClassId {
    fn from(s: &str) -> Self {
        ClassId(s.to_string())
    }
}

impl From<String> for ClassId {
    fn from(s: String) -> Self {
        ClassId(s)
    }
}

impl Borrow<str> for ClassId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

/// An ordered set of class ids; the unit most metrics operate on.
pub type ItemSet = BTreeSet<ClassId>;

/// Convenience constructor for an [`ItemSet`] from anything stringy.
pub fn item_set<I, S>(ids: I) -> ItemSet
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    ids.into_iter().map(|s| ClassId(s.into())).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Api,
    Client,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Visibility {
    Public,
    Protected,
    Private,
    Package,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttributeDecl {
    pub name: String,
    #[serde(rename = "type")]
    pub ty: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CallRef {
    pub class: ClassId,
    pub method: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AccessRef {
    pub class: ClassId,
    pub attribute: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MethodDecl {
    pub name: String,
    pub visibility: Visibility,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub params: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub calls: Vec<CallRef>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub accesses: Vec<AccessRef>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub instantiates: Vec<ClassId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassDecl {
    pub id: ClassId,
    pub package: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub attributes: Vec<AttributeDecl>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub methods: Vec<MethodDecl>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub extends: Vec<ClassId>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub implements: Vec<ClassId>,
}

impl ClassDecl {
    /// Every class-level reference this declaration makes, in declaration
    /// order: call and access targets, instantiated classes, supertypes.
    pub fn referenced_classes(&self) -> impl Iterator<Item = &ClassId> {
        let member_refs = self.methods.iter().flat_map(|m| {
            m.calls
                .iter()
                .map(|c| &c.class)
                .chain(m.accesses.iter().map(|a| &a.class))
                .chain(m.instantiates.iter())
        });
        member_refs
            .chain(self.extends.iter())
            .chain(self.implements.iter())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassModel {
    pub name: String,
    pub kind: ModelKind,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub classes: Vec<ClassDecl>,
}

impl ClassModel {
    /// Ids of all classes declared in this model.
    pub fn class_ids(&self) -> ItemSet {
        self.classes.iter().map(|c| c.id.clone()).collect()
    }

    pub fn get(&self, id: &ClassId) -> Option<&ClassDecl> {
        self.classes.iter().find(|c| &c.id == id)
    }

    /// Canonical serialized form; [`parse_model`] of the result is identity.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("model serialization cannot fail");
        s.push('\n');
        s
    }
}

#[derive(Debug, Error)]
pub enum ModelError {
    /// The file is not well-formed JSON.
    #[error("malformed model file at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    /// The JSON is well-formed but does not match the model schema.
    #[error("schema error at `{path}`: {message}")]
    Schema { path: String, message: String },
    /// Two classes share an id.
    #[error("duplicate class id `{id}` in model `{model}`")]
    DuplicateClass { model: String, id: ClassId },
    #[error("cannot read `{path}`: {message}")]
    Io { path: String, message: String },
}

/// Parse a model from its JSON text.
///
/// Syntax errors report line/column; schema errors report the path of the
/// offending field; duplicate class ids are rejected.
pub fn parse_model(text: &str) -> Result<ClassModel, ModelError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let model: ClassModel = match serde_path_to_error::deserialize(de) {
        Ok(m) => m,
        Err(err) => {
            let inner = err.inner();
            return Err(if inner.classify() == serde_json::error::Category::Data {
                ModelError::Schema {
                    path: err.path().to_string(),
                    message: inner.to_string(),
                }
            } else {
                ModelError::Syntax {
                    line: inner.line(),
                    column: inner.column(),
                    message: inner.to_string(),
                }
            });
        }
    };
    let mut seen = BTreeSet::new();
    for class in &model.classes {
        if !seen.insert(&class.id) {
            return Err(ModelError::DuplicateClass {
                model: model.name.clone(),
                id: class.id.clone(),
            });
        }
    }
    Ok(model)
}

/// Read and parse a model file.
pub fn load_model(path: &Path) -> Result<ClassModel, ModelError> {
    let text = std::fs::read_to_string(path).map_err(|e| ModelError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_model(&text)
}

// ---- validation ----

/// A non-fatal problem found by [`validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Issue {
    /// A member references a class that resolves neither in this model nor in
    /// the paired API model.
    DanglingReference { class: ClassId, target: ClassId },
    /// A class references itself (self edges carry no information and are
    /// dropped from dependency graphs).
    SelfReference { class: ClassId },
    /// Two methods of one class share a name and parameter arity.
    DuplicateMethod {
        class: ClassId,
        method: String,
        arity: usize,
    },
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Issue::DanglingReference { class, target } => {
                write!(f, "class `{class}` references unresolved class `{target}`")
            }
            Issue::SelfReference { class } => write!(f, "class `{class}` references itself"),
            Issue::DuplicateMethod {
                class,
                method,
                arity,
            } => write!(
                f,
                "class `{class}` declares method `{method}`/{arity} more than once"
            ),
        }
    }
}

/// Check referential integrity of `model`.
///
/// For a client model pass the API it is written against as `context`; class
/// references may then resolve in either model.  The returned list is empty
/// exactly when the model is ready for the pipeline.
pub fn validate(model: &ClassModel, context: Option<&ClassModel>) -> Vec<Issue> {
    let own: BTreeSet<&ClassId> = model.classes.iter().map(|c| &c.id).collect();
    let ctx: BTreeSet<&ClassId> = context
        .map(|m| m.classes.iter().map(|c| &c.id).collect())
        .unwrap_or_default();

    let mut issues = Vec::new();
    for class in &model.classes {
        let mut flagged: BTreeSet<&ClassId> = BTreeSet::new();
        let mut self_flagged = false;
        for target in class.referenced_classes() {
            if target == &class.id {
                if !self_flagged {
                    issues.push(Issue::SelfReference {
                        class: class.id.clone(),
                    });
                    self_flagged = true;
                }
            } else if !own.contains(target) && !ctx.contains(target) && flagged.insert(target) {
                issues.push(Issue::DanglingReference {
                    class: class.id.clone(),
                    target: target.clone(),
                });
            }
        }
        let mut sigs = BTreeSet::new();
        for method in &class.methods {
            if !sigs.insert((&method.name, method.params.len())) {
                issues.push(Issue::DuplicateMethod {
                    class: class.id.clone(),
                    method: method.name.clone(),
                    arity: method.params.len(),
                });
            }
        }
    }
    issues
}

// ---- dependency graph ----

/// The four interaction kinds tracked between classes.
///
/// Variants are declared in lexicographic order so the derived `Ord` matches
/// the order of the kind names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Access,
    Call,
    Inherit,
    Instantiate,
}

impl fmt::Display for EdgeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EdgeKind::Access => "access",
            EdgeKind::Call => "call",
            EdgeKind::Inherit => "inherit",
            EdgeKind::Instantiate => "instantiate",
        })
    }
}

/// One aggregated directed dependency between two distinct classes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DependencyEdge {
    pub source: ClassId,
    pub target: ClassId,
    pub kind: EdgeKind,
    /// Number of member-level occurrences backing this edge (>= 1).
    pub weight: u32,
}

impl DependencyEdge {
    pub fn new(
        source: impl Into<String>,
        target: impl Into<String>,
        kind: EdgeKind,
        weight: u32,
    ) -> Self {
        DependencyEdge {
            source: ClassId(source.into()),
            target: ClassId(target.into()),
            kind,
            weight,
        }
    }
}

/// Aggregated dependency graph of one model, with an undirected adjacency
/// index for connectivity queries.
#[derive(Debug, Clone, Default)]
pub struct DependencyGraph {
    edges: Vec<DependencyEdge>,
    adjacency: BTreeMap<ClassId, BTreeSet<ClassId>>,
}

impl DependencyGraph {
    /// Build a graph directly from edges (synthetic graphs, tests).
    ///
    /// Self edges are dropped and parallel `(source, target, kind)` entries
    /// have their weights summed, mirroring [`dependency_graph`].
    pub fn from_edges(edges: impl IntoIterator<Item = DependencyEdge>) -> Self {
        let mut weights: BTreeMap<(ClassId, ClassId, EdgeKind), u32> = BTreeMap::new();
        for e in edges {
            if e.source != e.target {
                *weights.entry((e.source, e.target, e.kind)).or_insert(0) += e.weight;
            }
        }
        let mut adjacency: BTreeMap<ClassId, BTreeSet<ClassId>> = BTreeMap::new();
        let edges = weights
            .into_iter()
            .map(|((source, target, kind), weight)| {
                adjacency
                    .entry(source.clone())
                    .or_default()
                    .insert(target.clone());
                adjacency
                    .entry(target.clone())
                    .or_default()
                    .insert(source.clone());
                DependencyEdge {
                    source,
                    target,
                    kind,
                    weight,
                }
            })
            .collect();
        DependencyGraph { edges, adjacency }
    }

    /// Edges sorted by `(source, target, kind)`.
    pub fn edges(&self) -> &[DependencyEdge] {
        &self.edges
    }

    /// Neighbors of `id` ignoring direction and kind.
    pub fn neighbors(&self, id: &ClassId) -> impl Iterator<Item = &ClassId> {
        self.adjacency.get(id).into_iter().flatten()
    }

    /// True when at least one edge (either direction, any kind) links `a`
    /// and `b`.
    pub fn linked(&self, a: &ClassId, b: &ClassId) -> bool {
        self.adjacency.get(a).is_some_and(|n| n.contains(b))
    }

    /// Classes that participate in at least one edge.
    pub fn connected_classes(&self) -> impl Iterator<Item = &ClassId> {
        self.adjacency.keys()
    }

    pub fn has_edges(&self, id: &ClassId) -> bool {
        self.adjacency.contains_key(id)
    }
}

/// Derive the aggregated dependency graph of `model`.
///
/// Member-level references are grouped per `(source, target, kind)` with the
/// occurrence count as weight.  Self references and references to classes
/// outside the model (primitives, externals) are dropped.  The result is
/// independent of declaration order.
pub fn dependency_graph(model: &ClassModel) -> DependencyGraph {
    let ids = model.class_ids();
    let mut raw = Vec::new();
    let mut add = |source: &ClassId, target: &ClassId, kind: EdgeKind| {
        if ids.contains(target) {
            raw.push(DependencyEdge {
                source: source.clone(),
                target: target.clone(),
                kind,
                weight: 1,
            });
        }
    };
    for class in &model.classes {
        for method in &class.methods {
            for call in &method.calls {
                add(&class.id, &call.class, EdgeKind::Call);
            }
            for access in &method.accesses {
                add(&class.id, &access.class, EdgeKind::Access);
            }
            for inst in &method.instantiates {
                add(&class.id, inst, EdgeKind::Instantiate);
            }
        }
        for sup in class.extends.iter().chain(class.implements.iter()) {
            add(&class.id, sup, EdgeKind::Inherit);
        }
    }
    DependencyGraph::from_edges(raw)
}

// ---- term vectors ----

/// Bag of lowercase identifier terms with occurrence counts.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TermVector {
    pub terms: BTreeMap<String, u32>,
}

impl TermVector {
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn norm_squared(&self) -> f64 {
        self.terms.values().map(|&c| (c as f64) * (c as f64)).sum()
    }

    /// Cosine similarity; 0 when either vector is empty.  Identical vectors
    /// score exactly 1, and rounding can never push the result above 1.
    pub fn cosine(&self, other: &TermVector) -> f64 {
        let (small, large) = if self.terms.len() <= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        let dot: f64 = small
            .terms
            .iter()
            .filter_map(|(t, &c)| large.terms.get(t).map(|&d| (c as f64) * (d as f64)))
            .sum();
        let denom = (self.norm_squared() * other.norm_squared()).sqrt();
        if denom == 0.0 {
            0.0
        } else {
            (dot / denom).min(1.0)
        }
    }
}

/// Split an identifier on camel-case boundaries, underscores, digits, and any
/// other non-alphabetic characters; lowercase the parts; drop parts of length
/// one.  An all-caps run is kept whole (`HTTP2Server` -> `http`, `server`).
pub fn split_identifier(ident: &str) -> Vec<String> {
    let mut parts = Vec::new();
    let mut current = String::new();
    let mut prev: Option<char> = None;
    let chars: Vec<char> = ident.chars().collect();
    for (i, &ch) in chars.iter().enumerate() {
        if !ch.is_alphabetic() {
            if !current.is_empty() {
                parts.push(std::mem::take(&mut current));
            }
            prev = None;
            continue;
        }
        let boundary = match prev {
            Some(p) => {
                // lower -> Upper starts a new word; so does the last capital
                // of a capital run followed by a lowercase letter (HTTPServer
                // -> HTTP + Server).
                (p.is_lowercase() && ch.is_uppercase())
                    || (p.is_uppercase()
                        && ch.is_uppercase()
                        && chars.get(i + 1).is_some_and(|n| n.is_lowercase()))
            }
            None => false,
        };
        if boundary && !current.is_empty() {
            parts.push(std::mem::take(&mut current));
        }
        current.extend(ch.to_lowercase());
        prev = Some(ch);
    }
    if !current.is_empty() {
        parts.push(current);
    }
    parts.retain(|p| p.len() > 1);
    parts
}

/// Term vector of one class: simple class name, method names, and attribute
/// names, split with [`split_identifier`] and merged by count.
pub fn term_vector(class: &ClassDecl) -> TermVector {
    let mut terms: BTreeMap<String, u32> = BTreeMap::new();
    let mut feed = |ident: &str| {
        for term in split_identifier(ident) {
            *terms.entry(term).or_insert(0) += 1;
        }
    };
    feed(class.id.simple_name());
    for method in &class.methods {
        feed(&method.name);
    }
    for attr in &class.attributes {
        feed(&attr.name);
    }
    TermVector { terms }
}

/// Term vectors for every class of the model.
pub fn term_vectors(model: &ClassModel) -> BTreeMap<ClassId, TermVector> {
    model
        .classes
        .iter()
        .map(|c| (c.id.clone(), term_vector(c)))
        .collect()
}

/// Workspace fixture path, for tests across the crate.
#[cfg(test)]
pub(crate) fn fixture_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> ClassModel {
        load_model(&fixture_path("tiny_api.json")).expect("tiny fixture parses")
    }

    #[test]
    fn tiny_fixture_shape() {
        let model = tiny();
        assert_eq!(model.kind, ModelKind::Api);
        assert_eq!(model.classes.len(), 6);
        let graph = dependency_graph(&model);
        assert_eq!(graph.edges().len(), 7);
        let kinds: Vec<(&str, &str, EdgeKind, u32)> = graph
            .edges()
            .iter()
            .map(|e| (e.source.as_str(), e.target.as_str(), e.kind, e.weight))
            .collect();
        assert_eq!(
            kinds,
            vec![
                ("tiny.FileReader", "tiny.FileBuffer", EdgeKind::Call, 1),
                ("tiny.FileReader", "tiny.FileBuffer", EdgeKind::Instantiate, 1),
                ("tiny.FileWriter", "tiny.FileBuffer", EdgeKind::Access, 1),
                ("tiny.FileWriter", "tiny.FileBuffer", EdgeKind::Call, 1),
                ("tiny.NetChannel", "tiny.NetSocket", EdgeKind::Inherit, 1),
                ("tiny.NetChannel", "tiny.UtilLog", EdgeKind::Call, 1),
                ("tiny.NetSocket", "tiny.NetChannel", EdgeKind::Call, 1),
            ]
        );
    }

    #[test]
    fn split_rules() {
        assert_eq!(split_identifier("HTTP2Server"), vec!["http", "server"]);
        assert_eq!(split_identifier("FileReader"), vec!["file", "reader"]);
        assert_eq!(split_identifier("readLine"), vec!["read", "line"]);
        assert_eq!(split_identifier("read_line_fast"), vec!["read", "line", "fast"]);
        assert_eq!(split_identifier("x"), Vec::<String>::new());
        assert_eq!(split_identifier("aB"), Vec::<String>::new());
        assert_eq!(split_identifier("HTTPServer"), vec!["http", "server"]);
        assert_eq!(split_identifier("run2x"), vec!["run"]);
    }

    #[test]
    fn term_vector_merges_counts() {
        let class = ClassDecl {
            id: ClassId::new("pkg.FileReader"),
            package: "pkg".into(),
            attributes: vec![],
            methods: vec![MethodDecl {
                name: "readLine".into(),
                visibility: Visibility::Public,
                params: vec![],
                calls: vec![],
                accesses: vec![],
                instantiates: vec![],
            }],
            extends: vec![],
            implements: vec![],
        };
        let v = term_vector(&class);
        let expect: BTreeMap<String, u32> = [
            ("file".to_string(), 1),
            ("reader".to_string(), 1),
            ("read".to_string(), 1),
            ("line".to_string(), 1),
        ]
        .into_iter()
        .collect();
        assert_eq!(v.terms, expect);
    }

    #[test]
    fn package_prefix_is_not_vocabulary() {
        let class = ClassDecl {
            id: ClassId::new("com.example.FileReader"),
            package: "com.example".into(),
            attributes: vec![],
            methods: vec![],
            extends: vec![],
            implements: vec![],
        };
        let v = term_vector(&class);
        assert!(v.terms.contains_key("file"));
        assert!(!v.terms.contains_key("com"));
        assert!(!v.terms.contains_key("example"));
    }

    #[test]
    fn parse_reports_syntax_position() {
        let err = parse_model("{\n  \"name\": \"x\",\n").unwrap_err();
        match err {
            ModelError::Syntax { line, .. } => assert!(line >= 2),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn parse_reports_schema_path() {
        // `kind` missing entirely.
        let err = parse_model("{\"name\": \"x\", \"classes\": []}").unwrap_err();
        match &err {
            ModelError::Schema { message, .. } => assert!(message.contains("kind")),
            other => panic!("expected schema error, got {other:?}"),
        }
        // Nested field with the wrong type: the path names the class entry.
        let err = parse_model(
            "{\"name\": \"x\", \"kind\": \"api\", \"classes\": [{\"id\": 3, \"package\": \"p\"}]}",
        )
        .unwrap_err();
        match &err {
            ModelError::Schema { path, .. } => assert!(path.contains("classes[0]"), "path: {path}"),
            other => panic!("expected schema error, got {other:?}"),
        }
    }

    #[test]
    fn parse_rejects_duplicate_ids() {
        let text = r#"{"name": "m", "kind": "api", "classes": [
            {"id": "p.A", "package": "p"},
            {"id": "p.A", "package": "p"}
        ]}"#;
        match parse_model(text).unwrap_err() {
            ModelError::DuplicateClass { id, .. } => assert_eq!(id.as_str(), "p.A"),
            other => panic!("expected duplicate class error, got {other:?}"),
        }
    }

    #[test]
    fn round_trip_is_identity() {
        let model = tiny();
        let emitted = model.to_json();
        let reparsed = parse_model(&emitted).expect("canonical form reparses");
        assert_eq!(model, reparsed);
    }

    #[test]
    fn graph_aggregates_weights_and_drops_self_edges() {
        let text = r#"{"name": "m", "kind": "api", "classes": [
            {"id": "p.A", "package": "p", "methods": [
                {"name": "go", "visibility": "public",
                 "calls": [{"class": "p.B", "method": "x"},
                            {"class": "p.B", "method": "y"},
                            {"class": "p.A", "method": "go"},
                            {"class": "ext.Missing", "method": "z"}]}
            ]},
            {"id": "p.B", "package": "p"}
        ]}"#;
        let graph = dependency_graph(&parse_model(text).unwrap());
        assert_eq!(graph.edges().len(), 1);
        let e = &graph.edges()[0];
        assert_eq!(e.weight, 2);
        assert_eq!(e.kind, EdgeKind::Call);
        assert!(graph.linked(&ClassId::new("p.A"), &ClassId::new("p.B")));
        assert!(graph.linked(&ClassId::new("p.B"), &ClassId::new("p.A")));
    }

    #[test]
    fn graph_ignores_declaration_order() {
        let mut model = tiny();
        let forward = dependency_graph(&model);
        model.classes.reverse();
        let reversed = dependency_graph(&model);
        assert_eq!(forward.edges(), reversed.edges());
    }

    #[test]
    fn validate_flags_dangling_self_and_duplicate() {
        let api = tiny();
        let client_text = r#"{"name": "c", "kind": "client", "classes": [
            {"id": "c.Main", "package": "c",
             "extends": ["c.Main"],
             "methods": [
                {"name": "a", "visibility": "public",
                 "calls": [{"class": "tiny.FileReader", "method": "read"},
                            {"class": "gone.Nowhere", "method": "x"}]},
                {"name": "a", "visibility": "private"}
             ]}
        ]}"#;
        let client = parse_model(client_text).unwrap();
        let issues = validate(&client, Some(&api));
        assert_eq!(issues.len(), 3, "{issues:?}");
        assert!(issues.iter().any(|i| matches!(
            i,
            Issue::DanglingReference { target, .. } if target.as_str() == "gone.Nowhere"
        )));
        assert!(issues
            .iter()
            .any(|i| matches!(i, Issue::SelfReference { .. })));
        assert!(issues.iter().any(|i| matches!(
            i,
            Issue::DuplicateMethod { method, arity: 0, .. } if method == "a"
        )));
    }

    #[test]
    fn validate_clean_fixture_is_empty() {
        let api = tiny();
        assert!(validate(&api, None).is_empty());
    }
}
