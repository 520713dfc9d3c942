//! Seeded synthetic corpora: an API with planted component structure plus
//! clients that use it, for tests and benchmarks.
//!
//! The generator plants lexically coherent, densely connected class groups
//! in the API — per group, a clique of surface classes, a gateway, and a
//! heavier backend chain — then emits clients whose components each draw on
//! the surface classes of a few groups.  A noise fraction retargets
//! references uniformly.  Everything is a pure function of the seed, and
//! the planted ground truth is recorded alongside the models.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::compbuild::LayeredArchitecture;
use crate::model::{
    AccessRef, AttributeDecl, CallRef, ClassDecl, ClassId, ClassModel, ItemSet, MethodDecl,
    ModelKind, Visibility,
};

/// Parameters of one synthetic corpus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SyntheticSpec {
    pub seed: u64,
    pub api_classes: usize,
    pub planted_components: usize,
    pub clients: usize,
    /// Fraction of client references retargeted to a uniformly random API
    /// class.
    pub usage_noise: f64,
}

#[derive(Debug, Error, PartialEq)]
pub enum SynthError {
    #[error("apiClasses must be at least 1")]
    NoClasses,
    #[error("plantedComponents must lie in 1..=apiClasses, got {planted} with {classes} classes")]
    BadPlanted { planted: usize, classes: usize },
    #[error("clients must be at least 1")]
    NoClients,
    #[error("usageNoise must lie in [0, 1], got {0}")]
    BadNoise(f64),
}

impl SyntheticSpec {
    pub fn validate(&self) -> Result<(), SynthError> {
        if self.api_classes == 0 {
            return Err(SynthError::NoClasses);
        }
        if self.planted_components == 0 || self.planted_components > self.api_classes {
            return Err(SynthError::BadPlanted {
                planted: self.planted_components,
                classes: self.api_classes,
            });
        }
        if self.clients == 0 {
            return Err(SynthError::NoClients);
        }
        if !(self.usage_noise.is_finite() && (0.0..=1.0).contains(&self.usage_noise)) {
            return Err(SynthError::BadNoise(self.usage_noise));
        }
        Ok(())
    }
}

/// One planted group, as recorded in `truth.json`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TruthGroup {
    pub package: String,
    pub classes: ItemSet,
    /// The client-facing subset of `classes`.
    pub surface: ItemSet,
}

/// Ground truth of the planted structure.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Truth {
    pub seed: u64,
    pub groups: Vec<TruthGroup>,
}

/// A generated corpus: the API, its clients, and the planted truth.
#[derive(Debug, Clone)]
pub struct Synthetic {
    pub api: ClassModel,
    pub clients: Vec<ClassModel>,
    pub truth: Truth,
}

const CONSONANTS: [char; 14] = [
    'b', 'd', 'f', 'g', 'k', 'l', 'm', 'n', 'p', 'r', 's', 't', 'v', 'z',
];
const VOWELS: [char; 5] = ['a', 'e', 'i', 'o', 'u'];

/// Pronounceable lowercase pseudoword of 2–3 syllables.
fn word(rng: &mut ChaCha8Rng) -> String {
    let syllables = rng.gen_range(2..=3);
    let mut out = String::new();
    for _ in 0..syllables {
        out.push(CONSONANTS[rng.gen_range(0..CONSONANTS.len())]);
        out.push(VOWELS[rng.gen_range(0..VOWELS.len())]);
    }
    out
}

/// A pseudoword not seen before; words double as vocabulary terms, so
/// distinctness keeps unrelated groups lexically disjoint.
fn fresh_word(rng: &mut ChaCha8Rng, taken: &mut BTreeSet<String>) -> String {
    loop {
        let w = word(rng);
        if taken.insert(w.clone()) {
            return w;
        }
    }
}

fn capitalize(word: &str) -> String {
    let mut chars = word.chars();
    match chars.next() {
        Some(first) => first.to_uppercase().collect::<String>() + chars.as_str(),
        None => String::new(),
    }
}

/// Generate the corpus for `spec`.
pub fn generate(spec: &SyntheticSpec) -> Result<Synthetic, SynthError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut taken = BTreeSet::new();

    // Partition the API classes into near-equal planted groups.
    let group_count = spec.planted_components;
    let base = spec.api_classes / group_count;
    let remainder = spec.api_classes % group_count;
    let mut groups: Vec<TruthGroup> = Vec::with_capacity(group_count);
    let mut api_classes: Vec<ClassDecl> = Vec::new();

    for g in 0..group_count {
        let size = base + usize::from(g < remainder);
        let theme = fresh_word(&mut rng, &mut taken);
        let mut ids: Vec<ClassId> = Vec::with_capacity(size);
        for _ in 0..size {
            let role = fresh_word(&mut rng, &mut taken);
            ids.push(ClassId::new(format!(
                "{theme}.{}{}",
                capitalize(&theme),
                capitalize(&role)
            )));
        }
        let surface_len = size.div_ceil(2);
        let (surface, backend) = ids.split_at(surface_len);

        for (i, id) in ids.iter().enumerate() {
            let mut calls = Vec::new();
            if i < surface_len {
                // Surface classes form a clique of light calls.
                for (j, target) in surface.iter().enumerate() {
                    if j != i {
                        calls.push(CallRef {
                            class: target.clone(),
                            method: theme.clone(),
                        });
                    }
                }
                // The first surface class is the gateway into the backend.
                if i == 0 {
                    for target in backend {
                        for _ in 0..3 {
                            calls.push(CallRef {
                                class: target.clone(),
                                method: theme.clone(),
                            });
                        }
                    }
                }
            } else {
                // Backend classes pair up heavily along a chain.
                let b = i - surface_len;
                let mut link = |other: usize| {
                    for _ in 0..3 {
                        calls.push(CallRef {
                            class: backend[other].clone(),
                            method: theme.clone(),
                        });
                    }
                };
                if b + 1 < backend.len() {
                    link(b + 1);
                }
                if b > 0 {
                    link(b - 1);
                }
            }
            api_classes.push(ClassDecl {
                id: id.clone(),
                package: theme.clone(),
                attributes: vec![AttributeDecl {
                    name: theme.clone(),
                    ty: "int".into(),
                }],
                methods: vec![MethodDecl {
                    name: theme.clone(),
                    visibility: Visibility::Public,
                    params: Vec::new(),
                    calls,
                    accesses: Vec::new(),
                    instantiates: Vec::new(),
                }],
                extends: Vec::new(),
                implements: Vec::new(),
            });
        }
        groups.push(TruthGroup {
            package: theme,
            classes: ids.iter().cloned().collect(),
            surface: surface.iter().cloned().collect(),
        });
    }

    let api = ClassModel {
        name: format!("synthetic-{}", spec.seed),
        kind: ModelKind::Api,
        classes: api_classes,
    };
    let all_ids: Vec<ClassId> = api.classes.iter().map(|c| c.id.clone()).collect();

    // Clients: each component is one class drawing on the surfaces of a few
    // groups, with a noise fraction of references going anywhere.
    let mut clients = Vec::with_capacity(spec.clients);
    for c in 0..spec.clients {
        let package = format!("c{c:02}");
        let component_count = rng.gen_range(1..=3);
        let mut classes = Vec::with_capacity(component_count);
        for k in 0..component_count {
            let group_take = rng.gen_range(1..=group_count.min(3));
            let chosen: Vec<&TruthGroup> = groups
                .choose_multiple(&mut rng, group_take)
                .collect();
            let mut targets: Vec<ClassId> = Vec::new();
            for group in chosen {
                let surface: Vec<&ClassId> = group.surface.iter().collect();
                let fraction = rng.gen_range(0.7..=1.0);
                let take = ((surface.len() as f64 * fraction).round() as usize)
                    .clamp(1, surface.len());
                for id in surface.choose_multiple(&mut rng, take) {
                    targets.push((*id).clone());
                }
            }
            // Noise: retarget anywhere in the API.
            for target in targets.iter_mut() {
                if rng.gen_bool(spec.usage_noise) {
                    *target = all_ids[rng.gen_range(0..all_ids.len())].clone();
                }
            }

            let verb = fresh_word(&mut rng, &mut taken);
            let mut method = MethodDecl {
                name: verb.clone(),
                visibility: Visibility::Public,
                params: Vec::new(),
                calls: Vec::new(),
                accesses: Vec::new(),
                instantiates: Vec::new(),
            };
            let mut extends = Vec::new();
            for target in targets {
                let theme = target
                    .as_str()
                    .split('.')
                    .next()
                    .expect("synthetic ids are package-qualified")
                    .to_string();
                let roll: f64 = rng.gen();
                if roll < 0.70 {
                    method.calls.push(CallRef {
                        class: target,
                        method: theme,
                    });
                } else if roll < 0.85 {
                    method.instantiates.push(target);
                } else if roll < 0.95 {
                    method.accesses.push(AccessRef {
                        class: target,
                        attribute: theme,
                    });
                } else {
                    extends.push(target);
                }
            }
            classes.push(ClassDecl {
                id: ClassId::new(format!("{package}.{}Task{k}", capitalize(&verb))),
                package: package.clone(),
                attributes: Vec::new(),
                methods: vec![method],
                extends,
                implements: Vec::new(),
            });
        }
        clients.push(ClassModel {
            name: format!("client{c:02}"),
            kind: ModelKind::Client,
            classes,
        });
    }

    Ok(Synthetic {
        api,
        clients,
        truth: Truth {
            seed: spec.seed,
            groups,
        },
    })
}

/// Write `api.json`, `clients/client_NN.json`, and `truth.json` under `dir`.
pub fn write(corpus: &Synthetic, dir: &Path) -> std::io::Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    std::fs::create_dir_all(dir.join("clients"))?;
    let api_path = dir.join("api.json");
    std::fs::write(&api_path, corpus.api.to_json())?;
    written.push(api_path);
    for (i, client) in corpus.clients.iter().enumerate() {
        let path = dir.join("clients").join(format!("client_{i:02}.json"));
        std::fs::write(&path, client.to_json())?;
        written.push(path);
    }
    let truth_path = dir.join("truth.json");
    let mut truth = serde_json::to_string_pretty(&corpus.truth)
        .expect("truth serialization cannot fail");
    truth.push('\n');
    std::fs::write(&truth_path, truth)?;
    written.push(truth_path);
    Ok(written)
}

/// Fraction of first-layer provided interfaces that sit inside a single
/// planted group.  1.0 when the first layer is empty (vacuously pure).
pub fn purity(arch: &LayeredArchitecture, truth: &Truth) -> f64 {
    let first = match arch.layers.first() {
        Some(layer) if !layer.is_empty() => layer,
        _ => return 1.0,
    };
    let pure = first
        .iter()
        .filter(|c| {
            truth
                .groups
                .iter()
                .any(|g| c.interface_classes.is_subset(&g.classes))
        })
        .count();
    pure as f64 / first.len() as f64
}
