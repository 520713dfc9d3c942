//! Reengineering an object-oriented API into a layered, component-based
//! architecture by mining how client programs actually use it.
//!
//! The pipeline runs in six stages, each its own module:
//!
//! 1. [`model`] — parse API/client class models, derive dependency graphs
//!    and identifier term vectors;
//! 2. [`usage`] — partition each client into components and extract the API
//!    class sets those components use (usage transactions);
//! 3. [`fupmine`] — mine frequent usage patterns from the transactions and
//!    cover rarely used classes;
//! 4. [`interfaces`] — split each pattern into cohesive provided interfaces;
//! 5. [`compbuild`] — grow a quality-centric component around each
//!    interface and organize components into usage-driven layers;
//! 6. [`eval`] — measure the result (understandability, K-fold reusability,
//!    interface density).
//!
//! [`metrics`] holds the shared metric kernel, [`cluster`] the greedy
//! grouping engine, [`synth`] a seeded corpus generator, and [`pipeline`]
//! the end-to-end driver the command-line tool wraps.

pub mod cluster;
pub mod compbuild;
pub mod eval;
pub mod fupmine;
pub mod interfaces;
pub mod metrics;
pub mod model;
pub mod pipeline;
pub mod synth;
#[cfg(test)]
pub(crate) mod testkit;
pub mod usage;

pub use compbuild::{Component, LayeredArchitecture, RequiredInterface};
pub use eval::EvalReport;
pub use fupmine::{FupResult, Pattern};
pub use interfaces::ProvidedInterface;
pub use metrics::WeightConfig;
pub use model::{ClassId, ClassModel, DependencyEdge, EdgeKind, ItemSet};
pub use pipeline::RunConfig;
pub use synth::SyntheticSpec;
pub use usage::{ClientComponent, Transaction};
