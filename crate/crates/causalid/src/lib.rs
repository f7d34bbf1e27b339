//! Identification of causal-inference targets expressed as node, edge, or
//! path interventions on discrete causal DAGs.
//!
//! The crate decides whether a target is identified under single-world or
//! multiple-worlds independence assumptions, emits the identifying
//! functional symbolically, evaluates it on discrete joint distributions,
//! and cross-checks every answer against an exact enumeration oracle over
//! finite structural models, including witness model pairs for
//! non-identified targets.

pub mod dist;
pub mod dsl;
pub mod error;
pub mod estimation;
pub mod functional;
pub mod graph;
pub mod identify;
pub mod intervene;
pub mod oracle;
pub mod paths;
pub mod targets;

pub use dist::DiscreteJoint;
pub use error::Error;
pub use functional::Functional;
pub use graph::{CausalGraph, SplitGraph};
pub use identify::{IdentificationResult, Verdict};
pub use intervene::{EdgeIntervention, Intervention, NodeIntervention, PathIntervention, Value};
pub use oracle::StructuralModel;
pub use paths::Path;
