//! Contour representations of graphs with maximum degree 3 and a
//! Hamiltonicity test built on them.
//!
//! A graph is drawn twice as a *basic object*: a spanning cyclic order of the
//! nodes (the contour) in which consecutive pairs are either graph edges or
//! *windows* (non-edges), plus the remaining graph edges as the interior.
//! The crate builds two such objects with disjoint interiors, assigns
//! half-integer node weights to both, and compares the contour and window
//! sums. An exact backtracking oracle and small-graph generators are included
//! so the claimed verdicts can be checked.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the command
//! line and experiment sweeps live in the `contour-hcp` crate.

#![no_std]

extern crate alloc;

pub mod canon;
pub mod cases;
pub mod construction;
pub mod decision;
pub mod fixtures;
pub mod generate;
pub mod graph;
pub mod object;
pub mod oracle;
pub mod pipeline;
pub mod weighting;

mod reconnect;

pub use cases::{Binding, CaseId, Phase, Restrictions};
pub use construction::{ObjectPair, RestrictedObject};
pub use decision::{Params, Verdict};
pub use graph::{ContractionMap, Edge, Graph, GraphError, Node};
pub use object::{BasicObject, ObjectHealth, Segment};
pub use oracle::CycleCertificate;
pub use pipeline::{Outcome, PipelineError, Report};
pub use weighting::NodeWeighting;
