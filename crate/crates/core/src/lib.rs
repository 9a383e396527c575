//! Single-pass, fixed-memory graph descriptors over edge streams.
//!
//! Two descriptors are computed from one scan of an edge stream while
//! storing at most `b` edges:
//!
//! * **GABE**: normalized counts of all 17 graphs on 2, 3 and 4 vertices
//!   (see [`gabe`]).
//! * **MAEVE**: mean, standard deviation, skewness and kurtosis of five
//!   per-vertex features (see [`maeve`]).
//!
//! [`oracle`] provides brute-force exact counts for small graphs,
//! [`compare`] the Canberra distance and descriptor files, and [`harness`]
//! the classification and approximation-error experiments.

pub mod compare;
pub mod error;
pub mod estimator;
pub mod gabe;
pub mod generate;
pub mod graph;
pub mod harness;
pub mod maeve;
pub mod oracle;
pub mod patterns;
pub mod sampler;

pub use compare::{canberra, Descriptor, Format, Method};
pub use error::{Error, Result};
pub use estimator::{EstimatorConfig, StreamEstimator, StreamStats};
pub use gabe::{GabeDescriptor, GabeState};
pub use graph::{build_graph, preprocess, Edge, EdgeStream, Graph, VertexId};
pub use maeve::{MaeveDescriptor, MaeveState, VertexFeatures};
pub use oracle::{exact_induced_counts, exact_subgraph_counts, Oracle, PatternCounts};
pub use patterns::{overlap_matrix, Pattern};
pub use sampler::{detection_probability, variance_bound, ReservoirState};
