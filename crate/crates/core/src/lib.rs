//! Local certification of graph embeddability on surfaces.
//!
//! The library implements a one-round proof labelling scheme: an honest
//! prover turns a combinatorial embedding (rotation system plus edge signs)
//! into per-vertex and per-edge certificates, and a strictly local verifier
//! accepts or rejects from a single vertex's one-round view. A brute-force
//! genus oracle provides ground truth on small graphs, and a simulation
//! harness drives completeness suites, adversarial soundness fuzzing, and
//! certificate-size metering.

mod arcs;

pub mod certificate;
pub mod embedding;
pub mod fixtures;
pub mod graph;
pub mod harness;
pub mod oracle;
pub mod verifier;

pub use embedding::{
    diagnostics, euler_genus, find_odd_negative_cycle, is_orientable_scheme, parse_embedding,
    phi_successor, trace_faces_doubled, trace_faces_phi, validate_scheme, EmbeddingScheme,
    FaceStructure, HalfEdge, SchemeDiagnostics, SchemeError, Sign,
};
pub use graph::{
    bfs_tree, degeneracy_order, heawood_bound, parse_graph, reroot, Edge, Graph, GraphError,
    RootedTree, VertexId,
};
