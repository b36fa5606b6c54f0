//! Covers of graphs by Hamilton cycles, built constructively.
//!
//! The pipeline packs edge-disjoint Hamilton cycles until the residual graph
//! is sparse, decomposes that residual into linear forests, and extends each
//! forest into a Hamilton cycle of the host graph. For a graph `G` the number
//! of cycles needed is at least `ceil(max_degree(G) / 2)`, and on random
//! graphs in the supported density range the pipeline usually meets that bound
//! exactly.
//!
//! Modules:
//! - [`graph`]: graph representation, linear forests, cycles, verifiers.
//! - [`io`]: edge-list text format and certificate JSON.
//! - [`random`]: seeded `G(n,p)` sampling and empirical property checks.
//! - [`forest`]: edge colourings, cherry matchings, linear forest decompositions.
//! - [`hamilton`]: rotation-extension searches, cycle packing, forest extension.
//! - [`pipeline`]: the end-to-end cover construction and its configuration.

#![forbid(unsafe_code)]

pub mod forest;
pub mod graph;
pub mod hamilton;
pub mod io;
pub mod pipeline;
pub mod random;

pub use forest::{
    approx_linear_arboricity, brute_force_linear_arboricity, cherry_matching, decompose_with_core,
    konig_edge_coloring, merge_edges_into_forests, ArbResult, Bipartition, CherryMatching,
    ForestCollection, ForestError, Provenance, ReinsertMechanism,
};
pub use graph::{
    build_graph, degree_stats, graph_hash, is_linear_forest, verify_cover, verify_hamilton_cycle,
    Cherry, CoverCertificate, CycleDefect, DegreeStats, Graph, GraphError, HamiltonCycle,
    LinearForest, VerificationReport,
};
pub use hamilton::{
    connect_pairs_disjoint, default_search_budget, extend_forest_to_hamilton, find_hamilton_cycle,
    hamilton_path_between, pack_hamilton_cycles, ExtensionError, ExtensionPlan, HamiltonError,
    PackingResult, PairSet, PACKING_ROLLBACK_DEPTH,
};
pub use pipeline::{
    brute_force_min_cover, build_f0, build_f1, compute_leftover, cover, merge_f0_f1,
    split_leftover, CoverError, LeftoverPlan, MinCover, PartitionPlan, PhaseEntry,
    PipelineConfig, PipelineReport,
};
pub use random::{
    binomial_tail_bound, check_cross_edges, check_degree_window, check_expansion, high_degree_set,
    sample_gnp, CheckMode, ExpansionParams, HighDegreeSet, ModelError, PropertyReport, SampleSpec,
    TailBoundInput, Verdict,
};
